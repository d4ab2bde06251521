//! Lower bound on the separation of an approaching pair, and lateral brackets.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SheetError};
use crate::geometry::Curve;
use crate::spectral::{self, TrigInterpolant};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeparationCheck {
    /// `min_t |δη(t)|²/|δη(tₐ)|² − ((T−t)/(T−tₐ))^{2+Cε}`.
    pub margin: f64,
    pub checked: usize,
    pub passes: bool,
}

/// Checks `|δη(t)|² ≥ |δη(tₐ)|² ((T−t)/(T−tₐ))^{2+Cε}` for the samples after
/// the first (the anchor `tₐ`) and before `t_est`. Ratios are compared, so a pair that
/// meets the bound with equality has margin zero up to rounding.
pub fn separation_lower_bound_check(
    times: &[f64],
    gaps: &[f64],
    t_est: f64,
    epsilon: f64,
    c: f64,
) -> Result<SeparationCheck> {
    if times.len() != gaps.len() || times.is_empty() {
        return Err(SheetError::InvalidInput("times and gaps must match and be non-empty".into()));
    }
    let (ta, ga) = (times[0], gaps[0]);
    if !(t_est > ta) || !(ga > 0.0) {
        return Err(SheetError::InvalidInput("need t_est > t_a and a positive initial gap".into()));
    }
    let power = 2.0 + c * epsilon;
    let mut margin = f64::INFINITY;
    let mut checked = 0;
    for (&t, &g) in times.iter().zip(gaps).skip(1) {
        if t >= t_est {
            break;
        }
        let m = (g / ga).powi(2) - ((t_est - t) / (t_est - ta)).powf(power);
        margin = margin.min(m);
        checked += 1;
    }
    Ok(SeparationCheck {
        margin,
        checked,
        passes: margin >= -8.0 * f64::EPSILON,
    })
}

/// Arc length as a function of the label, continuous across the period.
struct ArcLength {
    mean: f64,
    periodic: TrigInterpolant,
    speed: TrigInterpolant,
}

impl ArcLength {
    fn new(curve: &Curve) -> Self {
        let v = curve.speeds();
        let mean = spectral::mean(&v);
        let a = spectral::antiderivative(&v);
        let h = curve.grid().spacing();
        let p: Vec<f64> = a.iter().enumerate().map(|(j, s)| s - mean * h * j as f64).collect();
        ArcLength {
            mean,
            periodic: TrigInterpolant::new(&p),
            speed: TrigInterpolant::new(&v),
        }
    }

    fn at(&self, x: f64) -> f64 {
        self.mean * x + self.periodic.eval(x)
    }

    /// Label whose arc length is `target`, by Newton from `x`.
    fn invert(&self, target: f64, mut x: f64) -> f64 {
        for _ in 0..60 {
            let dx = (self.at(x) - target) / self.speed.eval(x);
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        x
    }
}

/// Label at signed arc distance `offset` from `label`.
pub fn label_at_arc_offset(curve: &Curve, label: f64, offset: f64) -> f64 {
    let s = ArcLength::new(curve);
    let guess = label + offset / s.speed.eval(label);
    s.invert(s.at(label) + offset, guess)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BracketReport {
    /// Arc distance `ε / (4 c₇ (1−ε))` walked on each side.
    pub arc: f64,
    pub left_offset: f64,
    pub right_offset: f64,
    pub lower: f64,
    pub upper: f64,
    pub passes: bool,
}

/// Walks `ε/(4c₇(1−ε))` of arc to either side of `label` and measures the
/// horizontal offsets in the frame turned by `frame_angle`; both must lie in
/// `[ε/(4c₇), ε/(2c₇)]`.
pub fn lateral_brackets(
    curve: &Curve,
    label: f64,
    epsilon: f64,
    c7: f64,
    frame_angle: f64,
) -> Result<BracketReport> {
    if !(epsilon > 0.0 && epsilon <= 0.5) || !(c7 > 0.0) {
        return Err(SheetError::InvalidInput(format!(
            "need 0 < epsilon <= 1/2 and c7 > 0, got {epsilon}, {c7}"
        )));
    }
    let arc = epsilon / (4.0 * c7 * (1.0 - epsilon));
    let interp = curve.interpolant();
    let x1 = |a: f64| -> f64 { interp.position(a).rotate(-frame_angle).x };
    let centre = x1(label);
    let left = label_at_arc_offset(curve, label, -arc);
    let right = label_at_arc_offset(curve, label, arc);
    let (lo, hi) = (epsilon / (4.0 * c7), epsilon / (2.0 * c7));
    let left_offset = (centre - x1(left)).abs();
    let right_offset = (x1(right) - centre).abs();
    let slack = 1e-12 * hi;
    let inside = |d: f64| d >= lo - slack && d <= hi + slack;
    Ok(BracketReport {
        arc,
        left_offset,
        right_offset,
        lower: lo,
        upper: hi,
        passes: inside(left_offset) && inside(right_offset),
    })
}

/// `c₇ = sup|H| (1+ε)` over the labels within `radius` of arc from `label`,
/// measured on a four-fold refined copy.
pub fn bracket_constant(curve: &Curve, label: f64, radius: f64, epsilon: f64) -> Result<f64> {
    let fine = curve.upsample(4 * curve.n_points())?;
    let g = crate::geometry::geometry(&fine)?;
    let lo = label_at_arc_offset(curve, label, -radius);
    let hi = label_at_arc_offset(curve, label, radius);
    let h = fine.grid().spacing();
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut sup = 0.0_f64;
    for (j, k) in g.curvature.iter().enumerate() {
        let x = j as f64 * h;
        // Any image of x inside [lo, hi].
        let shift = ((lo - x) / two_pi).ceil() * two_pi;
        if x + shift <= hi {
            sup = sup.max(k.abs());
        }
    }
    Ok(sup * (1.0 + epsilon))
}
