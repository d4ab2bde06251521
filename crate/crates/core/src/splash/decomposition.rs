//! Splitting `δu = u⁻(η(x₀)) − u⁻(η(x₁))` into a vertical and a tangential leg.

use super::field::MinusField;
use super::phase::PhaseTester;
use super::projection::vertical_projection;
use crate::error::{Result, SheetError};
use crate::geometry::Curve;
use crate::riccati::gauss_legendre;
use crate::vec2::Vec2;

const PANELS: usize = 8;
const PHASE_SAMPLES: usize = 64;

/// Both legs of the path from `η(x₁)` along the interface to `η(z)`, then
/// vertically to `η(x₀)`; `z` is the vertical projection of `η(x₀)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathDecomposition {
    pub label0: f64,
    pub label1: f64,
    pub z_label: f64,
    /// η(x₀), η(z), η(x₁).
    pub top: Vec2,
    pub foot: Vec2,
    pub start: Vec2,
    /// Increment of `u⁻` along the vertical segment.
    pub vertical: Vec2,
    /// Increment of `u⁻` along the interface from `x₁` to `z`.
    pub tangential: Vec2,
    /// `u⁻(η(x₀)) − u⁻(η(x₁))` from the interface values.
    pub direct: Vec2,
    /// η'(x₁) and d/dα u⁻(η(α)) at x₁, used when z and x₁ coincide.
    pub deta_start: Vec2,
    pub du_start: Vec2,
    pub length_scale: f64,
}

impl PathDecomposition {
    pub fn total(&self) -> Vec2 {
        self.vertical + self.tangential
    }

    /// Largest component of `total − direct`.
    pub fn residual(&self) -> f64 {
        let d = self.total() - self.direct;
        d.x.abs().max(d.y.abs())
    }
}

fn composite(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let h = (b - a) / PANELS as f64;
    (0..PANELS)
        .map(|k| gauss_legendre(f, a + k as f64 * h, a + (k + 1) as f64 * h))
        .sum()
}

/// Decompose `δu` for the pair `(label0, label1)`. `window` is the label range
/// near `label1` searched for the vertical projection of `η(label0)`.
pub fn path_decomposition(
    field: &dyn MinusField,
    curve: &Curve,
    label0: f64,
    label1: f64,
    window: (f64, f64),
) -> Result<PathDecomposition> {
    let interp = curve.interpolant();
    let top = interp.position(label0);
    let proj = vertical_projection(&interp, top, window)?;
    let foot = proj.point;
    let (start, deta_start) = interp.eval(label1);

    let phase = PhaseTester::new(curve);
    for i in 0..PHASE_SAMPLES {
        let th = (i + 1) as f64 / (PHASE_SAMPLES + 1) as f64;
        if !phase.in_minus(foot + (top - foot) * th) {
            return Err(SheetError::SegmentExitsPhase(i));
        }
    }

    let (u_top, _) = field.on_curve(&interp, label0);
    let (u_foot, _) = field.on_curve(&interp, proj.label);
    let (u_start, du_start) = field.on_curve(&interp, label1);

    let len = (top - foot).norm();
    let vertical = if len == 0.0 {
        Vec2::ZERO
    } else {
        let dir = (top - foot) * (1.0 / len);
        let d_foot = field.resolution_near(foot);
        let d_top = field.resolution_near(top);
        if d_foot + d_top >= len {
            u_top - u_foot
        } else {
            // Fundamental theorem on the end pieces next to the interface,
            // Gauss–Legendre on ∂u/∂x₂ over the interior part.
            let a = d_foot;
            let b = len - d_top;
            let at = |s: f64| foot + dir * s;
            let dy = dir.y;
            let v1 = composite(&|s| field.gradient(at(s)).0[0][1] * dy, a, b);
            let v2 = composite(&|s| field.gradient(at(s)).0[1][1] * dy, a, b);
            let mut v = Vec2::new(v1, v2);
            if a > 0.0 {
                v = v + field.velocity(at(a)) - u_foot;
            }
            if d_top > 0.0 {
                v = v + u_top - field.velocity(at(b));
            }
            v
        }
    };

    let tangential = if proj.label == label1 {
        Vec2::ZERO
    } else {
        let t1 = composite(&|a| field.on_curve(&interp, a).1.x, label1, proj.label);
        let t2 = composite(&|a| field.on_curve(&interp, a).1.y, label1, proj.label);
        Vec2::new(t1, t2)
    };

    Ok(PathDecomposition {
        label0,
        label1,
        z_label: proj.label,
        top,
        foot,
        start,
        vertical,
        tangential,
        direct: u_top - u_start,
        deta_start,
        du_start,
        length_scale: curve.length_scale(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::splash::field::{FnField, LinearField};
    use crate::splash::matrix::{matrix_from_decomposition, Coefficients};
    use crate::vec2::Mat2;
    use std::f64::consts::PI;

    fn neck() -> Curve {
        Curve::dumbbell(128, 0.05, 1.0).unwrap()
    }

    const A: Mat2 = Mat2([[-1.0, 0.1], [0.1, 1.0]]);

    #[test]
    fn linear_field_gives_its_matrix() {
        let f = LinearField { a: A, b: Vec2::new(0.3, -0.2) };
        let win = (1.5 * PI - 0.3, 1.5 * PI + 0.3);
        for top in [0.5 * PI + 0.05, 0.5 * PI] {
            let d = path_decomposition(&f, &neck(), top, 1.5 * PI, win).unwrap();
            assert!(d.residual() < 1e-13);
            let m = matrix_from_decomposition(&d).unwrap();
            assert!(m.sub(&A).max_abs() < 1e-11, "{m:?}");
        }
    }

    #[test]
    fn manufactured_blowup_coefficients() {
        let (t_est, t) = (1.0, 0.9);
        let k = 0.9 / (t_est - t);
        let f = FnField {
            velocity: move |p: Vec2| Vec2::new(-k * p.x, k * p.y),
            gradient: move |_| Mat2([[-k, 0.0], [0.0, k]]),
        };
        let d = path_decomposition(&f, &neck(), 0.5 * PI + 0.02, 1.5 * PI, (4.4, 5.0)).unwrap();
        let m = matrix_from_decomposition(&d).unwrap();
        let c = Coefficients::new(&m, t, t_est, 0.05, 0.1);
        assert!((c.beta1 - 0.9).abs() < 1e-11 && (c.alpha2 - 0.9).abs() < 1e-11);
        assert!(c.eps1.abs() < 1e-11 && c.cal_e2.abs() < 1e-11 && c.in_range);
    }

    #[test]
    fn segment_through_the_other_phase_is_rejected() {
        let cw = Curve::from_fn(128, 0.0, |x| {
            Vec2::new(2.0 * x.cos(), -x.sin() * (0.025 + x.cos().powi(2)))
        })
        .unwrap();
        let f = LinearField { a: A, b: Vec2::ZERO };
        let r = path_decomposition(&f, &cw, 1.5 * PI, 0.5 * PI, (0.5 * PI - 0.3, 0.5 * PI + 0.3));
        assert_eq!(r.unwrap_err(), SheetError::SegmentExitsPhase(0));
    }

    #[test]
    fn coincident_pair_is_degenerate() {
        let p = Vec2::new(1.0, 0.0);
        let d = PathDecomposition {
            label0: 1.0,
            label1: 1.0,
            z_label: 1.0,
            top: p,
            foot: p,
            start: p,
            vertical: Vec2::ZERO,
            tangential: Vec2::ZERO,
            direct: Vec2::ZERO,
            deta_start: Vec2::E1,
            du_start: Vec2::ZERO,
            length_scale: 1.0,
        };
        assert!(matches!(matrix_from_decomposition(&d), Err(SheetError::DegeneratePair(_))));
    }
}
