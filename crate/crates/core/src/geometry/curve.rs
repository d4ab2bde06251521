use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::grid::ReferenceGrid;
use crate::error::{Result, SheetError};
use crate::spectral::{self, TrigInterpolant};
use crate::vec2::Vec2;

/// A curve sampled on the reference grid. `period` is the horizontal shift
/// `η(x + 2π) = η(x) + (period, 0)`; zero for closed curves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    grid: ReferenceGrid,
    positions: Vec<Vec2>,
    period: f64,
}

impl Curve {
    pub fn new(positions: Vec<Vec2>, period: f64) -> Result<Self> {
        let grid = ReferenceGrid::new(positions.len())?;
        if !period.is_finite() || period < 0.0 {
            return Err(SheetError::InvalidInput(format!("period {period} must be >= 0")));
        }
        if let Some(j) = positions.iter().position(|p| !p.is_finite()) {
            return Err(SheetError::InvalidInput(format!("position {j} is not finite")));
        }
        Ok(Curve {
            grid,
            positions,
            period,
        })
    }

    /// Sample `f(x_j)` on an `n`-point grid.
    pub fn from_fn(n: usize, period: f64, f: impl Fn(f64) -> Vec2) -> Result<Self> {
        let grid = ReferenceGrid::new(n)?;
        Curve::new(grid.labels().into_iter().map(f).collect(), period)
    }

    /// Flat periodic sheet `(x, 0)` with period 2π.
    pub fn flat(n: usize) -> Result<Self> {
        Curve::from_fn(n, 2.0 * PI, |x| Vec2::new(x, 0.0))
    }

    /// Counterclockwise circle of radius `r` centred at the origin.
    pub fn circle(n: usize, r: f64) -> Result<Self> {
        Curve::from_fn(n, 0.0, |x| Vec2::new(r * x.cos(), r * x.sin()))
    }

    /// Counterclockwise dumbbell `(2cos x, sin x (gap/2 + waist cos²x))`. The
    /// two sides of the neck at labels π/2 and 3π/2 are `gap` apart.
    pub fn dumbbell(n: usize, gap: f64, waist: f64) -> Result<Self> {
        Curve::from_fn(n, 0.0, |x| {
            let c = x.cos();
            Vec2::new(2.0 * c, x.sin() * (0.5 * gap + waist * c * c))
        })
    }

    #[inline]
    pub fn grid(&self) -> ReferenceGrid {
        self.grid
    }

    #[inline]
    pub fn n_points(&self) -> usize {
        self.grid.n_points()
    }

    #[inline]
    pub fn positions(&self) -> &[Vec2] {
        &self.positions
    }

    #[inline]
    pub fn period(&self) -> f64 {
        self.period
    }

    #[inline]
    pub fn is_closed(&self) -> bool {
        self.period == 0.0
    }

    /// Position of node `j` for any integer `j`, including periodic images.
    pub fn position_wrapped(&self, j: i64) -> Vec2 {
        let n = self.n_points() as i64;
        let shift = j.div_euclid(n) as f64 * self.period;
        let p = self.positions[j.rem_euclid(n) as usize];
        Vec2::new(p.x + shift, p.y)
    }

    /// Components with the secular part `period·x/2π` removed from η₁.
    pub fn periodic_components(&self) -> (Vec<f64>, Vec<f64>) {
        let slope = self.period / (2.0 * PI);
        let h = self.grid.spacing();
        let a = self
            .positions
            .iter()
            .enumerate()
            .map(|(j, p)| p.x - slope * h * j as f64)
            .collect();
        let b = self.positions.iter().map(|p| p.y).collect();
        (a, b)
    }

    /// Spectral label derivative `η'` at the nodes.
    pub fn derivative(&self) -> Vec<Vec2> {
        let (a, b) = self.periodic_components();
        let slope = self.period / (2.0 * PI);
        let da = spectral::derivative(&a);
        let db = spectral::derivative(&b);
        da.iter()
            .zip(&db)
            .map(|(&u, &v)| Vec2::new(u + slope, v))
            .collect()
    }

    /// `|η'|` at the nodes.
    pub fn speeds(&self) -> Vec<f64> {
        self.derivative().iter().map(|d| d.norm()).collect()
    }

    /// Continuous trigonometric representation of the curve.
    pub fn interpolant(&self) -> CurveInterpolant {
        let (a, b) = self.periodic_components();
        CurveInterpolant {
            p1: TrigInterpolant::new(&a),
            p2: TrigInterpolant::new(&b),
            slope: self.period / (2.0 * PI),
        }
    }

    /// Same curve resampled on `m` nodes through its trigonometric interpolant.
    pub fn upsample(&self, m: usize) -> Result<Curve> {
        let (a, b) = self.periodic_components();
        let a = spectral::upsample(&a, m);
        let b = spectral::upsample(&b, m);
        let slope = self.period / (2.0 * PI);
        let h = 2.0 * PI / m as f64;
        let pos = (0..m)
            .map(|j| Vec2::new(a[j] + slope * h * j as f64, b[j]))
            .collect();
        Curve::new(pos, self.period)
    }

    pub fn map_positions(&self, f: impl Fn(Vec2) -> Vec2) -> Curve {
        Curve {
            grid: self.grid,
            positions: self.positions.iter().map(|&p| f(p)).collect(),
            period: self.period,
        }
    }

    /// Rigid motion: rotation by `angle` about the origin, then translation.
    /// The period vector rotates too, so only closed curves or `angle = 0`
    /// keep the horizontal-period convention.
    pub fn rigid_motion(&self, angle: f64, shift: Vec2) -> Curve {
        self.map_positions(|p| p.rotate(angle) + shift)
    }

    /// Diameter-like length scale: the period for open sheets, otherwise the
    /// bounding-box diagonal.
    pub fn length_scale(&self) -> f64 {
        let (mut lo, mut hi) = (self.positions[0], self.positions[0]);
        for p in &self.positions {
            lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        (hi - lo).norm().max(self.period)
    }
}

/// Trigonometric interpolant of a curve, evaluable at any real label.
#[derive(Debug, Clone)]
pub struct CurveInterpolant {
    p1: TrigInterpolant,
    p2: TrigInterpolant,
    slope: f64,
}

impl CurveInterpolant {
    /// Position and label derivative at `x`.
    pub fn eval(&self, x: f64) -> (Vec2, Vec2) {
        let (a, da) = self.p1.eval_with_derivative(x);
        let (b, db) = self.p2.eval_with_derivative(x);
        (
            Vec2::new(a + self.slope * x, b),
            Vec2::new(da + self.slope, db),
        )
    }

    pub fn position(&self, x: f64) -> Vec2 {
        self.eval(x).0
    }
}

/// Write the columnar curve format; `extra` columns (e.g. strength) follow η₂.
pub fn write_curve(curve: &Curve, extra: &[&[f64]]) -> String {
    use std::fmt::Write;
    let mut out = format!(
        "# vortex-sheet curve N={} Lx={}\n",
        curve.n_points(),
        curve.period()
    );
    let grid = curve.grid();
    for (j, p) in curve.positions().iter().enumerate() {
        write!(out, "{} {} {}", grid.label(j), p.x, p.y).unwrap();
        for col in extra {
            write!(out, " {}", col[j]).unwrap();
        }
        out.push('\n');
    }
    out
}

/// Parse the columnar curve format, returning the curve and any extra columns.
pub fn read_curve(text: &str) -> Result<(Curve, Vec<Vec<f64>>)> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| SheetError::Parse("empty curve file".into()))?;
    let rest = header
        .strip_prefix("# vortex-sheet curve")
        .ok_or_else(|| SheetError::Parse(format!("bad header: {header}")))?;
    let (mut n, mut lx) = (None, None);
    for tok in rest.split_whitespace() {
        if let Some(v) = tok.strip_prefix("N=") {
            n = v.parse::<usize>().ok();
        } else if let Some(v) = tok.strip_prefix("Lx=") {
            lx = v.parse::<f64>().ok();
        }
    }
    let (n, lx) = match (n, lx) {
        (Some(n), Some(lx)) => (n, lx),
        _ => return Err(SheetError::Parse(format!("bad header: {header}"))),
    };
    let mut pos = Vec::with_capacity(n);
    let mut extra: Vec<Vec<f64>> = Vec::new();
    for (row, line) in lines.enumerate() {
        if line.starts_with('#') {
            continue;
        }
        let vals: Vec<f64> = line
            .split_whitespace()
            .map(|t| t.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| SheetError::Parse(format!("row {row}: {e}")))?;
        if vals.len() < 3 {
            return Err(SheetError::Parse(format!("row {row}: need at least 3 columns")));
        }
        if extra.is_empty() {
            extra = vec![Vec::with_capacity(n); vals.len() - 3];
        } else if extra.len() != vals.len() - 3 {
            return Err(SheetError::Parse(format!("row {row}: column count changed")));
        }
        pos.push(Vec2::new(vals[1], vals[2]));
        for (c, v) in extra.iter_mut().zip(&vals[3..]) {
            c.push(*v);
        }
    }
    if pos.len() != n {
        return Err(SheetError::Parse(format!("header says N={n}, found {} rows", pos.len())));
    }
    Ok((Curve::new(pos, lx)?, extra))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn derivative_of_periodic_sheet() {
        let c = Curve::from_fn(64, 2.0 * PI, |x| Vec2::new(x + 0.1 * x.sin(), 0.2 * x.cos())).unwrap();
        let d = c.derivative();
        for (j, x) in c.grid().labels().into_iter().enumerate() {
            assert_abs_diff_eq!(d[j].x, 1.0 + 0.1 * x.cos(), epsilon = 1e-12);
            assert_abs_diff_eq!(d[j].y, -0.2 * x.sin(), epsilon = 1e-12);
        }
    }

    #[test]
    fn interpolant_reproduces_nodes_and_images() {
        let c = Curve::from_fn(32, 2.0 * PI, |x| Vec2::new(x, 0.3 * (2.0 * x).sin())).unwrap();
        let p = c.interpolant();
        let (q, _) = p.eval(c.grid().label(5) + 2.0 * PI);
        let r = c.position_wrapped(5 + 32);
        assert_abs_diff_eq!(q.x, r.x, epsilon = 1e-12);
        assert_abs_diff_eq!(q.y, r.y, epsilon = 1e-12);
    }

    #[test]
    fn text_round_trip_is_exact() {
        let c = Curve::from_fn(16, 0.0, |x| Vec2::new(x.cos() / 3.0, x.sin() * 0.7)).unwrap();
        let s: Vec<f64> = (0..16).map(|j| (j as f64).sqrt()).collect();
        let text = write_curve(&c, &[&s]);
        assert!(text.starts_with("# vortex-sheet curve N=16 Lx=0\n"));
        let (c2, extra) = read_curve(&text).unwrap();
        assert_eq!(c, c2);
        assert_eq!(extra, vec![s]);
    }

    #[test]
    fn rejects_bad_header() {
        assert!(read_curve("# something else\n0 0 0\n").is_err());
    }
}
