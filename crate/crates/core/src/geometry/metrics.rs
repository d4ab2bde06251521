use serde::{Deserialize, Serialize};

use super::curve::Curve;
use super::snapshot::geometry;
use crate::error::Result;
use crate::spectral;
use crate::vec2::Vec2;

/// Cumulative arc length at the nodes, `s_0 = 0`, and the length of one period.
pub fn arc_length_table(curve: &Curve) -> (Vec<f64>, f64) {
    let speeds = curve.speeds();
    let s = spectral::antiderivative(&speeds);
    let total = 2.0 * std::f64::consts::PI * spectral::mean(&speeds);
    (s, total)
}

/// Length of one period (or of the closed curve).
pub fn curve_length(curve: &Curve) -> f64 {
    arc_length_table(curve).1
}

/// Arc length between nodes `a` and `b`; the shorter way round on closed curves.
pub fn arc_distance(curve: &Curve, a: usize, b: usize) -> f64 {
    let (s, total) = arc_length_table(curve);
    let d = (s[b] - s[a]).abs();
    if curve.is_closed() {
        d.min(total - d)
    } else {
        d
    }
}

/// Visits candidate pairs `(a, b_image)` with arc distance. For closed curves
/// `b` ranges over indices after `a`; for periodic curves over the window
/// `a + 1 ..= a + N` including the shifted image.
fn for_each_pair(curve: &Curve, mut visit: impl FnMut(usize, i64, Vec2, Vec2, f64)) {
    let n = curve.n_points();
    let (s, total) = arc_length_table(curve);
    let pos = curve.positions();
    for a in 0..n {
        if curve.is_closed() {
            for b in a + 1..n {
                let d = s[b] - s[a];
                visit(a, b as i64, pos[a], pos[b], d.min(total - d));
            }
        } else {
            for m in 1..=n {
                let b = a + m;
                let (bi, wrap) = (b % n, (b / n) as f64);
                let arc = s[bi] + wrap * total - s[a];
                visit(a, b as i64, pos[a], curve.position_wrapped(b as i64), arc);
            }
        }
    }
}

fn mean_spacing(curve: &Curve) -> f64 {
    curve_length(curve) / curve.n_points() as f64
}

/// Minimum of `|η(a) − η(b)| / d_Γ(a, b)` over node pairs at least three mean
/// arc spacings apart.
pub fn chord_arc(curve: &Curve) -> f64 {
    let excl = 3.0 * mean_spacing(curve) * (1.0 - 1e-9);
    let mut best = f64::INFINITY;
    for_each_pair(curve, |_, _, p, q, arc| {
        if arc >= excl {
            best = best.min((p - q).norm() / arc);
        }
    });
    best
}

/// A candidate contact: two labels close in space but far apart along the curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContactPair {
    pub label_a: usize,
    pub label_b: usize,
    pub euclidean_gap: f64,
    pub arc_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContactReport {
    pub pairs: Vec<ContactPair>,
    pub chord_arc_min: f64,
}

impl ContactReport {
    /// Pair with the smallest Euclidean gap.
    pub fn closest(&self) -> Option<&ContactPair> {
        self.pairs
            .iter()
            .min_by(|a, b| a.euclidean_gap.total_cmp(&b.euclidean_gap))
    }
}

/// All node pairs closer than `gap_threshold` with arc gap above five mean spacings.
pub fn detect_self_intersection(curve: &Curve, gap_threshold: f64) -> ContactReport {
    let n = curve.n_points();
    let excl = 5.0 * mean_spacing(curve) * (1.0 + 1e-9);
    let mut pairs = Vec::new();
    for_each_pair(curve, |a, b, p, q, arc| {
        let gap = (p - q).norm();
        if gap < gap_threshold && arc > excl {
            pairs.push(ContactPair {
                label_a: a,
                label_b: (b as usize) % n,
                euclidean_gap: gap,
                arc_gap: arc,
            });
        }
    });
    ContactReport {
        pairs,
        chord_arc_min: chord_arc(curve),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LipschitzReport {
    pub max_ratio: f64,
    /// sup |H| on a four-fold refined copy of the curve.
    pub bound: f64,
    pub passes: bool,
}

/// Checks `|τ(a) − τ(b)| ≤ sup|H| d_Γ(a, b)` over all node pairs.
pub fn tangent_lipschitz_check(curve: &Curve) -> Result<LipschitzReport> {
    const TOL: f64 = 1e-6;
    let g = geometry(curve)?;
    let fine = geometry(&curve.upsample(4 * curve.n_points())?)?;
    let bound = fine.curvature.iter().fold(0.0_f64, |m, h| m.max(h.abs()));
    let n = curve.n_points();
    let mut max_ratio = 0.0_f64;
    for_each_pair(curve, |a, b, _, _, arc| {
        if arc > 0.0 {
            let tb = g.tangent[(b as usize) % n];
            max_ratio = max_ratio.max((g.tangent[a] - tb).norm() / arc);
        }
    });
    Ok(LipschitzReport {
        max_ratio,
        bound,
        passes: max_ratio <= bound * (1.0 + TOL),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn circle_arc_distances() {
        let c = Curve::circle(64, 1.0).unwrap();
        assert_abs_diff_eq!(arc_distance(&c, 0, 32), PI, epsilon = 1e-12);
        assert_abs_diff_eq!(arc_distance(&c, 0, 48), PI / 2.0, epsilon = 1e-12);
    }

    #[test]
    fn ellipse_arc_matches_refined_quadrature() {
        let e = |n| Curve::from_fn(n, 0.0, |x: f64| Vec2::new(2.0 * x.cos(), x.sin())).unwrap();
        // Independent reference: composite Simpson on the half period with many panels.
        let m = 200_000;
        let h = PI / m as f64;
        let f = |x: f64| (4.0 * x.sin().powi(2) + x.cos().powi(2)).sqrt();
        let mut reference = f(0.0) + f(PI);
        for i in 1..m {
            reference += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
        }
        reference *= h / 3.0;
        assert_abs_diff_eq!(arc_distance(&e(64), 0, 32), reference, epsilon = 1e-8);
    }

    #[test]
    fn chord_arc_examples() {
        assert_abs_diff_eq!(chord_arc(&Curve::circle(64, 1.0).unwrap()), 2.0 / PI, epsilon = 1e-10);
        assert_abs_diff_eq!(chord_arc(&Curve::flat(32).unwrap()), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn contact_examples() {
        let r = detect_self_intersection(&Curve::circle(64, 1.0).unwrap(), 0.1);
        assert!(r.pairs.is_empty(), "{:?}", r.pairs.first());
        assert!(detect_self_intersection(&Curve::flat(64).unwrap(), 0.5).pairs.is_empty());
    }

    #[test]
    fn lipschitz_examples() {
        let r = tangent_lipschitz_check(&Curve::circle(64, 1.0).unwrap()).unwrap();
        assert!(r.passes && r.max_ratio <= 1.0);
        assert_abs_diff_eq!(r.bound, 1.0, epsilon = 1e-10);
        let r = tangent_lipschitz_check(&Curve::flat(32).unwrap()).unwrap();
        assert!(r.passes);
        assert!(r.max_ratio < 1e-12);
    }
}
