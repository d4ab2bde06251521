//! Birkhoff–Rott sums: principal value at the nodes and regular sums off the curve.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::state::{InterfaceState, Side};
use crate::error::{Result, SheetError};
use crate::geometry::Curve;
use crate::spectral;
use crate::vec2::{pairwise_sum, Mat2, Vec2};

#[derive(Debug, Clone, Copy, Default)]
struct C(Complex64);

impl std::ops::Add for C {
    type Output = C;
    fn add(self, o: C) -> C {
        C(self.0 + o.0)
    }
}

/// Quadrature nodes of a sheet with the circulation weight `γ_k w_k` folded in.
/// Periodic sheets use the cotangent kernel written through `ζ = exp(2πi z/L)`,
/// closed curves the free-space Cauchy kernel.
#[derive(Debug, Clone)]
pub struct SheetQuadrature {
    z: Vec<Complex64>,
    zeta: Vec<Complex64>,
    weight: Vec<f64>,
    period: f64,
}

impl SheetQuadrature {
    fn build(curve: &Curve, gamma: &[f64], weight: f64) -> Self {
        let z: Vec<Complex64> = curve
            .positions()
            .iter()
            .map(|p| Complex64::new(p.x, p.y))
            .collect();
        let period = curve.period();
        let zeta = if period > 0.0 {
            z.iter().map(|&w| zeta_of(w, period)).collect()
        } else {
            Vec::new()
        };
        SheetQuadrature {
            z,
            zeta,
            weight: gamma.iter().map(|g| g * weight).collect(),
            period,
        }
    }

    /// Trapezoid nodes for evaluation away from the curve, optionally on a
    /// Fourier-refined copy with `refine` times as many points.
    pub fn off_curve(state: &InterfaceState, refine: usize) -> Result<Self> {
        let n = state.n_points();
        if refine <= 1 {
            return Ok(Self::build(&state.curve, &state.gamma(), 2.0 * PI / n as f64));
        }
        let m = n * refine;
        let fine = state.curve.upsample(m)?;
        let gamma = spectral::upsample(&state.gamma(), m);
        Ok(Self::build(&fine, &gamma, 2.0 * PI / m as f64))
    }

    /// Complex velocity `u − iv` and its derivative `d(u − iv)/dz` at `p`.
    fn complex_velocity(&self, p: Complex64, with_derivative: bool) -> (Complex64, Complex64) {
        let n = self.z.len();
        if self.period > 0.0 {
            let l = self.period;
            let zp = zeta_of(p, l);
            let f = |k: usize| {
                let d = zp - self.zeta[k];
                C(self.weight[k] * (zp + self.zeta[k]) / d)
            };
            let w = pairwise_sum(0, n, &f).0 / (2.0 * l);
            let dw = if with_derivative {
                let g = |k: usize| {
                    let d = zp - self.zeta[k];
                    C(self.weight[k] * self.zeta[k] / (d * d))
                };
                let s = pairwise_sum(0, n, &g).0;
                // d/dz (ζ+ζk)/(ζ−ζk) = −2 ζ' ζk/(ζ−ζk)², ζ' = (2πi/L) ζ
                s * zp * Complex64::new(0.0, -2.0 * PI / l) / l
            } else {
                Complex64::new(0.0, 0.0)
            };
            (w, dw)
        } else {
            let f = |k: usize| C(self.weight[k] / (p - self.z[k]));
            let w = pairwise_sum(0, n, &f).0 / Complex64::new(0.0, 2.0 * PI);
            let dw = if with_derivative {
                let g = |k: usize| {
                    let d = p - self.z[k];
                    C(self.weight[k] / (d * d))
                };
                -pairwise_sum(0, n, &g).0 / Complex64::new(0.0, 2.0 * PI)
            } else {
                Complex64::new(0.0, 0.0)
            };
            (w, dw)
        }
    }

    pub fn velocity(&self, p: Vec2) -> Vec2 {
        let (w, _) = self.complex_velocity(Complex64::new(p.x, p.y), false);
        Vec2::new(w.re, -w.im)
    }

    /// Velocity and gradient `[[∂u₁/∂x₁, ∂u₁/∂x₂], [∂u₂/∂x₁, ∂u₂/∂x₂]]`.
    pub fn velocity_and_gradient(&self, p: Vec2) -> (Vec2, Mat2) {
        let (w, dw) = self.complex_velocity(Complex64::new(p.x, p.y), true);
        let grad = Mat2([[dw.re, -dw.im], [-dw.im, -dw.re]]);
        (Vec2::new(w.re, -w.im), grad)
    }
}

#[inline]
fn zeta_of(z: Complex64, period: f64) -> Complex64 {
    (Complex64::new(0.0, 2.0 * PI / period) * z).exp()
}

/// Principal-value average velocity `W` at the nodes by alternate-point
/// trapezoid quadrature (only nodes of opposite index parity contribute).
pub fn br_velocity(state: &InterfaceState) -> Result<Vec<Vec2>> {
    let curve = &state.curve;
    let n = curve.n_points();
    check_separation(curve)?;
    let h = 2.0 * PI / n as f64;
    let q = SheetQuadrature::build(curve, &state.gamma(), 2.0 * h);
    let out = (0..n)
        .into_par_iter()
        .map(|j| {
            let first = 1 - j % 2;
            let count = n / 2;
            let w = if q.period > 0.0 {
                let zj = q.zeta[j];
                let f = |i: usize| {
                    let k = first + 2 * i;
                    C(q.weight[k] * (zj + q.zeta[k]) / (zj - q.zeta[k]))
                };
                pairwise_sum(0, count, &f).0 / (2.0 * q.period)
            } else {
                let zj = q.z[j];
                let f = |i: usize| {
                    let k = first + 2 * i;
                    C(q.weight[k] / (zj - q.z[k]))
                };
                pairwise_sum(0, count, &f).0 / Complex64::new(0.0, 2.0 * PI)
            };
            Vec2::new(w.re, -w.im)
        })
        .collect();
    Ok(out)
}

/// Minimal-image displacement between nodes `a` and `b`.
fn node_gap(curve: &Curve, a: usize, b: usize) -> f64 {
    let d = curve.positions()[a] - curve.positions()[b];
    let l = curve.period();
    if l > 0.0 {
        let dx = d.x - l * (d.x / l).round();
        dx.hypot(d.y)
    } else {
        d.norm()
    }
}

/// Fails with `NearSingularKernel` if two distinct nodes are closer than a
/// tenth of the local grid spacing `h |η'_j|`.
pub fn check_separation(curve: &Curve) -> Result<()> {
    let n = curve.n_points();
    let h = 2.0 * PI / n as f64;
    let speeds = curve.speeds();
    let worst = (0..n)
        .into_par_iter()
        .filter_map(|a| {
            let limit = 0.1 * h * speeds[a];
            (0..n)
                .filter(|&b| b != a)
                .map(|b| (b, node_gap(curve, a, b)))
                .filter(|&(_, d)| d < limit)
                .min_by(|x, y| x.1.total_cmp(&y.1))
                .map(|(b, d)| (a, b, d, limit))
        })
        .min_by(|x, y| x.2.total_cmp(&y.2).then(x.0.cmp(&y.0)));
    match worst {
        Some((a, b, distance, limit)) => Err(SheetError::NearSingularKernel {
            a,
            b,
            distance,
            limit,
        }),
        None => Ok(()),
    }
}

/// Nearest node to `p` (minimal image for periodic sheets): index and distance.
pub fn nearest_node(curve: &Curve, p: Vec2) -> (usize, f64) {
    let l = curve.period();
    curve
        .positions()
        .iter()
        .enumerate()
        .map(|(k, q)| {
            let d = p - *q;
            let dx = if l > 0.0 { d.x - l * (d.x / l).round() } else { d.x };
            (k, dx.hypot(d.y))
        })
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("curve has nodes")
}

/// Refinement factor needed for the trapezoid sum to stay at round-off level
/// at distance `dist` from a curve with local spacing `spacing`.
fn refinement_for(dist: f64, spacing: f64) -> usize {
    // Error of the trapezoid rule decays like exp(-2π m dist / spacing).
    let need = 6.0 * spacing / dist;
    let mut m = 1;
    while (m as f64) < need && m < 64 {
        m *= 2;
    }
    m
}

/// Checks that `p` may be evaluated off the curve and returns the local spacing
/// and its distance. `side` is verified against the local normal.
fn admissible(state: &InterfaceState, speeds: &[f64], normals: &[Vec2], p: Vec2, side: Side) -> Result<(f64, f64)> {
    let curve = &state.curve;
    let h = 2.0 * PI / curve.n_points() as f64;
    let (k, dist) = nearest_node(curve, p);
    let spacing = h * speeds[k];
    if dist < 2.0 * spacing {
        return Err(SheetError::PointTooClose {
            distance: dist,
            limit: 2.0 * spacing,
        });
    }
    let mut d = p - curve.positions()[k];
    if curve.period() > 0.0 {
        d.x -= curve.period() * (d.x / curve.period()).round();
    }
    let on_minus = d.dot(normals[k]) > 0.0;
    if on_minus != (side == Side::Minus) {
        return Err(SheetError::InvalidInput(format!(
            "point ({}, {}) is not in the {:?} phase",
            p.x, p.y, side
        )));
    }
    Ok((spacing, dist))
}

fn normals(curve: &Curve) -> Vec<Vec2> {
    curve
        .derivative()
        .iter()
        .map(|d| (*d * (1.0 / d.norm())).perp())
        .collect()
}

fn quadrature_for(state: &InterfaceState, points: &[Vec2], side: Side) -> Result<SheetQuadrature> {
    let speeds = state.curve.speeds();
    let nrm = normals(&state.curve);
    let mut refine = 1;
    for &p in points {
        let (spacing, dist) = admissible(state, &speeds, &nrm, p, side)?;
        refine = refine.max(refinement_for(dist, spacing));
    }
    SheetQuadrature::off_curve(state, refine)
}

/// Velocity at points strictly inside phase `side`.
pub fn velocity_at(state: &InterfaceState, points: &[Vec2], side: Side) -> Result<Vec<Vec2>> {
    let q = quadrature_for(state, points, side)?;
    Ok(points.par_iter().map(|&p| q.velocity(p)).collect())
}

/// Velocity and analytic gradient at points strictly inside phase `side`.
pub fn velocity_gradient_at(state: &InterfaceState, points: &[Vec2], side: Side) -> Result<Vec<(Vec2, Mat2)>> {
    let q = quadrature_for(state, points, side)?;
    Ok(points.par_iter().map(|&p| q.velocity_and_gradient(p)).collect())
}

/// Which phase `p` lies in, judged by the nearest node's normal.
pub fn side_of(curve: &Curve, p: Vec2) -> Side {
    let (k, _) = nearest_node(curve, p);
    let d = curve.derivative()[k];
    let mut r = p - curve.positions()[k];
    if curve.period() > 0.0 {
        r.x -= curve.period() * (r.x / curve.period()).round();
    }
    if r.dot(d.perp()) > 0.0 {
        Side::Minus
    } else {
        Side::Plus
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn flat(n: usize, s: f64) -> InterfaceState {
        InterfaceState::new(Curve::flat(n).unwrap(), vec![s; n], 0.0).unwrap()
    }

    #[test]
    fn flat_sheet_has_zero_average() {
        let w = br_velocity(&flat(64, 1.3)).unwrap();
        assert!(w.iter().all(|v| v.norm() < 1e-13));
    }

    #[test]
    fn flat_sheet_uniform_streams() {
        let st = flat(64, 2.0);
        let up = velocity_at(&st, &[Vec2::new(0.0, 0.5), Vec2::new(1.0, 1.5)], Side::Minus).unwrap();
        for v in up {
            assert_abs_diff_eq!(v.x, -1.0, epsilon = 1e-13);
            assert_abs_diff_eq!(v.y, 0.0, epsilon = 1e-13);
        }
        let down = velocity_at(&st, &[Vec2::new(0.3, -0.5)], Side::Plus).unwrap();
        assert_abs_diff_eq!(down[0].x, 1.0, epsilon = 1e-13);
    }

    #[test]
    fn rejects_close_points_and_wrong_side() {
        let st = flat(64, 1.0);
        assert!(matches!(
            velocity_at(&st, &[Vec2::new(0.0, 0.1)], Side::Minus),
            Err(SheetError::PointTooClose { .. })
        ));
        assert!(velocity_at(&st, &[Vec2::new(0.0, 0.5)], Side::Plus).is_err());
    }

    #[test]
    fn near_singular_detected() {
        let mut pos: Vec<Vec2> = Curve::circle(32, 1.0).unwrap().positions().to_vec();
        pos[16] = pos[0] + Vec2::new(1e-4, 0.0);
        let c = Curve::new(pos, 0.0).unwrap();
        assert!(matches!(check_separation(&c), Err(SheetError::NearSingularKernel { .. })));
    }

    #[test]
    fn point_vortex_ring_matches_closed_form() {
        // Uniform γ on the unit circle: no flow inside, a swirl of circulation 2π outside.
        let st = InterfaceState::new(Curve::circle(64, 1.0).unwrap(), vec![1.0; 64], 0.0).unwrap();
        let v = velocity_at(&st, &[Vec2::new(0.0, 0.3)], Side::Minus).unwrap();
        assert!(v[0].norm() < 1e-13);
        let v = velocity_at(&st, &[Vec2::new(2.0, 0.0)], Side::Plus).unwrap();
        assert_abs_diff_eq!(v[0].y, 0.5, epsilon = 1e-13);
        assert_abs_diff_eq!(v[0].x, 0.0, epsilon = 1e-13);
    }
}
