use serde::{Deserialize, Serialize};

use super::curve::Curve;
use crate::error::{Result, SheetError};
use crate::spectral;
use crate::vec2::Vec2;

/// Differential-geometric fields of a curve at the nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometrySnapshot {
    /// Label derivative η'.
    pub deta: Vec<Vec2>,
    /// G = 1/|η'|.
    pub metric_inv: Vec<f64>,
    pub tangent: Vec<Vec2>,
    /// Tangent rotated by +π/2.
    pub normal: Vec<Vec2>,
    /// H = G (G η')' · n.
    pub curvature: Vec<f64>,
    /// ∇_T H = G H'.
    pub curvature_tangential_derivative: Vec<f64>,
}

/// `|η'|` after checking it stays away from zero.
pub fn checked_speeds(curve: &Curve) -> Result<Vec<f64>> {
    let speeds = curve.speeds();
    let mean = spectral::mean(&speeds);
    let min = speeds.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(min >= 1e-10 * mean) || mean == 0.0 {
        return Err(SheetError::DegenerateMetric { min, mean });
    }
    Ok(speeds)
}

pub fn geometry(curve: &Curve) -> Result<GeometrySnapshot> {
    let speeds = checked_speeds(curve)?;
    let deta = curve.derivative();
    let metric_inv: Vec<f64> = speeds.iter().map(|s| 1.0 / s).collect();
    let tangent: Vec<Vec2> = deta
        .iter()
        .zip(&metric_inv)
        .map(|(d, g)| *d * *g)
        .collect();
    let normal: Vec<Vec2> = tangent.iter().map(|t| t.perp()).collect();
    let tx = spectral::derivative(&tangent.iter().map(|t| t.x).collect::<Vec<_>>());
    let ty = spectral::derivative(&tangent.iter().map(|t| t.y).collect::<Vec<_>>());
    let curvature: Vec<f64> = (0..curve.n_points())
        .map(|j| metric_inv[j] * Vec2::new(tx[j], ty[j]).dot(normal[j]))
        .collect();
    let dh = spectral::derivative(&curvature);
    let curvature_tangential_derivative = dh.iter().zip(&metric_inv).map(|(d, g)| d * g).collect();
    Ok(GeometrySnapshot {
        deta,
        metric_inv,
        tangent,
        normal,
        curvature,
        curvature_tangential_derivative,
    })
}

impl GeometrySnapshot {
    /// `G f'` for samples `f` on the same grid.
    pub fn tangential_derivative(&self, f: &[f64]) -> Vec<f64> {
        spectral::derivative(f)
            .iter()
            .zip(&self.metric_inv)
            .map(|(d, g)| d * g)
            .collect()
    }

    pub fn n_points(&self) -> usize {
        self.metric_inv.len()
    }
}

/// Tangential derivative `(∇_T f)∘η = G f'`.
pub fn tangential_derivative(f: &[f64], curve: &Curve) -> Result<Vec<f64>> {
    if f.len() != curve.n_points() {
        return Err(SheetError::InvalidInput(format!(
            "{} samples on a {}-point curve",
            f.len(),
            curve.n_points()
        )));
    }
    let speeds = checked_speeds(curve)?;
    Ok(spectral::derivative(f)
        .iter()
        .zip(&speeds)
        .map(|(d, s)| d / s)
        .collect())
}

/// `Σ_{i ≤ k} sup |∇_T^i f|`.
pub fn winf_norm(f: &[f64], curve: &Curve, k: usize) -> Result<f64> {
    if k > 2 {
        return Err(SheetError::InvalidInput(format!("order {k} > 2")));
    }
    let sup = |v: &[f64]| v.iter().fold(0.0_f64, |a, x| a.max(x.abs()));
    let mut total = sup(f);
    let mut cur = f.to_vec();
    for _ in 0..k {
        cur = tangential_derivative(&cur, curve)?;
        total += sup(&cur);
    }
    Ok(total)
}
