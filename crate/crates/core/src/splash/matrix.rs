//! The matrix `M` with `δu = M δη`, and its scaled coefficients.

use serde::{Deserialize, Serialize};

use super::decomposition::PathDecomposition;
use crate::error::{Result, SheetError};
use crate::vec2::Mat2;

/// Below this label separation `z` and `x₁` are treated as one point.
const LOCAL_LIMIT: f64 = 1e-7;

/// `M` from one path decomposition. The second column is the mean vertical
/// derivative along the segment, the first closes `δu = M δη`.
pub fn matrix_from_decomposition(d: &PathDecomposition) -> Result<Mat2> {
    let deta = d.top - d.start;
    let tiny = 1e-12 * d.length_scale;
    let h = d.top.y - d.foot.y;
    if deta.norm() < tiny || h.abs() < tiny {
        return Err(SheetError::DegeneratePair(deta.norm()));
    }
    let m12 = d.vertical.x / h;
    let m22 = d.vertical.y / h;
    let (m11, m21) = if (d.z_label - d.label1).abs() < LOCAL_LIMIT {
        let (e1, e2) = (d.deta_start.x, d.deta_start.y);
        (
            (d.du_start.x - m12 * e2) / e1,
            (d.du_start.y - m22 * e2) / e1,
        )
    } else {
        let dx = d.foot.x - d.start.x;
        let lift = d.start.y - d.foot.y;
        (
            (d.tangential.x + m12 * lift) / dx,
            (d.tangential.y + m22 * lift) / dx,
        )
    };
    Ok(Mat2([[m11, m12], [m21, m22]]))
}

/// `β₁ = −(T−t)M₁₁`, `ε₁ = (T−t)M₁₂`, `ℰ₂ = (T−t)M₂₁`, `α₂ = (T−t)M₂₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coefficients {
    pub time: f64,
    pub beta1: f64,
    pub eps1: f64,
    pub cal_e2: f64,
    pub alpha2: f64,
    pub in_range: bool,
}

impl Coefficients {
    /// Scaled coefficients at time `t` against blow-up time `t_est`, checked
    /// against `β₁, α₂ ∈ [−2ε, 1 + 2c₉(T−t)]`, `ε₁, ℰ₂ ∈ [−2ε, 2ε]`, `c₉ = 1 + 2c₆`.
    pub fn new(m: &Mat2, t: f64, t_est: f64, epsilon: f64, c6: f64) -> Self {
        let r = t_est - t;
        let beta1 = -r * m.0[0][0];
        let eps1 = r * m.0[0][1];
        let cal_e2 = r * m.0[1][0];
        let alpha2 = r * m.0[1][1];
        let upper = 1.0 + 2.0 * (1.0 + 2.0 * c6) * r;
        let diag = |v: f64| v >= -2.0 * epsilon && v <= upper;
        let off = |v: f64| v.abs() <= 2.0 * epsilon;
        Coefficients {
            time: t,
            beta1,
            eps1,
            cal_e2,
            alpha2,
            in_range: diag(beta1) && diag(alpha2) && off(eps1) && off(cal_e2),
        }
    }
}
