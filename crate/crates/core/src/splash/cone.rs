//! Cone condition: how far tangents and normals stray from a reference frame.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::{geometry, ContactReport, Curve};

/// Maximum of `|𝒩·e₁| + |𝒯·e₂|` over a set of nodes, in the frame rotated
/// by `frame_angle` (the frame's first axis points along `frame_angle`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConeReport {
    pub frame_angle: f64,
    pub max_value: f64,
    pub worst_label: usize,
}

impl ConeReport {
    pub fn passes(&self, epsilon: f64) -> bool {
        self.max_value <= epsilon
    }
}

/// Cone values at every node.
pub fn cone_values(curve: &Curve, frame_angle: f64) -> Result<Vec<f64>> {
    let g = geometry(curve)?;
    Ok(g.tangent
        .iter()
        .zip(&g.normal)
        .map(|(t, n)| {
            let (t, n) = (t.rotate(-frame_angle), n.rotate(-frame_angle));
            n.x.abs() + t.y.abs()
        })
        .collect())
}

/// Cone check restricted to `labels`.
pub fn cone_check(curve: &Curve, labels: &[usize], frame_angle: f64) -> Result<ConeReport> {
    let v = cone_values(curve, frame_angle)?;
    let (worst_label, max_value) = labels
        .iter()
        .map(|&j| (j, v[j]))
        .fold((labels.first().copied().unwrap_or(0), 0.0), |a, b| {
            if b.1 > a.1 {
                b
            } else {
                a
            }
        });
    Ok(ConeReport {
        frame_angle,
        max_value,
        worst_label,
    })
}

/// Direction of the tangent at the first label of the closest contact pair.
pub fn contact_frame(curve: &Curve, report: &ContactReport) -> Option<f64> {
    let pair = report.closest()?;
    let d = curve.derivative()[pair.label_a];
    Some(d.y.atan2(d.x))
}
