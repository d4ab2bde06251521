use serde::{Deserialize, Serialize};

use crate::error::{Result, SheetError};
use crate::geometry::Curve;
use crate::vec2::Vec2;

/// Full dynamical state: interface positions, tangential velocity jump
/// `s = (u⁺ − u⁻)·τ` at the nodes, and the current time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterfaceState {
    pub curve: Curve,
    pub strength: Vec<f64>,
    pub time: f64,
}

impl InterfaceState {
    pub fn new(curve: Curve, strength: Vec<f64>, time: f64) -> Result<Self> {
        if strength.len() != curve.n_points() {
            return Err(SheetError::InvalidInput(format!(
                "strength has {} samples, curve has {}",
                strength.len(),
                curve.n_points()
            )));
        }
        if strength.iter().any(|s| !s.is_finite()) || !time.is_finite() {
            return Err(SheetError::InvalidInput("non-finite strength or time".into()));
        }
        Ok(InterfaceState {
            curve,
            strength,
            time,
        })
    }

    pub fn n_points(&self) -> usize {
        self.curve.n_points()
    }

    /// Unnormalized strength `γ = s |η'|`, the circulation per unit label.
    pub fn gamma(&self) -> Vec<f64> {
        self.curve
            .speeds()
            .iter()
            .zip(&self.strength)
            .map(|(g, s)| g * s)
            .collect()
    }
}

/// Velocities at the nodes: the principal-value average and the one-sided limits.
/// `u_plus` is the limit from the lower phase, `u_minus` from the upper phase
/// (the side the normal points into).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VelocityField {
    pub average: Vec<Vec2>,
    pub u_plus: Vec<Vec2>,
    pub u_minus: Vec<Vec2>,
}

/// Which phase an off-curve point belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Plus,
    Minus,
}
