//! Kinetic energy by boundary quadrature of the stream function.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::config::{RHO_MINUS, RHO_PLUS};
use super::state::{InterfaceState, VelocityField};
use crate::geometry::{curve_length, GeometrySnapshot};
use crate::spectral;

/// Energy budget of one period of the sheet.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyBudget {
    /// ½ρ⁻‖u⁻‖² over the upper phase.
    pub kinetic_minus: f64,
    /// ½ρ⁺‖u⁺‖² over the lower phase.
    pub kinetic_plus: f64,
    /// Sheet length per period.
    pub length: f64,
    /// `kinetic_minus + kinetic_plus + σ length`, conserved by the dynamics.
    pub total: f64,
}

/// Stream function on the sheet: `ψ' = −|η'| W·n`, with `ψ(0) = 0`.
/// Requires zero net flux through the sheet, which incompressibility gives.
pub fn sheet_stream_function(vel: &VelocityField, geom: &GeometrySnapshot) -> Vec<f64> {
    let flux: Vec<f64> = (0..geom.n_points())
        .map(|j| -vel.average[j].dot(geom.normal[j]) / geom.metric_inv[j])
        .collect();
    let mut f = flux;
    let m = spectral::mean(&f);
    for v in &mut f {
        *v -= m;
    }
    spectral::antiderivative(&f)
}

/// Energies via `E = ½∮ ψ ∂ψ/∂ν ds` on each side; far-field terms vanish for
/// sheets with zero mean strength.
pub fn energy_budget(state: &InterfaceState, vel: &VelocityField, geom: &GeometrySnapshot, sigma: f64) -> EnergyBudget {
    let psi = sheet_stream_function(vel, geom);
    let n = state.n_points();
    let h = 2.0 * PI / n as f64;
    let mut em = 0.0;
    let mut ep = 0.0;
    for j in 0..n {
        let ds = h / geom.metric_inv[j];
        em -= 0.5 * psi[j] * vel.u_minus[j].dot(geom.tangent[j]) * ds;
        ep += 0.5 * psi[j] * vel.u_plus[j].dot(geom.tangent[j]) * ds;
    }
    let length = curve_length(&state.curve);
    let (em, ep) = (RHO_MINUS * em, RHO_PLUS * ep);
    EnergyBudget {
        kinetic_minus: em,
        kinetic_plus: ep,
        length,
        total: em + ep + sigma * length,
    }
}
