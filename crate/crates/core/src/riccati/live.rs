//! Riccati quantities evaluated on a live interface state.

use crate::birkhoff_rott::{tangential_stretch, InterfaceState, VelocityField};
use crate::geometry::GeometrySnapshot;

/// `X = G s'`, the tangential derivative of the strength.
pub fn vorticity_derivative(state: &InterfaceState, geom: &GeometrySnapshot) -> Vec<f64> {
    geom.tangential_derivative(&state.strength)
}

/// Coefficient `𝔄 = 2 ∇_T u⁺·τ` and forcing `𝒜 = s ∇_T(∇_T u⁺·τ) − σ ∇_T ∇_T H`,
/// so that along labels `X_t − X² + 𝔄 X = −𝒜`.
pub fn forcing_and_coefficient(
    state: &InterfaceState,
    vel: &VelocityField,
    geom: &GeometrySnapshot,
    sigma: f64,
) -> (Vec<f64>, Vec<f64>) {
    let stretch = tangential_stretch(&vel.u_plus, geom);
    let d_stretch = geom.tangential_derivative(&stretch);
    let d2h = geom.tangential_derivative(&geom.curvature_tangential_derivative);
    let frak: Vec<f64> = stretch.iter().map(|a| 2.0 * a).collect();
    let cal: Vec<f64> = (0..state.n_points())
        .map(|j| state.strength[j] * d_stretch[j] - sigma * d2h[j])
        .collect();
    (frak, cal)
}
