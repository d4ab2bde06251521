//! Two-phase velocity from the sheet strength and time evolution of the sheet.

mod config;
mod dynamics;
mod energy;
mod kernel;
mod state;

pub use config::{stable_dt, SimConfig, RHO_MINUS, RHO_PLUS, STABILITY_CONSTANT};
pub use dynamics::{
    evaluate, one_sided, position_rate, step, strength_rate, tangential_stretch, Evaluation, Integrator,
};
pub use energy::{energy_budget, sheet_stream_function, EnergyBudget};
pub use kernel::{
    br_velocity, check_separation, nearest_node, side_of, velocity_at, velocity_gradient_at, SheetQuadrature,
};
pub use state::{InterfaceState, Side, VelocityField};
