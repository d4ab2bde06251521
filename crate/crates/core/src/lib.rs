//! Two-phase vortex-sheet evolution with surface tension, plus diagnostics for
//! vorticity-derivative blow-up, pair separation and self-intersection.

pub mod birkhoff_rott;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod riccati;
pub mod spectral;
pub mod splash;
pub mod vec2;

pub use error::{Result, SheetError};
pub use vec2::{Mat2, Vec2};
