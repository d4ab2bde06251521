//! Periodic and closed curves on a uniform label grid, with spectral geometry.

mod curve;
mod grid;
mod metrics;
mod snapshot;

pub use curve::{read_curve, write_curve, Curve, CurveInterpolant};
pub use grid::ReferenceGrid;
pub use metrics::{
    arc_distance, arc_length_table, chord_arc, curve_length, detect_self_intersection,
    tangent_lipschitz_check, ContactPair, ContactReport, LipschitzReport,
};
pub use snapshot::{checked_speeds, geometry, tangential_derivative, winf_norm, GeometrySnapshot};
