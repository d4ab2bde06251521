//! Diagnostics for an approaching pair of interface points: the velocity
//! jump matrix, cone and separation bounds, and run-time monitors.

mod bounds;
mod cone;
mod decomposition;
mod field;
mod matrix;
mod monitor;
mod phase;
mod projection;
mod trace;

pub use bounds::{
    bracket_constant, label_at_arc_offset, lateral_brackets, separation_lower_bound_check,
    BracketReport, SeparationCheck,
};
pub use cone::{cone_check, cone_values, contact_frame, ConeReport};
pub use decomposition::{path_decomposition, PathDecomposition};
pub use field::{FnField, LinearField, LiveField, MinusField, LIVE_REFINE};
pub use matrix::{matrix_from_decomposition, Coefficients};
pub use monitor::{marker_area_monitor, metric_sample, AreaSeries, MarkerRegion, MetricSample};
pub use phase::{signed_area, PhaseTester};
pub use projection::{vertical_projection, Projection};
pub use trace::{extract_matrices, track_pair, MatrixSeries, PairTrace};
