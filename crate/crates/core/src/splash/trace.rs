//! Tracking a pair of labels through a run.

use serde::{Deserialize, Serialize};

use super::decomposition::{path_decomposition, PathDecomposition};
use super::field::LiveField;
use super::matrix::matrix_from_decomposition;
use crate::birkhoff_rott::{InterfaceState, VelocityField};
use crate::error::{Result, SheetError};
use crate::vec2::{Mat2, Vec2};

/// Separation and velocity jump of two labels over time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairTrace {
    pub label0: usize,
    pub label1: usize,
    pub times: Vec<f64>,
    pub delta_eta: Vec<Vec2>,
    pub delta_u: Vec<Vec2>,
}

impl PairTrace {
    pub fn gaps(&self) -> Vec<f64> {
        self.delta_eta.iter().map(|d| d.norm()).collect()
    }

    /// Linear extrapolation of the last two gaps to zero.
    pub fn extrapolated_contact_time(&self) -> Option<f64> {
        let n = self.times.len();
        if n < 2 {
            return None;
        }
        let g = self.gaps();
        let slope = (g[n - 1] - g[n - 2]) / (self.times[n - 1] - self.times[n - 2]);
        (slope < 0.0).then(|| self.times[n - 1] - g[n - 1] / slope)
    }

    pub fn to_text(&self) -> String {
        use std::fmt::Write;
        let mut s = format!(
            "# pair {} {}\n# t deta1 deta2 du1 du2\n",
            self.label0, self.label1
        );
        for i in 0..self.times.len() {
            let (e, u) = (self.delta_eta[i], self.delta_u[i]);
            let _ = writeln!(s, "{} {} {} {} {}", self.times[i], e.x, e.y, u.x, u.y);
        }
        s
    }
}

/// `δη = η(label0) − η(label1)` and `δu = u⁻(label0) − u⁻(label1)` on every frame.
pub fn track_pair(
    frames: &[(InterfaceState, VelocityField)],
    label0: usize,
    label1: usize,
) -> Result<PairTrace> {
    let mut trace = PairTrace {
        label0,
        label1,
        times: Vec::with_capacity(frames.len()),
        delta_eta: Vec::with_capacity(frames.len()),
        delta_u: Vec::with_capacity(frames.len()),
    };
    for (state, vel) in frames {
        let n = state.n_points();
        if label0 >= n || label1 >= n {
            return Err(SheetError::InvalidInput(format!(
                "labels ({label0}, {label1}) out of range for N={n}"
            )));
        }
        let p = state.curve.positions();
        trace.times.push(state.time);
        trace.delta_eta.push(p[label0] - p[label1]);
        trace.delta_u.push(vel.u_minus[label0] - vel.u_minus[label1]);
    }
    Ok(trace)
}

/// `M(t)` on every frame, with the path decompositions behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSeries {
    pub times: Vec<f64>,
    pub matrices: Vec<Mat2>,
    pub decompositions: Vec<PathDecomposition>,
}

impl MatrixSeries {
    /// Largest `|V + T − δu|` over the frames.
    pub fn max_residual(&self) -> f64 {
        self.decompositions
            .iter()
            .map(|d| d.residual())
            .fold(0.0, f64::max)
    }
}

/// Matrix samples along a live run. The vertical projection of `η(label0)`
/// is searched within `half_window` labels of `label1`.
pub fn extract_matrices(
    frames: &[(InterfaceState, VelocityField)],
    label0: usize,
    label1: usize,
    half_window: f64,
) -> Result<MatrixSeries> {
    let mut out = MatrixSeries {
        times: Vec::new(),
        matrices: Vec::new(),
        decompositions: Vec::new(),
    };
    for (state, vel) in frames {
        let h = state.curve.grid().spacing();
        let (a0, a1) = (label0 as f64 * h, label1 as f64 * h);
        let field = LiveField::new(state, vel)?;
        let d = path_decomposition(
            &field,
            &state.curve,
            a0,
            a1,
            (a1 - half_window, a1 + half_window),
        )?;
        out.times.push(state.time);
        out.matrices.push(matrix_from_decomposition(&d)?);
        out.decompositions.push(d);
    }
    Ok(out)
}
