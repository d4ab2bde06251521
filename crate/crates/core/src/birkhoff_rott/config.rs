use serde::{Deserialize, Serialize};

use crate::error::{Result, SheetError};
use crate::geometry::Curve;

/// Both densities are fixed to one.
pub const RHO_PLUS: f64 = 1.0;
pub const RHO_MINUS: f64 = 1.0;

/// Empirical constant in `dt ≤ C σ^{-1/2} N^{-3/2}` for explicit RK4 on the
/// capillary problem on a 2π-long sheet (unit node speed |η'|). The imaginary-axis limit of RK4
/// (2√2) applied to the fastest mode `ω = √(σ/2) (N/2)^{3/2}` gives C ≈ 11.3;
/// k = 2 standing waves of slope 0.2 stay clean at C = 9, and 2 leaves margin
/// for steeper interfaces.
pub const STABILITY_CONSTANT: f64 = 2.0;

/// Time-stepping and physical parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    /// σ, force per length.
    #[serde(default = "default_sigma")]
    pub surface_tension: f64,
    /// g, acceleration. Drops out of the jump dynamics at equal densities.
    #[serde(default)]
    pub gravity: f64,
    /// Time step.
    pub dt: f64,
    /// Relative Fourier-mode cutoff applied after every step.
    #[serde(default = "default_filter")]
    pub filter_threshold: f64,
    /// Final time.
    pub t_end: f64,
    /// Steps between recorded outputs.
    #[serde(default = "default_cadence")]
    pub output_every: usize,
}

fn default_sigma() -> f64 {
    1.0
}

fn default_filter() -> f64 {
    1e-13
}

fn default_cadence() -> usize {
    10
}

impl SimConfig {
    pub fn new(dt: f64, t_end: f64) -> Self {
        SimConfig {
            surface_tension: 1.0,
            gravity: 0.0,
            dt,
            filter_threshold: 1e-13,
            t_end,
            output_every: 10,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.surface_tension >= 0.0) || !self.surface_tension.is_finite() {
            return Err(SheetError::InvalidInput("surface_tension must be >= 0".into()));
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(SheetError::InvalidInput("dt must be > 0".into()));
        }
        if !(self.t_end >= 0.0) || !self.t_end.is_finite() {
            return Err(SheetError::InvalidInput("t_end must be >= 0".into()));
        }
        if !(self.filter_threshold >= 0.0) || !self.gravity.is_finite() {
            return Err(SheetError::InvalidInput("bad filter threshold or gravity".into()));
        }
        if self.output_every == 0 {
            return Err(SheetError::InvalidInput("output_every must be >= 1".into()));
        }
        Ok(())
    }

    /// Number of steps to reach `t_end` (the last one may overshoot by < dt/2).
    pub fn n_steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }
}

/// Suggested step for `curve` and surface tension `sigma`:
/// `C σ^{-1/2} (min|η'| / N)^{3/2}`, i.e. scaled by the smallest node spacing.
pub fn stable_dt(curve: &Curve, sigma: f64) -> f64 {
    let n = curve.n_points() as f64;
    let vmin = curve.speeds().iter().cloned().fold(f64::INFINITY, f64::min);
    STABILITY_CONSTANT * (vmin / n).powf(1.5) / sigma.max(1e-12).sqrt()
}
