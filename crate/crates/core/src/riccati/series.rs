use serde::{Deserialize, Serialize};

use crate::error::{Result, SheetError};

/// Time series of `X` with the coefficient `𝔄` and forcing `𝒜` at each sample.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RiccatiSeries {
    pub times: Vec<f64>,
    pub x: Vec<f64>,
    pub frak_a: Vec<f64>,
    pub cal_a: Vec<f64>,
}

impl RiccatiSeries {
    pub fn push(&mut self, t: f64, x: f64, frak_a: f64, cal_a: f64) {
        self.times.push(t);
        self.x.push(x);
        self.frak_a.push(frak_a);
        self.cal_a.push(cal_a);
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Measured `c₆ = sup(|𝔄| + |𝒜|)`.
    pub fn c6(&self) -> f64 {
        self.frak_a
            .iter()
            .zip(&self.cal_a)
            .fold(0.0_f64, |m, (a, c)| m.max(a.abs() + c.abs()))
    }

    /// Measured `c₅ = sup(𝔄²/2 + |𝒜|)`, for which `X_t ≥ X²/2 − c₅`.
    pub fn c5(&self) -> f64 {
        self.frak_a
            .iter()
            .zip(&self.cal_a)
            .fold(0.0_f64, |m, (a, c)| m.max(0.5 * a * a + c.abs()))
    }

    /// True if `X` never decreases after first reaching `√(2 c₅)`.
    pub fn monotone_after_threshold(&self) -> bool {
        let thr = (2.0 * self.c5()).sqrt();
        match self.x.iter().position(|&x| x >= thr) {
            None => true,
            Some(i) => self.x[i..].windows(2).all(|w| w[1] >= w[0]),
        }
    }

    /// Columnar text `t X frakA calA`.
    pub fn to_text(&self) -> String {
        let mut out = String::from("# t X frakA calA\n");
        for i in 0..self.len() {
            out.push_str(&format!("{} {} {} {}\n", self.times[i], self.x[i], self.frak_a[i], self.cal_a[i]));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut s = RiccatiSeries::default();
        for (row, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let v: Vec<f64> = line
                .split_whitespace()
                .map(str::parse)
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| SheetError::Parse(format!("row {row}: {e}")))?;
            if v.len() != 4 {
                return Err(SheetError::Parse(format!("row {row}: expected 4 columns")));
            }
            s.push(v[0], v[1], v[2], v[3]);
        }
        Ok(s)
    }
}

/// Blow-up time and rate fitted to the tail of a series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlowupEstimate {
    pub t_est: f64,
    /// Root of the regression alone.
    pub t_fit: f64,
    /// Fitted limit of `X(t)(T − t)`.
    pub rate: f64,
    /// Time interval of the fit window.
    pub window: (f64, f64),
    pub window_samples: usize,
    /// Max relative identity residual, filled in by [`super::identity_residual`].
    pub residual: f64,
}

impl BlowupEstimate {
    pub fn to_key_values(&self) -> String {
        format!(
            "t_est = {}\nt_fit = {}\nrate = {}\nwindow_start = {}\nwindow_end = {}\nwindow_samples = {}\nresidual = {}\n",
            self.t_est, self.t_fit, self.rate, self.window.0, self.window.1, self.window_samples, self.residual
        )
    }
}
