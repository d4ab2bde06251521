use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SheetError};

/// Uniform Lagrangian labels `x_j = 2πj/N` on `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceGrid {
    n: usize,
}

impl ReferenceGrid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 16 || n % 2 != 0 {
            return Err(SheetError::InvalidGrid(format!(
                "N = {n}; need an even number of points >= 16"
            )));
        }
        Ok(ReferenceGrid { n })
    }

    #[inline]
    pub fn n_points(&self) -> usize {
        self.n
    }

    /// Label spacing `2π/N`.
    #[inline]
    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.n as f64
    }

    #[inline]
    pub fn label(&self, j: usize) -> f64 {
        self.spacing() * j as f64
    }

    pub fn labels(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.label(j)).collect()
    }

    /// Nearest grid index to an arbitrary label, reduced mod N.
    pub fn nearest_index(&self, x: f64) -> usize {
        let j = (x / self.spacing()).round() as i64;
        j.rem_euclid(self.n as i64) as usize
    }
}
