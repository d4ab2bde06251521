//! Blow-up time and rate, the integral identity, and the rate upper bound.

use serde::{Deserialize, Serialize};

use super::series::{BlowupEstimate, RiccatiSeries};
use crate::error::{Result, SheetError};

/// Minimum number of samples in the fit window.
pub const MIN_WINDOW: usize = 20;

/// Indices of the final window where `X ≥ 100 max(|X₀|, 1)`.
pub fn fit_window(series: &RiccatiSeries) -> Result<std::ops::Range<usize>> {
    if series.is_empty() {
        return Err(SheetError::InsufficientWindow("empty series".into()));
    }
    let thr = 100.0 * series.x[0].abs().max(1.0);
    let mut start = series.len();
    while start > 0 && series.x[start - 1] >= thr {
        start -= 1;
    }
    let count = series.len() - start;
    if count < MIN_WINDOW {
        return Err(SheetError::InsufficientWindow(format!(
            "{count} samples with X >= {thr}, need {MIN_WINDOW}"
        )));
    }
    Ok(start..series.len())
}

/// Solve the 3x3 normal equations of a weighted quadratic fit.
fn quadratic_fit(t: &[f64], y: &[f64], w: &[f64]) -> Option<[f64; 3]> {
    let mut m = [[0.0; 3]; 3];
    let mut r = [0.0; 3];
    for i in 0..t.len() {
        let p = [1.0, t[i], t[i] * t[i]];
        for a in 0..3 {
            r[a] += w[i] * p[a] * y[i];
            for b in 0..3 {
                m[a][b] += w[i] * p[a] * p[b];
            }
        }
    }
    // Gaussian elimination with partial pivoting.
    for col in 0..3 {
        let piv = (col..3).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        m.swap(col, piv);
        r.swap(col, piv);
        if m[col][col] == 0.0 {
            return None;
        }
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            for k in col..3 {
                m[row][k] -= f * m[col][k];
            }
            r[row] -= f * r[col];
        }
    }
    let mut c = [0.0; 3];
    for row in (0..3).rev() {
        let mut acc = r[row];
        for k in row + 1..3 {
            acc -= m[row][k] * c[k];
        }
        c[row] = acc / m[row][row];
    }
    Some(c)
}

/// Fit `1/X` on the final window with a quadratic in `t` (relative weights)
/// and report `1/|slope|` at its root as the limit of `X (T − t)`.
///
/// The regression root is accurate to about 1e-13, which is coarse next to
/// `1/X = 1e-8` at the guard. `T_est` is therefore polished from the last sample
/// with the local expansion `T − t = Y + 𝔄Y²/2 + O(Y³)`, `Y = 1/X`; the raw
/// regression root is kept in `t_fit`.
pub fn blowup_fit(series: &RiccatiSeries) -> Result<BlowupEstimate> {
    let win = fit_window(series)?;
    let t_last = series.times[win.end - 1];
    let t_first = series.times[win.start];
    let scale = (t_last - t_first).max(f64::MIN_POSITIVE);
    let tau: Vec<f64> = series.times[win.clone()].iter().map(|t| (t - t_last) / scale).collect();
    let y: Vec<f64> = series.x[win.clone()].iter().map(|x| 1.0 / x).collect();
    let w: Vec<f64> = y.iter().map(|v| 1.0 / (v * v)).collect();
    let c = quadratic_fit(&tau, &y, &w)
        .ok_or_else(|| SheetError::InsufficientWindow("singular fit".into()))?;
    // Newton from the linear extrapolation of the last sample.
    let slope_at = |s: f64| c[1] + 2.0 * c[2] * s;
    let mut s = -c[0] / c[1];
    for _ in 0..50 {
        let f = c[0] + c[1] * s + c[2] * s * s;
        let ds = f / slope_at(s);
        s -= ds;
        if ds.abs() < 1e-17 * (1.0 + s.abs()) {
            break;
        }
    }
    let t_fit = t_last + s * scale;
    let slope = slope_at(s) / scale;
    let y_last = 1.0 / series.x[win.end - 1];
    let t_est = t_last + y_last + 0.5 * series.frak_a[win.end - 1] * y_last * y_last;
    if !(t_est > t_last) || !(t_fit > t_last) || !slope.is_finite() || slope == 0.0 {
        return Err(SheetError::InsufficientWindow(format!(
            "fit does not extrapolate past the last sample (T_est = {t_est}, t_last = {t_last})"
        )));
    }
    Ok(BlowupEstimate {
        t_est,
        t_fit,
        rate: 1.0 / slope.abs(),
        window: (t_first, t_last),
        window_samples: win.len(),
        residual: f64::NAN,
    })
}

/// Max over the fit window of `|X − RHS| / X` with
/// `RHS(t) = [T − t − ∫_t^T (𝔄/X + 𝒜/X²)]⁻¹`. The integral uses the trapezoid
/// rule on the samples and the rate-one asymptote `1/X ≈ T − t` past the last one.
pub fn identity_residual(series: &RiccatiSeries, t_est: f64) -> Result<f64> {
    let win = fit_window(series)?;
    let last = series.len() - 1;
    let tl = series.times[last];
    let gap = t_est - tl;
    let integrand = |i: usize| {
        let y = 1.0 / series.x[i];
        series.frak_a[i] * y + series.cal_a[i] * y * y
    };
    let tail = series.frak_a[last] * gap * gap / 2.0 + series.cal_a[last] * gap * gap * gap / 3.0;
    let mut acc = tail;
    let mut worst = 0.0_f64;
    for i in (win.start..=last).rev() {
        if i < last {
            let h = series.times[i + 1] - series.times[i];
            acc += 0.5 * h * (integrand(i) + integrand(i + 1));
        }
        let rhs = 1.0 / (t_est - series.times[i] - acc);
        let x = series.x[i];
        worst = worst.max(((x - rhs) / x).abs());
    }
    Ok(worst)
}

/// Fit then fill in the identity residual.
pub fn analyze_blowup(series: &RiccatiSeries) -> Result<BlowupEstimate> {
    let mut est = blowup_fit(series)?;
    est.residual = identity_residual(series, est.t_est)?;
    Ok(est)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub passes: bool,
    /// Smallest `bound − X` over the checked samples.
    pub margin: f64,
    pub checked: usize,
    /// Window samples too close to `T` for `T − t` to be resolved in f64.
    pub unresolved: usize,
}

/// Checks `X(t) ≤ (1 + (1 + 2c₆)(T − t))/(T − t)` on the fit window.
///
/// The bound exceeds `1/(T − t)` by only `1 + 2c₆`, while rounding `t` perturbs
/// `1/(T − t)` by about `ulp(T) X²`. Samples where that perturbation exceeds 1%
/// of `1 + 2c₆` cannot be judged and are counted as unresolved.
pub fn rate_bound_check(series: &RiccatiSeries, t_est: f64, c6: f64) -> Result<BoundCheck> {
    let win = fit_window(series)?;
    let excess = 1.0 + 2.0 * c6;
    let ulp = 2.0 * f64::EPSILON * t_est.abs().max(f64::MIN_POSITIVE);
    let mut margin = f64::INFINITY;
    let (mut checked, mut unresolved) = (0, 0);
    for i in win {
        let d = t_est - series.times[i];
        if d <= 0.0 {
            return Err(SheetError::InvalidInput(format!(
                "sample time {} is not before T = {t_est}",
                series.times[i]
            )));
        }
        let x = series.x[i];
        if ulp * x * x > 0.01 * excess {
            unresolved += 1;
            continue;
        }
        checked += 1;
        let bound = (1.0 + excess * d) / d;
        margin = margin.min(bound - x);
    }
    if checked == 0 {
        return Err(SheetError::InsufficientWindow("no resolvable samples in the window".into()));
    }
    Ok(BoundCheck {
        passes: margin >= 0.0,
        margin,
        checked,
        unresolved,
    })
}
