//! Adaptive Dormand–Prince 5(4) integration of `X' = X² − 𝔄(t) X − 𝒜(t)`.

use serde::{Deserialize, Serialize};

use super::series::RiccatiSeries;

/// Why an integration stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RiccatiStatus {
    /// `X` reached the guard value.
    Guard,
    /// The end of the time span was reached without blow-up.
    EndOfSpan,
    /// The step size collapsed or the step budget ran out.
    Stalled,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiccatiOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Stop once `X` reaches this value.
    pub guard: f64,
    /// Record every k-th accepted step (the first and last are always kept).
    pub record_every: usize,
    pub max_steps: usize,
}

impl Default for RiccatiOptions {
    fn default() -> Self {
        RiccatiOptions {
            rtol: 1e-12,
            atol: 1e-14,
            guard: 1e8,
            record_every: 1,
            max_steps: 2_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiccatiRun {
    pub series: RiccatiSeries,
    pub status: RiccatiStatus,
}

// Dormand–Prince tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrate a scalar ODE `y' = f(t, y)` with DOPRI5, calling `accept(t, y)`
/// after each accepted step. Integration stops when `accept` returns false.
/// Returns `false` if the step size collapsed or the step budget ran out.
pub fn dopri5(
    f: impl Fn(f64, f64) -> f64,
    t0: f64,
    y0: f64,
    t1: f64,
    opts: &RiccatiOptions,
    mut accept: impl FnMut(f64, f64) -> bool,
) -> bool {
    let (mut t, mut y) = (t0, y0);
    let span = t1 - t0;
    let mut h = 1e-3 * span.abs().max(1e-12);
    let mut k1 = f(t, y);
    let mut steps = 0;
    while t < t1 {
        if steps >= opts.max_steps {
            return false;
        }
        steps += 1;
        if t + h > t1 {
            h = t1 - t;
        }
        let mut k = [0.0; 7];
        k[0] = k1;
        for s in 1..7 {
            let mut yi = y;
            for (r, a) in A[s].iter().enumerate().take(s) {
                yi += h * a * k[r];
            }
            k[s] = f(t + C[s] * h, yi);
        }
        let y5 = y + h * (0..7).map(|i| B5[i] * k[i]).sum::<f64>();
        let y4 = y + h * (0..7).map(|i| B4[i] * k[i]).sum::<f64>();
        let scale = opts.atol + opts.rtol * y.abs().max(y5.abs());
        let err = ((y5 - y4) / scale).abs();
        if err <= 1.0 && y5.is_finite() {
            t += h;
            y = y5;
            k1 = k[6];
            if !accept(t, y) {
                return true;
            }
            let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h *= fac;
        } else {
            let fac = if err.is_finite() { (0.9 * err.powf(-0.2)).clamp(0.1, 0.9) } else { 0.1 };
            h *= fac;
        }
        if h.abs() < 1e-15 * t.abs().max(1e-300) {
            return false;
        }
    }
    true
}

/// Integrate `X' = X² − 𝔄 X − 𝒜` from `(t0, x0)` until the guard or `t1`.
pub fn riccati_integrate(
    x0: f64,
    frak_a: &dyn Fn(f64) -> f64,
    cal_a: &dyn Fn(f64) -> f64,
    t_span: (f64, f64),
    opts: &RiccatiOptions,
) -> RiccatiRun {
    let rhs = |t: f64, x: f64| x * x - frak_a(t) * x - cal_a(t);
    let mut series = RiccatiSeries::default();
    series.push(t_span.0, x0, frak_a(t_span.0), cal_a(t_span.0));
    let mut hit_guard = false;
    let mut count = 0usize;
    let mut pending: Option<(f64, f64)> = None;
    let every = opts.record_every.max(1);
    let ok = dopri5(rhs, t_span.0, x0, t_span.1, opts, |t, x| {
        count += 1;
        if x >= opts.guard {
            hit_guard = true;
            series.push(t, x, frak_a(t), cal_a(t));
            pending = None;
            return false;
        }
        if count % every == 0 {
            series.push(t, x, frak_a(t), cal_a(t));
            pending = None;
        } else {
            pending = Some((t, x));
        }
        true
    });
    if let Some((t, x)) = pending {
        series.push(t, x, frak_a(t), cal_a(t));
    }
    let status = if hit_guard {
        RiccatiStatus::Guard
    } else if ok {
        RiccatiStatus::EndOfSpan
    } else {
        RiccatiStatus::Stalled
    };
    RiccatiRun { series, status }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separable_case_hits_guard() {
        let run = riccati_integrate(1.0, &|_| 0.0, &|_| 0.0, (0.0, 2.0), &RiccatiOptions::default());
        assert_eq!(run.status, RiccatiStatus::Guard);
        let s = &run.series;
        let t_last = *s.times.last().unwrap();
        assert!(t_last < 1.0 && t_last > 1.0 - 1e-7);
        for (t, x) in s.times.iter().zip(&s.x).filter(|(t, _)| **t < 0.99) {
            assert!((x - 1.0 / (1.0 - t)).abs() < 1e-9 * x * x);
        }
    }

    #[test]
    fn decaying_solution_reaches_end_of_span() {
        let run = riccati_integrate(0.5, &|_| 2.0, &|_| 0.0, (0.0, 3.0), &RiccatiOptions::default());
        assert_eq!(run.status, RiccatiStatus::EndOfSpan);
        assert_eq!(*run.series.times.last().unwrap(), 3.0);
    }
}
