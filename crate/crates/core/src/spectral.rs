//! Fourier operations on uniformly sampled 2π-periodic data.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(n)
        } else {
            p.plan_fft_forward(n)
        }
    })
}

/// Wavenumber of FFT bin `k` for length `n`.
#[inline]
pub fn wavenumber(k: usize, n: usize) -> f64 {
    if k <= n / 2 {
        k as f64
    } else {
        k as f64 - n as f64
    }
}

/// Normalized forward transform: `c_k = (1/N) Σ f_j e^{-ikx_j}`.
pub fn forward(f: &[f64]) -> Vec<Complex64> {
    let n = f.len();
    let mut buf: Vec<Complex64> = f.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    plan(n, false).process(&mut buf);
    let inv = 1.0 / n as f64;
    for c in &mut buf {
        *c *= inv;
    }
    buf
}

/// Inverse of [`forward`]; returns the real part.
pub fn inverse(c: &[Complex64]) -> Vec<f64> {
    let n = c.len();
    let mut buf = c.to_vec();
    plan(n, true).process(&mut buf);
    buf.iter().map(|z| z.re).collect()
}

/// Spectral derivative in the label variable. The Nyquist mode is dropped.
pub fn derivative(f: &[f64]) -> Vec<f64> {
    let n = f.len();
    let mut c = forward(f);
    for (k, ck) in c.iter_mut().enumerate() {
        if 2 * k == n {
            *ck = Complex64::new(0.0, 0.0);
        } else {
            *ck *= Complex64::new(0.0, wavenumber(k, n));
        }
    }
    inverse(&c)
}

/// Mean of the samples (exact integral of the interpolant over a period / 2π).
pub fn mean(f: &[f64]) -> f64 {
    f.iter().sum::<f64>() / f.len() as f64
}

/// Antiderivative `F(x) = ∫_0^x f` of the trigonometric interpolant, at the nodes.
/// The linear part `mean(f) * x` is included, so `F(2π) - F(0) = 2π mean(f)`.
pub fn antiderivative(f: &[f64]) -> Vec<f64> {
    let n = f.len();
    let mut c = forward(f);
    let m = c[0].re;
    c[0] = Complex64::new(0.0, 0.0);
    for (k, ck) in c.iter_mut().enumerate().skip(1) {
        if 2 * k == n {
            *ck = Complex64::new(0.0, 0.0);
        } else {
            *ck /= Complex64::new(0.0, wavenumber(k, n));
        }
    }
    let p = inverse(&c);
    let h = 2.0 * PI / n as f64;
    (0..n).map(|j| p[j] - p[0] + m * h * j as f64).collect()
}

/// Coefficients of a real trigonometric interpolant, ready for pointwise evaluation.
#[derive(Debug, Clone)]
pub struct TrigInterpolant {
    coeffs: Vec<Complex64>,
}

impl TrigInterpolant {
    pub fn new(f: &[f64]) -> Self {
        let n = f.len();
        let c = forward(f);
        // Non-negative modes with conjugate symmetry folded in; Nyquist halved.
        let half = n / 2;
        let mut coeffs = Vec::with_capacity(half + 1);
        for (k, ck) in c.iter().enumerate().take(half + 1) {
            let w = if k == 0 || k == half { 1.0 } else { 2.0 };
            coeffs.push(ck * w);
        }
        if n % 2 == 0 {
            // Symmetric Nyquist treatment: real cosine only.
            coeffs[half] = Complex64::new(coeffs[half].re, 0.0);
        }
        TrigInterpolant { coeffs }
    }

    /// Value and label derivative at `x`.
    pub fn eval_with_derivative(&self, x: f64) -> (f64, f64) {
        let step = Complex64::from_polar(1.0, x);
        let mut e = Complex64::new(1.0, 0.0);
        let (mut v, mut d) = (0.0, 0.0);
        for (k, c) in self.coeffs.iter().enumerate() {
            let t = c * e;
            v += t.re;
            d -= k as f64 * t.im;
            e *= step;
            if k % 64 == 63 {
                // Limit drift in the running phasor.
                e = Complex64::from_polar(1.0, (k + 1) as f64 * x);
            }
        }
        (v, d)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.eval_with_derivative(x).0
    }
}

/// Resample the trigonometric interpolant onto `m` uniform nodes (`m >= n`, even).
pub fn upsample(f: &[f64], m: usize) -> Vec<f64> {
    let n = f.len();
    if m == n {
        return f.to_vec();
    }
    assert!(m > n && n % 2 == 0, "upsample requires m > n and even n");
    let c = forward(f);
    let mut big = vec![Complex64::new(0.0, 0.0); m];
    let half = n / 2;
    big[..half].copy_from_slice(&c[..half]);
    for k in 1..half {
        big[m - k] = c[n - k];
    }
    // Split the Nyquist coefficient symmetrically.
    big[half] = c[half] * 0.5;
    big[m - half] = c[half] * 0.5;
    inverse(&big)
}

/// Zero every Fourier mode whose magnitude is below `threshold * max |c_k|`.
pub fn krasny_filter(f: &mut [f64], threshold: f64) {
    if threshold <= 0.0 {
        return;
    }
    let mut c = forward(f);
    let cmax = c.iter().fold(0.0_f64, |a, z| a.max(z.norm()));
    if cmax == 0.0 {
        return;
    }
    let cut = threshold * cmax;
    let mut changed = false;
    for z in &mut c {
        if z.norm() < cut && *z != Complex64::new(0.0, 0.0) {
            *z = Complex64::new(0.0, 0.0);
            changed = true;
        }
    }
    if changed {
        let g = inverse(&c);
        f.copy_from_slice(&g);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn nodes(n: usize) -> Vec<f64> {
        (0..n).map(|j| 2.0 * PI * j as f64 / n as f64).collect()
    }

    #[test]
    fn derivative_of_trig_polynomial() {
        let x = nodes(32);
        let f: Vec<f64> = x.iter().map(|&t| (3.0 * t).sin() + 0.5 * t.cos()).collect();
        let d = derivative(&f);
        for (j, &t) in x.iter().enumerate() {
            assert_abs_diff_eq!(d[j], 3.0 * (3.0 * t).cos() - 0.5 * t.sin(), epsilon = 1e-12);
        }
    }

    #[test]
    fn antiderivative_includes_mean() {
        let x = nodes(64);
        let f: Vec<f64> = x.iter().map(|&t| 2.0 + t.cos()).collect();
        let a = antiderivative(&f);
        for (j, &t) in x.iter().enumerate() {
            assert_abs_diff_eq!(a[j], 2.0 * t + t.sin(), epsilon = 1e-12);
        }
    }

    #[test]
    fn interpolant_matches_smooth_function() {
        let x = nodes(64);
        let f: Vec<f64> = x.iter().map(|&t| (t.sin()).exp()).collect();
        let p = TrigInterpolant::new(&f);
        for &t in &[0.1, 1.234, 4.0, 6.2] {
            let (v, d) = p.eval_with_derivative(t);
            assert_abs_diff_eq!(v, t.sin().exp(), epsilon = 1e-12);
            assert_abs_diff_eq!(d, t.cos() * t.sin().exp(), epsilon = 1e-10);
        }
    }

    #[test]
    fn upsample_preserves_interpolant() {
        let x = nodes(16);
        let f: Vec<f64> = x.iter().map(|&t| (2.0 * t).cos() + (7.0 * t).sin()).collect();
        let g = upsample(&f, 64);
        for (j, &t) in nodes(64).iter().enumerate() {
            assert_abs_diff_eq!(g[j], (2.0 * t).cos() + (7.0 * t).sin(), epsilon = 1e-12);
        }
    }

    #[test]
    fn filter_removes_only_tiny_modes() {
        let x = nodes(32);
        let mut f: Vec<f64> = x.iter().map(|&t| t.cos() + 1e-15 * (5.0 * t).sin()).collect();
        krasny_filter(&mut f, 1e-13);
        let c = forward(&f);
        assert!(c[5].norm() < 1e-16 && c[27].norm() < 1e-16);
        assert_abs_diff_eq!(c[1].re, 0.5, epsilon = 1e-15);
    }
}
