//! Discrete Fourier transforms on uniform periodic grids.

use crate::C64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

/// `c_k = (1/n) Σ_j v_j e^{-2πi jk/n}`, stored in FFT order.
pub fn forward(values: &[C64]) -> Vec<C64> {
    let n = values.len();
    let mut buf = values.to_vec();
    if n == 0 {
        return buf;
    }
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let inv = 1.0 / n as f64;
    buf.iter_mut().for_each(|c| *c *= inv);
    buf
}

/// Inverse of [`forward`].
pub fn inverse(coeffs: &[C64]) -> Vec<C64> {
    let n = coeffs.len();
    let mut buf = coeffs.to_vec();
    if n == 0 {
        return buf;
    }
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    buf
}

/// Signed frequency of FFT slot `k`.
pub fn frequency(k: usize, n: usize) -> i64 {
    if k <= n / 2 {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

/// Derivative of periodic samples over one `period`; the Nyquist mode is dropped.
pub fn derivative(values: &[C64], period: f64) -> Vec<C64> {
    let n = values.len();
    let mut c = forward(values);
    for (k, ck) in c.iter_mut().enumerate() {
        let m = frequency(k, n);
        if n % 2 == 0 && k == n / 2 {
            *ck = C64::default();
        } else {
            *ck *= C64::new(0.0, 2.0 * PI * m as f64 / period);
        }
    }
    inverse(&c)
}
