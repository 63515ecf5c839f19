//! FFT plumbing: planner reuse, spectral resampling and circular convolution
//! of a disc kernel against boundary data on a whole circle `|z| = r`.

use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// In-place `X[k] = sum_j x[j] e^{-2 pi i jk / n}`.
pub(crate) fn fft(buf: &mut [Complex64]) {
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(buf.len()).process(buf));
}

/// In-place unnormalised inverse, `x[j] = sum_k X[k] e^{2 pi i jk / n}`.
pub(crate) fn ifft(buf: &mut [Complex64]) {
    PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(buf.len()).process(buf));
}

/// Maps a signed frequency to its DFT bin.
pub(crate) fn bin(k: i64, n: usize) -> usize {
    k.rem_euclid(n as i64) as usize
}

/// Signed frequency of a DFT bin; the Nyquist bin of an even length maps to `n/2`.
pub(crate) fn freq(j: usize, n: usize) -> i64 {
    if j <= n / 2 {
        j as i64
    } else {
        j as i64 - n as i64
    }
}

/// Trigonometric interpolation of `samples` onto `m >= samples.len()` points.
/// The Nyquist coefficient of an even-length input is split evenly.
pub(crate) fn upsample(samples: &[Complex64], m: usize) -> Vec<Complex64> {
    let n = samples.len();
    if m == n {
        return samples.to_vec();
    }
    assert!(m > n, "upsample needs m >= n");
    let mut spec = samples.to_vec();
    fft(&mut spec);
    let mut out = vec![Complex64::new(0.0, 0.0); m];
    for (j, &c) in spec.iter().enumerate() {
        let k = freq(j, n);
        if n.is_multiple_of(2) && k == (n / 2) as i64 {
            out[bin(k, m)] += 0.5 * c;
            out[bin(-k, m)] += 0.5 * c;
        } else {
            out[bin(k, m)] += c;
        }
    }
    ifft(&mut out);
    let scale = 1.0 / n as f64;
    out.iter_mut().for_each(|v| *v *= scale);
    out
}

/// Circular convolution on the circle of radius `r`:
/// `out[i] = (1/m) sum_j kernel(r e^{i(theta_i - theta_j)}) g(theta_j)` on an `m`-point grid,
/// where `g_on_grid` already holds `g` sampled on that grid.
pub(crate) fn convolve_on_circle(kernel: impl Fn(Complex64) -> Complex64, g_on_grid: &[Complex64], r: f64) -> Vec<Complex64> {
    let m = g_on_grid.len();
    let mut k: Vec<Complex64> = (0..m).map(|j| kernel(Complex64::from_polar(r, 2.0 * PI * j as f64 / m as f64))).collect();
    let mut g = g_on_grid.to_vec();
    fft(&mut k);
    fft(&mut g);
    k.iter_mut().zip(&g).for_each(|(a, b)| *a *= b);
    ifft(&mut k);
    let scale = 1.0 / (m as f64 * m as f64);
    k.iter_mut().for_each(|v| *v *= scale);
    k
}

/// Grid size for a ring evaluation: `n_out * 2^j`, at least `min_nodes`.
pub(crate) fn ring_size(n_out: usize, min_nodes: usize) -> usize {
    let mut m = n_out.max(1);
    while m < min_nodes {
        m *= 2;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn upsample_is_exact_for_band_limited_data() {
        let n = 16;
        let f = |t: f64| Complex64::from_polar(1.0, 3.0 * t) + 0.5 * Complex64::from_polar(1.0, -5.0 * t);
        let s: Vec<_> = (0..n).map(|j| f(2.0 * PI * j as f64 / n as f64)).collect();
        let up = upsample(&s, 48);
        for (j, v) in up.iter().enumerate() {
            assert!((v - f(2.0 * PI * j as f64 / 48.0)).norm() < 1e-13);
        }
    }

    #[test]
    fn convolution_with_constant_kernel_is_the_mean() {
        let g: Vec<_> = (0..8).map(|j| Complex64::new(j as f64, 1.0)).collect();
        let out = convolve_on_circle(|_| Complex64::new(1.0, 0.0), &g, 0.5);
        for v in out {
            assert!((v - Complex64::new(3.5, 1.0)).norm() < 1e-13);
        }
    }
}
