//! Row-wise spectral transforms shared by the samplers and the mollifier.

use rayon::prelude::*;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

pub(crate) fn transpose(data: &[f64], rows: usize, cols: usize) -> Vec<f64> {
    let mut out = vec![0.0; data.len()];
    const B: usize = 32;
    for rb in (0..rows).step_by(B) {
        for cb in (0..cols).step_by(B) {
            for r in rb..(rb + B).min(rows) {
                for c in cb..(cb + B).min(cols) {
                    out[c * rows + r] = data[r * cols + c];
                }
            }
        }
    }
    out
}

/// Unnormalized DST-I of every row: `X_k = Σ_j x_j sin(π j k / (m + 1))`,
/// `j, k = 1..=m`, via an FFT of the odd extension of length `2(m + 1)`.
pub(crate) fn dst1_rows(data: &mut [f64], m: usize) {
    if m == 0 {
        return;
    }
    let len = 2 * (m + 1);
    let fft = FftPlanner::<f64>::new().plan_fft_forward(len);
    data.par_chunks_mut(m).for_each_init(
        || vec![Complex::new(0.0, 0.0); len],
        |buf, row| {
            buf.iter_mut().for_each(|c| *c = Complex::new(0.0, 0.0));
            for (j, &x) in row.iter().enumerate() {
                buf[j + 1] = Complex::new(x, 0.0);
                buf[len - j - 1] = Complex::new(-x, 0.0);
            }
            fft.process(buf);
            for (k, out) in row.iter_mut().enumerate() {
                *out = -0.5 * buf[k + 1].im;
            }
        },
    );
}

/// Multiplies the spectrum of the even (half-sample symmetric) extension of
/// every row by `exp(−σ²ω²/2)`, with `σ` in units of the lattice spacing.
/// Constants are preserved exactly and the filter composes as a semigroup.
pub(crate) fn gaussian_filter_rows(data: &mut [f64], len: usize, sigma: f64) {
    if len <= 1 {
        return;
    }
    let ext = 2 * len;
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(ext);
    let inv = planner.plan_fft_inverse(ext);
    let multiplier: Vec<f64> = (0..ext)
        .map(|k| {
            let kk = k.min(ext - k) as f64;
            let omega = 2.0 * std::f64::consts::PI * kk / ext as f64;
            (-0.5 * sigma * sigma * omega * omega).exp()
        })
        .collect();
    let scale = 1.0 / ext as f64;
    data.par_chunks_mut(len).for_each_init(
        || vec![Complex::new(0.0, 0.0); ext],
        |buf, row| {
            for (j, &x) in row.iter().enumerate() {
                buf[j] = Complex::new(x, 0.0);
                buf[ext - 1 - j] = Complex::new(x, 0.0);
            }
            fwd.process(buf);
            for (c, m) in buf.iter_mut().zip(&multiplier) {
                *c *= *m;
            }
            inv.process(buf);
            for (j, out) in row.iter_mut().enumerate() {
                *out = buf[j].re * scale;
            }
        },
    );
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dst_matches_direct_sum() {
        let m = 7;
        let x: Vec<f64> = (0..m).map(|i| (i as f64 * 0.7).sin() + 0.3).collect();
        let mut y = x.clone();
        dst1_rows(&mut y, m);
        for k in 1..=m {
            let direct: f64 = (1..=m)
                .map(|j| {
                    x[j - 1] * (std::f64::consts::PI * (j * k) as f64 / (m + 1) as f64).sin()
                })
                .sum();
            assert!((direct - y[k - 1]).abs() < 1e-12);
        }
    }

    #[test]
    fn transpose_roundtrip() {
        let d: Vec<f64> = (0..35).map(|i| i as f64).collect();
        let t = transpose(&d, 5, 7);
        assert_eq!(t[5 + 2], d[2 * 7 + 1]);
        assert_eq!(transpose(&t, 7, 5), d);
    }
}
