use super::bump::smooth_step;
use super::{check_grid, FieldGrid, FieldKind};
use crate::error::{Error, Result};
use crate::seed::{mix64, rng_from_seed};
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use std::f64::consts::PI;

/// Ratio between consecutive heat-kernel times `s` in the layer grid.
pub const WN_LAYER_RATIO: f64 = 1.189_207_115_002_721; // 2^(1/4)

const INNER: f64 = 0.05;
// 1/(10√2): the product of two 1D profiles then vanishes outside B_{1/10}.
const OUTER: f64 = 0.070_710_678_118_654_76;
const KERNEL_CUTOFF_SIGMAS: f64 = 6.0;

/// One-dimensional factor of the truncation bump `φ(x, y) = φ₁(x)·φ₁(y)`.
///
/// `φ₁` is 1 on `[−1/20, 1/20]` and 0 outside `[−1/(10√2), 1/(10√2)]`, so `φ`
/// is smooth, takes values in `[0, 1]`, equals 1 on `B_{1/20}(0)` and vanishes
/// outside `B_{1/10}(0)`.
pub fn truncation_profile(d: f64) -> f64 {
    let a = d.abs();
    if a <= INNER {
        1.0
    } else if a >= OUTER {
        0.0
    } else {
        smooth_step((OUTER - a) / (OUTER - INNER))
    }
}

struct Band {
    start: usize,
    weights: Vec<f64>,
}

fn bands(n: usize, spacing: f64, i0: i64, hn: f64, radius: f64, kernel: &dyn Fn(f64) -> f64) -> Vec<Band> {
    (0..n)
        .map(|c| {
            let t = c as f64 * spacing;
            let lo = ((t - radius) / hn).ceil() as i64;
            let hi = ((t + radius) / hn).floor() as i64;
            let weights = (lo..=hi).map(|i| kernel(t - i as f64 * hn)).collect();
            Band { start: (lo - i0) as usize, weights }
        })
        .collect()
}

/// Adds one white-noise layer, blurred by a separable kernel, to `out`.
#[allow(clippy::too_many_arguments)]
fn add_layer(
    out: &mut [f64],
    n: usize,
    spacing: f64,
    hn: f64,
    radius: f64,
    amplitude: f64,
    kernel: &dyn Fn(f64) -> f64,
    rng: &mut rand_chacha::ChaCha8Rng,
) {
    let extent = (n - 1) as f64 * spacing;
    let i0 = (-radius / hn).floor() as i64 - 1;
    let i1 = ((extent + radius) / hn).ceil() as i64 + 1;
    let m = (i1 - i0 + 1) as usize;
    let noise: Vec<f64> = (0..m * m).map(|_| StandardNormal.sample(rng)).collect();
    let band = bands(n, spacing, i0, hn, radius, kernel);

    // contract the noise rows against the y-profile of every target row
    let partial: Vec<f64> = band
        .par_iter()
        .flat_map_iter(|b| {
            let mut acc = vec![0.0; m];
            for (k, w) in b.weights.iter().enumerate() {
                let row = &noise[(b.start + k) * m..(b.start + k + 1) * m];
                for (a, x) in acc.iter_mut().zip(row) {
                    *a += w * x;
                }
            }
            acc
        })
        .collect();

    out.par_chunks_mut(n).enumerate().for_each(|(r, out_row)| {
        let t = &partial[r * m..(r + 1) * m];
        for (c, b) in band.iter().enumerate() {
            let s: f64 = b
                .weights
                .iter()
                .zip(&t[b.start..b.start + b.weights.len()])
                .map(|(w, x)| w * x)
                .sum();
            out_row[c] += amplitude * s;
        }
    });
}

/// Sample of `ĥ_{t_low} − ĥ_{t_high}` where
/// `ĥ_t(z) = √π ∫_{t²}^{1} ∫ p_{s/2}(z − w) W(dw, ds)`.
///
/// The `s`-axis is cut into fixed layers `[2^{-(j+1)/4}, 2^{-j/4}]`, `j ≥ 0`.
/// Layer `j` is one Gaussian array drawn from `mix64(seed, j)` on its own
/// noise lattice (spacing `σ/2`, `σ² = s_j/2`, `s_j` the geometric midpoint)
/// covering the grid plus `6σ`, blurred separably, so the 3D noise is never
/// stored. A range covering only part of a layer takes that layer with its
/// weight reduced to the covered `log s` length. With a common seed, fields
/// over different ranges are therefore built from the same white noise, and
/// ranges with no layer in common are independent.
///
/// With `truncated = true` the kernel is `p_{s/2}·φ`, giving exact
/// independence between regions at distance `≥ 1/5`.
pub fn sample_wn_field(
    n: usize,
    spacing: f64,
    t_low: f64,
    t_high: f64,
    truncated: bool,
    seed: u64,
) -> Result<FieldGrid> {
    check_grid(n, spacing)?;
    if !(t_low > 0.0 && t_low < t_high && t_high <= 1.0) {
        return Err(Error::InvalidRange(format!(
            "need 0 < t_low < t_high <= 1, got t_low = {t_low}, t_high = {t_high}"
        )));
    }
    let dlog = WN_LAYER_RATIO.ln();
    let (lo, hi) = (2.0 * t_low.ln(), 2.0 * t_high.ln());
    let first = ((-hi / dlog).floor() as i64).max(0) as u64;
    let last = ((-lo / dlog).ceil() as i64 - 1).max(0) as u64;
    let mut values = vec![0.0; n * n];
    for j in first..=last {
        let (top, bottom) = (-(j as f64) * dlog, -((j + 1) as f64) * dlog);
        let overlap = hi.min(top) - lo.max(bottom);
        // rounding slivers at layer boundaries would add O(√ulp) noise
        if !(overlap > 1e-9 * dlog) {
            continue;
        }
        let s = (-(j as f64 + 0.5) * dlog).exp();
        let ds = s * overlap;
        let sigma = (s / 2.0).sqrt();
        let (hn, radius) = if truncated {
            ((sigma / 2.0).min(0.005), (KERNEL_CUTOFF_SIGMAS * sigma).min(OUTER))
        } else {
            (sigma / 2.0, KERNEL_CUTOFF_SIGMAS * sigma)
        };
        let norm = 1.0 / (2.0 * PI * sigma * sigma).sqrt();
        let kernel = move |d: f64| {
            let g = norm * (-d * d / (2.0 * sigma * sigma)).exp();
            if truncated {
                g * truncation_profile(d)
            } else {
                g
            }
        };
        let amplitude = (PI * ds).sqrt() * hn;
        let mut rng = rng_from_seed(mix64(seed, j));
        add_layer(&mut values, n, spacing, hn, radius, amplitude, &kernel, &mut rng);
    }
    let kind = if truncated {
        FieldKind::WhiteNoiseTruncated { t_low, t_high }
    } else {
        FieldKind::WhiteNoise { t_low, t_high }
    };
    Ok(FieldGrid::from_parts(n, spacing, values, kind, Some(seed)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_range() {
        assert!(matches!(sample_wn_field(4, 0.1, 0.5, 0.5, false, 0), Err(Error::InvalidRange(_))));
        assert!(matches!(sample_wn_field(4, 0.1, 0.6, 0.5, false, 0), Err(Error::InvalidRange(_))));
        assert!(matches!(sample_wn_field(4, 0.1, 0.1, 1.5, false, 0), Err(Error::InvalidRange(_))));
        assert!(matches!(sample_wn_field(4, 0.1, 0.0, 0.5, true, 0), Err(Error::InvalidRange(_))));
    }

    #[test]
    fn deterministic_per_seed() {
        let a = sample_wn_field(9, 0.05, 0.2, 0.8, false, 3).unwrap();
        let b = sample_wn_field(9, 0.05, 0.2, 0.8, false, 3).unwrap();
        assert_eq!(a, b);
        let c = sample_wn_field(9, 0.05, 0.2, 0.8, true, 3).unwrap();
        assert!(matches!(c.kind(), FieldKind::WhiteNoiseTruncated { .. }));
    }

    #[test]
    fn vanishing_range_gives_tiny_field() {
        let mut acc = 0.0;
        let reps = 200;
        for seed in 0..reps {
            let f = sample_wn_field(5, 0.1, 1.0 - 1e-9, 1.0, false, seed).unwrap();
            acc += f.values()[12] * f.values()[12];
        }
        assert!(acc / (reps as f64) < 1e-6);
    }

    #[test]
    fn truncation_profile_shape() {
        assert_eq!(truncation_profile(0.0), 1.0);
        assert_eq!(truncation_profile(0.05), 1.0);
        assert_eq!(truncation_profile(-0.05), 1.0);
        assert_eq!(truncation_profile(0.0708), 0.0);
        // product is 1 on B_{1/20} and 0 outside B_{1/10}
        for i in 0..200 {
            let th = i as f64 * 0.0314;
            let (c, s) = (th.cos(), th.sin());
            assert_eq!(truncation_profile(0.05 * c) * truncation_profile(0.05 * s), 1.0);
            assert_eq!(truncation_profile(0.1 * c) * truncation_profile(0.1 * s), 0.0);
        }
    }
}
