#![allow(dead_code)]

pub mod cli;
pub mod oracle;

use lqg_core::field::{mollify, FieldGrid, MollifiedField};
use lqg_core::lfpp::{build_metric, Connectivity, LfppMetric};
use lqg_core::seed::rng_from_seed;
use rand::Rng;

/// Mollified field carrying the given values verbatim.
pub fn raw_field(n: usize, spacing: f64, values: Vec<f64>) -> MollifiedField {
    mollify(&FieldGrid::constant(n, spacing, 0.0).unwrap(), spacing).unwrap().with_values(values).unwrap()
}

/// Field with i.i.d. uniform values in `[-amp, amp]`.
pub fn uniform_field(n: usize, spacing: f64, amp: f64, seed: u64) -> MollifiedField {
    let mut rng = rng_from_seed(seed);
    raw_field(n, spacing, (0..n * n).map(|_| rng.random_range(-amp..=amp)).collect())
}

pub fn random_metric(n: usize, xi: f64, conn: Connectivity, seed: u64) -> LfppMetric {
    build_metric(&uniform_field(n, 1.0 / (n - 1) as f64, 2.0, seed), xi, conn).unwrap()
}

pub fn flat_metric(n: usize, xi: f64, conn: Connectivity) -> LfppMetric {
    let h = 1.0 / (n - 1) as f64;
    build_metric(&raw_field(n, h, vec![0.0; n * n]), xi, conn).unwrap()
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

/// Sample mean and standard error of the mean.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
    (m, (v / n).sqrt())
}
