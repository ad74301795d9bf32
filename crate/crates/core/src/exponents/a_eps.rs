use crate::error::{Error, Result};
use crate::field::{mollify, DgffSource, FieldSource};
use crate::lfpp::{build_metric, crossing_distance, Connectivity};
use crate::seed::mix64;
use crate::stats::{linear_fit, median};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Median crossing length at one mollification scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ASample {
    pub epsilon: f64,
    pub median: f64,
    pub replicates: usize,
}

/// Log-log regression of `a_ε` against `ε`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub xi: f64,
    pub samples: Vec<ASample>,
    pub slope: f64,
    pub q_hat: f64,
    pub stderr: f64,
}

impl ExponentFit {
    /// CSV table `epsilon,median,replicates`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("epsilon,median,replicates\n");
        for a in &self.samples {
            s.push_str(&format!("{:e},{:e},{}\n", a.epsilon, a.median, a.replicates));
        }
        s
    }
}

/// Result of [`fit_q`]: slope of `log a_ε` on `log ε`, `Q̂ = (1 − slope)/ξ`
/// and its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QFit {
    pub slope: f64,
    pub q_hat: f64,
    pub stderr: f64,
}

/// Least-squares fit of `log a_ε = (1 − ξQ)·log ε + c`.
pub fn fit_q(xi: f64, samples: &[(f64, f64)]) -> Result<QFit> {
    if !(xi > 0.0 && xi.is_finite()) {
        return Err(Error::InvalidParameter(format!("xi must be positive, got {xi}")));
    }
    if let Some((e, m)) = samples.iter().find(|(e, m)| !(*m > 0.0) || !(*e > 0.0)) {
        return Err(Error::InvalidData(format!("nonpositive sample (epsilon {e}, median {m})")));
    }
    let mut eps: Vec<f64> = samples.iter().map(|s| s.0).collect();
    eps.sort_by(f64::total_cmp);
    eps.dedup();
    if eps.len() < 2 {
        return Err(Error::InvalidData("need at least two distinct epsilons".into()));
    }
    let xs: Vec<f64> = samples.iter().map(|s| s.0.ln()).collect();
    let ys: Vec<f64> = samples.iter().map(|s| s.1.ln()).collect();
    let fit = linear_fit(&xs, &ys);
    Ok(QFit {
        slope: fit.slope,
        q_hat: (1.0 - fit.slope) / xi,
        stderr: fit.slope_stderr / xi,
    })
}

/// How crossing lengths are sampled.
///
/// Fields are drawn on a `(n + 2·padding)`-vertex grid with spacing
/// `1/(n − 1)`, mollified, and the central `n × n` block (the unit square)
/// is crossed. Each replicate's field is reused across every `ε`.
pub struct CrossingEstimator<'a> {
    pub source: &'a dyn FieldSource,
    pub connectivity: Connectivity,
    pub padding: usize,
}

const CONTINUUM: DgffSource = DgffSource { scale: crate::field::CONTINUUM_GFF_SCALE };

impl Default for CrossingEstimator<'static> {
    fn default() -> Self {
        Self { source: &CONTINUUM, connectivity: Connectivity::King8, padding: 0 }
    }
}

impl CrossingEstimator<'_> {
    /// Crossing lengths indexed `[epsilon][replicate]`.
    pub fn crossings(
        &self,
        xi: f64,
        epsilons: &[f64],
        n: usize,
        replicates: usize,
        seed: u64,
    ) -> Result<Vec<Vec<f64>>> {
        if n < 2 {
            return Err(Error::InvalidSize("crossing grid needs n >= 2".into()));
        }
        if replicates == 0 || replicates.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "replicates must be odd and positive, got {replicates}"
            )));
        }
        if epsilons.is_empty() {
            return Err(Error::InvalidArgument("no epsilons given".into()));
        }
        if !(xi > 0.0 && xi.is_finite()) {
            return Err(Error::InvalidParameter(format!("xi must be positive, got {xi}")));
        }
        let spacing = 1.0 / (n - 1) as f64;
        for &e in epsilons {
            if !(e >= 2.0 * spacing * (1.0 - 1e-12) && e <= 0.25) {
                return Err(Error::Resolution(format!(
                    "epsilon {e} outside [2·spacing, 0.25] = [{}, 0.25]",
                    2.0 * spacing
                )));
            }
        }
        let total = n + 2 * self.padding;
        let per_rep: Vec<Vec<f64>> = (0..replicates as u64)
            .into_par_iter()
            .map(|k| -> Result<Vec<f64>> {
                let field = self.source.sample(total, spacing, mix64(seed, k))?;
                epsilons
                    .iter()
                    .map(|&e| {
                        let mut m = mollify(&field, e)?;
                        if self.padding > 0 {
                            m = m.sub_grid(self.padding, self.padding, n)?;
                        }
                        let metric = build_metric(&m, xi, self.connectivity)?;
                        Ok(crossing_distance(&metric))
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        Ok((0..epsilons.len())
            .map(|i| per_rep.iter().map(|r| r[i]).collect())
            .collect())
    }

    /// Median crossing length per `ε` followed by [`fit_q`].
    pub fn estimate(
        &self,
        xi: f64,
        epsilons: &[f64],
        n: usize,
        replicates: usize,
        seed: u64,
    ) -> Result<ExponentFit> {
        let table = self.crossings(xi, epsilons, n, replicates, seed)?;
        let samples: Vec<ASample> = epsilons
            .iter()
            .zip(&table)
            .map(|(&epsilon, xs)| ASample { epsilon, median: median(xs), replicates })
            .collect();
        let pairs: Vec<(f64, f64)> = samples.iter().map(|s| (s.epsilon, s.median)).collect();
        let fit = fit_q(xi, &pairs)?;
        Ok(ExponentFit { xi, samples, slope: fit.slope, q_hat: fit.q_hat, stderr: fit.stderr })
    }
}

/// [`CrossingEstimator::estimate`] with the continuum-normalized DGFF and
/// King8 connectivity.
pub fn estimate_a_eps(
    xi: f64,
    epsilons: &[f64],
    n: usize,
    replicates: usize,
    seed: u64,
) -> Result<ExponentFit> {
    CrossingEstimator::default().estimate(xi, epsilons, n, replicates, seed)
}
