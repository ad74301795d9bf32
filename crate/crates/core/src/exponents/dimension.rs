use crate::error::{Error, Result};
use crate::lfpp::{LfppMetric, Stop, Workspace};
use crate::stats::linear_fit;
use serde::Serialize;

/// Covering-number dimension estimate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimensionEstimate {
    pub dimension: f64,
    pub stderr: f64,
    /// `(radius, number of balls)` pairs.
    pub counts: Vec<(f64, usize)>,
}

/// Greedy covering of `target` by metric balls: scan vertices in index
/// order, and every still-uncovered target vertex becomes the center of a
/// new ball of radius `s`. The dimension is minus the least-squares slope of
/// `log N(s)` against `log s`.
pub fn box_dimension(metric: &LfppMetric, target: &[bool], radii: &[f64]) -> Result<DimensionEstimate> {
    if target.len() != metric.len() {
        return Err(Error::InvalidArgument("target mask size does not match the grid".into()));
    }
    if !target.iter().any(|&t| t) {
        return Err(Error::InvalidSet("target set is empty".into()));
    }
    let mut rs = radii.to_vec();
    rs.sort_by(f64::total_cmp);
    rs.dedup();
    if rs.len() < 3 || !(rs[0] > 0.0) || rs[rs.len() - 1] < 2.0 * rs[0] {
        return Err(Error::InvalidArgument(
            "need at least three distinct positive radii spanning a factor of two".into(),
        ));
    }
    let mut ws = Workspace::new(metric.len());
    let counts: Vec<(f64, usize)> = rs
        .iter()
        .map(|&s| {
            let mut covered: Vec<bool> = target.iter().map(|t| !t).collect();
            let mut count = 0;
            for v in 0..metric.len() {
                if covered[v] {
                    continue;
                }
                count += 1;
                ws.search(metric, &[v], None, Stop::Radius(s));
                for u in ws.settled_vertices() {
                    covered[u] = true;
                }
            }
            (s, count)
        })
        .collect();
    let xs: Vec<f64> = counts.iter().map(|c| c.0.ln()).collect();
    let ys: Vec<f64> = counts.iter().map(|c| (c.1 as f64).ln()).collect();
    let fit = linear_fit(&xs, &ys);
    Ok(DimensionEstimate { dimension: -fit.slope, stderr: fit.slope_stderr, counts })
}
