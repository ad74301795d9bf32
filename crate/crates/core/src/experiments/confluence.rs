use crate::error::{Error, Result};
use crate::lfpp::{DistanceMap, LfppMetric, distance_map};
use crate::seed::rng_from_seed;
use rand::seq::index::sample;
use serde::Serialize;
use std::collections::{BTreeSet, HashMap};

/// First-exit data of one traced geodesic.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TargetPrefix {
    pub target: usize,
    /// First vertex of the geodesic with distance greater than `t`.
    pub exit_vertex: usize,
    /// Number of edges from the center to `exit_vertex`.
    pub prefix_edges: usize,
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfluenceReport {
    pub center: usize,
    pub s: f64,
    pub t: f64,
    pub num_targets: usize,
    /// Fraction of target pairs whose geodesics agree up to the first exit
    /// of the `t`-ball. Equal to 1 when there are no pairs.
    pub shared_prefix_fraction: f64,
    /// Set when fewer than two targets were traced.
    pub no_pairs: bool,
    /// Number of distinct first edges out of the center.
    pub distinct_exit_edges: usize,
    /// Whether the union of traced geodesics is a tree rooted at the center.
    pub is_tree: bool,
    pub targets: Vec<TargetPrefix>,
}

impl ConfluenceReport {
    /// `target,exit_vertex,prefix_edges,length` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("target,exit_vertex,prefix_edges,length\n");
        for p in &self.targets {
            out.push_str(&format!("{},{},{},{:.17e}\n", p.target, p.exit_vertex, p.prefix_edges, p.length));
        }
        out
    }
}

fn check_radii(s: f64, t: f64) -> Result<()> {
    if !(t > 0.0 && t < s && s.is_finite()) {
        return Err(Error::InvalidArgument(format!("confluence radii must satisfy 0 < t < s, got s = {s}, t = {t}")));
    }
    Ok(())
}

/// Traces geodesics from `center` to `num_targets` distinct vertices drawn
/// uniformly from the complement of the metric ball of radius `s`, and
/// compares them up to the first exit of the ball of radius `t`. Fewer
/// targets are used when fewer vertices lie outside the ball.
pub fn confluence_stat(
    metric: &LfppMetric,
    center: usize,
    s: f64,
    t: f64,
    num_targets: usize,
    seed: u64,
) -> Result<ConfluenceReport> {
    check_radii(s, t)?;
    let dmap = distance_map(metric, &[center])?;
    let outside: Vec<usize> = (0..metric.len())
        .filter(|&v| dmap.dist(v).is_some_and(|d| d > s))
        .collect();
    if outside.is_empty() {
        return Err(Error::BallTooLarge(format!("no vertex lies outside the metric ball of radius {s}")));
    }
    let k = num_targets.min(outside.len());
    let mut rng = rng_from_seed(seed);
    let mut picks = sample(&mut rng, outside.len(), k).into_vec();
    picks.sort_unstable();
    let targets: Vec<usize> = picks.into_iter().map(|i| outside[i]).collect();
    report(&dmap, center, s, t, &targets)
}

/// [`confluence_stat`] with an explicit target list.
pub fn confluence_with_targets(
    metric: &LfppMetric,
    center: usize,
    s: f64,
    t: f64,
    targets: &[usize],
) -> Result<ConfluenceReport> {
    check_radii(s, t)?;
    let dmap = distance_map(metric, &[center])?;
    report(&dmap, center, s, t, targets)
}

fn report(dmap: &DistanceMap<'_>, center: usize, s: f64, t: f64, targets: &[usize]) -> Result<ConfluenceReport> {
    let mut paths = Vec::with_capacity(targets.len());
    for &target in targets {
        paths.push(dmap.geodesic(target)?);
    }
    let mut prefixes = Vec::with_capacity(paths.len());
    for (path, &target) in paths.iter().zip(targets) {
        let exit = path
            .vertices
            .iter()
            .position(|&v| dmap.distances()[v] > t)
            .unwrap_or(path.vertices.len() - 1);
        prefixes.push(TargetPrefix {
            target,
            exit_vertex: path.vertices[exit],
            prefix_edges: exit,
            length: path.length,
        });
    }

    let mut pairs = 0usize;
    let mut shared = 0usize;
    for i in 0..paths.len() {
        for j in i + 1..paths.len() {
            pairs += 1;
            let (a, b) = (&paths[i].vertices, &paths[j].vertices);
            let (ea, eb) = (prefixes[i].prefix_edges, prefixes[j].prefix_edges);
            if ea == eb && a[..=ea] == b[..=eb] {
                shared += 1;
            }
        }
    }

    let first_edges: BTreeSet<usize> = paths.iter().filter_map(|p| p.vertices.get(1).copied()).collect();

    let mut parent: HashMap<usize, usize> = HashMap::new();
    let mut is_tree = paths.iter().all(|p| p.vertices.first() == Some(&center));
    for p in &paths {
        for e in p.vertices.windows(2) {
            if *parent.entry(e[1]).or_insert(e[0]) != e[0] || e[1] == center {
                is_tree = false;
            }
        }
    }

    Ok(ConfluenceReport {
        center,
        s,
        t,
        num_targets: targets.len(),
        shared_prefix_fraction: if pairs == 0 { 1.0 } else { shared as f64 / pairs as f64 },
        no_pairs: pairs == 0,
        distinct_exit_edges: first_edges.len(),
        is_tree,
        targets: prefixes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{mollify, FieldGrid};
    use crate::lfpp::{build_metric, Connectivity};

    fn flat(n: usize, conn: Connectivity) -> LfppMetric {
        let h = 1.0 / (n - 1) as f64;
        build_metric(&mollify(&FieldGrid::constant(n, h, 0.0).unwrap(), h).unwrap(), 0.5, conn).unwrap()
    }

    #[test]
    fn single_target_has_no_pairs() {
        let m = flat(17, Connectivity::King8);
        let r = confluence_stat(&m, 8 * 17 + 8, 0.3, 0.1, 1, 3).unwrap();
        assert_eq!(r.num_targets, 1);
        assert!(r.no_pairs);
        assert_eq!(r.shared_prefix_fraction, 1.0);
        assert!(r.is_tree);
    }

    #[test]
    fn quadrant_targets_share_first_edge() {
        let n = 21;
        let m = flat(n, Connectivity::Axis4);
        let c = 10 * n + 10;
        let targets: Vec<usize> = (12..n).flat_map(|r| (15..n).map(move |col| r * n + col)).collect();
        let r = confluence_with_targets(&m, c, 0.2, 0.05, &targets).unwrap();
        assert_eq!(r.distinct_exit_edges, 1);
        assert!(r.is_tree);
        assert!(r.shared_prefix_fraction > 0.0);
    }

    #[test]
    fn errors() {
        let m = flat(9, Connectivity::King8);
        assert!(matches!(confluence_stat(&m, 40, 10.0, 1.0, 5, 0), Err(Error::BallTooLarge(_))));
        assert!(confluence_stat(&m, 40, 0.1, 0.2, 5, 0).is_err());
        assert!(confluence_stat(&m, 400, 0.2, 0.1, 5, 0).is_err());
    }

    #[test]
    fn deterministic() {
        let m = flat(17, Connectivity::King8);
        let a = confluence_stat(&m, 100, 0.2, 0.05, 10, 9).unwrap();
        let b = confluence_stat(&m, 100, 0.2, 0.05, 10, 9).unwrap();
        assert_eq!(a, b);
    }
}
