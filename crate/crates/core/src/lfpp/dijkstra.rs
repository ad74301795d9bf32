use super::LfppMetric;
use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Distance reported for vertices that cannot be reached. It is the largest
/// finite `f64`, so serialized output never contains an infinity.
pub const UNREACHABLE: f64 = f64::MAX;

pub(crate) const NO_PRED: u32 = u32::MAX;

#[derive(Clone, Copy, PartialEq)]
struct Entry {
    dist: f64,
    v: u32,
}

impl Eq for Entry {}

impl Ord for Entry {
    // min-heap on (dist, vertex index): ties pop in lexicographic vertex order
    fn cmp(&self, other: &Self) -> Ordering {
        other.dist.total_cmp(&self.dist).then_with(|| other.v.cmp(&self.v))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Copy)]
pub(crate) enum Stop<'a> {
    Exhaust,
    /// Stop once the first vertex of the mask is settled.
    Target(&'a [bool]),
    /// Settle only vertices at distance `≤ radius`.
    Radius(f64),
}

/// Reusable Dijkstra state; only touched entries are reset between runs.
pub(crate) struct Workspace {
    pub dist: Vec<f64>,
    pub pred: Vec<u32>,
    pub settled: Vec<bool>,
    touched: Vec<u32>,
    heap: BinaryHeap<Entry>,
}

impl Workspace {
    pub fn new(len: usize) -> Self {
        Self {
            dist: vec![UNREACHABLE; len],
            pred: vec![NO_PRED; len],
            settled: vec![false; len],
            touched: Vec::new(),
            heap: BinaryHeap::new(),
        }
    }

    fn reset(&mut self) {
        for &v in &self.touched {
            let v = v as usize;
            self.dist[v] = UNREACHABLE;
            self.pred[v] = NO_PRED;
            self.settled[v] = false;
        }
        self.touched.clear();
        self.heap.clear();
    }

    /// Vertices settled by the last search.
    pub fn settled_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.touched.iter().map(|&v| v as usize).filter(|&v| self.settled[v])
    }

    /// Runs a multi-source search. Returns the target that stopped the
    /// search, if any.
    pub fn search(
        &mut self,
        metric: &LfppMetric,
        sources: &[usize],
        allowed: Option<&[bool]>,
        stop: Stop<'_>,
    ) -> Option<usize> {
        self.reset();
        for &s in sources {
            if self.dist[s] != 0.0 {
                self.dist[s] = 0.0;
                self.touched.push(s as u32);
                self.heap.push(Entry { dist: 0.0, v: s as u32 });
            }
        }
        while let Some(Entry { dist, v }) = self.heap.pop() {
            let u = v as usize;
            if self.settled[u] {
                continue;
            }
            if let Stop::Radius(r) = stop {
                if dist > r {
                    break;
                }
            }
            self.settled[u] = true;
            if let Stop::Target(mask) = stop {
                if mask[u] {
                    return Some(u);
                }
            }
            for (w, cost) in metric.neighbors(u) {
                if self.settled[w] {
                    continue;
                }
                if let Some(a) = allowed {
                    if !a[w] {
                        continue;
                    }
                }
                let nd = dist + cost;
                if nd < self.dist[w] {
                    if self.dist[w] == UNREACHABLE {
                        self.touched.push(w as u32);
                    }
                    self.dist[w] = nd;
                    self.pred[w] = u as u32;
                    self.heap.push(Entry { dist: nd, v: w as u32 });
                }
            }
        }
        None
    }
}

fn check_sources(metric: &LfppMetric, sources: &[usize]) -> Result<()> {
    if sources.is_empty() {
        return Err(Error::InvalidArgument("source set is empty".into()));
    }
    if let Some(&bad) = sources.iter().find(|&&s| s >= metric.len()) {
        return Err(Error::InvalidArgument(format!("source vertex {bad} out of range")));
    }
    Ok(())
}

/// Single- or multi-source shortest-path distances with predecessors.
#[derive(Debug, Clone)]
pub struct DistanceMap<'a> {
    metric: &'a LfppMetric,
    sources: Vec<usize>,
    dist: Vec<f64>,
    pred: Vec<u32>,
}

/// Exact Dijkstra distances from `sources` over the whole grid.
pub fn distance_map<'a>(metric: &'a LfppMetric, sources: &[usize]) -> Result<DistanceMap<'a>> {
    check_sources(metric, sources)?;
    let mut ws = Workspace::new(metric.len());
    ws.search(metric, sources, None, Stop::Exhaust);
    let Workspace { mut dist, mut pred, settled, .. } = ws;
    for v in 0..dist.len() {
        if !settled[v] {
            dist[v] = UNREACHABLE;
            pred[v] = NO_PRED;
        }
    }
    let mut sources = sources.to_vec();
    sources.sort_unstable();
    sources.dedup();
    Ok(DistanceMap { metric, sources, dist, pred })
}

impl<'a> DistanceMap<'a> {
    pub fn metric(&self) -> &'a LfppMetric {
        self.metric
    }

    pub fn sources(&self) -> &[usize] {
        &self.sources
    }

    /// Raw distances; unreached vertices hold [`UNREACHABLE`].
    pub fn distances(&self) -> &[f64] {
        &self.dist
    }

    pub fn dist(&self, v: usize) -> Option<f64> {
        let d = self.dist[v];
        (d != UNREACHABLE).then_some(d)
    }

    pub fn is_reached(&self, v: usize) -> bool {
        self.dist[v] != UNREACHABLE
    }

    pub fn pred(&self, v: usize) -> Option<usize> {
        let p = self.pred[v];
        (p != NO_PRED).then_some(p as usize)
    }

    /// Largest finite distance.
    pub fn max_dist(&self) -> f64 {
        self.dist.iter().copied().filter(|&d| d != UNREACHABLE).fold(0.0, f64::max)
    }

    pub fn geodesic(&self, target: usize) -> Result<GeodesicPath> {
        geodesic(self, target)
    }

    pub fn metric_ball(&self, s: f64) -> Vec<usize> {
        metric_ball(self, s)
    }
}

/// A shortest path traced through the predecessor structure.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicPath {
    pub vertices: Vec<usize>,
    pub length: f64,
}

/// Back-traces predecessors from `target` to a source.
pub fn geodesic(dmap: &DistanceMap<'_>, target: usize) -> Result<GeodesicPath> {
    if target >= dmap.dist.len() {
        return Err(Error::InvalidArgument(format!("target vertex {target} out of range")));
    }
    if !dmap.is_reached(target) {
        return Err(Error::Unreachable(target));
    }
    let mut vertices = vec![target];
    let mut v = target;
    while let Some(p) = dmap.pred(v) {
        vertices.push(p);
        v = p;
    }
    vertices.reverse();
    let length = vertices
        .windows(2)
        .map(|e| dmap.metric.edge_cost(e[0], e[1]).expect("predecessor is adjacent"))
        .fold(0.0, |acc, c| acc + c);
    Ok(GeodesicPath { vertices, length })
}

/// `{v : dist(v) ≤ s}`, in increasing vertex order.
pub fn metric_ball(dmap: &DistanceMap<'_>, s: f64) -> Vec<usize> {
    (0..dmap.dist.len())
        .filter(|&v| dmap.dist[v] != UNREACHABLE && dmap.dist[v] <= s)
        .collect()
}

/// Distance from `z` to `w` using only paths inside `mask`; [`UNREACHABLE`]
/// when the mask disconnects them.
pub fn internal_distance(metric: &LfppMetric, mask: &[bool], z: usize, w: usize) -> Result<f64> {
    if mask.len() != metric.len() {
        return Err(Error::InvalidArgument("mask size does not match the grid".into()));
    }
    if z >= mask.len() || w >= mask.len() || !mask[z] || !mask[w] {
        return Err(Error::InvalidArgument("endpoints must lie inside the mask".into()));
    }
    let mut target = vec![false; metric.len()];
    target[w] = true;
    let mut ws = Workspace::new(metric.len());
    match ws.search(metric, &[z], Some(mask), Stop::Target(&target)) {
        Some(_) => Ok(ws.dist[w]),
        None => Ok(UNREACHABLE),
    }
}

/// Left-right crossing distance: free entry along the left column, exit at
/// the right column.
pub fn crossing_distance(metric: &LfppMetric) -> f64 {
    let n = metric.n();
    let sources: Vec<usize> = (0..n).map(|r| r * n).collect();
    let mut target = vec![false; metric.len()];
    for r in 0..n {
        target[r * n + n - 1] = true;
    }
    let mut ws = Workspace::new(metric.len());
    let hit = ws.search(metric, &sources, None, Stop::Target(&target));
    hit.map(|t| ws.dist[t]).unwrap_or(UNREACHABLE)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{mollify, FieldGrid};
    use crate::lfpp::{build_metric, Connectivity};

    fn flat_metric(n: usize, h: f64, conn: Connectivity) -> LfppMetric {
        let f = mollify(&FieldGrid::constant(n, h, 0.0).unwrap(), h).unwrap();
        build_metric(&f, 0.5, conn).unwrap()
    }

    #[test]
    fn manhattan_on_flat_axis4() {
        let m = flat_metric(12, 0.5, Connectivity::Axis4);
        let d = distance_map(&m, &[0]).unwrap();
        for r in 0..12 {
            for c in 0..12 {
                let expect = (r + c) as f64 * 0.5;
                assert!((d.dist(r * 12 + c).unwrap() - expect).abs() <= 1e-12 * expect.max(1.0));
            }
        }
        assert_eq!(d.dist(0), Some(0.0));
    }

    #[test]
    fn source_and_errors() {
        let m = flat_metric(4, 1.0, Connectivity::King8);
        assert!(matches!(distance_map(&m, &[]), Err(Error::InvalidArgument(_))));
        assert!(matches!(distance_map(&m, &[16]), Err(Error::InvalidArgument(_))));
        let d = distance_map(&m, &[5]).unwrap();
        let g = d.geodesic(5).unwrap();
        assert_eq!(g.vertices, vec![5]);
        assert_eq!(g.length, 0.0);
    }

    #[test]
    fn ball_counts_l1() {
        let n = 21;
        let m = flat_metric(n, 1.0, Connectivity::Axis4);
        let center = 10 * n + 10;
        let d = distance_map(&m, &[center]).unwrap();
        assert_eq!(metric_ball(&d, 0.0), vec![center]);
        for k in 1..=8usize {
            let ball = metric_ball(&d, k as f64);
            assert_eq!(ball.len(), 2 * k * k + 2 * k + 1);
        }
        assert_eq!(metric_ball(&d, d.max_dist()).len(), n * n);
    }

    #[test]
    fn crossing_flat() {
        let m = flat_metric(10, 0.1, Connectivity::Axis4);
        assert!((crossing_distance(&m) - 0.9).abs() < 1e-12);
        let m = flat_metric(1, 0.1, Connectivity::Axis4);
        assert_eq!(crossing_distance(&m), 0.0);
    }

    #[test]
    fn internal_distance_corridor() {
        let n = 9;
        let m = flat_metric(n, 1.0, Connectivity::Axis4);
        let full = vec![true; n * n];
        let z = 0;
        let w = 8 * n + 8;
        assert_eq!(internal_distance(&m, &full, z, w).unwrap(), distance_map(&m, &[z]).unwrap().dist(w).unwrap());
        // cut the grid along column 4
        let mut cut = full.clone();
        for r in 0..n {
            cut[r * n + 4] = false;
        }
        assert_eq!(internal_distance(&m, &cut, z, w).unwrap(), UNREACHABLE);
        assert!(internal_distance(&m, &cut, 4, w).is_err());
    }
}
