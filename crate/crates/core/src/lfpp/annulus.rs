use super::dijkstra::{Stop, Workspace};
use super::LfppMetric;
use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Closed annulus `{r_in ≤ |v − center| ≤ r_out}` around a lattice vertex.
/// Radii are physical lengths.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct AnnulusSpec {
    pub center_row: usize,
    pub center_col: usize,
    pub r_in: f64,
    pub r_out: f64,
}

impl AnnulusSpec {
    pub fn new(center_row: usize, center_col: usize, r_in: f64, r_out: f64) -> Result<Self> {
        if !(r_in > 0.0 && r_in < r_out && r_out.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "annulus radii must satisfy 0 < r_in < r_out, got {r_in}, {r_out}"
            )));
        }
        Ok(Self { center_row, center_col, r_in, r_out })
    }

    pub(crate) fn check_in_grid(&self, n: usize, spacing: f64) -> Result<()> {
        let reach = (self.r_out / spacing - 1e-9).floor() as usize;
        if self.center_row < reach
            || self.center_col < reach
            || self.center_row + reach >= n
            || self.center_col + reach >= n
        {
            return Err(Error::OutOfBounds(format!(
                "annulus of outer radius {} around ({}, {}) leaves the {n}x{n} grid",
                self.r_out, self.center_row, self.center_col
            )));
        }
        Ok(())
    }

    /// Distance of vertex `v` from the center, in spacings.
    fn radius_of(&self, v: usize, n: usize) -> f64 {
        let dr = (v / n) as f64 - self.center_row as f64;
        let dc = (v % n) as f64 - self.center_col as f64;
        dr.hypot(dc)
    }
}

const RADIUS_TOL: f64 = 1e-9;

/// Membership mask of the closed annulus.
pub fn annulus_vertices(spec: &AnnulusSpec, n: usize, spacing: f64) -> Vec<bool> {
    let (a, b) = (spec.r_in / spacing, spec.r_out / spacing);
    (0..n * n)
        .map(|v| {
            let r = spec.radius_of(v, n);
            r >= a - RADIUS_TOL && r <= b + RADIUS_TOL
        })
        .collect()
}

/// Distance between the inner and outer boundaries of the annulus, using
/// paths inside the closed annulus. The inner boundary layer is every vertex
/// with radius in `[r_in, r_in + spacing)`, the outer layer every vertex with
/// radius in `(r_out − spacing, r_out]`.
pub fn across_distance(metric: &LfppMetric, spec: &AnnulusSpec) -> Result<f64> {
    let (n, h) = (metric.n(), metric.spacing());
    spec.check_in_grid(n, h)?;
    let mask = annulus_vertices(spec, n, h);
    let (a, b) = (spec.r_in / h, spec.r_out / h);
    let mut sources = Vec::new();
    let mut targets = vec![false; n * n];
    let mut any_target = false;
    for v in (0..n * n).filter(|&v| mask[v]) {
        let r = spec.radius_of(v, n);
        let inner = r < a + 1.0 - RADIUS_TOL;
        let outer = r > b - 1.0 + RADIUS_TOL;
        if inner && outer {
            return Err(Error::DegenerateAnnulus(
                "inner and outer boundary layers overlap".into(),
            ));
        }
        if inner {
            sources.push(v);
        }
        if outer {
            targets[v] = true;
            any_target = true;
        }
    }
    if sources.is_empty() || !any_target {
        return Err(Error::DegenerateAnnulus("annulus contains no vertex layer".into()));
    }
    let mut ws = Workspace::new(n * n);
    match ws.search(metric, &sources, Some(&mask), Stop::Target(&targets)) {
        Some(t) => Ok(ws.dist[t]),
        None => Err(Error::DegenerateAnnulus("boundaries are not connected inside the annulus".into())),
    }
}

#[derive(Clone, Copy, PartialEq)]
struct Entry {
    dist: f64,
    node: u32,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.dist.total_cmp(&self.dist).then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Length of the shortest cycle inside the annulus that separates its inner
/// and outer boundaries.
///
/// A slit runs from the center along the half-line half a spacing above the
/// center row, to the right. Every separating cycle crosses it an odd number
/// of times. Working on the two-sheeted cover of the annulus graph, where
/// crossing the slit switches sheet, the shortest odd closed walk through a
/// slit endpoint `u` is the shortest path between the two copies of `u`.
/// Minimizing over the slit endpoints gives the shortest odd closed walk,
/// which always contains a separating simple cycle of no greater length.
pub fn around_distance(metric: &LfppMetric, spec: &AnnulusSpec) -> Result<f64> {
    let (n, h) = (metric.n(), metric.spacing());
    spec.check_in_grid(n, h)?;
    if spec.r_in < h * (1.0 - RADIUS_TOL) {
        return Err(Error::DegenerateAnnulus("inner radius must be at least one spacing".into()));
    }
    let mask = annulus_vertices(spec, n, h);
    let verts: Vec<usize> = (0..n * n).filter(|&v| mask[v]).collect();
    let mut local = vec![u32::MAX; n * n];
    for (i, &v) in verts.iter().enumerate() {
        local[v] = i as u32;
    }
    let (cr, cc) = (spec.center_row, spec.center_col);
    // edges between rows cr and cr+1 whose midpoint lies right of the center
    let crosses = |u: usize, w: usize| -> bool {
        let (ur, uc, wr, wc) = (u / n, u % n, w / n, w % n);
        let rows_ok = (ur == cr && wr == cr + 1) || (wr == cr && ur == cr + 1);
        rows_ok && uc + wc > 2 * cc
    };
    let slit_ends: Vec<usize> = verts
        .iter()
        .copied()
        .filter(|&v| v / n == cr && v % n > cc)
        .collect();

    let m = verts.len();
    let mut dist = vec![f64::INFINITY; 2 * m];
    let mut settled = vec![false; 2 * m];
    let mut heap = BinaryHeap::new();
    let mut best = f64::INFINITY;
    for &start in &slit_ends {
        dist.iter_mut().for_each(|d| *d = f64::INFINITY);
        settled.iter_mut().for_each(|s| *s = false);
        heap.clear();
        let s0 = local[start] as usize;
        let goal = s0 + m;
        dist[s0] = 0.0;
        heap.push(Entry { dist: 0.0, node: s0 as u32 });
        while let Some(Entry { dist: d, node }) = heap.pop() {
            let node = node as usize;
            if settled[node] {
                continue;
            }
            if d >= best {
                break;
            }
            settled[node] = true;
            if node == goal {
                best = d;
                break;
            }
            let (li, sheet) = (node % m, node / m);
            let u = verts[li];
            for (w, cost) in metric.neighbors(u) {
                if !mask[w] {
                    continue;
                }
                let lw = local[w] as usize;
                let next = if crosses(u, w) { lw + (1 - sheet) * m } else { lw + sheet * m };
                let nd = d + cost;
                if nd < dist[next] {
                    dist[next] = nd;
                    heap.push(Entry { dist: nd, node: next as u32 });
                }
            }
        }
    }
    if best.is_finite() {
        Ok(best)
    } else {
        Err(Error::DegenerateAnnulus("no separating cycle inside the annulus".into()))
    }
}
