//! Brute-force shortest-path oracles for tiny grids.

use lqg_core::lfpp::{Connectivity, LfppMetric};
use std::f64::consts::{PI, SQRT_2};

/// Edge list recomputed from the vertex weights.
pub fn edges(m: &LfppMetric) -> Vec<Vec<(usize, f64)>> {
    let n = m.n() as i64;
    let h = m.spacing();
    let w = m.weights();
    let king = m.connectivity() == Connectivity::King8;
    (0..m.len())
        .map(|v| {
            let (r, c) = (v as i64 / n, v as i64 % n);
            let mut out = Vec::new();
            for dr in -1..=1i64 {
                for dc in -1..=1i64 {
                    let diag = dr != 0 && dc != 0;
                    if (dr == 0 && dc == 0) || (diag && !king) {
                        continue;
                    }
                    let (nr, nc) = (r + dr, c + dc);
                    if nr < 0 || nc < 0 || nr >= n || nc >= n {
                        continue;
                    }
                    let u = (nr * n + nc) as usize;
                    let len = if diag { SQRT_2 } else { 1.0 };
                    out.push((u, len * h * 0.5 * (w[v] + w[u])));
                }
            }
            out
        })
        .collect()
}

/// Minimal cost of every simple path from `src`, restricted to `allowed`.
/// Depth-first enumeration; a prefix is abandoned only when it is strictly
/// worse than a complete simple path already found to the same vertex.
pub fn enumerate_paths(adj: &[Vec<(usize, f64)>], src: usize, allowed: &[bool]) -> Vec<f64> {
    fn go(adj: &[Vec<(usize, f64)>], v: usize, len: f64, on: &mut [bool], best: &mut [f64], allowed: &[bool]) {
        for &(u, c) in &adj[v] {
            if on[u] || !allowed[u] {
                continue;
            }
            let l = len + c;
            if l > best[u] {
                continue;
            }
            best[u] = l;
            on[u] = true;
            go(adj, u, l, on, best, allowed);
            on[u] = false;
        }
    }
    let mut best = vec![f64::INFINITY; adj.len()];
    let mut on = vec![false; adj.len()];
    best[src] = 0.0;
    on[src] = true;
    go(adj, src, 0.0, &mut on, &mut best, allowed);
    best
}

/// Left-right crossing cost over all simple paths.
pub fn crossing(m: &LfppMetric) -> f64 {
    let n = m.n();
    let adj = edges(m);
    let all = vec![true; m.len()];
    (0..n)
        .map(|r| {
            let best = enumerate_paths(&adj, n * r, &all);
            (0..n).map(|t| best[n * t + n - 1]).fold(f64::INFINITY, f64::min)
        })
        .fold(f64::INFINITY, f64::min)
}

pub fn radius(v: usize, n: usize, cr: usize, cc: usize) -> f64 {
    ((v / n) as f64 - cr as f64).hypot((v % n) as f64 - cc as f64)
}

/// Across distance of the annulus `a ≤ |v − c| ≤ b` (radii in spacings)
/// from all-pairs Floyd–Warshall distances inside it.
pub fn across(m: &LfppMetric, cr: usize, cc: usize, a: f64, b: f64) -> f64 {
    let n = m.n();
    let tol = 1e-9;
    let inside: Vec<usize> = (0..n * n)
        .filter(|&v| {
            let r = radius(v, n, cr, cc);
            r >= a - tol && r <= b + tol
        })
        .collect();
    let k = inside.len();
    let pos = |v: usize| inside.iter().position(|&x| x == v);
    let mut d = vec![vec![f64::INFINITY; k]; k];
    let adj = edges(m);
    for (i, &v) in inside.iter().enumerate() {
        d[i][i] = 0.0;
        for &(u, c) in &adj[v] {
            if let Some(j) = pos(u) {
                d[i][j] = d[i][j].min(c);
            }
        }
    }
    for l in 0..k {
        for i in 0..k {
            for j in 0..k {
                let via = d[i][l] + d[l][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    let mut best = f64::INFINITY;
    for (i, &v) in inside.iter().enumerate() {
        if radius(v, n, cr, cc) >= a + 1.0 - tol {
            continue;
        }
        for (j, &u) in inside.iter().enumerate() {
            if radius(u, n, cr, cc) > b - 1.0 + tol {
                best = best.min(d[i][j]);
            }
        }
    }
    best
}

/// Shortest cycle inside `allowed` whose winding number around `(cr, cc)`
/// is nonzero, by enumeration of all simple cycles.
pub fn shortest_winding_cycle(m: &LfppMetric, allowed: &[bool], cr: usize, cc: usize) -> f64 {
    let n = m.n();
    let adj = edges(m);
    let angle = |v: usize| ((v / n) as f64 - cr as f64).atan2((v % n) as f64 - cc as f64);
    let turn = |a: usize, b: usize| {
        let mut d = angle(b) - angle(a);
        while d > PI {
            d -= 2.0 * PI;
        }
        while d <= -PI {
            d += 2.0 * PI;
        }
        d
    };
    struct Search<'a> {
        adj: &'a [Vec<(usize, f64)>],
        allowed: &'a [bool],
        start: usize,
        on: Vec<bool>,
        best: f64,
    }
    fn go(s: &mut Search, v: usize, len: f64, wind: f64, depth: usize, turn: &dyn Fn(usize, usize) -> f64) {
        for i in 0..s.adj[v].len() {
            let (u, c) = s.adj[v][i];
            let l = len + c;
            if l >= s.best {
                continue;
            }
            if u == s.start && depth >= 2 {
                if (wind + turn(v, u)).abs() > PI {
                    s.best = l;
                }
                continue;
            }
            if u <= s.start || s.on[u] || !s.allowed[u] {
                continue;
            }
            s.on[u] = true;
            go(s, u, l, wind + turn(v, u), depth + 1, turn);
            s.on[u] = false;
        }
    }
    let mut best = f64::INFINITY;
    for start in 0..m.len() {
        if !allowed[start] {
            continue;
        }
        let mut s = Search { adj: &adj, allowed, start, on: vec![false; m.len()], best };
        s.on[start] = true;
        go(&mut s, start, 0.0, 0.0, 0, &turn);
        best = s.best;
    }
    best
}
