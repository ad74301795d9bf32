//! Liouville first passage percolation on the lattice.
//!
//! The ε-LFPP length of a path is `∫ e^{ξ h*_ε(P(t))} |P′(t)| dt`. On the
//! lattice a path is a sequence of neighboring vertices and an edge `(u, v)`
//! costs `|u − v|·(w(u) + w(v))/2` with `w = e^{ξ h*_ε}` (trapezoidal rule).

mod annulus;
mod dijkstra;
pub mod io;

pub use annulus::{across_distance, annulus_vertices, around_distance, AnnulusSpec};
pub(crate) use dijkstra::{Stop, Workspace};
pub use dijkstra::{
    crossing_distance, distance_map, geodesic, internal_distance, metric_ball, DistanceMap,
    GeodesicPath, UNREACHABLE,
};

use crate::error::{Error, Result};
use crate::field::MollifiedField;
use std::f64::consts::SQRT_2;

/// Lattice neighborhood used to discretize paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Connectivity {
    /// Nearest neighbors only.
    Axis4,
    /// Nearest and diagonal neighbors.
    #[default]
    King8,
}

impl Connectivity {
    /// `(d_row, d_col, length in spacings)`, in lexicographic order.
    pub fn offsets(&self) -> &'static [(i32, i32, f64)] {
        const AXIS: [(i32, i32, f64); 4] = [(-1, 0, 1.0), (0, -1, 1.0), (0, 1, 1.0), (1, 0, 1.0)];
        const KING: [(i32, i32, f64); 8] = [
            (-1, -1, SQRT_2),
            (-1, 0, 1.0),
            (-1, 1, SQRT_2),
            (0, -1, 1.0),
            (0, 1, 1.0),
            (1, -1, SQRT_2),
            (1, 0, 1.0),
            (1, 1, SQRT_2),
        ];
        match self {
            Connectivity::Axis4 => &AXIS,
            Connectivity::King8 => &KING,
        }
    }

    pub fn degree(&self) -> usize {
        self.offsets().len()
    }
}

impl std::str::FromStr for Connectivity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "axis4" | "4" => Ok(Connectivity::Axis4),
            "king8" | "8" => Ok(Connectivity::King8),
            other => Err(Error::InvalidArgument(format!("unknown connectivity '{other}'"))),
        }
    }
}

/// Weighted grid graph of a mollified field at parameter `ξ`.
#[derive(Debug, Clone)]
pub struct LfppMetric {
    field: MollifiedField,
    xi: f64,
    connectivity: Connectivity,
    weights: Vec<f64>,
}

/// Builds the ε-LFPP metric, caching the vertex weights `e^{ξ h*_ε(v)}`.
pub fn build_metric(field: &MollifiedField, xi: f64, connectivity: Connectivity) -> Result<LfppMetric> {
    if !(xi > 0.0 && xi.is_finite()) {
        return Err(Error::InvalidParameter(format!("xi must be positive, got {xi}")));
    }
    if field.values().iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidField("non-finite mollified value".into()));
    }
    let weights: Vec<f64> = field.values().iter().map(|h| (xi * h).exp()).collect();
    if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
        return Err(Error::InvalidField(format!(
            "vertex weight overflow at xi = {xi}; field values too large"
        )));
    }
    Ok(LfppMetric { field: field.clone(), xi, connectivity, weights })
}

impl LfppMetric {
    pub fn field(&self) -> &MollifiedField {
        &self.field
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn connectivity(&self) -> Connectivity {
        self.connectivity
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn n(&self) -> usize {
        self.field.n()
    }

    pub fn spacing(&self) -> f64 {
        self.field.spacing()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Cost of the edge from `u` along `(length in spacings)`.
    #[inline]
    pub(crate) fn cost(&self, u: usize, v: usize, len: f64) -> f64 {
        len * self.spacing() * 0.5 * (self.weights[u] + self.weights[v])
    }

    /// Cost of edge `(u, v)`, or `None` when the vertices are not adjacent.
    pub fn edge_cost(&self, u: usize, v: usize) -> Option<f64> {
        let n = self.n();
        let (ur, uc) = ((u / n) as i64, (u % n) as i64);
        let (vr, vc) = ((v / n) as i64, (v % n) as i64);
        let (dr, dc) = (vr - ur, vc - uc);
        self.connectivity
            .offsets()
            .iter()
            .find(|(r, c, _)| *r as i64 == dr && *c as i64 == dc)
            .map(|&(_, _, len)| self.cost(u, v, len))
    }

    /// Neighbors of `v` with their edge costs, in lexicographic vertex order.
    #[inline]
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let n = self.n() as i64;
        let (r, c) = ((v as i64) / n, (v as i64) % n);
        self.connectivity.offsets().iter().filter_map(move |&(dr, dc, len)| {
            let (nr, nc) = (r + dr as i64, c + dc as i64);
            if nr < 0 || nc < 0 || nr >= n || nc >= n {
                None
            } else {
                let w = (nr * n + nc) as usize;
                Some((w, self.cost(v, w, len)))
            }
        })
    }
}
