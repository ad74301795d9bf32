//! Exports for distance maps and geodesics.
//!
//! The binary distance format mirrors the field format with magic `LQGD`;
//! the kind slot is unused (0) and unreached vertices hold
//! [`UNREACHABLE`](super::UNREACHABLE).

use super::{DistanceMap, GeodesicPath, UNREACHABLE};
use crate::error::{Error, Result};
use crate::field::io::{decode_grid, encode_grid, grid_csv};

pub const DISTANCE_MAGIC: &[u8; 4] = b"LQGD";

pub fn distance_map_to_bytes(dmap: &DistanceMap<'_>) -> Vec<u8> {
    let m = dmap.metric();
    encode_grid(DISTANCE_MAGIC, 0, m.n(), m.spacing(), dmap.distances())
}

/// Decoded distance grid: `(n, spacing, distances)`.
pub fn distances_from_bytes(bytes: &[u8]) -> Result<(usize, f64, Vec<f64>)> {
    let raw = decode_grid(DISTANCE_MAGIC, bytes)?;
    if raw.values.iter().any(|d| !d.is_finite() || *d < 0.0) {
        return Err(Error::Format("distances must be finite and nonnegative".into()));
    }
    Ok((raw.n, raw.spacing, raw.values))
}

/// Rows `x,y,dist,reached`; unreached rows carry the sentinel and `0`.
pub fn distance_map_to_csv(dmap: &DistanceMap<'_>) -> String {
    let m = dmap.metric();
    let d = dmap.distances();
    let mut csv = grid_csv(m.n(), m.spacing(), "dist,reached", |v| {
        format!("{:e},{}", d[v], u8::from(d[v] != UNREACHABLE))
    });
    csv.shrink_to_fit();
    csv
}

/// Rows `step,row,col` from source to target.
pub fn geodesic_to_csv(path: &GeodesicPath, n: usize) -> String {
    let mut s = String::from("step,row,col\n");
    for (i, v) in path.vertices.iter().enumerate() {
        s.push_str(&format!("{i},{},{}\n", v / n, v % n));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{mollify, sample_discrete_gff};
    use crate::lfpp::{build_metric, distance_map, Connectivity};

    #[test]
    fn binary_and_csv() {
        let f = mollify(&sample_discrete_gff(8, 0.1, 2).unwrap(), 0.1).unwrap();
        let m = build_metric(&f, 0.3, Connectivity::King8).unwrap();
        let d = distance_map(&m, &[9]).unwrap();
        let bytes = distance_map_to_bytes(&d);
        assert_eq!(&bytes[0..4], b"LQGD");
        let (n, h, vals) = distances_from_bytes(&bytes).unwrap();
        assert_eq!((n, h), (8, 0.1));
        assert_eq!(vals, d.distances());
        let csv = distance_map_to_csv(&d);
        assert_eq!(csv.lines().count(), 65);
        assert!(csv.starts_with("x,y,dist,reached\n"));
        let g = d.geodesic(63).unwrap();
        let gcsv = geodesic_to_csv(&g, 8);
        assert!(gcsv.starts_with("step,row,col\n0,1,1\n"));
        assert!(gcsv.trim_end().ends_with("7,7"));
    }
}
