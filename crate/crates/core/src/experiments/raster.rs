use crate::error::{Error, Result};
use crate::lfpp::DistanceMap;

/// 8-bit grayscale image; pixel `(i, j)` is grid vertex `(row i, col j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Raster {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
}

impl Raster {
    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.pixels[row * self.width + col]
    }

    /// Binary PGM (`P5`, maxval 255).
    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.pixels);
        out
    }
}

/// Renders the metric ball of radius `radius`: a vertex at distance
/// `d ≤ radius` gets gray `⌊254·d/radius⌋`, everything else is white (255).
/// Geodesics from the source to each of `geodesic_targets` are drawn in
/// black (0).
pub fn ball_raster(dmap: &DistanceMap<'_>, radius: f64, geodesic_targets: &[usize]) -> Result<Raster> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::InvalidArgument(format!("ball radius must be positive, got {radius}")));
    }
    let n = dmap.metric().n();
    let mut pixels: Vec<u8> = dmap
        .distances()
        .iter()
        .map(|&d| if d <= radius { (254.0 * d / radius).floor() as u8 } else { 255 })
        .collect();
    for &t in geodesic_targets {
        for v in dmap.geodesic(t)?.vertices {
            pixels[v] = 0;
        }
    }
    Ok(Raster { width: n, height: n, pixels })
}
