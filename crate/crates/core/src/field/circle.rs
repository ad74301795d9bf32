use super::{FieldGrid, Point};
use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Equispaced sample points used by [`circle_average`].
pub(crate) fn circle_points(z: &Point, r: f64, spacing: f64) -> Vec<Point> {
    let count = ((2.0 * PI * r / spacing).ceil() as usize).max(1);
    (0..count)
        .map(|k| {
            let theta = 2.0 * PI * k as f64 / count as f64;
            Point::new(z.x + r * theta.cos(), z.y + r * theta.sin())
        })
        .collect()
}

/// Average of the bilinearly interpolated field over `⌈2πr/spacing⌉`
/// equispaced points of the circle `∂B_r(z)`.
pub fn circle_average(field: &FieldGrid, z: &Point, r: f64) -> Result<f64> {
    let h = field.spacing();
    if !(r >= h * (1.0 - 1e-12)) || !r.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "circle radius {r} must be at least one spacing ({h})"
        )));
    }
    let extent = field.extent();
    let tol = 1e-9 * h;
    if z.x - r < -tol || z.y - r < -tol || z.x + r > extent + tol || z.y + r > extent + tol {
        return Err(Error::OutOfBounds(format!(
            "circle of radius {r} around ({}, {}) leaves the grid",
            z.x, z.y
        )));
    }
    let pts = circle_points(z, r, h);
    let mut acc = 0.0;
    for p in &pts {
        acc += field
            .interpolate(p)
            .ok_or_else(|| Error::OutOfBounds("circle sample outside grid".into()))?;
    }
    Ok(acc / pts.len() as f64)
}
