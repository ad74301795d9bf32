use crate::error::{Error, Result};
use crate::field::{circle_average, FieldGrid};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThickPointMap {
    pub n: usize,
    pub q_threshold: f64,
    /// Strictly decreasing radii.
    pub radii: Vec<f64>,
    /// Row-major per-vertex flags.
    pub flags: Vec<bool>,
    /// Vertices whose circles all fit inside the grid.
    pub evaluated: usize,
    /// `#flags / n²`.
    pub flagged_fraction: f64,
}

impl ThickPointMap {
    pub fn flagged(&self) -> usize {
        self.flags.iter().filter(|&&f| f).count()
    }
}

/// Flags vertex `z` when `max_r h_r(z) / log(1/r) > q_threshold`, the
/// maximum running over `radii`. Only vertices at distance at least the
/// largest radius from the boundary are evaluated; the rest stay unflagged.
pub fn thick_point_map(field: &FieldGrid, q_threshold: f64, radii: &[f64]) -> Result<ThickPointMap> {
    if radii.is_empty() {
        return Err(Error::InvalidArgument("radius list is empty".into()));
    }
    if !q_threshold.is_finite() {
        return Err(Error::InvalidParameter("threshold must be finite".into()));
    }
    let h = field.spacing();
    for (i, &r) in radii.iter().enumerate() {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::InvalidArgument(format!("radii must lie in (0, 1), got {r}")));
        }
        if r < h * (1.0 - 1e-12) {
            return Err(Error::InvalidArgument(format!("radius {r} is below the spacing {h}")));
        }
        if i > 0 && !(r < radii[i - 1]) {
            return Err(Error::InvalidArgument("radii must be strictly decreasing".into()));
        }
    }
    let n = field.n();
    let margin = (radii[0] / h - 1e-9).ceil() as usize;
    if 2 * margin >= n {
        return Err(Error::OutOfBounds(format!(
            "circles of radius {} do not fit around any vertex of the grid",
            radii[0]
        )));
    }
    let logs: Vec<f64> = radii.iter().map(|r| (1.0 / r).ln()).collect();
    let rows: Vec<Vec<bool>> = (0..n)
        .into_par_iter()
        .map(|row| {
            let mut out = vec![false; n];
            if row < margin || row + margin >= n {
                return Ok(out);
            }
            for (col, flag) in out.iter_mut().enumerate().take(n - margin).skip(margin) {
                let z = field.position(row * n + col);
                let mut best = f64::NEG_INFINITY;
                for (r, l) in radii.iter().zip(&logs) {
                    best = best.max(circle_average(field, &z, *r)? / l);
                }
                *flag = best > q_threshold;
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let flags: Vec<bool> = rows.concat();
    let count = flags.iter().filter(|&&f| f).count();
    let side = n - 2 * margin;
    Ok(ThickPointMap {
        n,
        q_threshold,
        radii: radii.to_vec(),
        flags,
        evaluated: side * side,
        flagged_fraction: count as f64 / (n * n) as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{BumpSpec, Point};

    #[test]
    fn flat_field_has_no_flags() {
        let f = FieldGrid::constant(33, 1.0 / 32.0, 0.0).unwrap();
        let m = thick_point_map(&f, 1.0, &[0.2, 0.1]).unwrap();
        assert_eq!(m.flagged(), 0);
        assert_eq!(m.flagged_fraction, 0.0);
        assert_eq!(m.flags.len(), 33 * 33);
    }

    #[test]
    fn bump_center_is_flagged() {
        let f = FieldGrid::constant(65, 1.0 / 64.0, 0.0).unwrap();
        let rmin: f64 = 0.05;
        let bump = BumpSpec::new(Point::new(0.5, 0.5), 0.15, 0.3, 10.0 * rmin.ln().abs()).unwrap();
        let m = thick_point_map(&f.add_bump(&bump), 1.0, &[0.1, rmin]).unwrap();
        assert!(m.flags[32 * 65 + 32]);
        assert!(!m.flags[10 * 65 + 10]);
    }

    #[test]
    fn errors() {
        let f = FieldGrid::constant(17, 1.0 / 16.0, 0.0).unwrap();
        assert!(matches!(thick_point_map(&f, 1.0, &[1.5, 0.2]), Err(Error::InvalidArgument(_))));
        assert!(matches!(thick_point_map(&f, 1.0, &[0.55]), Err(Error::OutOfBounds(_))));
        assert!(thick_point_map(&f, 1.0, &[0.1, 0.2]).is_err());
        assert!(thick_point_map(&f, 1.0, &[]).is_err());
        let g = FieldGrid::constant(9, 1.0 / 8.0, 0.0).unwrap();
        assert!(matches!(thick_point_map(&g, 1.0, &[0.6]), Err(Error::OutOfBounds(_))));
    }
}
