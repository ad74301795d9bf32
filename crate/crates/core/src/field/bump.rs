use super::Point;
use crate::error::{Error, Result};

fn transition(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        (-1.0 / x).exp()
    }
}

/// C^∞ step: 0 for `x ≤ 0`, 1 for `x ≥ 1`, strictly increasing in between.
pub fn smooth_step(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        let a = transition(x);
        a / (a + transition(1.0 - x))
    }
}

/// Radial bump equal to `height` on the inner ball and zero outside the outer ball.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BumpSpec {
    pub center: Point,
    pub inner_radius: f64,
    pub outer_radius: f64,
    pub height: f64,
}

impl BumpSpec {
    pub fn new(center: Point, inner_radius: f64, outer_radius: f64, height: f64) -> Result<Self> {
        if !(inner_radius > 0.0 && inner_radius < outer_radius && outer_radius.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "bump radii must satisfy 0 < inner < outer, got {inner_radius}, {outer_radius}"
            )));
        }
        if !height.is_finite() {
            return Err(Error::InvalidArgument("bump height must be finite".into()));
        }
        Ok(Self { center, inner_radius, outer_radius, height })
    }

    /// Profile in `[0, 1]` at distance `r` from the center.
    pub fn profile(&self, r: f64) -> f64 {
        if r <= self.inner_radius {
            1.0
        } else if r >= self.outer_radius {
            0.0
        } else {
            smooth_step((self.outer_radius - r) / (self.outer_radius - self.inner_radius))
        }
    }

    pub fn value_at(&self, p: &Point) -> f64 {
        let w = self.profile(self.center.dist(p));
        if w == 1.0 {
            self.height
        } else {
            self.height * w
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldGrid;

    #[test]
    fn smooth_step_is_monotone() {
        let mut prev = 0.0;
        for i in 0..=1000 {
            let v = smooth_step(i as f64 / 1000.0);
            assert!(v >= prev);
            prev = v;
        }
        assert_eq!(smooth_step(0.0), 0.0);
        assert_eq!(smooth_step(1.0), 1.0);
        assert!((smooth_step(0.5) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_radii() {
        assert!(BumpSpec::new(Point::new(0.0, 0.0), 2.0, 1.0, 1.0).is_err());
        assert!(BumpSpec::new(Point::new(0.0, 0.0), 0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn zero_height_is_identity() {
        let f = FieldGrid::from_fn(17, 0.1, |x, y| (3.0 * x).sin() + y * y).unwrap();
        let b = BumpSpec::new(Point::new(0.8, 0.8), 0.2, 0.5, 0.0).unwrap();
        let g = f.add_bump(&b);
        assert_eq!(f.values(), g.values());
    }

    #[test]
    fn center_raised_by_height_and_support_compact() {
        let f = FieldGrid::from_fn(33, 0.05, |x, y| x - 2.0 * y).unwrap();
        let c = Point::new(0.8, 0.8);
        let b = BumpSpec::new(c, 0.1, 0.3, -2.5).unwrap();
        let g = f.add_bump(&b);
        let v = f.index(16, 16);
        assert_eq!(g.values()[v], f.values()[v] + (-2.5));
        for idx in 0..f.values().len() {
            if f.position(idx).dist(&c) > 0.3 {
                assert_eq!(g.values()[idx].to_bits(), f.values()[idx].to_bits());
            }
        }
        assert_eq!(g.kind(), crate::field::FieldKind::Custom);
        // input untouched
        assert_eq!(f.kind(), crate::field::FieldKind::Custom);
    }
}
