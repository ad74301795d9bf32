use crate::error::Result;
use crate::lfpp::{across_distance, around_distance, AnnulusSpec, LfppMetric};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnnulusEventReport {
    pub center_row: usize,
    pub center_col: usize,
    pub r: f64,
    /// Around-distance of the annulus between radii `2r` and `3r`.
    pub around: f64,
    /// Across-distance of the annulus between radii `r` and `2r`.
    pub across: f64,
    pub occurred: bool,
}

/// Whether a loop in the outer annulus `B_{3r} \ B_{2r}` is shorter than
/// any crossing of the inner annulus `B_{2r} \ B_r`.
pub fn annulus_event(metric: &LfppMetric, center_row: usize, center_col: usize, r: f64) -> Result<AnnulusEventReport> {
    let outer = AnnulusSpec::new(center_row, center_col, 2.0 * r, 3.0 * r)?;
    let inner = AnnulusSpec::new(center_row, center_col, r, 2.0 * r)?;
    let around = around_distance(metric, &outer)?;
    let across = across_distance(metric, &inner)?;
    Ok(AnnulusEventReport { center_row, center_col, r, around, across, occurred: around < across })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::field::{mollify, FieldGrid};
    use crate::lfpp::{build_metric, Connectivity};

    #[test]
    fn flat_field_never_triggers() {
        let n = 65;
        let h = 1.0 / 64.0;
        let m = build_metric(&mollify(&FieldGrid::constant(n, h, 0.0).unwrap(), h).unwrap(), 0.4, Connectivity::King8)
            .unwrap();
        let rep = annulus_event(&m, 32, 32, 6.0 * h).unwrap();
        assert!(!rep.occurred);
        assert!(rep.around > 4.0 * rep.across);
        assert!(matches!(annulus_event(&m, 5, 32, 6.0 * h), Err(Error::OutOfBounds(_))));
    }
}
