use super::spectral::{gaussian_filter_rows, transpose};
use super::{FieldGrid, FieldKind, MollifiedField};
use crate::error::{Error, Result};

/// Heat-kernel mollification `h*_ε = h * p_{ε²/2}`: a Gaussian blur with
/// per-coordinate standard deviation `ε/√2`.
///
/// The boundary is handled by reflect padding (half-sample symmetric
/// extension), implemented as an exact Fourier multiplier on the extended
/// grid. Constant fields are returned unchanged.
pub fn mollify(field: &FieldGrid, epsilon: f64) -> Result<MollifiedField> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidScale(format!("epsilon must be positive, got {epsilon}")));
    }
    if field.kind() == FieldKind::Constant {
        return Ok(MollifiedField::from_parts(field.clone(), epsilon, field.values().to_vec()));
    }
    let n = field.n();
    let sigma = epsilon / std::f64::consts::SQRT_2 / field.spacing();
    let mut rows = field.values().to_vec();
    gaussian_filter_rows(&mut rows, n, sigma);
    let mut cols = transpose(&rows, n, n);
    gaussian_filter_rows(&mut cols, n, sigma);
    let values = transpose(&cols, n, n);
    Ok(MollifiedField::from_parts(field.clone(), epsilon, values))
}
