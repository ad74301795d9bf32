use crate::error::{Error, Result};
use serde::Serialize;

/// Value of the KPZ map `Δ₀ ↦ Δ_h`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum QuantumDimension {
    Finite(f64),
    /// `Δ₀ = Q²/2` exactly: the formula gives `Q/ξ`, but this case is not
    /// covered by the known theorems.
    Boundary(f64),
    /// `Δ₀ > Q²/2`.
    Infinite,
}

impl QuantumDimension {
    pub fn value(&self) -> Option<f64> {
        match *self {
            QuantumDimension::Finite(v) | QuantumDimension::Boundary(v) => Some(v),
            QuantumDimension::Infinite => None,
        }
    }
}

/// KPZ relation `Δ_h = ξ⁻¹(Q − √(Q² − 2Δ₀))` for a set of Euclidean
/// dimension `Δ₀ ∈ [0, 2]` independent of the field.
pub fn kpz(delta0: f64, xi: f64, q: f64) -> Result<QuantumDimension> {
    if !(0.0..=2.0).contains(&delta0) {
        return Err(Error::InvalidParameter(format!("delta0 must lie in [0, 2], got {delta0}")));
    }
    if !(xi > 0.0 && xi.is_finite()) || !(q > 0.0 && q.is_finite()) {
        return Err(Error::InvalidParameter(format!("need xi > 0 and Q > 0, got {xi}, {q}")));
    }
    let disc = q * q - 2.0 * delta0;
    Ok(if disc > 0.0 {
        QuantumDimension::Finite((q - disc.sqrt()) / xi)
    } else if disc == 0.0 {
        QuantumDimension::Boundary(q / xi)
    } else {
        QuantumDimension::Infinite
    })
}
