//! Crossing normalization, distance exponent fits and closed-form
//! parameter relations.

mod a_eps;
mod dimension;
mod kpz;
mod params;

pub use a_eps::{estimate_a_eps, fit_q, ASample, CrossingEstimator, ExponentFit, QFit};
pub use dimension::{box_dimension, DimensionEstimate};
pub use kpz::{kpz, QuantumDimension};
pub use params::{
    central_charge, parameter_triple, parameter_triple_with, q_subcritical, xi_to_gamma,
    xi_to_gamma_with, DimensionTable, ParameterTriple, GAMMA_PURE_GRAVITY,
};
