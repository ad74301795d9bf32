//! Liouville first passage percolation and Liouville quantum gravity on
//! large grids.
//!
//! * [`field`]: discrete GFF and white-noise samplers, heat-kernel
//!   mollification, circle averages, bumps.
//! * [`lfpp`]: the ε-LFPP metric, distance maps, geodesics, internal and
//!   annulus distances.
//! * [`gmc`]: the discretized LQG area measure.
//! * [`exponents`]: crossing normalization, exponent fits, parameter
//!   relations, KPZ, box-counting dimension.
//! * [`experiments`]: confluence, annulus events, thick points, rasters.
//! * [`cli`]: the `lqg` command-line front end.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod experiments;
pub mod exponents;
pub mod field;
pub mod gmc;
pub mod lfpp;
pub mod seed;
pub mod stats;

pub use error::{Error, Result};
