//! Finite-scale probes of qualitative metric phenomena: geodesic
//! confluence, annulus events, thick points and metric-ball rasters.

mod annulus_event;
mod confluence;
mod raster;
mod thick;

pub use annulus_event::{annulus_event, AnnulusEventReport};
pub use confluence::{confluence_stat, confluence_with_targets, ConfluenceReport, TargetPrefix};
pub use raster::{ball_raster, Raster};
pub use thick::{thick_point_map, ThickPointMap};
