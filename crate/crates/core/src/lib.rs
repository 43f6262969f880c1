//! Spherical and planar interpolatory geometric subdivision of polygons,
//! with discrete geodesic curvature estimators and convergence diagnostics.

pub mod analysis;
pub mod cli;
pub mod curvature;
pub mod error;
pub mod fixtures;
pub mod io;
pub mod polygon;
pub mod schemes;
pub mod sphere;
pub mod tolerance;
pub mod triangle;

pub use error::{Error, Result};
