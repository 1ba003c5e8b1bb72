mod error;
mod linalg;
pub mod conformal;
pub mod field;
pub mod geometry;
pub mod transport;
pub mod diagnostics;
pub mod cli;

pub use error::{Error, Result};

/// Plane point or vector in dimensionless units.
pub type Vec2 = nalgebra::Vector2<f64>;
