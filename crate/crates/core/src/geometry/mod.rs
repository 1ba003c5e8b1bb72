//! Obstacles, their smooth approximants, and set-level measurements.

mod approx;
mod capacity;
mod cutoff;
mod curve;
mod hausdorff;
mod obstacle;
pub mod spectral;

pub use approx::{
    approximation_sequence, obstacle_separation, offset_length, DomainApproximation, DEFAULT_CURVE_SAMPLES,
};
pub use curve::{closest_point_on_segment, cross, point_segment_distance, segments_intersect, JordanCurve};
pub use hausdorff::hausdorff_distance;
pub use obstacle::{koch_polygon, ObstacleKind, SingularObstacle};
pub use capacity::capacity_estimate;
pub use cutoff::{smooth_step, Cutoff};
