//! Polygonal curves, links with endpoint constraints and half-space
//! obstacles, and the metric quantities the balance criterion needs:
//! length, discrete curvature force, segment distances, link thickness.

mod curve;
mod distance;
pub mod json;
mod link;

pub use curve::{curvature_force, length, total_curvature, PolyCurve};
pub use distance::segment_distance;
pub use link::{
    link_thickness, obstacle_clearance, CurveEnd, EndpointConstraint, ForceAtom,
    HalfSpaceObstacle, PolyLink,
};

pub type Vec3 = nalgebra::Vector3<f64>;
