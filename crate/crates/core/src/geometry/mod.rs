//! Points, distances and isometries in the three model spaces.
//!
//! * `S^n` is the unit sphere in `E^{n+1}`.
//! * `E^n` is plain coordinate space.
//! * `H^n` is the upper sheet of the hyperboloid `<x, x>_M = -1` in
//!   Minkowski space with form `diag(+1, ..., +1, -1)`; the time-like
//!   coordinate is the last one.

mod ball;
mod isometry;
mod point;
mod sphere;

pub use ball::{min_enclosing_spherical_ball, EnclosingBall, SphericalBall};
pub(crate) use ball::spherical_angle;
pub use isometry::{basepoint, translate_to_basepoint, Isometry};
pub use point::{
    ambient_inner, distance, hyperboloid_to_poincare, minkowski, poincare_to_hyperboloid,
    GeometryTag, ModelPoint, MODEL_RESIDUAL,
};
pub use sphere::{extension_growth_rate, spherical_ray_extend, spherical_third_side, TriangleSides};
