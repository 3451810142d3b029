//! Constructions comparing the dihedral angles of simplexes across the
//! three geometries.
//!
//! * [`m3_bracket`] squeezes a Euclidean simplex between a hyperbolic and a
//!   spherical one by moving its Gram matrix along straight paths.
//! * [`m4_rigidity_witness`] checks that two Euclidean simplexes cannot be
//!   strictly ordered.
//! * [`m2_euclidean_from_hyperbolic`] builds a Euclidean simplex with
//!   strictly larger angles from the insphere of a hyperbolic one.
//! * [`m1_euclidean_from_spherical`] builds a Euclidean simplex with
//!   strictly smaller angles from the dual of a spherical one.

mod incenter;
mod m1;
mod m2;
mod m3;
mod m4;

pub use incenter::{hyperbolic_incenter, InsphereData};
pub use m1::{
    barycentric_coordinates, check_chain, extend_dual_to_equator, m1_euclidean_from_spherical,
    perturb_face, perturb_off_closed_hemisphere, ChainCheck, DualChain, M1Result, BARYCENTRIC_TOL,
    MAX_HALVINGS,
};
pub use m2::{m2_euclidean_from_hyperbolic, tangent_simplex, M2Result};
pub use m3::{
    determinant_derivative, determinant_derivative_fd, m3_bracket, path_matrix, path_target, BracketResult, PathTarget,
};
pub use m4::{m4_rigidity_witness, RigidityReport, RigidityVerdict};
