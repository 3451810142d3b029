//! Dihedral angles of simplexes in spherical, Euclidean and hyperbolic
//! space: Gram-matrix classification and realization, the entrywise angle
//! order, and constructions that place a Euclidean simplex strictly between
//! a hyperbolic and a spherical one.

pub mod cli;
pub mod comparison;
pub mod error;
pub mod geometry;
pub mod numeric;
pub mod random;
pub mod simplex;
pub mod spec;
pub mod tolerance;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::{GeometryTag, ModelPoint};
pub use simplex::{
    classify_gram, compare, realize, spherical_dual, DihedralAngles, GramClass, GramFailure,
    GramMatrix, Order, OrderRelation, Simplex,
};
pub use tolerance::TolerancePolicy;

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/gram.md")]
    mod gram {}
    #[doc = include_str!("../../../book/src/models.md")]
    mod models {}
    #[doc = include_str!("../../../book/src/comparisons.md")]
    mod comparisons {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
}
