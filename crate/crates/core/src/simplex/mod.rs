//! Simplexes, their facet normals and Gram matrices, and the dihedral-angle
//! order.

mod classify;
mod dual;
mod gram;
mod order;
mod realize;
#[allow(clippy::module_inception)]
mod simplex;

pub use classify::{classify_gram, GramClass, GramFailure};
pub use dual::spherical_dual;
pub use gram::{dihedral_angles, DihedralAngles, GramMatrix};
pub use order::{compare, Order, OrderRelation, PairMargin};
pub use realize::realize;
pub use simplex::{FacetNormals, Simplex, MAX_DIMENSION};
