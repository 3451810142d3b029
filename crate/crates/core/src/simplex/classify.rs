use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::numeric::{gram_diagnostics, SymmetricMatrix};
use crate::tolerance::TolerancePolicy;

/// The first classification condition a matrix fails.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum GramFailure {
    /// Not positive definite, yet the determinant is positive.
    DeterminantPositiveNotDefinite { det: f64 },
    /// The block obtained by deleting row and column `dropped` is not
    /// positive definite.
    PrincipalBlockNotPositiveDefinite { dropped: usize, min_eigenvalue: f64 },
    CofactorNotPositive { row: usize, col: usize, value: f64 },
}

impl fmt::Display for GramFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GramFailure::DeterminantPositiveNotDefinite { det } => {
                write!(f, "determinant {det:e} is positive but the matrix is not positive definite")
            }
            GramFailure::PrincipalBlockNotPositiveDefinite { dropped, min_eigenvalue } => write!(
                f,
                "principal block without index {dropped} is not positive definite (smallest eigenvalue {min_eigenvalue:e})"
            ),
            GramFailure::CofactorNotPositive { row, col, value } => {
                write!(f, "cofactor ({row}, {col}) = {value:e} is not positive")
            }
        }
    }
}

/// Which geometry, if any, has a simplex with this Gram matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", content = "reason", rename_all = "snake_case")]
pub enum GramClass {
    Spherical,
    Euclidean,
    Hyperbolic,
    NotAGram(GramFailure),
}

impl GramClass {
    pub fn name(&self) -> &'static str {
        match self {
            GramClass::Spherical => "spherical",
            GramClass::Euclidean => "euclidean",
            GramClass::Hyperbolic => "hyperbolic",
            GramClass::NotAGram(_) => "not_a_gram",
        }
    }

    pub fn geometry(&self) -> Option<crate::geometry::GeometryTag> {
        use crate::geometry::GeometryTag;
        match self {
            GramClass::Spherical => Some(GeometryTag::Spherical),
            GramClass::Euclidean => Some(GeometryTag::Euclidean),
            GramClass::Hyperbolic => Some(GeometryTag::Hyperbolic),
            GramClass::NotAGram(_) => None,
        }
    }
}

/// Classifies a unit-diagonal symmetric matrix of size at least 3.
///
/// * positive definite: spherical;
/// * otherwise the determinant must be non-positive, every principal block
///   of size `n` positive definite and every cofactor positive; then a
///   determinant within `eq_zero * scale` of zero is Euclidean and a
///   negative one hyperbolic.
///
/// Failures are reported in the order determinant sign, principal blocks,
/// cofactors.
pub fn classify_gram(a: &SymmetricMatrix, tol: &TolerancePolicy) -> Result<GramClass> {
    if a.size() < 3 {
        return Err(invalid(format!("classification needs a matrix of size at least 3, got {}", a.size())));
    }
    if !a.has_unit_diagonal(1e-12) {
        return Err(invalid("matrix diagonal must be 1"));
    }
    let d = gram_diagnostics(a, tol);
    if d.positive_definite {
        return Ok(GramClass::Spherical);
    }
    let threshold = tol.eq_zero * d.scale;
    if d.det > threshold {
        return Ok(GramClass::NotAGram(GramFailure::DeterminantPositiveNotDefinite { det: d.det }));
    }
    if let Some(k) = d.first_non_pd_block(threshold) {
        return Ok(GramClass::NotAGram(GramFailure::PrincipalBlockNotPositiveDefinite {
            dropped: k,
            min_eigenvalue: d.principal_block_mins[k],
        }));
    }
    if let Some((row, col)) = d.first_nonpositive_cofactor(tol.strict_margin) {
        return Ok(GramClass::NotAGram(GramFailure::CofactorNotPositive {
            row,
            col,
            value: d.cofactors[(row, col)],
        }));
    }
    if d.det.abs() <= threshold {
        Ok(GramClass::Euclidean)
    } else {
        Ok(GramClass::Hyperbolic)
    }
}
