use nalgebra::DMatrix;

use crate::error::{invalid, Error, Result};
use crate::geometry::GeometryTag;
use crate::numeric::cofactor_matrix;
use crate::simplex::{compare, realize, DihedralAngles, GramClass, GramMatrix, OrderRelation, Simplex};
use crate::tolerance::TolerancePolicy;

/// Most halvings of `t` before giving up.
const MAX_STEPS: usize = 60;

/// Which endpoint the Gram path heads for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathTarget {
    /// Off-diagonal entries `-1`: every angle shrinks.
    Hyperbolic,
    /// Off-diagonal entries `+1`: every angle grows.
    Spherical,
}

impl PathTarget {
    fn class(self) -> GramClass {
        match self {
            PathTarget::Hyperbolic => GramClass::Hyperbolic,
            PathTarget::Spherical => GramClass::Spherical,
        }
    }
}

/// Unit-diagonal endpoint with constant off-diagonal entries `-1` or `+1`.
pub fn path_target(size: usize, target: PathTarget) -> DMatrix<f64> {
    let off = match target {
        PathTarget::Hyperbolic => -1.0,
        PathTarget::Spherical => 1.0,
    };
    DMatrix::from_fn(size, size, |i, j| if i == j { 1.0 } else { off })
}

/// `(1 - t) g + t p`.
pub fn path_matrix(g: &DMatrix<f64>, p: &DMatrix<f64>, t: f64) -> DMatrix<f64> {
    g * (1.0 - t) + p * t
}

/// Derivative of `det(a + s d)` at `s = 0`, i.e. `sum_ij c_ij(a) d_ij`.
pub fn determinant_derivative(a: &DMatrix<f64>, d: &DMatrix<f64>) -> f64 {
    cofactor_matrix(a).component_mul(d).sum()
}

/// A hyperbolic and a spherical simplex whose angles bracket those of a
/// Euclidean simplex.
#[derive(Debug, Clone)]
pub struct BracketResult {
    pub t_hyp: f64,
    pub t_sph: f64,
    pub gram_hyp: GramMatrix,
    pub gram_sph: GramMatrix,
    pub simplex_hyp: Simplex,
    pub simplex_sph: Simplex,
    pub angles_euc: DihedralAngles,
    pub angles_hyp: DihedralAngles,
    pub angles_sph: DihedralAngles,
    /// Hyperbolic angles compared with the Euclidean ones.
    pub order_hyp: OrderRelation,
    /// Spherical angles compared with the Euclidean ones.
    pub order_sph: OrderRelation,
}

impl BracketResult {
    /// Largest change of any angle on either side.
    pub fn max_deviation(&self) -> f64 {
        self.angles_euc
            .max_abs_diff(&self.angles_hyp)
            .max(self.angles_euc.max_abs_diff(&self.angles_sph))
    }

    /// Both orders are strict on every pair by more than `eps`.
    pub fn is_strict(&self, eps: f64) -> bool {
        self.order_hyp.all_pairs_strict(eps) && self.order_sph.all_pairs_strict(eps)
    }
}

fn walk(
    g: &GramMatrix,
    target: PathTarget,
    t_request: f64,
    tol: &TolerancePolicy,
) -> Result<(f64, GramMatrix, Simplex)> {
    let p = path_target(g.size(), target);
    let mut t = t_request;
    for _ in 0..MAX_STEPS {
        let a = path_matrix(g.matrix().entries(), &p, t);
        if let Ok(candidate) = GramMatrix::from_matrix(a) {
            if candidate.classify(tol) == target.class() {
                if let Ok(simplex) = realize(candidate.matrix(), tol) {
                    return Ok((t, candidate, simplex));
                }
            }
        }
        t *= 0.5;
    }
    Err(Error::NumericalFailure(format!(
        "no valid {target:?} Gram matrix found after {MAX_STEPS} halvings from t = {t_request}"
    )))
}

/// Moves the Gram matrix of `e` toward the all-`-1` and all-`+1` endpoints,
/// halving `t` from `t_request` until the result classifies as hyperbolic
/// (respectively spherical), and realizes both.
pub fn m3_bracket(e: &Simplex, t_request: f64, tol: &TolerancePolicy) -> Result<BracketResult> {
    if e.tag() != GeometryTag::Euclidean {
        return Err(invalid(format!("bracketing needs a Euclidean simplex, got {}", e.tag())));
    }
    if !(t_request > 0.0 && t_request <= 1.0) {
        return Err(invalid(format!("t = {t_request} must lie in (0, 1]")));
    }
    let g = e.gram()?;
    let (t_hyp, gram_hyp, simplex_hyp) = walk(&g, PathTarget::Hyperbolic, t_request, tol)?;
    let (t_sph, gram_sph, simplex_sph) = walk(&g, PathTarget::Spherical, t_request, tol)?;
    let angles_euc = g.dihedral_angles();
    let angles_hyp = gram_hyp.dihedral_angles();
    let angles_sph = gram_sph.dihedral_angles();
    let order_hyp = compare(&angles_hyp, &angles_euc, tol)?;
    let order_sph = compare(&angles_sph, &angles_euc, tol)?;
    Ok(BracketResult {
        t_hyp,
        t_sph,
        gram_hyp,
        gram_sph,
        simplex_hyp,
        simplex_sph,
        angles_euc,
        angles_hyp,
        angles_sph,
        order_hyp,
        order_sph,
    })
}

/// Central difference of `det(g + s (p - g))` at `s = 0` with step `h`.
pub fn determinant_derivative_fd(g: &DMatrix<f64>, p: &DMatrix<f64>, h: f64) -> f64 {
    let d = p - g;
    let plus = (g + &d * h).determinant();
    let minus = (g - &d * h).determinant();
    (plus - minus) / (2.0 * h)
}
