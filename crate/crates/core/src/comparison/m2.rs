use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::error::{invalid, Error, Result};
use crate::geometry::{GeometryTag, ModelPoint};
use crate::numeric::{hemisphere_witness, solve_square, HemisphereMode};
use crate::simplex::{compare, DihedralAngles, OrderRelation, Simplex};
use crate::tolerance::TolerancePolicy;

use super::incenter::{hyperbolic_incenter, InsphereData};

/// The Euclidean simplex `{x : <x, u_i> <= 1}` circumscribed about the unit
/// sphere and touching it at the unit vectors `u_i`.
///
/// Bounded exactly when the `u_i` lie in no closed hemisphere; its dihedral
/// angle between facets `i` and `j` is `pi - angle(u_i, u_j)`.
pub fn tangent_simplex(dirs: &[DVector<f64>], tol: &TolerancePolicy) -> Result<Simplex> {
    let k = dirs.len();
    let n = k.checked_sub(1).ok_or_else(|| invalid("no tangency directions"))?;
    if dirs.iter().any(|u| u.len() != n) {
        return Err(invalid(format!("expected {k} unit vectors in dimension {n}")));
    }
    if hemisphere_witness(dirs, HemisphereMode::Closed, tol)?.is_some() {
        return Err(Error::PreconditionViolated(
            "tangency directions lie in a closed hemisphere; the tangent planes do not bound a simplex".into(),
        ));
    }
    let vertices = (0..k)
        .map(|j| {
            let rows: Vec<usize> = (0..k).filter(|&i| i != j).collect();
            let system = DMatrix::from_fn(n, n, |r, c| dirs[rows[r]][c]);
            let z = solve_square(&system, &DVector::from_element(n, 1.0), tol)?;
            ModelPoint::new(GeometryTag::Euclidean, z)
        })
        .collect::<Result<Vec<_>>>()?;
    Simplex::with_tolerance(GeometryTag::Euclidean, vertices, tol)
}

/// Angles `pi - angle(u_i, u_j)` of the tangent simplex, straight from the
/// directions.
pub(crate) fn tangent_angles(dirs: &[DVector<f64>]) -> Result<DihedralAngles> {
    let k = dirs.len();
    let rows: Vec<Vec<f64>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    if i == j {
                        PI
                    } else {
                        PI - crate::geometry::spherical_angle(&dirs[i], &dirs[j])
                    }
                })
                .collect()
        })
        .collect();
    DihedralAngles::from_rows(&rows)
}

#[derive(Debug, Clone)]
pub struct M2Result {
    pub euclidean: Simplex,
    /// Angles of the Euclidean simplex.
    pub xi: DihedralAngles,
    /// Angles of the hyperbolic input.
    pub eta: DihedralAngles,
    pub insphere: InsphereData,
    /// `eta` compared with `xi`.
    pub order: OrderRelation,
    /// Largest gap between `xi` and the angles measured on `euclidean`.
    pub angle_residual: f64,
}

/// A Euclidean simplex whose angles strictly exceed those of `h`: the
/// simplex tangent to the unit sphere at the directions from the incenter
/// of `h` to its points of tangency.
pub fn m2_euclidean_from_hyperbolic(h: &Simplex, tol: &TolerancePolicy) -> Result<M2Result> {
    let insphere = hyperbolic_incenter(h, tol)?;
    let euclidean = tangent_simplex(&insphere.tangency_dirs, tol)?;
    let xi = tangent_angles(&insphere.tangency_dirs)?;
    let eta = h.dihedral_angles()?;
    let angle_residual = euclidean.dihedral_angles()?.max_abs_diff(&xi);
    let order = compare(&eta, &xi, tol)?;
    Ok(M2Result {
        euclidean,
        xi,
        eta,
        insphere,
        order,
        angle_residual,
    })
}
