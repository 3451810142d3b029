use nalgebra::{DMatrix, DVector};

use crate::error::{invalid, Error, Result};
use crate::geometry::{minkowski, translate_to_basepoint, GeometryTag, ModelPoint};
use crate::numeric::{kernel_vector, solve_square};
use crate::simplex::Simplex;
use crate::tolerance::TolerancePolicy;

/// The inscribed sphere of a hyperbolic simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct InsphereData {
    pub center: ModelPoint,
    pub inradius: f64,
    /// Unit directions, in the tangent space at the basepoint after moving
    /// the center there, from the center to the points of tangency.
    pub tangency_dirs: Vec<DVector<f64>>,
    /// Positive weights summing to 1 with `sum_i balance_i u_i = 0`.
    pub balance: Vec<f64>,
    /// `max_i |dist(center, facet_i) - inradius|`.
    pub facet_residual: f64,
    /// `|sum_i balance_i u_i|`.
    pub balance_residual: f64,
}

/// Incenter, inradius, tangency directions and balance weights of `h`.
///
/// With inward unit normals `n_i`, the signed distance from `x` to facet
/// `i` satisfies `sinh d_i = <x, n_i>_M`. Solving `<y, n_i>_M = 1` for all
/// `i` and rescaling `y` onto the hyperboloid gives the unique point at
/// equal distance `r` from every facet, with `sinh r = 1 / sqrt(-<y, y>_M)`.
pub fn hyperbolic_incenter(h: &Simplex, tol: &TolerancePolicy) -> Result<InsphereData> {
    if h.tag() != GeometryTag::Hyperbolic {
        return Err(invalid(format!("incenter needs a hyperbolic simplex, got {}", h.tag())));
    }
    let normals = h.facet_normals()?.normals;
    let k = normals.len();
    let n = k - 1;
    // Row i is n_i^T J.
    let system = DMatrix::from_fn(k, k, |i, c| if c == n { -normals[i][c] } else { normals[i][c] });
    let y = solve_square(&system, &DVector::from_element(k, 1.0), tol)?;
    let q = minkowski(&y, &y);
    if !(q < 0.0) || y[n] <= 0.0 {
        return Err(Error::DegenerateSimplex(
            "the point equidistant from all facets is not inside the simplex".into(),
        ));
    }
    let scale = (-q).sqrt();
    let center = ModelPoint::project(GeometryTag::Hyperbolic, &y / scale)?;
    let inradius = (1.0 / scale).asinh();
    let facet_residual = normals
        .iter()
        .map(|v| (minkowski(center.coords(), v).asinh() - inradius).abs())
        .fold(0.0, f64::max);

    let to_base = translate_to_basepoint(&center)?;
    let tangency_dirs = normals
        .iter()
        .map(|v| {
            let moved = to_base.apply_vector(v);
            let spatial = -moved.rows(0, n).into_owned();
            let len = spatial.norm();
            if len <= 1e-15 {
                Err(Error::DegenerateSimplex("facet normal has no spatial part at the incenter".into()))
            } else {
                Ok(spatial / len)
            }
        })
        .collect::<Result<Vec<_>>>()?;

    let dirs = DMatrix::from_columns(&tangency_dirs);
    let kernel = kernel_vector(&dirs, tol.eq_zero).ok_or_else(|| {
        Error::DegenerateSimplex("tangency directions do not have a one-dimensional relation".into())
    })?;
    let sum = kernel.sum();
    let balance: Vec<f64> = kernel.iter().map(|v| v / sum).collect();
    if !balance.iter().all(|&b| b > 0.0) {
        return Err(Error::DegenerateSimplex(format!(
            "tangency relation has mixed signs: {balance:?}"
        )));
    }
    let balance_residual = (&dirs * DVector::from_column_slice(&balance)).norm();
    Ok(InsphereData {
        center,
        inradius,
        tangency_dirs,
        balance,
        facet_residual,
        balance_residual,
    })
}
