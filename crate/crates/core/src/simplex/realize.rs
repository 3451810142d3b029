use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::geometry::{GeometryTag, ModelPoint};
use crate::numeric::{solve_square, SymmetricMatrix};
use crate::tolerance::TolerancePolicy;

use super::classify::{classify_gram, GramClass};
use super::simplex::Simplex;

/// Largest allowed entrywise gap between the input and the Gram matrix of
/// the realized simplex.
const ROUNDTRIP_TOL: f64 = 1e-8;

/// Builds a simplex whose Gram matrix is `a`.
///
/// The matrix is factored as `Nᵀ J N` with `J` the identity (spherical,
/// Euclidean) or the Minkowski form (hyperbolic); the columns of `N` are the
/// inward facet normals. Spherical and hyperbolic vertices are the dual
/// basis, projected onto the model. Euclidean vertices are the corners of
/// the simplex whose facets are tangent to the unit sphere about the origin,
/// so the result has inradius 1.
pub fn realize(a: &SymmetricMatrix, tol: &TolerancePolicy) -> Result<Simplex> {
    let class = classify_gram(a, tol)?;
    let k = a.size();
    let n = k - 1;
    let m = a.entries();
    let simplex = match class {
        GramClass::NotAGram(reason) => return Err(Error::NotAGram(reason)),
        GramClass::Spherical => {
            let chol = m
                .clone()
                .cholesky()
                .ok_or_else(|| Error::NumericalFailure("Cholesky factorization failed on a positive definite matrix".into()))?;
            let normals = chol.l().transpose();
            let dual = inverse(&normals)?.transpose();
            let vertices = (0..k)
                .map(|j| ModelPoint::project(GeometryTag::Spherical, dual.column(j).into_owned()))
                .collect::<Result<Vec<_>>>()?;
            Simplex::with_tolerance(GeometryTag::Spherical, vertices, tol)?
        }
        GramClass::Hyperbolic => {
            let (values, vectors) = sorted_eigen(m);
            if !(values[k - 1] < 0.0 && values[k - 2] > 0.0) {
                return Err(Error::NumericalFailure(format!(
                    "hyperbolic Gram matrix does not have signature (n, 1): eigenvalues {:?}",
                    values.as_slice()
                )));
            }
            let mut normals = DMatrix::zeros(k, k);
            for r in 0..k {
                let s = values[r].abs().sqrt();
                normals.row_mut(r).copy_from(&(vectors.column(r).transpose() * s));
            }
            let dual = inverse(&normals)?.transpose();
            let mut columns: Vec<DVector<f64>> = (0..k)
                .map(|j| {
                    let mut z = dual.column(j).into_owned();
                    z[k - 1] = -z[k - 1];
                    z
                })
                .collect();
            if columns[0][k - 1] < 0.0 {
                for c in &mut columns {
                    *c = -c.clone();
                }
            }
            let vertices = columns
                .into_iter()
                .map(|z| ModelPoint::project(GeometryTag::Hyperbolic, z))
                .collect::<Result<Vec<_>>>()?;
            Simplex::with_tolerance(GeometryTag::Hyperbolic, vertices, tol)?
        }
        GramClass::Euclidean => {
            let (values, vectors) = sorted_eigen(m);
            let mut normals = DMatrix::zeros(n, k);
            for r in 0..n {
                let s = values[r].max(0.0).sqrt();
                normals.row_mut(r).copy_from(&(vectors.column(r).transpose() * s));
            }
            let mut vertices = Vec::with_capacity(k);
            for j in 0..k {
                let rows: Vec<usize> = (0..k).filter(|&i| i != j).collect();
                let system = DMatrix::from_fn(n, n, |r, c| normals[(c, rows[r])]);
                let rhs = DVector::from_element(n, -1.0);
                let z = solve_square(&system, &rhs, tol)?;
                vertices.push(ModelPoint::new(GeometryTag::Euclidean, z)?);
            }
            Simplex::with_tolerance(GeometryTag::Euclidean, vertices, tol)?
        }
    };
    let realized = simplex.gram()?;
    let gap = (realized.matrix().entries() - m).amax();
    if gap > ROUNDTRIP_TOL {
        return Err(Error::NumericalFailure(format!(
            "realized simplex reproduces the Gram matrix only to {gap:e}"
        )));
    }
    Ok(simplex)
}

/// Eigenvalues in decreasing order with matching eigenvector columns.
fn sorted_eigen(m: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(m.clone());
    let k = m.nrows();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = DVector::from_iterator(k, order.iter().map(|&i| eig.eigenvalues[i]));
    let vectors = DMatrix::from_columns(&order.iter().map(|&i| eig.eigenvectors.column(i).into_owned()).collect::<Vec<_>>());
    (values, vectors)
}

fn inverse(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    m.clone()
        .try_inverse()
        .ok_or_else(|| Error::NumericalFailure("normal matrix is singular".into()))
}
