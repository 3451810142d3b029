use nalgebra::{DMatrix, DVector};

use crate::error::{invalid, Error, Result};
use crate::tolerance::TolerancePolicy;

use super::symmetric::minor;

/// Smallest singular value of `m` relative to nothing; callers decide scale.
pub fn smallest_singular_value(m: &DMatrix<f64>) -> f64 {
    m.clone().singular_values().min()
}

/// Solves the square system `a x = b`.
///
/// Fails with [`Error::SingularSystem`] when the smallest singular value is
/// below `tol.eq_zero` times the largest.
pub fn solve_square(a: &DMatrix<f64>, b: &DVector<f64>, tol: &TolerancePolicy) -> Result<DVector<f64>> {
    let n = a.nrows();
    if n == 0 || a.ncols() != n {
        return Err(invalid(format!("expected a square matrix, got {}x{}", n, a.ncols())));
    }
    if b.len() != n {
        return Err(invalid(format!("right-hand side has length {}, expected {n}", b.len())));
    }
    if a.iter().chain(b.iter()).any(|v| !v.is_finite()) {
        return Err(invalid("linear system has non-finite entries"));
    }
    let sv = a.clone().singular_values();
    let (smin, smax) = (sv.min(), sv.max());
    if smax == 0.0 || smin <= tol.eq_zero * smax {
        return Err(Error::SingularSystem {
            smallest_singular_value: smin,
        });
    }
    let x = a
        .clone()
        .lu()
        .solve(b)
        .ok_or(Error::SingularSystem {
            smallest_singular_value: smin,
        })?;
    let residual = (a * &x - b).amax();
    let bound = tol.eq_zero * (b.amax() + smax * x.amax());
    if residual > bound {
        return Err(Error::NumericalFailure(format!(
            "linear solve residual {residual:e} exceeds {bound:e}"
        )));
    }
    Ok(x)
}

/// Kernel vector of a `k x (k+1)` matrix by the generalized cross product:
/// component `j` is `(-1)^j` times the determinant with column `j` removed.
///
/// Returns `None` when every such determinant vanishes relative to the
/// largest entry raised to the `k`, i.e. the rank is below `k`.
pub fn kernel_vector(m: &DMatrix<f64>, rel_tol: f64) -> Option<DVector<f64>> {
    let k = m.nrows();
    if m.ncols() != k + 1 {
        return None;
    }
    // Append a zero row so `minor` can strip it together with column j.
    let padded = m.clone().insert_row(k, 0.0);
    let x = DVector::from_fn(k + 1, |j, _| {
        let sign = if (j + k) % 2 == 0 { 1.0 } else { -1.0 };
        sign * minor(&padded, k, j)
    });
    let scale = m.amax().max(f64::MIN_POSITIVE).powi(k as i32);
    if x.amax() <= rel_tol * scale {
        None
    } else {
        Some(x)
    }
}

/// Orthonormal basis (as columns) of the span of the top `rank` left
/// singular vectors of the matrix whose columns are `vectors`, together with
/// all singular values in decreasing order.
pub fn span_basis(vectors: &[DVector<f64>], rank: usize) -> (DMatrix<f64>, Vec<f64>) {
    let dim = vectors[0].len();
    let m = DMatrix::from_columns(vectors);
    // Pad to a square-or-taller matrix so the thin SVD returns `dim` columns of U.
    let cols = vectors.len().max(dim);
    let padded = DMatrix::from_fn(dim, cols, |i, j| if j < vectors.len() { m[(i, j)] } else { 0.0 });
    let svd = padded.svd(true, false);
    let u = svd.u.expect("requested U");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let basis = DMatrix::from_columns(&order[..rank].iter().map(|&i| u.column(i).into_owned()).collect::<Vec<_>>());
    let values = order.iter().map(|&i| svd.singular_values[i]).collect();
    (basis, values)
}
