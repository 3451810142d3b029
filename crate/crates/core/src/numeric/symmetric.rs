use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{invalid, Result};
use crate::tolerance::TolerancePolicy;

/// Largest matrix handled; simplexes are capped at dimension 7.
pub const MAX_MATRIX_SIZE: usize = 8;

/// A real symmetric matrix of size 2..=8, exactly symmetric after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    entries: DMatrix<f64>,
}

impl SymmetricMatrix {
    /// Validates shape and finiteness, rejects matrices that are not
    /// symmetric to roundoff, and averages the two triangles so that
    /// `a[i][j] == a[j][i]` holds bit for bit.
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        let n = entries.nrows();
        if n != entries.ncols() {
            return Err(invalid(format!("matrix is {}x{}, not square", n, entries.ncols())));
        }
        if !(2..=MAX_MATRIX_SIZE).contains(&n) {
            return Err(invalid(format!(
                "matrix size {n} outside the supported range 2..={MAX_MATRIX_SIZE}"
            )));
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(invalid("matrix has non-finite entries"));
        }
        let scale = entries.amax().max(1.0);
        for i in 0..n {
            for j in (i + 1)..n {
                if (entries[(i, j)] - entries[(j, i)]).abs() > 1e-12 * scale {
                    return Err(invalid(format!(
                        "matrix is not symmetric at ({i}, {j}): {} vs {}",
                        entries[(i, j)],
                        entries[(j, i)]
                    )));
                }
            }
        }
        let symmetric = (&entries + entries.transpose()) * 0.5;
        Ok(SymmetricMatrix { entries: symmetric })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(invalid("matrix rows must all have length equal to the row count"));
        }
        SymmetricMatrix::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn identity(n: usize) -> Result<Self> {
        SymmetricMatrix::new(DMatrix::identity(n, n))
    }

    pub fn size(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    /// Largest absolute entry.
    pub fn scale(&self) -> f64 {
        self.entries.amax()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.size())
            .map(|i| (0..self.size()).map(|j| self.get(i, j)).collect())
            .collect()
    }

    /// The principal submatrix obtained by deleting row and column `k`.
    pub fn principal_block(&self, k: usize) -> DMatrix<f64> {
        self.entries.clone().remove_row(k).remove_column(k)
    }

    /// Simultaneous row/column permutation: entry `(i, j)` of the result is
    /// entry `(perm[i], perm[j])` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.size();
        if perm.len() != n {
            return Err(invalid("permutation length does not match matrix size"));
        }
        SymmetricMatrix::new(DMatrix::from_fn(n, n, |i, j| self.get(perm[i], perm[j])))
    }

    pub fn has_unit_diagonal(&self, tol: f64) -> bool {
        (0..self.size()).all(|i| (self.get(i, i) - 1.0).abs() <= tol)
    }
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn smallest_eigenvalue(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 {
        return f64::INFINITY;
    }
    SymmetricEigen::new(m.clone()).eigenvalues.min()
}

/// Determinant of `m` with row `row` and column `col` removed.
pub fn minor(m: &DMatrix<f64>, row: usize, col: usize) -> f64 {
    let sub = m.clone().remove_row(row).remove_column(col);
    if sub.nrows() == 0 {
        1.0
    } else {
        sub.determinant()
    }
}

/// Cofactors `c_ij = (-1)^(i+j) * minor(i, j)`, straight from the minors so
/// that singular matrices are handled.
pub fn cofactor_matrix(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    DMatrix::from_fn(n, n, |i, j| {
        let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
        sign * minor(m, i, j)
    })
}

/// Everything the classification needs to know about a symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixDiagnostics {
    pub size: usize,
    /// Largest absolute entry; the reference for relative thresholds.
    pub scale: f64,
    pub det: f64,
    pub min_eigenvalue: f64,
    /// Smallest eigenvalue of each leading principal k×k block, k = 1..=size.
    pub leading_minor_mins: Vec<f64>,
    /// Smallest eigenvalue of the block with row/column k deleted.
    pub principal_block_mins: Vec<f64>,
    pub cofactors: DMatrix<f64>,
    pub cofactors_all_positive: bool,
    pub principal_n_blocks_pd: bool,
    pub positive_definite: bool,
}

impl MatrixDiagnostics {
    pub fn min_cofactor(&self) -> f64 {
        self.cofactors.min()
    }

    /// First `(i, j)` whose cofactor is not above the strict margin.
    pub fn first_nonpositive_cofactor(&self, strict_margin: f64) -> Option<(usize, usize)> {
        let n = self.size;
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .find(|&(i, j)| self.cofactors[(i, j)] <= strict_margin)
    }

    /// First deleted index whose principal block fails the PD test.
    pub fn first_non_pd_block(&self, threshold: f64) -> Option<usize> {
        self.principal_block_mins.iter().position(|&m| m <= threshold)
    }
}

/// Determinant, cofactors, and positive-definiteness verdicts for `a`.
///
/// A block is positive definite when its smallest eigenvalue exceeds
/// `tol.eq_zero * scale`.
pub fn gram_diagnostics(a: &SymmetricMatrix, tol: &TolerancePolicy) -> MatrixDiagnostics {
    let m = a.entries();
    let n = a.size();
    let scale = a.scale();
    let threshold = tol.eq_zero * scale;

    let leading_minor_mins = (1..=n)
        .map(|k| smallest_eigenvalue(&m.view((0, 0), (k, k)).into_owned()))
        .collect();
    let principal_block_mins: Vec<f64> =
        (0..n).map(|k| smallest_eigenvalue(&a.principal_block(k))).collect();
    let cofactors = cofactor_matrix(m);
    let cofactors_all_positive = cofactors.iter().all(|&c| c > tol.strict_margin);
    let min_eigenvalue = smallest_eigenvalue(m);

    MatrixDiagnostics {
        size: n,
        scale,
        det: m.determinant(),
        min_eigenvalue,
        leading_minor_mins,
        principal_n_blocks_pd: principal_block_mins.iter().all(|&v| v > threshold),
        principal_block_mins,
        cofactors,
        cofactors_all_positive,
        positive_definite: min_eigenvalue > threshold,
    }
}
