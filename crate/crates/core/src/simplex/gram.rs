use std::sync::OnceLock;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::numeric::{gram_diagnostics, MatrixDiagnostics, SymmetricMatrix};
use crate::tolerance::TolerancePolicy;

use super::classify::{classify_gram, GramClass};

const DIAGONAL_TOL: f64 = 1e-12;

/// Symmetric unit-diagonal matrix with off-diagonal entries `-cos` of the
/// dihedral angles. Diagnostics are computed on first use and cached per
/// tolerance policy.
#[derive(Debug, Clone)]
pub struct GramMatrix {
    matrix: SymmetricMatrix,
    diagnostics: OnceLock<(TolerancePolicy, MatrixDiagnostics)>,
}

impl PartialEq for GramMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

impl GramMatrix {
    /// Accepts a symmetric matrix whose diagonal is 1 to within `1e-12`
    /// (snapped to exactly 1) and whose off-diagonal entries lie in `(-1, 1)`.
    pub fn new(matrix: SymmetricMatrix) -> Result<Self> {
        let n = matrix.size();
        if n < 3 {
            return Err(invalid(format!("a Gram matrix of a simplex is at least 3x3, got {n}x{n}")));
        }
        if !matrix.has_unit_diagonal(DIAGONAL_TOL) {
            return Err(invalid("Gram matrix diagonal must be 1"));
        }
        let mut m = matrix.entries().clone();
        for i in 0..n {
            m[(i, i)] = 1.0;
            for j in 0..n {
                if i != j && !(m[(i, j)].abs() < 1.0) {
                    return Err(invalid(format!(
                        "Gram entry ({i}, {j}) = {} is outside (-1, 1)",
                        m[(i, j)]
                    )));
                }
            }
        }
        Ok(GramMatrix {
            matrix: SymmetricMatrix::new(m)?,
            diagnostics: OnceLock::new(),
        })
    }

    pub fn from_matrix(m: DMatrix<f64>) -> Result<Self> {
        GramMatrix::new(SymmetricMatrix::new(m)?)
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        GramMatrix::new(SymmetricMatrix::from_rows(rows)?)
    }

    /// The Gram matrix with the given dihedral angles.
    pub fn from_angles(angles: &DihedralAngles) -> Result<Self> {
        let k = angles.size();
        GramMatrix::from_matrix(DMatrix::from_fn(k, k, |i, j| {
            if i == j {
                1.0
            } else {
                -angles.get(i, j).cos()
            }
        }))
    }

    pub fn matrix(&self) -> &SymmetricMatrix {
        &self.matrix
    }

    pub fn size(&self) -> usize {
        self.matrix.size()
    }

    /// Simplex dimension `n` for an `(n+1) x (n+1)` Gram matrix.
    pub fn dimension(&self) -> usize {
        self.size() - 1
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.matrix.get(i, j)
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.matrix.to_rows()
    }

    pub fn diagnostics(&self, tol: &TolerancePolicy) -> MatrixDiagnostics {
        if let Some((cached_tol, d)) = self.diagnostics.get() {
            if cached_tol == tol {
                return d.clone();
            }
            return gram_diagnostics(&self.matrix, tol);
        }
        let d = gram_diagnostics(&self.matrix, tol);
        let _ = self.diagnostics.set((*tol, d.clone()));
        d
    }

    pub fn classify(&self, tol: &TolerancePolicy) -> GramClass {
        classify_gram(&self.matrix, tol).expect("GramMatrix always has a unit diagonal and size >= 3")
    }

    pub fn dihedral_angles(&self) -> DihedralAngles {
        let k = self.size();
        DihedralAngles {
            angles: DMatrix::from_fn(k, k, |i, j| {
                if i == j {
                    std::f64::consts::PI
                } else {
                    (-self.entry(i, j)).acos()
                }
            }),
        }
    }

    /// Simultaneous row/column relabelling; entry `(i, j)` of the result is
    /// entry `(perm[i], perm[j])` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        GramMatrix::new(self.matrix.permuted(perm)?)
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &GramMatrix) -> f64 {
        (self.matrix.entries() - other.matrix.entries()).amax()
    }
}

/// Dihedral angles `ζ_ij = arccos(-g_ij)` of a symmetric matrix with unit
/// diagonal; errors if an off-diagonal entry is outside `(-1, 1)`.
pub fn dihedral_angles(g: &SymmetricMatrix) -> Result<DihedralAngles> {
    Ok(GramMatrix::new(g.clone())?.dihedral_angles())
}

/// Symmetric table of dihedral angles in radians. The diagonal holds `π` by
/// convention.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct DihedralAngles {
    angles: DMatrix<f64>,
}

impl DihedralAngles {
    /// Builds a table from a full square array; off-diagonal entries must
    /// lie in `(0, π)` and be symmetric.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let k = rows.len();
        if k < 3 || rows.iter().any(|r| r.len() != k) {
            return Err(invalid("an angle table must be square and at least 3x3"));
        }
        let mut m = DMatrix::from_element(k, k, std::f64::consts::PI);
        for i in 0..k {
            for j in 0..k {
                if i == j {
                    continue;
                }
                let a = rows[i][j];
                if !(a > 0.0 && a < std::f64::consts::PI) {
                    return Err(invalid(format!("angle ({i}, {j}) = {a} is outside (0, pi)")));
                }
                if (a - rows[j][i]).abs() > 1e-12 {
                    return Err(invalid(format!("angle table is not symmetric at ({i}, {j})")));
                }
                m[(i, j)] = a;
            }
        }
        Ok(DihedralAngles { angles: m })
    }

    pub fn size(&self) -> usize {
        self.angles.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.angles[(i, j)]
    }

    /// Index pairs `(i, j)` with `i < j`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> {
        let k = self.size();
        (0..k).flat_map(move |i| ((i + 1)..k).map(move |j| (i, j)))
    }

    /// Upper-triangular angles in row-major order.
    pub fn upper(&self) -> Vec<f64> {
        self.pairs().map(|(i, j)| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.size())
            .map(|i| (0..self.size()).map(|j| self.get(i, j)).collect())
            .collect()
    }

    pub fn min(&self) -> f64 {
        self.upper().into_iter().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.upper().into_iter().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn max_abs_diff(&self, other: &DihedralAngles) -> f64 {
        self.pairs()
            .map(|(i, j)| (self.get(i, j) - other.get(i, j)).abs())
            .fold(0.0, f64::max)
    }
}

impl TryFrom<Vec<Vec<f64>>> for DihedralAngles {
    type Error = crate::error::Error;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        DihedralAngles::from_rows(&rows)
    }
}

impl From<DihedralAngles> for Vec<Vec<f64>> {
    fn from(a: DihedralAngles) -> Self {
        a.to_rows()
    }
}
