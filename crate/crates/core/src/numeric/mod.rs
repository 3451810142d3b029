//! Dense linear-algebra diagnostics for the small matrices this crate works
//! with: symmetric matrices up to 8×8, square solves, and hemisphere
//! feasibility for at most a handful of unit vectors.

mod hemisphere;
mod solve;
mod symmetric;

pub(crate) use hemisphere::combinations;
pub use hemisphere::{
    hemisphere_margin, hemisphere_witness, min_norm_point, HemisphereMargin, HemisphereMode,
    MinNormPoint,
};
pub use solve::{kernel_vector, smallest_singular_value, solve_square, span_basis};
pub use symmetric::{
    cofactor_matrix, gram_diagnostics, minor, smallest_eigenvalue, MatrixDiagnostics,
    SymmetricMatrix, MAX_MATRIX_SIZE,
};
