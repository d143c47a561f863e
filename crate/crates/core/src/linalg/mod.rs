//! Self-contained dense complex linear algebra.

mod density;
mod eigen;
mod matrix;

pub use density::{
    entropy_of_spectrum, partial_trace_matrix, trace_norm, von_neumann_entropy, DensityOperator,
    EIG_CLAMP, STATE_TOL,
};
pub use eigen::{eigenvalues, hermitian_eig, HermitianEigen, HERMITIAN_TOL, JACOBI_MAX_SWEEPS, JACOBI_THRESHOLD};
pub use matrix::{kron, ComplexMatrix, ONE, ZERO};
