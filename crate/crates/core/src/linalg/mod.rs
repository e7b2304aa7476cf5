//! Dense complex linear algebra at desk scale.

mod calculus;
mod eigen;
mod matrix;
mod svd;

pub use calculus::{
    abs_hermitian, apply_fn, apply_fn_eig, direct_sum, jordan_split, matrix_abs, Domain, PsdMatrix,
    PSD_CLAMP_TOL,
};
pub use eigen::{eig_hermitian, eig_hermitian_with, EigenDecomposition, JacobiConfig};
pub use matrix::{ComplexMatrix, HermitianMatrix, MatrixJson, HERMITIAN_TOL};
pub use svd::{svd, SvdFactors};

pub use num_complex::Complex64;
