//! Shared fixtures for the criterion benchmarks.

use miq_core::generators::{random_pair, EnsembleKind, EnsembleSpec, MatrixRng};
use miq_core::{ComplexMatrix, HermitianMatrix, PsdMatrix};

pub const SIZES: [usize; 4] = [2, 4, 8, 16];

pub fn hermitian(n: usize) -> HermitianMatrix {
    MatrixRng::new(0xBE7C + n as u64).hermitian(n)
}

pub fn gaussian(n: usize) -> ComplexMatrix {
    MatrixRng::new(0x5D0 + n as u64).gaussian(n)
}

pub fn gaussians(n: usize, count: usize) -> Vec<ComplexMatrix> {
    let mut rng = MatrixRng::new(0x90 + n as u64);
    (0..count).map(|_| rng.gaussian(n)).collect()
}

pub fn pair(n: usize) -> (PsdMatrix, PsdMatrix) {
    random_pair(&EnsembleSpec::new(EnsembleKind::Spectral, n, 0xA4D0 + n as u64)).expect("valid spec")
}
