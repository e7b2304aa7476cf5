//! Deterministic random ensembles.
//!
//! The stream is ChaCha8 (`rand_chacha::ChaCha8Rng::seed_from_u64`). Uniforms
//! are the generator's 53-bit `f64` draws in `[0, 1)`; each standard normal is
//! one Box–Muller draw `sqrt(-2 ln(1 - u1)) · cos(2π u2)` from two uniforms.
//! Complex Gaussian entries take the real part before the imaginary part and
//! matrices are filled row-major.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{svd, ComplexMatrix, HermitianMatrix, PsdMatrix};

/// SplitMix64 finalizer; used to derive independent per-trial seeds.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `trial_seed = splitmix64(master ^ splitmix64(index))`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index))
}

/// Seeded source of scalars and structured random matrices.
pub struct MatrixRng {
    inner: ChaCha8Rng,
}

impl MatrixRng {
    pub fn new(seed: u64) -> Self {
        Self {
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn uniform(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Log-uniform in `[lo, hi]`, both positive.
    pub fn log_uniform(&mut self, lo: f64, hi: f64) -> f64 {
        (lo.ln() + (hi.ln() - lo.ln()) * self.uniform()).exp()
    }

    pub fn index(&mut self, bound: usize) -> usize {
        self.inner.random_range(0..bound)
    }

    pub fn coin(&mut self) -> bool {
        self.uniform() < 0.5
    }

    pub fn normal(&mut self) -> f64 {
        let u1 = self.uniform();
        let u2 = self.uniform();
        (-2.0 * (1.0 - u1).ln()).sqrt() * (2.0 * PI * u2).cos()
    }

    pub fn complex_normal(&mut self) -> Complex64 {
        let re = self.normal();
        let im = self.normal();
        Complex64::new(re, im)
    }

    pub fn gaussian(&mut self, n: usize) -> ComplexMatrix {
        let data = (0..n * n).map(|_| self.complex_normal()).collect();
        ComplexMatrix::from_vec(n, data).expect("finite gaussian draws")
    }

    /// GUE-like Hermitian matrix `(G + G*) / 2`.
    pub fn hermitian(&mut self, n: usize) -> HermitianMatrix {
        let g = self.gaussian(n);
        HermitianMatrix::new((&g + &g.adjoint()).scale_real(0.5)).expect("hermitian by construction")
    }

    /// Haar unitary: Gram–Schmidt on a complex Gaussian, `R` with positive diagonal.
    pub fn unitary(&mut self, n: usize) -> ComplexMatrix {
        let g = self.gaussian(n);
        let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
        for j in 0..n {
            let mut x = g.column(j);
            for _ in 0..2 {
                for b in &cols {
                    let proj: Complex64 = b.iter().zip(&x).map(|(bi, xi)| bi.conj() * xi).sum();
                    for (xi, bi) in x.iter_mut().zip(b) {
                        *xi -= proj * bi;
                    }
                }
            }
            let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            for xi in &mut x {
                *xi /= norm;
            }
            cols.push(x);
        }
        let mut u = ComplexMatrix::zeros(n);
        for (j, col) in cols.iter().enumerate() {
            for (i, z) in col.iter().enumerate() {
                u.set(i, j, *z);
            }
        }
        u
    }

    /// `U · diag(λ) · U*` with Haar `U`.
    pub fn with_spectrum(&mut self, spectrum: &[f64]) -> HermitianMatrix {
        let u = self.unitary(spectrum.len());
        HermitianMatrix::new(ComplexMatrix::conjugate_diag(&u, spectrum)).expect("hermitian by construction")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnsembleKind {
    Wishart,
    Spectral,
    CommutingPair,
    RankDeficient,
    NearPair,
}

impl EnsembleKind {
    pub const ALL: [EnsembleKind; 5] = [
        EnsembleKind::Wishart,
        EnsembleKind::Spectral,
        EnsembleKind::CommutingPair,
        EnsembleKind::RankDeficient,
        EnsembleKind::NearPair,
    ];

    /// Round-robin over all kinds; each kind gets 20% of the trials.
    pub fn cycle(index: u64) -> Self {
        Self::ALL[(index % Self::ALL.len() as u64) as usize]
    }
}

/// Everything needed to regenerate a matrix or pair bit-for-bit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    pub n: usize,
    /// Spectrum range for spectral-type draws; Wishart draws are scaled by `hi`.
    pub lo: f64,
    pub hi: f64,
    /// Number of exactly-zero eigenvalues for rank-deficient draws.
    pub zeros: usize,
    /// Closeness for near pairs: `B = A + δ·P`.
    pub delta: f64,
    pub seed: u64,
}

impl EnsembleSpec {
    pub fn new(kind: EnsembleKind, n: usize, seed: u64) -> Self {
        Self {
            kind,
            n,
            lo: 0.0,
            hi: 1.0,
            zeros: n / 2,
            delta: 0.1,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParameter("ensemble dimension must be >= 1".into()));
        }
        if !(self.lo >= 0.0 && self.hi >= self.lo && self.hi.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "spectrum range [{}, {}]",
                self.lo, self.hi
            )));
        }
        if self.zeros > self.n {
            return Err(Error::InvalidParameter(format!(
                "{} zero eigenvalues exceed dimension {}",
                self.zeros, self.n
            )));
        }
        if !(self.delta >= 0.0 && self.delta.is_finite()) {
            return Err(Error::InvalidParameter(format!("delta {}", self.delta)));
        }
        Ok(())
    }
}

fn spectrum(rng: &mut MatrixRng, spec: &EnsembleSpec, zeros: usize) -> Vec<f64> {
    (0..spec.n)
        .map(|i| {
            if i < zeros {
                0.0
            } else {
                rng.uniform_in(spec.lo, spec.hi)
            }
        })
        .collect()
}

fn wishart(rng: &mut MatrixRng, n: usize, scale: f64) -> PsdMatrix {
    let g = rng.gaussian(n);
    let w = g.matmul(&g.adjoint()).scale_real(scale / (2.0 * n as f64));
    PsdMatrix::new_unchecked(HermitianMatrix::symmetrize(w))
}

fn draw(rng: &mut MatrixRng, spec: &EnsembleSpec) -> PsdMatrix {
    match spec.kind {
        EnsembleKind::Wishart => wishart(rng, spec.n, spec.hi),
        EnsembleKind::RankDeficient => {
            let lambda = spectrum(rng, spec, spec.zeros);
            PsdMatrix::new_unchecked(rng.with_spectrum(&lambda))
        }
        _ => {
            let lambda = spectrum(rng, spec, 0);
            PsdMatrix::new_unchecked(rng.with_spectrum(&lambda))
        }
    }
}

/// A single PSD draw from `spec`.
pub fn random_psd(spec: &EnsembleSpec) -> Result<PsdMatrix> {
    spec.validate()?;
    let mut rng = MatrixRng::new(spec.seed);
    Ok(draw(&mut rng, spec))
}

/// `‖C‖_op ≤ 1`: a Gaussian draw normalized by its operator norm and scaled
/// by a uniform factor in `[0, 1]`.
pub fn random_contraction(n: usize, seed: u64) -> Result<ComplexMatrix> {
    let mut rng = MatrixRng::new(seed);
    let factor = rng.uniform();
    contraction_from(&mut rng, n, factor)
}

pub fn contraction_from(rng: &mut MatrixRng, n: usize, factor: f64) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::InvalidParameter("contraction dimension must be >= 1".into()));
    }
    if !(0.0..=1.0).contains(&factor) {
        return Err(Error::InvalidParameter(format!("contraction factor {factor}")));
    }
    let g = rng.gaussian(n);
    let top = svd(&g)?.singulars[0];
    Ok(g.scale_real(factor / top))
}

/// `V*·X·V` for a fresh random contraction `V`. Any `X` is dominated by the
/// result's bound: `s_k(V*XV) ≤ s_k(X)` for every `k`.
pub fn contraction_congruence(rng: &mut MatrixRng, x: &ComplexMatrix) -> Result<ComplexMatrix> {
    let factor = rng.uniform();
    let v = contraction_from(rng, x.n(), factor)?;
    Ok(v.adjoint().matmul(x).matmul(&v))
}

/// A pair `(A, B)` of PSD matrices drawn according to `spec.kind`.
///
/// * `CommutingPair`: shared eigenbasis, independent spectra.
/// * `NearPair`: `B = A + δ·P` with `P` a Wishart draw of unit scale, so `A ≤ B`.
/// * `RankDeficient`: both factors have `spec.zeros` zero eigenvalues.
/// * `Wishart`, `Spectral`: independent draws.
pub fn random_pair(spec: &EnsembleSpec) -> Result<(PsdMatrix, PsdMatrix)> {
    spec.validate()?;
    let mut rng = MatrixRng::new(spec.seed);
    let n = spec.n;
    Ok(match spec.kind {
        EnsembleKind::CommutingPair => {
            let u = rng.unitary(n);
            let la = spectrum(&mut rng, spec, 0);
            let lb = spectrum(&mut rng, spec, 0);
            let a = HermitianMatrix::symmetrize(ComplexMatrix::conjugate_diag(&u, &la));
            let b = HermitianMatrix::symmetrize(ComplexMatrix::conjugate_diag(&u, &lb));
            (PsdMatrix::new_unchecked(a), PsdMatrix::new_unchecked(b))
        }
        EnsembleKind::NearPair => {
            let a = draw(&mut rng, &EnsembleSpec { kind: EnsembleKind::Spectral, ..spec.clone() });
            if spec.delta == 0.0 {
                (a.clone(), a)
            } else {
                let p = wishart(&mut rng, n, 1.0);
                let b = a.add(&p.scale(spec.delta)?);
                (a, b)
            }
        }
        _ => {
            let a = draw(&mut rng, spec);
            let b = draw(&mut rng, spec);
            (a, b)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eig_hermitian;

    #[test]
    fn determinism() {
        let spec = EnsembleSpec::new(EnsembleKind::Wishart, 4, 99);
        assert_eq!(random_psd(&spec).unwrap(), random_psd(&spec).unwrap());
        for kind in EnsembleKind::ALL {
            let spec = EnsembleSpec::new(kind, 3, 5);
            assert_eq!(random_pair(&spec).unwrap(), random_pair(&spec).unwrap());
        }
    }

    #[test]
    fn unit_spectrum_gives_identity() {
        let spec = EnsembleSpec {
            lo: 1.0,
            hi: 1.0,
            ..EnsembleSpec::new(EnsembleKind::Spectral, 5, 3)
        };
        let m = random_psd(&spec).unwrap();
        assert!((m.matrix() - &ComplexMatrix::identity(5)).max_abs() < 1e-14);
    }

    #[test]
    fn fully_rank_deficient_is_zero() {
        let spec = EnsembleSpec {
            zeros: 4,
            ..EnsembleSpec::new(EnsembleKind::RankDeficient, 4, 11)
        };
        assert_eq!(random_psd(&spec).unwrap().matrix(), &ComplexMatrix::zeros(4));
    }

    #[test]
    fn wishart_is_psd() {
        let spec = EnsembleSpec::new(EnsembleKind::Wishart, 5, 10);
        let m = random_psd(&spec).unwrap();
        let e = eig_hermitian(m.hermitian()).unwrap();
        assert!(*e.eigenvalues.last().unwrap() >= -1e-10 * e.eigenvalues[0].max(1.0));
    }

    #[test]
    fn zero_factor_contraction_is_zero() {
        let mut rng = MatrixRng::new(1);
        let c = contraction_from(&mut rng, 3, 0.0).unwrap();
        assert_eq!(c.max_abs(), 0.0);
        assert!(contraction_from(&mut rng, 3, 1.5).is_err());
    }

    #[test]
    fn near_pair_with_zero_delta_is_equal() {
        let spec = EnsembleSpec {
            delta: 0.0,
            ..EnsembleSpec::new(EnsembleKind::NearPair, 4, 8)
        };
        let (a, b) = random_pair(&spec).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn invalid_specs() {
        assert!(random_psd(&EnsembleSpec::new(EnsembleKind::Wishart, 0, 1)).is_err());
        let bad = EnsembleSpec {
            zeros: 9,
            ..EnsembleSpec::new(EnsembleKind::RankDeficient, 3, 1)
        };
        assert!(random_psd(&bad).is_err());
    }

    #[test]
    fn seed_derivation_spreads() {
        assert_ne!(derive_seed(42, 0), derive_seed(42, 1));
        assert_ne!(derive_seed(42, 0), derive_seed(43, 0));
        assert_eq!(derive_seed(7, 123), derive_seed(7, 123));
    }
}
