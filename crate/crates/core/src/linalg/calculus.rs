//! Functional calculus on Hermitian matrices and the PSD cone.

use super::eigen::{eig_hermitian, EigenDecomposition};
use super::matrix::{ComplexMatrix, HermitianMatrix};
use super::svd::svd;
use crate::error::{Error, Result};

/// Relative tolerance below zero still accepted as PSD (and clamped to 0).
pub const PSD_CLAMP_TOL: f64 = 1e-10;

/// Where a scalar function is defined.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    /// `[0, ∞)`; negative eigenvalue dust within [`PSD_CLAMP_TOL`] is clamped.
    NonNegative,
    /// All of ℝ.
    Real,
}

impl Domain {
    pub fn label(self) -> &'static str {
        match self {
            Domain::NonNegative => "[0, inf)",
            Domain::Real => "(-inf, inf)",
        }
    }
}

/// Positive semidefinite matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct PsdMatrix(HermitianMatrix);

impl PsdMatrix {
    /// Accepts `h` if its smallest eigenvalue is at least
    /// `-1e-10 · max(1, λ_max)`. Inputs outside are rejected, not repaired.
    pub fn new(h: HermitianMatrix) -> Result<Self> {
        let eig = eig_hermitian(&h)?;
        check_psd_spectrum(&eig.eigenvalues)?;
        Ok(Self(h))
    }

    /// Projection onto the cone by clamping negative eigenvalues.
    pub fn project(h: &HermitianMatrix) -> Result<Self> {
        let eig = eig_hermitian(h)?;
        let clamped: Vec<f64> = eig.eigenvalues.iter().map(|&l| l.max(0.0)).collect();
        Ok(Self(HermitianMatrix::symmetrize(ComplexMatrix::conjugate_diag(
            &eig.vectors,
            &clamped,
        ))))
    }

    pub(crate) fn new_unchecked(h: HermitianMatrix) -> Self {
        Self(h)
    }

    pub fn from_diag(diag: &[f64]) -> Result<Self> {
        Self::new(HermitianMatrix::from_diag(diag))
    }

    pub fn zeros(n: usize) -> Self {
        Self(HermitianMatrix::zeros(n))
    }

    pub fn identity(n: usize) -> Self {
        Self(HermitianMatrix::identity(n))
    }

    pub fn n(&self) -> usize {
        self.0.n()
    }

    pub fn hermitian(&self) -> &HermitianMatrix {
        &self.0
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.0.matrix()
    }

    pub fn into_hermitian(self) -> HermitianMatrix {
        self.0
    }

    /// Sum of two PSD matrices is PSD.
    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.add(&other.0))
    }

    pub fn scale(&self, s: f64) -> Result<Self> {
        if s < 0.0 {
            return Err(Error::InvalidParameter(format!("PSD scale factor {s} < 0")));
        }
        Ok(Self(self.0.scale(s)))
    }

    pub fn apply<F: Fn(f64) -> f64>(&self, f: F) -> Result<HermitianMatrix> {
        apply_fn(&self.0, Domain::NonNegative, f)
    }
}

fn check_psd_spectrum(eigenvalues: &[f64]) -> Result<()> {
    let top = eigenvalues.first().copied().unwrap_or(0.0);
    let bound = PSD_CLAMP_TOL * top.max(1.0);
    match eigenvalues.last() {
        Some(&low) if low < -bound => Err(Error::NotPsd {
            eigenvalue: low,
            bound,
        }),
        _ => Ok(()),
    }
}

/// `V · diag(f(λ)) · V*` on a Hermitian matrix.
pub fn apply_fn<F: Fn(f64) -> f64>(a: &HermitianMatrix, domain: Domain, f: F) -> Result<HermitianMatrix> {
    let eig = eig_hermitian(a)?;
    apply_fn_eig(&eig, domain, f)
}

/// As [`apply_fn`], reusing a precomputed eigendecomposition.
pub fn apply_fn_eig<F: Fn(f64) -> f64>(
    eig: &EigenDecomposition,
    domain: Domain,
    f: F,
) -> Result<HermitianMatrix> {
    let values = mapped_spectrum(&eig.eigenvalues, domain, f)?;
    Ok(HermitianMatrix::symmetrize(ComplexMatrix::conjugate_diag(
        &eig.vectors,
        &values,
    )))
}

pub(crate) fn mapped_spectrum<F: Fn(f64) -> f64>(eigenvalues: &[f64], domain: Domain, f: F) -> Result<Vec<f64>> {
    if domain == Domain::NonNegative {
        check_psd_spectrum(eigenvalues).map_err(|_| Error::Domain {
            function: "functional calculus".into(),
            value: eigenvalues.last().copied().unwrap_or(0.0),
            domain: domain.label(),
        })?;
    }
    eigenvalues
        .iter()
        .map(|&l| {
            let t = match domain {
                Domain::NonNegative => l.max(0.0),
                Domain::Real => l,
            };
            let y = f(t);
            if y.is_finite() {
                Ok(y)
            } else {
                Err(Error::Domain {
                    function: "functional calculus".into(),
                    value: t,
                    domain: domain.label(),
                })
            }
        })
        .collect()
}

/// `|A| = (A*A)^{1/2}`, assembled as `V · diag(s) · V*` from the SVD.
pub fn matrix_abs(a: &ComplexMatrix) -> Result<PsdMatrix> {
    let f = svd(a)?;
    Ok(PsdMatrix(HermitianMatrix::symmetrize(ComplexMatrix::conjugate_diag(
        &f.right,
        &f.singulars,
    ))))
}

/// `|D|` for Hermitian `D` through its spectrum.
pub fn abs_hermitian(d: &HermitianMatrix) -> Result<PsdMatrix> {
    apply_fn(d, Domain::Real, f64::abs).map(PsdMatrix)
}

/// Splits `D = D₊ − D₋` with `D₊, D₋ ≥ 0` and `D₊D₋ = 0`.
pub fn jordan_split(d: &HermitianMatrix) -> Result<(PsdMatrix, PsdMatrix)> {
    let eig = eig_hermitian(d)?;
    let plus = apply_fn_eig(&eig, Domain::Real, |l| l.max(0.0))?;
    let minus = apply_fn_eig(&eig, Domain::Real, |l| (-l).max(0.0))?;
    Ok((PsdMatrix(plus), PsdMatrix(minus)))
}

/// `A ⊕ B`.
pub fn direct_sum(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.direct_sum(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_function_is_identity() {
        let a = HermitianMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, -3.0]]).unwrap();
        let fa = apply_fn(&a, Domain::Real, |t| t).unwrap();
        assert!((fa.matrix() - a.matrix()).max_abs() < 1e-12);
    }

    #[test]
    fn brick_on_diagonal() {
        let a = PsdMatrix::from_diag(&[1.0, 3.0]).unwrap();
        let fa = a.apply(|t| t / (1.0 + t)).unwrap();
        assert_eq!(fa, HermitianMatrix::from_diag(&[0.5, 0.75]));
    }

    #[test]
    fn nonnegative_domain_rejects_negative_spectrum() {
        let a = HermitianMatrix::from_diag(&[1.0, -0.5]);
        assert!(matches!(
            apply_fn(&a, Domain::NonNegative, f64::sqrt),
            Err(Error::Domain { .. })
        ));
        // dust is clamped
        let dust = HermitianMatrix::from_diag(&[1.0, -1e-13]);
        let r = apply_fn(&dust, Domain::NonNegative, f64::sqrt).unwrap();
        assert_eq!(r.matrix().get(1, 1).re, 0.0);
    }

    #[test]
    fn psd_rejects_indefinite() {
        assert!(matches!(PsdMatrix::from_diag(&[1.0, -1e-3]), Err(Error::NotPsd { .. })));
        assert!(PsdMatrix::from_diag(&[1.0, -1e-12]).is_ok());
    }

    #[test]
    fn abs_examples() {
        let a = ComplexMatrix::from_diag(&[-3.0, 1.0]);
        let abs = matrix_abs(&a).unwrap();
        assert!((abs.matrix() - &ComplexMatrix::from_diag(&[3.0, 1.0])).max_abs() < 1e-15);

        let shift = ComplexMatrix::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]).unwrap();
        let abs = matrix_abs(&shift).unwrap();
        assert!((abs.matrix() - &ComplexMatrix::from_diag(&[0.0, 2.0])).max_abs() < 1e-15);
    }

    #[test]
    fn jordan_split_examples() {
        let d = HermitianMatrix::from_diag(&[3.0, -2.0]);
        let (p, m) = jordan_split(&d).unwrap();
        assert_eq!(p.hermitian(), &HermitianMatrix::from_diag(&[3.0, 0.0]));
        assert_eq!(m.hermitian(), &HermitianMatrix::from_diag(&[0.0, 2.0]));

        let psd = HermitianMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 2.0]]).unwrap();
        let (p, m) = jordan_split(&psd).unwrap();
        assert!((p.matrix() - psd.matrix()).max_abs() < 1e-14);
        assert!(m.matrix().max_abs() < 1e-14);
    }
}
