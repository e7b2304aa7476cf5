use crate::error::Result;
use crate::linalg::{apply_fn_eig, eig_hermitian, ComplexMatrix, Domain, EigenDecomposition, HermitianMatrix, PsdMatrix};

/// A cached eigendecomposition ready for repeated functional calculus.
pub(crate) struct Spectral {
    eig: EigenDecomposition,
    domain: Domain,
}

impl Spectral {
    pub fn psd(a: &PsdMatrix) -> Result<Self> {
        Ok(Self {
            eig: eig_hermitian(a.hermitian())?,
            domain: Domain::NonNegative,
        })
    }

    pub fn hermitian(h: &HermitianMatrix) -> Result<Self> {
        Ok(Self {
            eig: eig_hermitian(h)?,
            domain: Domain::Real,
        })
    }

    /// `|D|` from the decomposition of `D`: same vectors, `|λ|` sorted descending.
    pub fn abs(&self) -> Self {
        let n = self.eig.eigenvalues.len();
        let mut order: Vec<usize> = (0..n).collect();
        let mags: Vec<f64> = self.eig.eigenvalues.iter().map(|l| l.abs()).collect();
        order.sort_by(|&i, &j| mags[j].total_cmp(&mags[i]));
        let mut vectors = ComplexMatrix::zeros(n);
        for (dst, &src) in order.iter().enumerate() {
            for r in 0..n {
                vectors.set(r, dst, self.eig.vectors.get(r, src));
            }
        }
        Self {
            eig: EigenDecomposition {
                eigenvalues: order.iter().map(|&i| mags[i]).collect(),
                vectors,
            },
            domain: Domain::NonNegative,
        }
    }

    pub fn apply<F: Fn(f64) -> f64>(&self, f: F) -> Result<ComplexMatrix> {
        Ok(apply_fn_eig(&self.eig, self.domain, f)?.into_matrix())
    }
}

/// Decompositions of `A`, `B`, `D = B − A` and `|D|` for a PSD pair.
pub(crate) struct PairSpectra {
    pub a: Spectral,
    pub b: Spectral,
    pub d: Spectral,
    pub abs_d: Spectral,
    /// `B − A`
    pub diff: HermitianMatrix,
}

impl PairSpectra {
    pub fn new(a: &PsdMatrix, b: &PsdMatrix) -> Result<Self> {
        let diff = b.hermitian().sub(a.hermitian());
        let d = Spectral::hermitian(&diff)?;
        let abs_d = d.abs();
        Ok(Self {
            a: Spectral::psd(a)?,
            b: Spectral::psd(b)?,
            d,
            abs_d,
            diff,
        })
    }

    /// `f(B) − f(A)`
    pub fn difference<F: Fn(f64) -> f64>(&self, f: F) -> Result<ComplexMatrix> {
        Ok(&self.b.apply(&f)? - &self.a.apply(&f)?)
    }
}

/// `Tr(XY)` for Hermitian `X`, `Y`; real up to rounding.
pub(crate) fn trace_product(x: &ComplexMatrix, y: &ComplexMatrix) -> f64 {
    let n = x.n();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            acc += (x.get(i, j) * y.get(j, i)).re;
        }
    }
    acc
}
