//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary and then applies the classical real Jacobi rotation, so the
//! combined plane transform is
//!
//! ```text
//! G = [ c          s        ]
//!     [ -s e^{-iφ}  c e^{-iφ} ]      with a_pq = |a_pq| e^{iφ}
//! ```
//!
//! and `A ← G* A G`, `V ← V G`.

use num_complex::Complex64;

use super::matrix::{ComplexMatrix, HermitianMatrix};
use crate::error::{Error, Result};

/// Sweep cap and stopping threshold for the Jacobi iteration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JacobiConfig {
    pub max_sweeps: usize,
    /// Stop when the off-diagonal Frobenius mass is at most `rel_tol · ‖A‖_F`.
    pub rel_tol: f64,
}

impl Default for JacobiConfig {
    fn default() -> Self {
        Self {
            max_sweeps: 64,
            rel_tol: 1e-14,
        }
    }
}

/// Eigenvalues in descending order with matching orthonormal eigenvector columns.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// `‖A·V − V·diag(λ)‖_F`.
    pub fn residual(&self, a: &ComplexMatrix) -> f64 {
        let av = a.matmul(&self.vectors);
        let n = a.n();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (av.get(i, j) - self.vectors.get(i, j) * self.eigenvalues[j]).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// `‖V*V − I‖_max`.
    pub fn orthonormality_defect(&self) -> f64 {
        let g = self.vectors.adjoint().matmul(&self.vectors);
        let n = g.n();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g.get(i, j) - target).norm());
            }
        }
        worst
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        ComplexMatrix::conjugate_diag(&self.vectors, &self.eigenvalues)
    }
}

pub fn eig_hermitian(a: &HermitianMatrix) -> Result<EigenDecomposition> {
    eig_hermitian_with(a, JacobiConfig::default())
}

pub fn eig_hermitian_with(a: &HermitianMatrix, cfg: JacobiConfig) -> Result<EigenDecomposition> {
    let n = a.n();
    let mut w = a.matrix().clone();
    let mut v = ComplexMatrix::identity(n);
    let scale = w.frobenius_norm();
    let target = cfg.rel_tol * scale;

    let mut converged = n <= 1 || scale == 0.0;
    let mut off = off_diagonal_norm(&w);
    let mut sweep = 0;
    while !converged {
        if off <= target {
            converged = true;
            break;
        }
        if sweep == cfg.max_sweeps {
            break;
        }
        sweep += 1;
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                rotate(&mut w, &mut v, p, q);
            }
        }
        off = off_diagonal_norm(&w);
    }
    if !converged {
        return Err(Error::NoConvergence {
            sweeps: sweep,
            off,
        });
    }

    let diag: Vec<f64> = (0..n).map(|i| w.get(i, i).re).collect();
    // stable descending sort keeps the original index order among ties
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));

    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = ComplexMatrix::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        for r in 0..n {
            vectors.set(r, dst, v.get(r, src));
        }
    }
    Ok(EigenDecomposition {
        eigenvalues,
        vectors,
    })
}

fn off_diagonal_norm(w: &ComplexMatrix) -> f64 {
    let n = w.n();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += w.get(i, j).norm_sqr();
            }
        }
    }
    acc.sqrt()
}

fn rotate(w: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = w.get(p, q);
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = w.get(p, p).re;
    let aqq = w.get(q, q).re;
    // below rounding level relative to both diagonal entries: nothing to gain
    if mag <= f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        w.set(p, q, Complex64::new(0.0, 0.0));
        w.set(q, p, Complex64::new(0.0, 0.0));
        return;
    }
    let phase = apq / mag;
    let zeta = (aqq - app) / (2.0 * mag);
    let t = if zeta >= 0.0 {
        1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
    } else {
        -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let e = phase.conj();
    let g_pp = Complex64::new(c, 0.0);
    let g_pq = Complex64::new(s, 0.0);
    let g_qp = e * (-s);
    let g_qq = e * c;

    let n = w.n();
    // columns: W ← W G
    for k in 0..n {
        let wkp = w.get(k, p);
        let wkq = w.get(k, q);
        *w.at_mut(k, p) = wkp * g_pp + wkq * g_qp;
        *w.at_mut(k, q) = wkp * g_pq + wkq * g_qq;
        let vkp = v.get(k, p);
        let vkq = v.get(k, q);
        *v.at_mut(k, p) = vkp * g_pp + vkq * g_qp;
        *v.at_mut(k, q) = vkp * g_pq + vkq * g_qq;
    }
    // rows: W ← G* W
    for k in 0..n {
        let wpk = w.get(p, k);
        let wqk = w.get(q, k);
        *w.at_mut(p, k) = g_pp.conj() * wpk + g_qp.conj() * wqk;
        *w.at_mut(q, k) = g_pq.conj() * wpk + g_qq.conj() * wqk;
    }
    let new_pp = app - t * mag;
    let new_qq = aqq + t * mag;
    w.set(p, p, Complex64::new(new_pp, 0.0));
    w.set(q, q, Complex64::new(new_qq, 0.0));
    w.set(p, q, Complex64::new(0.0, 0.0));
    w.set(q, p, Complex64::new(0.0, 0.0));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_input_is_fixed_point() {
        let a = HermitianMatrix::from_diag(&[2.0, 1.0]);
        let e = eig_hermitian(&a).unwrap();
        assert_eq!(e.eigenvalues, vec![2.0, 1.0]);
        assert_eq!(e.vectors, ComplexMatrix::identity(2));
    }

    #[test]
    fn swap_matrix_closed_form() {
        let a = HermitianMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let e = eig_hermitian(&a).unwrap();
        assert!((e.eigenvalues[0] - 1.0).abs() < 1e-15);
        assert!((e.eigenvalues[1] + 1.0).abs() < 1e-15);
        assert!(e.residual(a.matrix()) < 1e-14);
    }

    #[test]
    fn complex_two_by_two() {
        // [[1, i], [-i, 1]] has eigenvalues 2 and 0
        let m = ComplexMatrix::from_vec(
            2,
            vec![
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 1.0),
                Complex64::new(0.0, -1.0),
                Complex64::new(1.0, 0.0),
            ],
        )
        .unwrap();
        let a = HermitianMatrix::new(m).unwrap();
        let e = eig_hermitian(&a).unwrap();
        assert!((e.eigenvalues[0] - 2.0).abs() < 1e-14);
        assert!(e.eigenvalues[1].abs() < 1e-14);
        assert!(e.residual(a.matrix()) < 1e-14);
        assert!(e.orthonormality_defect() < 1e-15);
    }

    #[test]
    fn ties_keep_original_order() {
        let a = HermitianMatrix::from_diag(&[1.0, 3.0, 1.0]);
        let e = eig_hermitian(&a).unwrap();
        assert_eq!(e.eigenvalues, vec![3.0, 1.0, 1.0]);
        assert_eq!(e.vectors.get(0, 1), Complex64::new(1.0, 0.0));
        assert_eq!(e.vectors.get(2, 2), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn sweep_cap_reports_non_convergence() {
        let a = HermitianMatrix::from_real_rows(&[
            &[1.0, 2.0, 3.0],
            &[2.0, -1.0, 0.5],
            &[3.0, 0.5, 4.0],
        ])
        .unwrap();
        let cfg = JacobiConfig {
            max_sweeps: 0,
            rel_tol: 1e-14,
        };
        assert!(matches!(
            eig_hermitian_with(&a, cfg),
            Err(Error::NoConvergence { sweeps: 0, .. })
        ));
    }

    #[test]
    fn empty_and_scalar() {
        let e = eig_hermitian(&HermitianMatrix::zeros(0)).unwrap();
        assert!(e.eigenvalues.is_empty());
        let e = eig_hermitian(&HermitianMatrix::from_diag(&[-4.5])).unwrap();
        assert_eq!(e.eigenvalues, vec![-4.5]);
    }
}
