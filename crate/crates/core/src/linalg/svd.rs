//! Square SVD built on the Hermitian eigensolver.
//!
//! `V` comes from the eigendecomposition of `A*A`. The columns of `A·V` are
//! then polished with one-sided (Hestenes) Jacobi rotations until mutually
//! orthogonal; the singular values are their norms. This recovers small
//! singular values to absolute accuracy `ε‖A‖` rather than the `√ε‖A‖` that
//! `sqrt(λ(A*A))` alone would give.

use num_complex::Complex64;

use super::eigen::{eig_hermitian, JacobiConfig};
use super::matrix::{ComplexMatrix, HermitianMatrix};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct SvdFactors {
    /// Descending, nonnegative.
    pub singulars: Vec<f64>,
    pub left: ComplexMatrix,
    pub right: ComplexMatrix,
}

impl SvdFactors {
    /// `U · diag(s) · V*`
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.singulars.len();
        let mut us = self.left.clone();
        for i in 0..n {
            for j in 0..n {
                let z = us.get(i, j) * self.singulars[j];
                us.set(i, j, z);
            }
        }
        us.matmul(&self.right.adjoint())
    }
}

pub fn svd(a: &ComplexMatrix) -> Result<SvdFactors> {
    let n = a.n();
    let gram = HermitianMatrix::symmetrize(a.adjoint().matmul(a));
    let eig = eig_hermitian(&gram)?;
    let mut right = eig.vectors;
    let mut cols = a.matmul(&right);
    hestenes_polish(&mut cols, &mut right, JacobiConfig::default().max_sweeps)?;

    let norms: Vec<f64> = (0..n).map(|j| column_norm(&cols, j)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));

    let singulars: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let mut v_sorted = ComplexMatrix::zeros(n);
    let mut left = ComplexMatrix::zeros(n);
    let floor = singulars.first().copied().unwrap_or(0.0) * 1e-14;
    let mut filled = vec![false; n];
    for (dst, &src) in order.iter().enumerate() {
        for r in 0..n {
            v_sorted.set(r, dst, right.get(r, src));
        }
        let s = norms[src];
        if s > floor && s > f64::MIN_POSITIVE {
            for r in 0..n {
                left.set(r, dst, cols.get(r, src) / s);
            }
            filled[dst] = true;
        }
    }
    complete_orthonormal(&mut left, &filled);
    Ok(SvdFactors {
        singulars,
        left,
        right: v_sorted,
    })
}

fn column_norm(m: &ComplexMatrix, j: usize) -> f64 {
    (0..m.n()).map(|i| m.get(i, j).norm_sqr()).sum::<f64>().sqrt()
}

/// One-sided Jacobi on the columns of `w`, accumulating into `v`.
fn hestenes_polish(w: &mut ComplexMatrix, v: &mut ComplexMatrix, max_sweeps: usize) -> Result<()> {
    let n = w.n();
    let threshold = n as f64 * f64::EPSILON;
    let mut worst = 0.0_f64;
    for _ in 0..max_sweeps {
        let mut rotated = false;
        worst = 0.0;
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    let wp = w.get(k, p);
                    let wq = w.get(k, q);
                    alpha += wp.norm_sqr();
                    beta += wq.norm_sqr();
                    gamma += wp.conj() * wq;
                }
                let g = gamma.norm();
                let ratio = g / (alpha * beta).sqrt();
                if g == 0.0 || ratio <= threshold {
                    continue;
                }
                worst = worst.max(ratio);
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
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
                for k in 0..n {
                    let wp = w.get(k, p);
                    let wq = w.get(k, q);
                    *w.at_mut(k, p) = wp * g_pp + wq * g_qp;
                    *w.at_mut(k, q) = wp * g_pq + wq * g_qq;
                    let vp = v.get(k, p);
                    let vq = v.get(k, q);
                    *v.at_mut(k, p) = vp * g_pp + vq * g_qp;
                    *v.at_mut(k, q) = vp * g_pq + vq * g_qq;
                }
            }
        }
        if !rotated {
            return Ok(());
        }
    }
    Err(Error::NoConvergence {
        sweeps: max_sweeps,
        off: worst,
    })
}

/// Fills the unset columns of `u` with an orthonormal completion, by
/// Gram–Schmidt against the filled columns over the canonical basis.
fn complete_orthonormal(u: &mut ComplexMatrix, filled: &[bool]) {
    let n = u.n();
    let mut basis: Vec<Vec<Complex64>> = (0..n).filter(|&j| filled[j]).map(|j| u.column(j)).collect();
    let mut candidate = 0;
    for j in 0..n {
        if filled[j] {
            continue;
        }
        loop {
            assert!(candidate < n, "orthonormal completion ran out of candidates");
            let mut x = vec![Complex64::new(0.0, 0.0); n];
            x[candidate] = Complex64::new(1.0, 0.0);
            candidate += 1;
            // two passes of modified Gram–Schmidt
            for _ in 0..2 {
                for b in &basis {
                    let proj: Complex64 = b.iter().zip(&x).map(|(bi, xi)| bi.conj() * xi).sum();
                    for (xi, bi) in x.iter_mut().zip(b) {
                        *xi -= proj * bi;
                    }
                }
            }
            let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm > 1e-8 {
                for xi in &mut x {
                    *xi /= norm;
                }
                for (r, xi) in x.iter().enumerate() {
                    u.set(r, j, *xi);
                }
                basis.push(x);
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nilpotent_shift() {
        let a = ComplexMatrix::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]).unwrap();
        let f = svd(&a).unwrap();
        assert!((f.singulars[0] - 2.0).abs() < 1e-15);
        assert!(f.singulars[1].abs() < 1e-15);
        assert!((&f.reconstruct() - &a).frobenius_norm() < 1e-14);
    }

    #[test]
    fn hermitian_singulars_are_abs_eigenvalues() {
        let a = ComplexMatrix::from_diag(&[-3.0, 1.0]);
        let f = svd(&a).unwrap();
        assert_eq!(f.singulars, vec![3.0, 1.0]);
        assert!((&f.reconstruct() - &a).frobenius_norm() < 1e-15);
    }

    #[test]
    fn zero_matrix_has_unitary_factors() {
        let f = svd(&ComplexMatrix::zeros(3)).unwrap();
        assert_eq!(f.singulars, vec![0.0; 3]);
        let g = f.left.adjoint().matmul(&f.left);
        assert!((&g - &ComplexMatrix::identity(3)).max_abs() < 1e-15);
    }

    #[test]
    fn rank_one_small_singulars_are_accurate() {
        // u v* with |u| = |v| = 1 scaled by 5, plus 1e-9 on a complementary direction
        let a = ComplexMatrix::from_real_rows(&[&[5.0, 0.0, 0.0], &[0.0, 1e-9, 0.0], &[0.0, 0.0, 0.0]])
            .unwrap();
        let f = svd(&a).unwrap();
        assert!((f.singulars[1] - 1e-9).abs() < 1e-20);
        assert_eq!(f.singulars[2], 0.0);
    }
}
