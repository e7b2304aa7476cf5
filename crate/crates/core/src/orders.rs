//! The three matrix comparisons: Loewner `≤`, weak majorization `≼` decided
//! through Ky Fan norms, and entrywise singular-value dominance `≪`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, svd, ComplexMatrix, HermitianMatrix};

/// Relative factor of the default comparison tolerance.
pub const DEFAULT_REL_TOL: f64 = 1e-8;

/// Singular values in decreasing order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingularProfile {
    values: Vec<f64>,
}

impl SingularProfile {
    /// Sorts the input descending; rejects negative or non-finite values.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if let Some(&bad) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidParameter(format!("singular value {bad}")));
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn ky_fan(&self) -> KyFanProfile {
        let mut acc = 0.0;
        KyFanProfile {
            partial_sums: self
                .values
                .iter()
                .map(|s| {
                    acc += s;
                    acc
                })
                .collect(),
        }
    }

    /// Profile of a direct sum: the merged multiset.
    pub fn merge(&self, other: &Self) -> Self {
        let mut v = self.values.clone();
        v.extend_from_slice(&other.values);
        v.sort_by(|a, b| b.total_cmp(a));
        Self { values: v }
    }
}

/// Partial sums `‖A‖_(k) = s_1 + … + s_k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KyFanProfile {
    pub partial_sums: Vec<f64>,
}

impl KyFanProfile {
    /// Nondecreasing with nonincreasing increments, up to `slack`.
    pub fn is_concave(&self, slack: f64) -> bool {
        let mut prev_sum = 0.0;
        let mut prev_inc = f64::INFINITY;
        for &s in &self.partial_sums {
            let inc = s - prev_sum;
            if inc < -slack || inc > prev_inc + slack {
                return false;
            }
            prev_sum = s;
            prev_inc = inc;
        }
        true
    }

    /// `‖·‖_(n)`, the trace norm; 0 for the empty profile.
    pub fn total(&self) -> f64 {
        self.partial_sums.last().copied().unwrap_or(0.0)
    }
}

/// Outcome of a one-sided comparison `LHS ≤ RHS + tol` across indices.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderVerdict {
    pub holds: bool,
    /// 1-based index attaining the margin (0 when there is nothing to compare).
    pub worst_index: usize,
    /// `min_k (RHS_k − LHS_k)` before tolerance.
    pub margin: f64,
    pub tol: f64,
}

impl OrderVerdict {
    pub(crate) fn from_pairs(lhs: &[f64], rhs: &[f64], tol: f64) -> Self {
        let mut margin = f64::INFINITY;
        let mut worst_index = 0;
        for (k, (l, r)) in lhs.iter().zip(rhs).enumerate() {
            let m = r - l;
            if m < margin {
                margin = m;
                worst_index = k + 1;
            }
        }
        if worst_index == 0 {
            margin = 0.0;
        }
        Self {
            holds: margin >= -tol,
            worst_index,
            margin,
            tol,
        }
    }

    /// Fails only beyond tolerance but with a negative raw margin.
    pub fn near_miss(&self) -> bool {
        self.holds && self.margin < 0.0
    }
}

/// `1e-8 · max(1, ‖B‖_(n))`, scaled.
pub fn default_tol(rhs_trace_norm: f64, scale: f64) -> f64 {
    DEFAULT_REL_TOL * scale * rhs_trace_norm.max(1.0)
}

pub fn singular_profile(a: &ComplexMatrix) -> Result<SingularProfile> {
    Ok(SingularProfile {
        values: svd(a)?.singulars,
    })
}

/// Sum of the `k` largest singular values, `1 ≤ k ≤ n`.
pub fn ky_fan_norm(a: &ComplexMatrix, k: usize) -> Result<f64> {
    let n = a.n();
    if k == 0 || k > n {
        return Err(Error::IndexOutOfRange { index: k, max: n });
    }
    let p = singular_profile(a)?;
    Ok(p.values[..k].iter().sum())
}

pub fn weakly_majorized_profiles(a: &SingularProfile, b: &SingularProfile, tol: f64) -> Result<OrderVerdict> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(OrderVerdict::from_pairs(
        &a.ky_fan().partial_sums,
        &b.ky_fan().partial_sums,
        tol,
    ))
}

/// `A ≼ B`: every Ky Fan norm of `A` is at most that of `B` (plus `tol`).
pub fn weakly_majorized(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> Result<OrderVerdict> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            left: a.n(),
            right: b.n(),
        });
    }
    weakly_majorized_profiles(&singular_profile(a)?, &singular_profile(b)?, tol)
}

pub fn dominated_profiles(a: &SingularProfile, b: &SingularProfile, tol: f64) -> Result<OrderVerdict> {
    if a.len() > b.len() {
        return Err(Error::DimensionMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(OrderVerdict::from_pairs(&a.values, &b.values[..a.len()], tol))
}

/// `A ≪ B`: `s_k(A) ≤ s_k(B) + tol` for `k ≤ dim A`; `B` may be larger.
pub fn dominated(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> Result<OrderVerdict> {
    if a.n() > b.n() {
        return Err(Error::DimensionMismatch {
            left: a.n(),
            right: b.n(),
        });
    }
    dominated_profiles(&singular_profile(a)?, &singular_profile(b)?, tol)
}

/// `A ≤ B` in the Loewner order: `λ_min(B − A) ≥ −tol`.
pub fn loewner_leq(a: &HermitianMatrix, b: &HermitianMatrix, tol: f64) -> Result<bool> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            left: a.n(),
            right: b.n(),
        });
    }
    let eig = eig_hermitian(&b.sub(a))?;
    Ok(eig.eigenvalues.last().map_or(true, |&l| l >= -tol))
}
