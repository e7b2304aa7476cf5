use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::spectra::PairSpectra;
use super::{CheckResult, Statement};
use crate::error::{Error, Result};
use crate::functions::CatalogFn;
use crate::generators::MatrixRng;
use crate::linalg::{ComplexMatrix, HermitianMatrix, PsdMatrix};
use crate::orders::{default_tol, ky_fan_norm};

/// The two norms for which `min{t, 1}` is known to break Ando's inequality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    /// Ky Fan `k = 1`.
    Op,
    /// Ky Fan `k = n`.
    Trace,
}

impl NormKind {
    fn k(self, n: usize) -> usize {
        match self {
            NormKind::Op => 1,
            NormKind::Trace => n,
        }
    }
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NormKind::Op => "op",
            NormKind::Trace => "trace",
        })
    }
}

impl FromStr for NormKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "op" => Ok(NormKind::Op),
            "trace" => Ok(NormKind::Trace),
            other => Err(Error::UnknownTag(other.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Number of random pairs drawn before hill-climbing.
    pub budget: usize,
    pub seed: u64,
    pub n: usize,
    pub hill_rounds: usize,
    /// Random sampling stops once a violation exceeds this value.
    pub stop_at: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            budget: 100_000,
            seed: 0,
            n: 2,
            hill_rounds: 200,
            stop_at: f64::INFINITY,
        }
    }
}

/// Best pair found, with enough data to replay the evaluation exactly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    /// Result with `margin = ‖f(|B−A|)‖ − ‖f(B)−f(A)‖`.
    pub best: CheckResult,
    /// `‖f(B)−f(A)‖ − ‖f(|B−A|)‖`; positive means the inequality fails.
    pub violation: f64,
    /// Whether `violation` exceeds the comparison tolerance.
    pub found: bool,
    pub function: String,
    pub norm: NormKind,
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
    pub samples: usize,
    pub seed: u64,
}

/// `‖f(B)−f(A)‖` against `‖f(|B−A|)‖` in the chosen Ky Fan norm.
pub fn evaluate_violation(f: &CatalogFn, norm: NormKind, a: &PsdMatrix, b: &PsdMatrix) -> Result<CheckResult> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            left: a.n(),
            right: b.n(),
        });
    }
    let n = a.n();
    let sp = PairSpectra::new(a, b)?;
    let lhs = ky_fan_norm(&sp.difference(|t| f.value(t))?, norm.k(n))?;
    let rhs = ky_fan_norm(&sp.abs_d.apply(|t| f.value(t))?, norm.k(n))?;
    let mut r = CheckResult::scalar(Statement::CxSearch, rhs - lhs, default_tol(rhs, 1.0));
    r.worst_k = norm.k(n);
    Ok(r)
}

/// Spectrum log-uniform in `[0.05, 20]`, so both sides of the kink at 1 are hit.
fn draw(rng: &mut MatrixRng, n: usize) -> PsdMatrix {
    let spectrum: Vec<f64> = (0..n).map(|_| rng.log_uniform(0.05, 20.0)).collect();
    PsdMatrix::project(&rng.with_spectrum(&spectrum)).expect("Hermitian input is decomposable")
}

/// Hermitian coordinates of an `n × n` matrix: real parts of the upper
/// triangle, imaginary parts of the strict upper triangle.
fn coordinates(n: usize) -> Vec<(usize, usize, bool)> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i..n {
            out.push((i, j, false));
            if j > i {
                out.push((i, j, true));
            }
        }
    }
    out
}

fn perturb(m: &PsdMatrix, (i, j, imag): (usize, usize, bool), step: f64) -> Result<PsdMatrix> {
    let mut x = m.matrix().clone();
    let dz = if imag { Complex64::new(0.0, step) } else { Complex64::new(step, 0.0) };
    x.set(i, j, x.get(i, j) + dz);
    if i != j {
        x.set(j, i, x.get(j, i) + dz.conj());
    }
    PsdMatrix::project(&HermitianMatrix::new(x)?)
}

fn violation(f: &CatalogFn, norm: NormKind, a: &PsdMatrix, b: &PsdMatrix) -> f64 {
    evaluate_violation(f, norm, a, b).map_or(f64::NEG_INFINITY, |r| -r.margin)
}

/// Random sampling followed by coordinate hill-climbing on the best pair.
///
/// Each round tries `±step` on every Hermitian coordinate of `A` and `B`,
/// projecting back onto the PSD cone and keeping strict improvements. A
/// round without improvement halves the step.
pub fn search_counterexample(f: &CatalogFn, norm: NormKind, cfg: &SearchConfig) -> Result<SearchOutcome> {
    if cfg.n == 0 || cfg.n > 16 {
        return Err(Error::InvalidParameter(format!("search dimension {} outside 1..=16", cfg.n)));
    }
    if cfg.budget == 0 {
        return Err(Error::InvalidParameter("search budget must be positive".into()));
    }
    let n = cfg.n;
    let mut rng = MatrixRng::new(cfg.seed);
    let mut best = (f64::NEG_INFINITY, PsdMatrix::zeros(n), PsdMatrix::zeros(n));
    let mut samples = 0;
    while samples < cfg.budget {
        let a = draw(&mut rng, n);
        let b = draw(&mut rng, n);
        samples += 1;
        let v = violation(f, norm, &a, &b);
        if v > best.0 {
            best = (v, a, b);
            if v > cfg.stop_at {
                break;
            }
        }
    }

    let coords = coordinates(n);
    let (mut v_best, mut a, mut b) = best;
    let mut step = 0.25 * (a.hermitian().trace() + b.hermitian().trace()).max(1.0) / n as f64;
    for _ in 0..cfg.hill_rounds {
        let mut improved = false;
        for &c in &coords {
            for sign in [1.0, -1.0] {
                let ta = perturb(&a, c, sign * step)?;
                let v = violation(f, norm, &ta, &b);
                if v > v_best {
                    v_best = v;
                    a = ta;
                    improved = true;
                }
                let tb = perturb(&b, c, sign * step)?;
                let v = violation(f, norm, &a, &tb);
                if v > v_best {
                    v_best = v;
                    b = tb;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
            if step < 1e-14 {
                break;
            }
        }
    }

    let result = evaluate_violation(f, norm, &a, &b)?;
    Ok(SearchOutcome {
        violation: -result.margin,
        found: !result.holds,
        best: result,
        function: f.to_string(),
        norm,
        a: a.into_hermitian().into_matrix(),
        b: b.into_hermitian().into_matrix(),
        samples,
        seed: cfg.seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{MonotoneFn, PlainFn};

    fn quick(budget: usize, seed: u64) -> SearchConfig {
        SearchConfig {
            budget,
            seed,
            n: 2,
            hill_rounds: 40,
            stop_at: f64::INFINITY,
        }
    }

    #[test]
    fn min1_breaks_operator_norm() {
        let f = CatalogFn::from(PlainFn::min1());
        let out = search_counterexample(&f, NormKind::Op, &quick(2000, 1)).unwrap();
        assert!(out.found);
        assert!(out.violation > 1e-3, "violation {}", out.violation);
    }

    #[test]
    fn brick_has_no_violation() {
        let f = CatalogFn::from(MonotoneFn::brick(1.0).unwrap());
        let out = search_counterexample(&f, NormKind::Op, &quick(500, 2)).unwrap();
        assert!(!out.found);
        assert!(out.violation <= out.best.tol);
    }

    #[test]
    fn replay_is_bit_exact() {
        let f = CatalogFn::from(PlainFn::min1());
        let out = search_counterexample(&f, NormKind::Trace, &quick(300, 3)).unwrap();
        let json = serde_json::to_string(&out).unwrap();
        let back: SearchOutcome = serde_json::from_str(&json).unwrap();
        let a = PsdMatrix::new(HermitianMatrix::new(back.a).unwrap()).unwrap();
        let b = PsdMatrix::new(HermitianMatrix::new(back.b).unwrap()).unwrap();
        let r = evaluate_violation(&f, back.norm, &a, &b).unwrap();
        assert_eq!(r.margin.to_bits(), out.best.margin.to_bits());
    }

    #[test]
    fn norm_tags() {
        assert_eq!("op".parse::<NormKind>().unwrap(), NormKind::Op);
        assert_eq!(NormKind::Trace.to_string(), "trace");
        assert!("fro".parse::<NormKind>().is_err());
    }
}
