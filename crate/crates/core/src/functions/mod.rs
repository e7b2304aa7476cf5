//! Scalar function catalogues in the roles the inequalities assign them:
//! operator monotone `g` with integral representations over the bricks
//! `f_s(t) = t/(s+t)`, nonnegative operator convex `f` with `f(0) = 0`, and
//! plain nondecreasing `h`.

mod catalog;
mod parse;
mod quadrature;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use catalog::{
    BrickFn, ConvexFn, IntegralRep, MonotoneFn, MonotoneKind, Parity, PlainFn, PlainKind, REP_MIN_NODES,
    REP_WINDOW_HI, REP_WINDOW_LO,
};
pub use parse::{parse_convex, parse_function, parse_monotone, parse_plain};
pub use quadrature::{gauss_legendre, gauss_legendre_on};

use crate::error::{Error, Result};
use crate::generators::MatrixRng;
use crate::linalg::{apply_fn, eig_hermitian, Domain, HermitianMatrix, PsdMatrix};
use crate::orders::{default_tol, loewner_leq};

/// Any catalogued scalar function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "role", rename_all = "snake_case")]
pub enum CatalogFn {
    Monotone(MonotoneFn),
    Convex(ConvexFn),
    Plain(PlainFn),
}

impl CatalogFn {
    pub fn domain(&self) -> Domain {
        match self {
            CatalogFn::Plain(h) => h.domain(),
            _ => Domain::NonNegative,
        }
    }

    /// Unchecked closed-form value.
    #[inline]
    pub fn value(&self, t: f64) -> f64 {
        match self {
            CatalogFn::Monotone(g) => g.value(t),
            CatalogFn::Convex(f) => f.value(t),
            CatalogFn::Plain(h) => h.value(t),
        }
    }

    /// Nonnegative and nondecreasing on `[0, ∞)` with no parity extension:
    /// the functions admissible as `g_i` in the sum/product lemmas.
    pub fn is_nondecreasing_on_half_line(&self) -> bool {
        !matches!(self, CatalogFn::Plain(h) if h.parity != Parity::None)
    }
}

impl fmt::Display for CatalogFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogFn::Monotone(g) => g.fmt(f),
            CatalogFn::Convex(c) => c.fmt(f),
            CatalogFn::Plain(h) => h.fmt(f),
        }
    }
}

impl From<MonotoneFn> for CatalogFn {
    fn from(g: MonotoneFn) -> Self {
        CatalogFn::Monotone(g)
    }
}

impl From<ConvexFn> for CatalogFn {
    fn from(f: ConvexFn) -> Self {
        CatalogFn::Convex(f)
    }
}

impl From<PlainFn> for CatalogFn {
    fn from(h: PlainFn) -> Self {
        CatalogFn::Plain(h)
    }
}

/// Closed-form value at `t`, checked against the function's domain.
pub fn eval_scalar(f: &CatalogFn, t: f64) -> Result<f64> {
    let ok = match f.domain() {
        Domain::NonNegative => t >= 0.0,
        Domain::Real => t.is_finite(),
    };
    if !ok || t.is_nan() {
        return Err(Error::Domain {
            function: f.to_string(),
            value: t,
            domain: f.domain().label(),
        });
    }
    Ok(f.value(t))
}

/// Value at `t ≥ 0` through the integral representation:
/// `g(0) + ∫ f_s(t) dμ(s)` for monotone entries and
/// `βt + γt² + ∫ t f_s(t) dμ(s)` for convex ones.
pub fn eval_via_representation(f: &CatalogFn, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::Domain {
            function: f.to_string(),
            value: t,
            domain: Domain::NonNegative.label(),
        });
    }
    match f {
        CatalogFn::Monotone(g) => Ok(g.offset + g.representation().integrate_bricks(t)),
        CatalogFn::Convex(c) => {
            Ok(c.beta() * t + c.gamma() * t * t + t * c.representation().integrate_bricks(t))
        }
        CatalogFn::Plain(_) => Err(Error::MissingRepresentation(f.to_string())),
    }
}

/// `f(A)` through the closed-form scalar, never the quadrature.
pub fn eval_matrix(f: &CatalogFn, a: &HermitianMatrix) -> Result<HermitianMatrix> {
    apply_fn(a, f.domain(), |t| f.value(t)).map_err(|e| match e {
        Error::Domain { value, domain, .. } => Error::Domain {
            function: f.to_string(),
            value,
            domain,
        },
        other => other,
    })
}

/// Tally of a randomized Loewner-monotonicity spot check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub function: String,
    pub trials: usize,
    pub violations: usize,
    /// Smallest `λ_min(g(B) − g(A))` seen.
    pub worst_margin: f64,
}

/// `A` with spectrum in `[lo, 2.5]`, `B = A + δ·P` with `δ` log-uniform in `[0.01, 2]`.
fn loewner_pair(rng: &mut MatrixRng, n: usize, lo: f64) -> Result<(PsdMatrix, PsdMatrix)> {
    let spectrum: Vec<f64> = (0..n).map(|_| rng.uniform_in(lo, 2.5)).collect();
    let a = PsdMatrix::new(rng.with_spectrum(&spectrum))?;
    let delta = rng.log_uniform(1e-2, 2.0);
    let p: Vec<f64> = (0..n).map(|_| rng.uniform()).collect();
    let bump = PsdMatrix::new(rng.with_spectrum(&p))?.scale(delta)?;
    let b = a.add(&bump);
    Ok((a, b))
}

fn monotone_spot(
    f: &dyn Fn(f64) -> f64,
    label: String,
    dims: &dyn Fn(usize) -> usize,
    trials: usize,
    seed: u64,
    lo: f64,
) -> Result<MonotonicityReport> {
    let mut rng = MatrixRng::new(seed);
    let mut violations = 0;
    let mut worst = f64::INFINITY;
    for trial in 0..trials {
        let n = dims(trial);
        let (a, b) = loewner_pair(&mut rng, n, lo)?;
        let fa = a.apply(f)?;
        let fb = b.apply(f)?;
        let diff = fb.sub(&fa);
        let tol = default_tol(fb.trace().abs(), 1.0);
        let low = eig_hermitian(&diff)?.eigenvalues.last().copied().unwrap_or(0.0);
        worst = worst.min(low);
        if !loewner_leq(&fa, &fb, tol)? {
            violations += 1;
        }
    }
    Ok(MonotonicityReport {
        function: label,
        trials,
        violations,
        worst_margin: if trials == 0 { 0.0 } else { worst },
    })
}

/// Draws PSD pairs `A ≤ B` and counts `g(A) ≰ g(B)`.
///
/// Any catalogue entry may be checked; `min1` fails, which is why it is only
/// catalogued as a plain function.
pub fn check_matrix_monotone(g: &CatalogFn, n: usize, trials: usize, seed: u64) -> Result<MonotonicityReport> {
    if n == 0 || n > 16 {
        return Err(Error::InvalidParameter(format!("spot check dimension {n} outside 1..=16")));
    }
    monotone_spot(&|t| g.value(t), g.to_string(), &|_| n, trials, seed, 0.0)
}

/// Spot-checks matrix monotonicity of `f(t)/t` on strictly positive pairs,
/// dimensions cycling through 2..=6.
pub fn monotone_quotient_check(f: &ConvexFn, trials: usize, seed: u64) -> Result<MonotonicityReport> {
    let g = f.quotient();
    monotone_spot(
        &|t| g.value(t),
        format!("{f} / t = {g}"),
        &|trial| 2 + trial % 5,
        trials,
        seed,
        0.05,
    )
}
