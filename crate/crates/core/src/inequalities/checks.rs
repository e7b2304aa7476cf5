use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::spectra::{trace_product, PairSpectra, Spectral};
use super::{CheckResult, Statement};
use crate::error::{Error, Result};
use crate::functions::{CatalogFn, ConvexFn, MonotoneFn, Parity, PlainFn};
use crate::linalg::{ComplexMatrix, PsdMatrix};
use crate::ncpoly::NcPolynomial;
use crate::orders::{default_tol, dominated_profiles, singular_profile, weakly_majorized_profiles};

fn weak(statement: Statement, lhs: &ComplexMatrix, rhs: &ComplexMatrix, tol_scale: f64) -> Result<CheckResult> {
    let pl = singular_profile(lhs)?;
    let pr = singular_profile(rhs)?;
    let tol = default_tol(pr.ky_fan().total(), tol_scale);
    Ok(CheckResult::from_verdict(statement, weakly_majorized_profiles(&pl, &pr, tol)?))
}

fn dominance(statement: Statement, lhs: &ComplexMatrix, rhs: &ComplexMatrix, tol_scale: f64) -> Result<CheckResult> {
    let pl = singular_profile(lhs)?;
    let pr = singular_profile(rhs)?;
    let tol = default_tol(pr.ky_fan().total(), tol_scale);
    Ok(CheckResult::from_verdict(statement, dominated_profiles(&pl, &pr, tol)?))
}

fn same_dim(a: &PsdMatrix, b: &PsdMatrix) -> Result<()> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            left: a.n(),
            right: b.n(),
        });
    }
    Ok(())
}

fn brick_fn(s: f64) -> Result<impl Fn(f64) -> f64> {
    if !(s >= 0.0 && s.is_finite()) {
        return Err(Error::InvalidParameter(format!("brick parameter s = {s}")));
    }
    Ok(move |t: f64| if s == 0.0 { t } else { t / (s + t) })
}

/// `g(B) − g(A) ≼ g(|B − A|)`.
pub fn check_ando(g: &MonotoneFn, a: &PsdMatrix, b: &PsdMatrix, tol_scale: f64) -> Result<CheckResult> {
    same_dim(a, b)?;
    let sp = PairSpectra::new(a, b)?;
    let lhs = sp.difference(|t| g.value(t))?;
    let rhs = sp.abs_d.apply(|t| g.value(t))?;
    weak(Statement::Ando, &lhs, &rhs, tol_scale)
}

/// `B − A ≪ B ⊕ A`.
pub fn check_diff_dominance(a: &PsdMatrix, b: &PsdMatrix, tol_scale: f64) -> Result<CheckResult> {
    same_dim(a, b)?;
    let lhs = b.matrix() - a.matrix();
    let rhs = b.matrix().direct_sum(a.matrix());
    dominance(Statement::DiffDominance, &lhs, &rhs, tol_scale)
}

/// `f_s(A + D) − f_s(A) ≪ f_s(D)`.
pub fn check_with_d(s: f64, a: &PsdMatrix, d: &PsdMatrix, tol_scale: f64) -> Result<CheckResult> {
    same_dim(a, d)?;
    let f = brick_fn(s)?;
    let a_plus_d = a.add(d);
    let lhs = &a_plus_d.apply(&f)?.into_matrix() - &a.apply(&f)?.into_matrix();
    let rhs = d.apply(&f)?.into_matrix();
    dominance(Statement::WithD, &lhs, &rhs, tol_scale)
}

/// `f_s(B) − f_s(A) ≪ f_s(|B − A|)`.
pub fn check_fsll(s: f64, a: &PsdMatrix, b: &PsdMatrix, tol_scale: f64) -> Result<CheckResult> {
    same_dim(a, b)?;
    let f = brick_fn(s)?;
    let sp = PairSpectra::new(a, b)?;
    let lhs = sp.difference(&f)?;
    let rhs = sp.abs_d.apply(&f)?;
    dominance(Statement::Fsll, &lhs, &rhs, tol_scale)
}

/// Verifies `A_i ≼ g_i(D)` and returns the `g_i(D)`.
fn lemma_inputs(d: &PsdMatrix, gs: &[CatalogFn], xs: &[ComplexMatrix], tol_scale: f64) -> Result<Vec<ComplexMatrix>> {
    if gs.len() != xs.len() {
        return Err(Error::Arity {
            expected: gs.len(),
            actual: xs.len(),
        });
    }
    if gs.is_empty() {
        return Err(Error::InvalidParameter("at least one function is required".into()));
    }
    let sd = Spectral::psd(d)?;
    let mut bounds = Vec::with_capacity(gs.len());
    for (i, (g, x)) in gs.iter().zip(xs).enumerate() {
        if !g.is_nondecreasing_on_half_line() {
            return Err(Error::Precondition(format!("g_{} = {g} is not a function on [0, inf)", i + 1)));
        }
        if x.n() != d.n() {
            return Err(Error::DimensionMismatch {
                left: d.n(),
                right: x.n(),
            });
        }
        let gd = sd.apply(|t| g.value(t))?;
        let pre = weak(Statement::LemmaSum, x, &gd, tol_scale)?;
        if !pre.holds {
            return Err(Error::Precondition(format!(
                "A_{} is not weakly majorized by g_{}(D) (margin {:e} at k = {})",
                i + 1,
                i + 1,
                pre.margin,
                pre.worst_k
            )));
        }
        bounds.push(gd);
    }
    Ok(bounds)
}

/// `Σ A_i ≼ (Σ g_i)(D)` given `A_i ≼ g_i(D)`.
pub fn check_lemma_sum(d: &PsdMatrix, gs: &[CatalogFn], xs: &[ComplexMatrix], tol_scale: f64) -> Result<CheckResult> {
    lemma_inputs(d, gs, xs, tol_scale)?;
    let mut lhs = ComplexMatrix::zeros(d.n());
    for x in xs {
        lhs = &lhs + x;
    }
    let rhs = d.apply(|t| gs.iter().map(|g| g.value(t)).sum())?.into_matrix();
    weak(Statement::LemmaSum, &lhs, &rhs, tol_scale)
}

/// `A_1 ⋯ A_d ≼ (g_1 ⋯ g_d)(D)` given `A_i ≼ g_i(D)`.
pub fn check_lemma_product(d: &PsdMatrix, gs: &[CatalogFn], xs: &[ComplexMatrix], tol_scale: f64) -> Result<CheckResult> {
    lemma_inputs(d, gs, xs, tol_scale)?;
    let lhs = xs[1..].iter().fold(xs[0].clone(), |acc, x| acc.matmul(x));
    let rhs = d.apply(|t| gs.iter().map(|g| g.value(t)).product())?.into_matrix();
    weak(Statement::LemmaProduct, &lhs, &rhs, tol_scale)
}

/// `P(A_1, …, A_d) ≼ |P|(g_1(D), …, g_d(D))` given `A_i ≼ g_i(D)`.
pub fn check_lemma_poly(
    d: &PsdMatrix,
    gs: &[CatalogFn],
    xs: &[ComplexMatrix],
    p: &NcPolynomial,
    tol_scale: f64,
) -> Result<CheckResult> {
    if p.arity() != gs.len() {
        return Err(Error::Arity {
            expected: p.arity(),
            actual: gs.len(),
        });
    }
    let bounds = lemma_inputs(d, gs, xs, tol_scale)?;
    let lhs = p.evaluate(xs, d.n())?;
    let rhs = p.abs_poly().evaluate(&bounds, d.n())?;
    weak(Statement::LemmaPoly, &lhs, &rhs, tol_scale)
}

/// Sign convention for the `g`-differences fed to the main theorem.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// `g_1(B) − g_1(A), g_2(A) − g_2(B), …`: the literal alternation.
    #[default]
    Alternating,
    /// `g_i(B) − g_i(A)` for every `i`.
    Uniform,
}

/// `P(±(g_i(B) − g_i(A)), C_j) ≼ |P|(g_i(|B−A|), h_j(|A−B|))` given
/// `C_j ≼ h_j(|A − B|)`. `P` has arity `d + e` with the `g`-slots first.
#[allow(clippy::too_many_arguments)]
pub fn check_main_theorem(
    p: &NcPolynomial,
    gs: &[MonotoneFn],
    hs: &[PlainFn],
    a: &PsdMatrix,
    b: &PsdMatrix,
    cs: &[ComplexMatrix],
    orientation: Orientation,
    tol_scale: f64,
) -> Result<CheckResult> {
    same_dim(a, b)?;
    if p.arity() != gs.len() + hs.len() {
        return Err(Error::Arity {
            expected: p.arity(),
            actual: gs.len() + hs.len(),
        });
    }
    if cs.len() != hs.len() {
        return Err(Error::Arity {
            expected: hs.len(),
            actual: cs.len(),
        });
    }
    let n = a.n();
    let sp = PairSpectra::new(a, b)?;
    let mut args = Vec::with_capacity(p.arity());
    let mut bounds = Vec::with_capacity(p.arity());
    for (i, g) in gs.iter().enumerate() {
        let diff = sp.difference(|t| g.value(t))?;
        let flip = orientation == Orientation::Alternating && i % 2 == 1;
        args.push(if flip { -&diff } else { diff });
        bounds.push(sp.abs_d.apply(|t| g.value(t))?);
    }
    for (j, (h, c)) in hs.iter().zip(cs).enumerate() {
        if h.parity != Parity::None {
            return Err(Error::Precondition(format!("h_{} = {h} must be a function on [0, inf)", j + 1)));
        }
        let bound = sp.abs_d.apply(|t| h.value(t))?;
        let pre = weak(Statement::MainTheorem, c, &bound, tol_scale)?;
        if !pre.holds {
            return Err(Error::Precondition(format!(
                "C_{} is not weakly majorized by h_{}(|A-B|) (margin {:e})",
                j + 1,
                j + 1,
                pre.margin
            )));
        }
        args.push(c.clone());
        bounds.push(bound);
    }
    let lhs = p.evaluate(&args, n)?;
    let rhs = p.abs_poly().evaluate(&bounds, n)?;
    weak(Statement::MainTheorem, &lhs, &rhs, tol_scale)
}

/// The four displayed consequences of the main theorem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Corollary {
    Product,
    Pair,
    WeightedSum,
    Exp,
}

impl Corollary {
    pub const ALL: [Corollary; 4] = [Corollary::Product, Corollary::Pair, Corollary::WeightedSum, Corollary::Exp];

    pub fn statement(self) -> Statement {
        match self {
            Corollary::Product => Statement::CorProduct,
            Corollary::Pair => Statement::CorPair,
            Corollary::WeightedSum => Statement::CorWeightedSum,
            Corollary::Exp => Statement::CorExp,
        }
    }
}

impl FromStr for Corollary {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "product" | "cor_product" => Ok(Corollary::Product),
            "pair" | "cor_pair" => Ok(Corollary::Pair),
            "weighted_sum" | "cor_weighted_sum" => Ok(Corollary::WeightedSum),
            "exp" | "cor_exp" => Ok(Corollary::Exp),
            other => Err(Error::UnknownTag(other.to_string())),
        }
    }
}

/// Evaluates one corollary family.
///
/// * `Product`: `Π (g_i(B) − g_i(A)) ≼ Π g_i(|B − A|)`
/// * `Pair`: `(A − B)(g_1(A) − g_1(B)) ≼ |A − B| g_1(|A − B|)`
/// * `WeightedSum`: `Σ h_i(|A−B|)(g_i(A) − g_i(B)) ≼ Σ (h_i g_i)(|A − B|)`
/// * `Exp`: `(A − B) exp(g_1(A) − g_1(B)) ≼ (A − B) exp(g_1(|A − B|))`
pub fn check_corollary(
    family: Corollary,
    gs: &[MonotoneFn],
    hs: &[PlainFn],
    a: &PsdMatrix,
    b: &PsdMatrix,
    tol_scale: f64,
) -> Result<CheckResult> {
    same_dim(a, b)?;
    if gs.is_empty() {
        return Err(Error::InvalidParameter("at least one g is required".into()));
    }
    let n = a.n();
    let sp = PairSpectra::new(a, b)?;
    let (lhs, rhs) = match family {
        Corollary::Product => {
            let mut lhs = ComplexMatrix::identity(n);
            for g in gs {
                lhs = lhs.matmul(&sp.difference(|t| g.value(t))?);
            }
            let rhs = sp.abs_d.apply(|t| gs.iter().map(|g| g.value(t)).product())?;
            (lhs, rhs)
        }
        Corollary::Pair => {
            let g = &gs[0];
            let a_minus_b = -sp.diff.matrix();
            let lhs = a_minus_b.matmul(&(-&sp.difference(|t| g.value(t))?));
            let rhs = sp.abs_d.apply(|t| t * g.value(t))?;
            (lhs, rhs)
        }
        Corollary::WeightedSum => {
            if hs.len() != gs.len() {
                return Err(Error::Arity {
                    expected: gs.len(),
                    actual: hs.len(),
                });
            }
            if let Some(h) = hs.iter().find(|h| h.parity != Parity::None) {
                return Err(Error::Precondition(format!("{h} must be a function on [0, inf)")));
            }
            let mut lhs = ComplexMatrix::zeros(n);
            for (g, h) in gs.iter().zip(hs) {
                let weight = sp.abs_d.apply(|t| h.value(t))?;
                let diff = -&sp.difference(|t| g.value(t))?;
                lhs = &lhs + &weight.matmul(&diff);
            }
            let rhs = sp
                .abs_d
                .apply(|t| gs.iter().zip(hs).map(|(g, h)| h.value(t) * g.value(t)).sum())?;
            (lhs, rhs)
        }
        Corollary::Exp => {
            let g = &gs[0];
            let a_minus_b = -sp.diff.matrix();
            let exponent = crate::linalg::HermitianMatrix::new(-&sp.difference(|t| g.value(t))?)?;
            let lhs = a_minus_b.matmul(&Spectral::hermitian(&exponent)?.apply(f64::exp)?);
            let rhs = a_minus_b.matmul(&sp.abs_d.apply(|t| g.value(t).exp())?);
            (lhs, rhs)
        }
    };
    weak(family.statement(), &lhs, &rhs, tol_scale)
}

/// `(h·f)(|B − A|) ≼ h(|B − A|)(f(B) − f(A))` for nonnegative operator convex
/// `f` with `f(0) = 0`; note the direction is reversed relative to Ando.
pub fn check_convex_theorem(f: &ConvexFn, h: &PlainFn, a: &PsdMatrix, b: &PsdMatrix, tol_scale: f64) -> Result<CheckResult> {
    same_dim(a, b)?;
    if h.parity != Parity::None {
        return Err(Error::Precondition(format!("{h} must be a function on [0, inf)")));
    }
    let sp = PairSpectra::new(a, b)?;
    let lhs = sp.abs_d.apply(|t| h.value(t) * f.value(t))?;
    let rhs = sp.abs_d.apply(|t| h.value(t))?.matmul(&sp.difference(|t| f.value(t))?);
    weak(Statement::ConvexTheorem, &lhs, &rhs, tol_scale)
}

fn require_parity(h: &PlainFn, allowed: &[Parity]) -> Result<()> {
    if h.parity == Parity::None {
        return Err(Error::InvalidParameter(format!("{h} lacks a parity tag (odd or even)")));
    }
    if !allowed.contains(&h.parity) {
        return Err(Error::InvalidParameter(format!("{h} must be odd")));
    }
    Ok(())
}

/// `|Tr h(B − A)(g(B) − g(A))| ≤ Tr (h·g)(|B − A|)` for odd or even `h` with
/// `h(0) = 0`, nondecreasing on `[0, ∞)`.
pub fn check_trace_monotone(h: &PlainFn, g: &MonotoneFn, a: &PsdMatrix, b: &PsdMatrix, tol_scale: f64) -> Result<CheckResult> {
    same_dim(a, b)?;
    require_parity(h, &[Parity::Odd, Parity::Even])?;
    if h.value(0.0) != 0.0 {
        return Err(Error::Precondition(format!("{h} must vanish at 0")));
    }
    let sp = PairSpectra::new(a, b)?;
    let hd = sp.d.apply(|t| h.value(t))?;
    let lhs = trace_product(&hd, &sp.difference(|t| g.value(t))?).abs();
    let rhs = sp.abs_d.apply(|t| h.value(t) * g.value(t))?.trace().re;
    Ok(CheckResult::scalar(
        Statement::TraceMonotone,
        rhs - lhs,
        default_tol(rhs.abs(), tol_scale),
    ))
}

/// `Tr h(B − A)(f(B) − f(A)) ≥ Tr (h·f)(|B − A|)` for odd `h` nondecreasing on
/// `[0, ∞)` and nonnegative operator convex `f` with `f(0) = 0`.
pub fn check_trace_convex(h: &PlainFn, f: &ConvexFn, a: &PsdMatrix, b: &PsdMatrix, tol_scale: f64) -> Result<CheckResult> {
    same_dim(a, b)?;
    require_parity(h, &[Parity::Odd])?;
    let sp = PairSpectra::new(a, b)?;
    let hd = sp.d.apply(|t| h.value(t))?;
    let lhs = trace_product(&hd, &sp.difference(|t| f.value(t))?);
    let rhs = sp.abs_d.apply(|t| h.value(t) * f.value(t))?.trace().re;
    Ok(CheckResult::scalar(
        Statement::TraceConvex,
        lhs - rhs,
        default_tol(rhs.abs(), tol_scale),
    ))
}
