//! One executable predicate per inequality.
//!
//! Every check evaluates both sides numerically and reports a
//! [`CheckResult`] whose margin is `min_k (RHS_k − LHS_k)` over the compared
//! indices. Statements of the form `X ≪ Y` are decided with entrywise
//! singular-value dominance, never only with Ky Fan sums.

mod checks;
mod search;
mod spectra;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use checks::{
    check_ando, check_convex_theorem, check_corollary, check_diff_dominance, check_fsll, check_lemma_poly,
    check_lemma_product, check_lemma_sum, check_main_theorem, check_trace_convex, check_trace_monotone,
    check_with_d, Corollary, Orientation,
};
pub use search::{evaluate_violation, search_counterexample, NormKind, SearchConfig, SearchOutcome};

use crate::error::Error;
use crate::orders::OrderVerdict;

/// Stable identifiers used by the CLI and reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Statement {
    #[serde(rename = "ando")]
    Ando,
    #[serde(rename = "diff_dominance")]
    DiffDominance,
    #[serde(rename = "withD")]
    WithD,
    #[serde(rename = "fsll")]
    Fsll,
    #[serde(rename = "lemma_sum")]
    LemmaSum,
    #[serde(rename = "lemma_product")]
    LemmaProduct,
    #[serde(rename = "lemma_poly")]
    LemmaPoly,
    #[serde(rename = "main_theorem")]
    MainTheorem,
    #[serde(rename = "cor_product")]
    CorProduct,
    #[serde(rename = "cor_pair")]
    CorPair,
    #[serde(rename = "cor_weighted_sum")]
    CorWeightedSum,
    #[serde(rename = "cor_exp")]
    CorExp,
    #[serde(rename = "convex_theorem")]
    ConvexTheorem,
    #[serde(rename = "trace_monotone")]
    TraceMonotone,
    #[serde(rename = "trace_convex")]
    TraceConvex,
    #[serde(rename = "cx_search")]
    CxSearch,
}

impl Statement {
    pub const ALL: [Statement; 16] = [
        Statement::Ando,
        Statement::DiffDominance,
        Statement::WithD,
        Statement::Fsll,
        Statement::LemmaSum,
        Statement::LemmaProduct,
        Statement::LemmaPoly,
        Statement::MainTheorem,
        Statement::CorProduct,
        Statement::CorPair,
        Statement::CorWeightedSum,
        Statement::CorExp,
        Statement::ConvexTheorem,
        Statement::TraceMonotone,
        Statement::TraceConvex,
        Statement::CxSearch,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Statement::Ando => "ando",
            Statement::DiffDominance => "diff_dominance",
            Statement::WithD => "withD",
            Statement::Fsll => "fsll",
            Statement::LemmaSum => "lemma_sum",
            Statement::LemmaProduct => "lemma_product",
            Statement::LemmaPoly => "lemma_poly",
            Statement::MainTheorem => "main_theorem",
            Statement::CorProduct => "cor_product",
            Statement::CorPair => "cor_pair",
            Statement::CorWeightedSum => "cor_weighted_sum",
            Statement::CorExp => "cor_exp",
            Statement::ConvexTheorem => "convex_theorem",
            Statement::TraceMonotone => "trace_monotone",
            Statement::TraceConvex => "trace_convex",
            Statement::CxSearch => "cx_search",
        }
    }

    /// One-line human description.
    pub fn description(self) -> &'static str {
        match self {
            Statement::Ando => "||g(B)-g(A)|| <= ||g(|B-A|)||, g operator monotone",
            Statement::DiffDominance => "B-A << B (+) A for PSD A, B",
            Statement::WithD => "f_s(A+D)-f_s(A) << f_s(D)",
            Statement::Fsll => "f_s(B)-f_s(A) << f_s(|B-A|)",
            Statement::LemmaSum => "A_i <= g_i(D) (weakly) => sum A_i <= (sum g_i)(D)",
            Statement::LemmaProduct => "A_i <= g_i(D) (weakly) => prod A_i <= (prod g_i)(D)",
            Statement::LemmaPoly => "A_i <= g_i(D) (weakly) => P(A) <= |P|(g(D))",
            Statement::MainTheorem => "P(g_i(B)-g_i(A), C_j) <= |P|(g_i(|B-A|), h_j(|B-A|))",
            Statement::CorProduct => "||prod (g_i(B)-g_i(A))|| <= ||prod g_i(|B-A|)||",
            Statement::CorPair => "||(A-B)(g(A)-g(B))|| <= || |A-B| g(|A-B|) ||",
            Statement::CorWeightedSum => "||sum h_i(|A-B|)(g_i(A)-g_i(B))|| <= ||sum h_i g_i(|A-B|)||",
            Statement::CorExp => "||(A-B) exp(g(A)-g(B))|| <= ||(A-B) exp(g(|A-B|))||",
            Statement::ConvexTheorem => "hf(|B-A|) <= h(|B-A|)(f(B)-f(A)) weakly, f operator convex",
            Statement::TraceMonotone => "|Tr h(B-A)(g(B)-g(A))| <= Tr hg(|B-A|), h odd/even",
            Statement::TraceConvex => "Tr h(B-A)(f(B)-f(A)) >= Tr hf(|B-A|), h odd",
            Statement::CxSearch => "search for violations of the Ando inequality (min{t,1} fails)",
        }
    }

    /// Whether a violation counts as a failure (false only for the search).
    pub fn expected_to_hold(self) -> bool {
        self != Statement::CxSearch
    }

    /// Statements decided by entrywise dominance rather than Ky Fan sums.
    pub fn uses_dominance(self) -> bool {
        matches!(self, Statement::DiffDominance | Statement::WithD | Statement::Fsll)
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Statement {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Statement::ALL
            .into_iter()
            .find(|st| st.tag() == s)
            .ok_or_else(|| Error::UnknownTag(s.to_string()))
    }
}

/// Verdict of one statement on one input.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub statement: Statement,
    pub holds: bool,
    /// `min (RHS − LHS)` over compared indices, before tolerance.
    pub margin: f64,
    /// 1-based index attaining the margin; 0 for scalar (trace) comparisons.
    pub worst_k: usize,
    pub tol: f64,
}

impl CheckResult {
    pub(crate) fn from_verdict(statement: Statement, v: OrderVerdict) -> Self {
        Self {
            statement,
            holds: v.holds,
            margin: v.margin,
            worst_k: v.worst_index,
            tol: v.tol,
        }
    }

    pub(crate) fn scalar(statement: Statement, margin: f64, tol: f64) -> Self {
        Self {
            statement,
            holds: margin >= -tol,
            margin,
            worst_k: 0,
            tol,
        }
    }

    /// Holds, but only thanks to the tolerance.
    pub fn near_miss(&self) -> bool {
        self.holds && self.margin < 0.0
    }
}
