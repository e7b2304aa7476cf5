//! Deterministic trial runner, reports and witness replay.
//!
//! A suite is a list of cells `statement × variant × n`, each run for a fixed
//! number of trials. Trial `i` (counted globally in plan order) draws its
//! inputs from `derive_seed(master_seed, i)`, so the report does not depend
//! on how many worker threads execute it.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functions::{
    parse_convex, parse_function, parse_monotone, parse_plain, CatalogFn, ConvexFn, MonotoneFn, MonotoneKind, Parity,
    PlainFn,
};
use crate::generators::{contraction_congruence, derive_seed, random_pair, EnsembleKind, EnsembleSpec, MatrixRng};
use crate::inequalities::{
    check_ando, check_convex_theorem, check_corollary, check_diff_dominance, check_fsll, check_lemma_poly,
    check_lemma_product, check_lemma_sum, check_main_theorem, check_trace_convex, check_trace_monotone,
    check_with_d, evaluate_violation, search_counterexample, CheckResult, Corollary, NormKind, Orientation,
    SearchConfig, Statement,
};
use crate::linalg::{abs_hermitian, ComplexMatrix, HermitianMatrix, PsdMatrix};
use crate::ncpoly::random_poly;
use crate::orders::singular_profile;

pub const SCHEMA_VERSION: u32 = 1;
pub const MAX_SUITE_DIM: usize = 32;
/// Fraction of non-converged trials above which a run exits with status 3.
pub const NON_CONVERGENCE_LIMIT: f64 = 1e-3;
/// Counterexample searches in a suite only run for `n` up to this size.
pub const MAX_SEARCH_DIM: usize = 4;
pub const BRICK_PARAMETERS: [f64; 4] = [0.0, 0.1, 1.0, 10.0];

const POLY_DEGREE: usize = 3;
const POLY_TERMS: usize = 8;
const SUITE_HILL_ROUNDS: usize = 20;

/// Inclusive dimension range, written `a..b` or `a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimRange {
    pub lo: usize,
    pub hi: usize,
}

impl DimRange {
    pub fn iter(self) -> impl Iterator<Item = usize> {
        self.lo..=self.hi
    }
}

impl fmt::Display for DimRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

impl FromStr for DimRange {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let num = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad dimension range '{s}'")))
        };
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
            None => {
                let n = num(s)?;
                (n, n)
            }
        };
        Ok(DimRange { lo, hi })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub statements: Vec<Statement>,
    pub dims: DimRange,
    pub trials_per_cell: usize,
    pub master_seed: u64,
    pub tol_scale: f64,
    /// Catalogue entries whose name equals or starts with `filter:`.
    pub function_filters: Option<Vec<String>>,
    /// Random pairs per counterexample search.
    pub search_budget: usize,
    /// Worker threads; 0 lets the pool decide. Not part of the report.
    #[serde(skip)]
    pub jobs: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            statements: Statement::ALL.to_vec(),
            dims: DimRange { lo: 2, hi: 6 },
            trials_per_cell: 20,
            master_seed: 42,
            tol_scale: 1.0,
            function_filters: None,
            search_budget: 2000,
            jobs: 0,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials_per_cell == 0 {
            return Err(Error::InvalidParameter("trials per cell must be >= 1".into()));
        }
        if self.dims.lo == 0 || self.dims.hi > MAX_SUITE_DIM || self.dims.lo > self.dims.hi {
            return Err(Error::InvalidParameter(format!(
                "dimension range {} must lie within 1..{MAX_SUITE_DIM}",
                self.dims
            )));
        }
        if !(self.tol_scale > 0.0 && self.tol_scale.is_finite()) {
            return Err(Error::InvalidParameter(format!("tolerance scale {}", self.tol_scale)));
        }
        if self.statements.is_empty() {
            return Err(Error::InvalidParameter("no statements selected".into()));
        }
        if self.search_budget == 0 {
            return Err(Error::InvalidParameter("search budget must be >= 1".into()));
        }
        Ok(())
    }

    fn admits(&self, name: &str) -> bool {
        match &self.function_filters {
            None => true,
            Some(filters) => filters
                .iter()
                .any(|f| name == f || name.strip_prefix(f.as_str()).is_some_and(|r| r.starts_with(':'))),
        }
    }
}

/// Everything besides the statement and function names needed to replay a trial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputsDigest {
    /// Global trial index within the run.
    pub index: u64,
    pub seed: u64,
    pub ensemble: EnsembleSpec,
    /// Number of leading `g` functions when the list mixes roles.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation: Option<Orientation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm: Option<NormKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub statement: Statement,
    pub n: usize,
    pub functions: Vec<String>,
    /// Absent when the trial failed with an error.
    pub margin: Option<f64>,
    pub holds: bool,
    pub worst_k: usize,
    pub tol: f64,
    pub near_miss: bool,
    pub inputs_digest: InputsDigest,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default)]
    pub no_convergence: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatementSummary {
    pub statement: Statement,
    pub expected_to_hold: bool,
    pub trials: usize,
    pub passes: usize,
    pub violations: usize,
    pub errors: usize,
    pub near_misses: usize,
    pub min_margin: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool: String,
    pub version: String,
    pub config: SuiteConfig,
    pub records: Vec<TrialRecord>,
    pub summary: Vec<StatementSummary>,
    pub wall_time_secs: f64,
}

impl Report {
    pub fn non_converged(&self) -> usize {
        self.records.iter().filter(|r| r.no_convergence).count()
    }

    /// 0 when every expected inequality held, 1 on a violation or an
    /// unexpected error, 3 when too many eigensolves failed to converge.
    pub fn exit_status(&self) -> i32 {
        let total = self.records.len().max(1) as f64;
        if self.non_converged() as f64 / total > NON_CONVERGENCE_LIMIT {
            return 3;
        }
        let failed = self.records.iter().any(|r| {
            r.statement.expected_to_hold() && !r.holds && !r.no_convergence
        });
        i32::from(failed)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let r: Report = serde_json::from_str(text)?;
        if r.schema_version != SCHEMA_VERSION {
            return Err(Error::Parse(format!("unsupported schema version {}", r.schema_version)));
        }
        Ok(r)
    }

    /// One row per trial with the JSON record fields flattened.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for r in &self.records {
            w.serialize(CsvRow::from(r)).map_err(|e| Error::Io(e.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Serialize)]
struct CsvRow<'a> {
    statement: &'a str,
    n: usize,
    functions: String,
    margin: Option<f64>,
    holds: bool,
    worst_k: usize,
    tol: f64,
    near_miss: bool,
    index: u64,
    seed: u64,
    ensemble: EnsembleKind,
    error: Option<&'a str>,
}

impl<'a> From<&'a TrialRecord> for CsvRow<'a> {
    fn from(r: &'a TrialRecord) -> Self {
        CsvRow {
            statement: r.statement.tag(),
            n: r.n,
            functions: r.functions.join(";"),
            margin: r.margin,
            holds: r.holds,
            worst_k: r.worst_k,
            tol: r.tol,
            near_miss: r.near_miss,
            index: r.inputs_digest.index,
            seed: r.inputs_digest.seed,
            ensemble: r.inputs_digest.ensemble.kind,
            error: r.error.as_deref(),
        }
    }
}

/// A planned trial: statement, function names and input digest.
#[derive(Clone, Debug)]
struct TrialPlan {
    statement: Statement,
    functions: Vec<String>,
    digest: InputsDigest,
}

struct Pools {
    monotone: Vec<MonotoneFn>,
    convex: Vec<ConvexFn>,
    plain: Vec<PlainFn>,
    parity: Vec<PlainFn>,
    bricks: Vec<MonotoneFn>,
    lemma: Vec<CatalogFn>,
    search: Vec<CatalogFn>,
}

impl Pools {
    fn new(cfg: &SuiteConfig) -> Self {
        fn keep<T: fmt::Display>(cfg: &SuiteConfig, v: Vec<T>) -> Vec<T> {
            v.into_iter().filter(|f| cfg.admits(&f.to_string())).collect()
        }
        let monotone = keep(cfg, MonotoneFn::catalogue());
        let convex = keep(cfg, ConvexFn::catalogue());
        let plain = keep(cfg, PlainFn::catalogue());
        let lemma = monotone
            .iter()
            .cloned()
            .map(CatalogFn::from)
            .chain(convex.iter().cloned().map(CatalogFn::from))
            .chain(plain.iter().cloned().map(CatalogFn::from))
            .collect();
        let search = if cfg.function_filters.is_some() {
            monotone
                .iter()
                .cloned()
                .map(CatalogFn::from)
                .chain(plain.iter().cloned().map(CatalogFn::from))
                .collect()
        } else {
            vec![CatalogFn::from(PlainFn::min1())]
        };
        Self {
            monotone,
            convex,
            plain,
            parity: keep(cfg, PlainFn::parity_catalogue()),
            bricks: keep(
                cfg,
                BRICK_PARAMETERS.iter().map(|&s| MonotoneFn::brick(s).unwrap()).collect(),
            ),
            lemma,
            search,
        }
    }
}

fn names<T: fmt::Display>(fs: &[T]) -> Vec<String> {
    fs.iter().map(ToString::to_string).collect()
}

fn pick<'a, T>(rng: &mut MatrixRng, pool: &'a [T], count: usize) -> Vec<&'a T> {
    (0..count).map(|_| &pool[rng.index(pool.len())]).collect()
}

/// Draws the function names (and `g` count) for a cell's `k`-th trial.
type Draw<'a> = &'a dyn Fn(&mut MatrixRng, usize) -> (Vec<String>, Option<usize>);

enum Variant<'a> {
    Fixed(Vec<String>),
    Drawn(Draw<'a>),
}

fn plan(cfg: &SuiteConfig) -> Vec<TrialPlan> {
    let pools = Pools::new(cfg);
    let mut plans = Vec::new();
    let mut index = 0u64;

    let lemma_draw = |rng: &mut MatrixRng, _k: usize| {
        let d = 1 + rng.index(3);
        (names(&pick(rng, &pools.lemma, d)), None)
    };
    let main_draw = |rng: &mut MatrixRng, _k: usize| {
        let d = 1 + rng.index(2);
        let e = rng.index(3);
        let mut fs = names(&pick(rng, &pools.monotone, d));
        fs.extend(names(&pick(rng, &pools.plain, e)));
        (fs, Some(d))
    };
    let product_draw = |rng: &mut MatrixRng, _k: usize| {
        let d = 1 + rng.index(3);
        (names(&pick(rng, &pools.monotone, d)), None)
    };
    let weighted_draw = |rng: &mut MatrixRng, _k: usize| {
        let d = 1 + rng.index(3);
        let mut fs = names(&pick(rng, &pools.monotone, d));
        fs.extend(names(&pick(rng, &pools.plain, d)));
        (fs, Some(d))
    };
    let cycle_monotone = |_: &mut MatrixRng, k: usize| (vec![pools.monotone[k % pools.monotone.len()].to_string()], None);
    let convex_pairs: Vec<Vec<String>> = pools
        .convex
        .iter()
        .flat_map(|f| pools.plain.iter().map(move |h| vec![f.to_string(), h.to_string()]))
        .collect();
    let trace_mono_pairs: Vec<Vec<String>> = pools
        .parity
        .iter()
        .flat_map(|h| pools.monotone.iter().map(move |g| vec![h.to_string(), g.to_string()]))
        .collect();
    let trace_convex_pairs: Vec<Vec<String>> = pools
        .parity
        .iter()
        .filter(|h| h.parity == Parity::Odd)
        .flat_map(|h| pools.convex.iter().map(move |f| vec![h.to_string(), f.to_string()]))
        .collect();
    let cycle_convex = |_: &mut MatrixRng, k: usize| (convex_pairs[k % convex_pairs.len()].clone(), None);
    let cycle_trace_mono = |_: &mut MatrixRng, k: usize| (trace_mono_pairs[k % trace_mono_pairs.len()].clone(), None);
    let cycle_trace_convex =
        |_: &mut MatrixRng, k: usize| (trace_convex_pairs[k % trace_convex_pairs.len()].clone(), None);
    let cycle_search = |_: &mut MatrixRng, k: usize| (vec![pools.search[k % pools.search.len()].to_string()], None);

    for &statement in &cfg.statements {
        let variants: Vec<Variant<'_>> = match statement {
            Statement::Ando => pools.monotone.iter().map(|g| Variant::Fixed(vec![g.to_string()])).collect(),
            Statement::DiffDominance => vec![Variant::Fixed(Vec::new())],
            Statement::WithD | Statement::Fsll => {
                pools.bricks.iter().map(|g| Variant::Fixed(vec![g.to_string()])).collect()
            }
            Statement::LemmaSum | Statement::LemmaProduct | Statement::LemmaPoly if !pools.lemma.is_empty() => {
                vec![Variant::Drawn(&lemma_draw)]
            }
            Statement::MainTheorem if !pools.monotone.is_empty() => {
                if pools.plain.is_empty() {
                    vec![Variant::Drawn(&product_draw)]
                } else {
                    vec![Variant::Drawn(&main_draw)]
                }
            }
            Statement::CorProduct if !pools.monotone.is_empty() => vec![Variant::Drawn(&product_draw)],
            Statement::CorPair | Statement::CorExp if !pools.monotone.is_empty() => {
                vec![Variant::Drawn(&cycle_monotone)]
            }
            Statement::CorWeightedSum if !pools.monotone.is_empty() && !pools.plain.is_empty() => {
                vec![Variant::Drawn(&weighted_draw)]
            }
            Statement::ConvexTheorem if !convex_pairs.is_empty() => vec![Variant::Drawn(&cycle_convex)],
            Statement::TraceMonotone if !trace_mono_pairs.is_empty() => vec![Variant::Drawn(&cycle_trace_mono)],
            Statement::TraceConvex if !trace_convex_pairs.is_empty() => vec![Variant::Drawn(&cycle_trace_convex)],
            Statement::CxSearch if !pools.search.is_empty() => vec![Variant::Drawn(&cycle_search)],
            _ => Vec::new(),
        };
        let mut k = 0usize;
        for variant in &variants {
            for n in cfg.dims.iter() {
                if statement == Statement::CxSearch && n > MAX_SEARCH_DIM {
                    continue;
                }
                for _ in 0..cfg.trials_per_cell {
                    let seed = derive_seed(cfg.master_seed, index);
                    let mut sel = MatrixRng::new(derive_seed(seed, 0));
                    let (functions, g_count) = match variant {
                        Variant::Fixed(fs) => (fs.clone(), None),
                        Variant::Drawn(draw) => draw(&mut sel, k),
                    };
                    let hi = sel.log_uniform(0.25, 4.0);
                    let ensemble = EnsembleSpec {
                        lo: 0.0,
                        hi,
                        delta: hi * sel.log_uniform(1e-6, 0.1),
                        ..EnsembleSpec::new(EnsembleKind::cycle(index), n, derive_seed(seed, 1))
                    };
                    let digest = InputsDigest {
                        index,
                        seed,
                        ensemble,
                        g_count,
                        orientation: (statement == Statement::MainTheorem).then_some(if k % 2 == 0 {
                            Orientation::Alternating
                        } else {
                            Orientation::Uniform
                        }),
                        norm: (statement == Statement::CxSearch).then_some(if k % 2 == 0 {
                            NormKind::Op
                        } else {
                            NormKind::Trace
                        }),
                        budget: (statement == Statement::CxSearch).then_some(cfg.search_budget),
                    };
                    plans.push(TrialPlan {
                        statement,
                        functions,
                        digest,
                    });
                    index += 1;
                    k += 1;
                }
            }
        }
    }
    plans
}

fn mono(s: &str) -> Result<MonotoneFn> {
    parse_monotone(s)
}

fn brick_parameter(s: &str) -> Result<f64> {
    let g = mono(s)?;
    match g.kind {
        MonotoneKind::Brick { s } if g.offset == 0.0 => Ok(s),
        _ => Err(Error::InvalidParameter(format!("{s} is not a brick f_s"))),
    }
}

fn expect_len(fs: &[String], n: usize) -> Result<()> {
    if fs.len() != n {
        return Err(Error::Arity {
            expected: n,
            actual: fs.len(),
        });
    }
    Ok(())
}

fn split_roles(fs: &[String], g_count: Option<usize>) -> Result<(Vec<MonotoneFn>, Vec<PlainFn>)> {
    let d = g_count.unwrap_or(fs.len()).min(fs.len());
    let gs = fs[..d].iter().map(|s| mono(s)).collect::<Result<Vec<_>>>()?;
    let hs = fs[d..].iter().map(|s| parse_plain(s)).collect::<Result<Vec<_>>>()?;
    Ok((gs, hs))
}

/// Evaluates a statement that depends only on a pair `(A, B)` and the named
/// functions. Lemma and main-theorem statements need extra random inputs and
/// are not pair-replayable.
#[allow(clippy::too_many_arguments)]
pub fn check_pair(
    statement: Statement,
    functions: &[String],
    g_count: Option<usize>,
    norm: Option<NormKind>,
    a: &PsdMatrix,
    b: &PsdMatrix,
    tol_scale: f64,
) -> Result<CheckResult> {
    let fs = functions;
    match statement {
        Statement::Ando => {
            expect_len(fs, 1)?;
            check_ando(&mono(&fs[0])?, a, b, tol_scale)
        }
        Statement::DiffDominance => {
            expect_len(fs, 0)?;
            check_diff_dominance(a, b, tol_scale)
        }
        Statement::WithD => {
            expect_len(fs, 1)?;
            check_with_d(brick_parameter(&fs[0])?, a, b, tol_scale)
        }
        Statement::Fsll => {
            expect_len(fs, 1)?;
            check_fsll(brick_parameter(&fs[0])?, a, b, tol_scale)
        }
        Statement::CorProduct | Statement::CorPair | Statement::CorExp | Statement::CorWeightedSum => {
            let family = Corollary::from_str(statement.tag())?;
            let (gs, hs) = split_roles(fs, g_count)?;
            check_corollary(family, &gs, &hs, a, b, tol_scale)
        }
        Statement::ConvexTheorem => {
            expect_len(fs, 2)?;
            check_convex_theorem(&parse_convex(&fs[0])?, &parse_plain(&fs[1])?, a, b, tol_scale)
        }
        Statement::TraceMonotone => {
            expect_len(fs, 2)?;
            check_trace_monotone(&parse_plain(&fs[0])?, &mono(&fs[1])?, a, b, tol_scale)
        }
        Statement::TraceConvex => {
            expect_len(fs, 2)?;
            check_trace_convex(&parse_plain(&fs[0])?, &parse_convex(&fs[1])?, a, b, tol_scale)
        }
        Statement::CxSearch => {
            expect_len(fs, 1)?;
            let norm = norm.ok_or_else(|| Error::InvalidParameter("cx_search needs a norm".into()))?;
            evaluate_violation(&parse_function(&fs[0])?, norm, a, b)
        }
        Statement::LemmaSum | Statement::LemmaProduct | Statement::LemmaPoly | Statement::MainTheorem => Err(
            Error::InvalidParameter(format!("{statement} needs more than a matrix pair; replay its record instead")),
        ),
    }
}

/// Regenerates the inputs of one trial from its digest and evaluates it.
pub fn run_trial(statement: Statement, functions: &[String], digest: &InputsDigest, tol_scale: f64) -> Result<CheckResult> {
    let (a, b) = random_pair(&digest.ensemble)?;
    let n = digest.ensemble.n;
    let mut aux = MatrixRng::new(derive_seed(digest.seed, 2));
    let poly_seed = derive_seed(digest.seed, 3);
    match statement {
        Statement::LemmaSum | Statement::LemmaProduct | Statement::LemmaPoly => {
            let gs = functions.iter().map(|s| parse_function(s)).collect::<Result<Vec<_>>>()?;
            let d = &a;
            let xs = gs
                .iter()
                .map(|g| {
                    let gd = d.apply(|t| g.value(t))?.into_matrix();
                    contraction_congruence(&mut aux, &gd)
                })
                .collect::<Result<Vec<_>>>()?;
            match statement {
                Statement::LemmaSum => check_lemma_sum(d, &gs, &xs, tol_scale),
                Statement::LemmaProduct => check_lemma_product(d, &gs, &xs, tol_scale),
                _ => {
                    let p = random_poly(gs.len(), POLY_DEGREE, POLY_TERMS, poly_seed)?;
                    check_lemma_poly(d, &gs, &xs, &p, tol_scale)
                }
            }
        }
        Statement::MainTheorem => {
            let (gs, hs) = split_roles(functions, digest.g_count)?;
            let abs_d = abs_hermitian(&b.hermitian().sub(a.hermitian()))?;
            let cs = hs
                .iter()
                .map(|h| {
                    let bound = abs_d.apply(|t| h.value(t))?.into_matrix();
                    contraction_congruence(&mut aux, &bound)
                })
                .collect::<Result<Vec<_>>>()?;
            let p = random_poly(gs.len() + hs.len(), POLY_DEGREE, POLY_TERMS, poly_seed)?;
            check_main_theorem(&p, &gs, &hs, &a, &b, &cs, digest.orientation.unwrap_or_default(), tol_scale)
        }
        Statement::CxSearch => {
            expect_len(functions, 1)?;
            let f = parse_function(&functions[0])?;
            let cfg = SearchConfig {
                budget: digest.budget.unwrap_or(1),
                seed: digest.seed,
                n,
                hill_rounds: SUITE_HILL_ROUNDS,
                stop_at: f64::INFINITY,
            };
            Ok(search_counterexample(&f, digest.norm.unwrap_or(NormKind::Op), &cfg)?.best)
        }
        _ => check_pair(statement, functions, digest.g_count, digest.norm, &a, &b, tol_scale),
    }
}

/// Recomputes a stored record.
pub fn replay_record(record: &TrialRecord, tol_scale: f64) -> Result<CheckResult> {
    run_trial(record.statement, &record.functions, &record.inputs_digest, tol_scale)
}

fn execute(p: &TrialPlan, tol_scale: f64) -> TrialRecord {
    let outcome = run_trial(p.statement, &p.functions, &p.digest, tol_scale);
    let base = TrialRecord {
        statement: p.statement,
        n: p.digest.ensemble.n,
        functions: p.functions.clone(),
        margin: None,
        holds: false,
        worst_k: 0,
        tol: 0.0,
        near_miss: false,
        inputs_digest: p.digest.clone(),
        error: None,
        no_convergence: false,
    };
    match outcome {
        Ok(r) => TrialRecord {
            margin: Some(r.margin),
            holds: r.holds,
            worst_k: r.worst_k,
            tol: r.tol,
            near_miss: r.near_miss(),
            ..base
        },
        Err(e) => TrialRecord {
            no_convergence: matches!(e, Error::NoConvergence { .. }),
            error: Some(e.to_string()),
            ..base
        },
    }
}

fn summarize(statements: &[Statement], records: &[TrialRecord]) -> Vec<StatementSummary> {
    statements
        .iter()
        .map(|&st| {
            let rs: Vec<&TrialRecord> = records.iter().filter(|r| r.statement == st).collect();
            StatementSummary {
                statement: st,
                expected_to_hold: st.expected_to_hold(),
                trials: rs.len(),
                passes: rs.iter().filter(|r| r.holds).count(),
                violations: rs.iter().filter(|r| r.error.is_none() && !r.holds).count(),
                errors: rs.iter().filter(|r| r.error.is_some()).count(),
                near_misses: rs.iter().filter(|r| r.near_miss).count(),
                min_margin: rs.iter().filter_map(|r| r.margin).reduce(f64::min),
            }
        })
        .collect()
}

/// Runs every planned trial on a pool of `config.jobs` threads.
pub fn run_suite(config: &SuiteConfig) -> Result<Report> {
    config.validate()?;
    let start = Instant::now();
    let plans = plan(config);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    let records: Vec<TrialRecord> = pool.install(|| plans.par_iter().map(|p| execute(p, config.tol_scale)).collect());
    let summary = summarize(&config.statements, &records);
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        tool: "miq".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config: config.clone(),
        records,
        summary,
        wall_time_secs: start.elapsed().as_secs_f64(),
    })
}

/// A stored input pair with the parameters needed to re-evaluate it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub schema_version: u32,
    pub statement: Statement,
    pub functions: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm: Option<NormKind>,
    pub tol_scale: f64,
    /// Margin recorded when the witness was written.
    pub margin: f64,
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
}

impl Witness {
    pub fn from_search(out: &crate::inequalities::SearchOutcome) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            statement: Statement::CxSearch,
            functions: vec![out.function.clone()],
            g_count: None,
            norm: Some(out.norm),
            tol_scale: 1.0,
            margin: out.best.margin,
            a: out.a.clone(),
            b: out.b.clone(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let w: Witness = serde_json::from_str(text)?;
        if w.schema_version != SCHEMA_VERSION {
            return Err(Error::Parse(format!("unsupported schema version {}", w.schema_version)));
        }
        Ok(w)
    }
}

/// Recomputed result plus singular profiles of `g(B) − g(A)` and `g(|B − A|)`
/// for single-function statements.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Replay {
    pub result: CheckResult,
    pub lhs_profile: Option<Vec<f64>>,
    pub rhs_profile: Option<Vec<f64>>,
}

pub fn replay_witness(w: &Witness) -> Result<Replay> {
    let a = PsdMatrix::new(HermitianMatrix::new(w.a.clone())?)?;
    let b = PsdMatrix::new(HermitianMatrix::new(w.b.clone())?)?;
    let result = check_pair(w.statement, &w.functions, w.g_count, w.norm, &a, &b, w.tol_scale)?;
    let (mut lhs_profile, mut rhs_profile) = (None, None);
    if matches!(w.statement, Statement::Ando | Statement::CxSearch) && w.functions.len() == 1 {
        let f = parse_function(&w.functions[0])?;
        let fa = a.apply(|t| f.value(t))?;
        let fb = b.apply(|t| f.value(t))?;
        let abs_d = abs_hermitian(&b.hermitian().sub(a.hermitian()))?;
        lhs_profile = Some(singular_profile(fb.sub(&fa).matrix())?.values().to_vec());
        rhs_profile = Some(singular_profile(abs_d.apply(|t| f.value(t))?.matrix())?.values().to_vec());
    }
    Ok(Replay {
        result,
        lhs_profile,
        rhs_profile,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(statements: Vec<Statement>, trials: usize) -> SuiteConfig {
        SuiteConfig {
            statements,
            dims: DimRange { lo: 1, hi: 3 },
            trials_per_cell: trials,
            master_seed: 5,
            search_budget: 50,
            ..SuiteConfig::default()
        }
    }

    #[test]
    fn dim_range_parsing() {
        assert_eq!("2..6".parse::<DimRange>().unwrap(), DimRange { lo: 2, hi: 6 });
        assert_eq!("2..=6".parse::<DimRange>().unwrap(), DimRange { lo: 2, hi: 6 });
        assert_eq!("4".parse::<DimRange>().unwrap(), DimRange { lo: 4, hi: 4 });
        assert!("a..3".parse::<DimRange>().is_err());
    }

    #[test]
    fn config_validation() {
        let mut c = SuiteConfig::default();
        assert!(c.validate().is_ok());
        c.trials_per_cell = 0;
        assert!(c.validate().is_err());
        c = SuiteConfig {
            dims: DimRange { lo: 1, hi: 33 },
            ..SuiteConfig::default()
        };
        assert!(c.validate().is_err());
    }

    #[test]
    fn scalar_ando_suite() {
        let cfg = SuiteConfig {
            dims: DimRange { lo: 1, hi: 1 },
            trials_per_cell: 10,
            function_filters: Some(vec!["brick".into()]),
            ..small(vec![Statement::Ando], 10)
        };
        let r = run_suite(&cfg).unwrap();
        // brick:s=0.1, 1, 10 and the offset brick
        assert_eq!(r.records.len(), 40);
        assert!(r.records.iter().all(|x| x.holds && x.n == 1));
        assert_eq!(r.exit_status(), 0);
        assert_eq!(r.summary[0].passes, 40);
    }

    #[test]
    fn every_statement_runs_and_holds() {
        let r = run_suite(&small(Statement::ALL.to_vec(), 2)).unwrap();
        for s in &r.summary {
            assert!(s.trials > 0, "{:?}", s.statement);
            assert_eq!(s.errors, 0, "{:?}", s.statement);
            if s.expected_to_hold {
                assert_eq!(s.violations, 0, "{:?}", s.statement);
            }
        }
        assert_eq!(r.exit_status(), 0);
    }

    #[test]
    fn records_replay_exactly() {
        let r = run_suite(&small(Statement::ALL.to_vec(), 1)).unwrap();
        for rec in &r.records {
            let again = replay_record(rec, 1.0).unwrap();
            assert_eq!(Some(again.margin), rec.margin, "{:?}", rec.statement);
        }
    }

    #[test]
    fn reports_roundtrip_and_ignore_jobs() {
        let mut cfg = small(vec![Statement::Ando, Statement::MainTheorem, Statement::TraceConvex], 2);
        cfg.jobs = 1;
        let mut one = run_suite(&cfg).unwrap();
        cfg.jobs = 3;
        let mut three = run_suite(&cfg).unwrap();
        one.wall_time_secs = 0.0;
        three.wall_time_secs = 0.0;
        // jobs is not serialized
        one.config.jobs = 0;
        assert_eq!(one.to_json().unwrap(), three.to_json().unwrap());
        let back = Report::from_json(&one.to_json().unwrap()).unwrap();
        assert_eq!(back, one);
    }

    #[test]
    fn csv_has_one_row_per_trial() {
        let r = run_suite(&small(vec![Statement::Fsll], 1)).unwrap();
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), r.records.len() + 1);
        assert!(text.starts_with("statement,n,functions,margin,holds"));
    }

    #[test]
    fn witness_with_equal_inputs() {
        let a = PsdMatrix::from_diag(&[0.5, 2.0]).unwrap().into_hermitian().into_matrix();
        let w = Witness {
            schema_version: SCHEMA_VERSION,
            statement: Statement::Ando,
            functions: vec!["brick:s=1".into()],
            g_count: None,
            norm: None,
            tol_scale: 1.0,
            margin: 0.0,
            a: a.clone(),
            b: a,
        };
        let back = Witness::from_json(&w.to_json().unwrap()).unwrap();
        let r = replay_witness(&back).unwrap();
        assert!(r.result.margin >= 0.0);
        assert_eq!(r.lhs_profile.unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn tampered_witness_is_rejected() {
        let a = ComplexMatrix::identity(2);
        let w = Witness {
            schema_version: SCHEMA_VERSION,
            statement: Statement::Ando,
            functions: vec!["identity".into()],
            g_count: None,
            norm: None,
            tol_scale: 1.0,
            margin: 0.0,
            a: a.clone(),
            b: a,
        };
        let text = w.to_json().unwrap().replacen("\"n\": 2", "\"n\": 3", 1);
        assert!(matches!(Witness::from_json(&text), Err(Error::Parse(_))));
    }
}
