//! Acceptance run: one line per criterion, nonzero exit if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use miq_core::functions::{eval_via_representation, CatalogFn, MonotoneFn, PlainFn};
use miq_core::generators::{derive_seed, random_pair, EnsembleKind, EnsembleSpec, MatrixRng};
use miq_core::inequalities::{
    check_ando, check_main_theorem, evaluate_violation, search_counterexample, NormKind, Orientation, SearchConfig,
    Statement,
};
use miq_core::linalg::eig_hermitian;
use miq_core::ncpoly::NcPolynomial;
use miq_core::suite::{replay_witness, run_suite, DimRange, Report, SuiteConfig, Witness};

const EIG_RESIDUAL_REL: f64 = 1e-10;
const EIG_ORTHO_MAX: f64 = 1e-11;
const EIG_TIME_LIMIT: Duration = Duration::from_secs(30);
const REP_REL_ERR: f64 = 1e-6;
const REDUCTION_AGREEMENT: f64 = 1e-12;
const SEARCH_MIN_OP_VIOLATION: f64 = 1e-3;
const SEARCH_BUDGET: usize = 100_000;
const SEARCH_TIME_LIMIT: Duration = Duration::from_secs(60);
const MASTER_SEED: u64 = 42;

type Outcome = Result<String, String>;

fn suite(statements: &[Statement], dims: (usize, usize), trials: usize) -> Result<Report, String> {
    run_suite(&SuiteConfig {
        statements: statements.to_vec(),
        dims: DimRange { lo: dims.0, hi: dims.1 },
        trials_per_cell: trials,
        master_seed: MASTER_SEED,
        ..SuiteConfig::default()
    })
    .map_err(|e| e.to_string())
}

/// Checks every summary for zero violations and errors and reports trial counts.
fn clean(report: &Report, min_trials: usize) -> Outcome {
    let mut parts = Vec::new();
    for s in &report.summary {
        if s.violations > 0 || s.errors > 0 {
            return Err(format!(
                "{}: {} violations, {} errors, min margin {:?}",
                s.statement, s.violations, s.errors, s.min_margin
            ));
        }
        if s.trials < min_trials {
            return Err(format!("{}: only {} trials", s.statement, s.trials));
        }
        parts.push(format!("{} {}/{} (min margin {:.2e})", s.statement, s.passes, s.trials, s.min_margin.unwrap_or(0.0)));
    }
    Ok(parts.join(", "))
}

fn eigensolver_quality() -> Outcome {
    let start = Instant::now();
    let mut worst_res = 0.0_f64;
    let mut worst_ortho = 0.0_f64;
    for i in 0..1000u64 {
        let n = 1 + (i % 16) as usize;
        let a = MatrixRng::new(derive_seed(MASTER_SEED, i)).hermitian(n);
        let eig = eig_hermitian(&a).map_err(|e| e.to_string())?;
        let scale = a.matrix().frobenius_norm().max(1.0);
        worst_res = worst_res.max(eig.residual(a.matrix()) / scale);
        worst_ortho = worst_ortho.max(eig.orthonormality_defect());
    }
    let elapsed = start.elapsed();
    let detail = format!("max rel residual {worst_res:.2e}, max ortho defect {worst_ortho:.2e}, {elapsed:.2?}");
    if worst_res <= EIG_RESIDUAL_REL && worst_ortho <= EIG_ORTHO_MAX && elapsed < EIG_TIME_LIMIT {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn representation_fidelity() -> Outcome {
    let fns: Vec<CatalogFn> = vec![
        MonotoneFn::power(0.25).unwrap().into(),
        MonotoneFn::power(0.5).unwrap().into(),
        MonotoneFn::power(0.75).unwrap().into(),
        MonotoneFn::log1p().into(),
    ];
    let mut worst = 0.0_f64;
    for f in &fns {
        for i in 0..50 {
            let t = 10f64.powf(-3.0 + 6.0 * i as f64 / 49.0);
            let exact = f.value(t);
            let quad = eval_via_representation(f, t).map_err(|e| e.to_string())?;
            let rel = (quad - exact).abs() / exact.abs();
            if rel > REP_REL_ERR {
                return Err(format!("{f} at t = {t:e}: relative error {rel:.2e}"));
            }
            worst = worst.max(rel);
        }
    }
    Ok(format!("max relative error {worst:.2e} over 4 functions x 50 points"))
}

fn ando_suite() -> Outcome {
    let r = suite(&[Statement::Ando], (2, 8), 200)?;
    let cells = r.records.len() / 200;
    clean(&r, 200).map(|d| format!("{cells} (f, n) cells x 200 trials: {d}"))
}

fn dominance_lemmas() -> Outcome {
    let a = suite(&[Statement::DiffDominance], (2, 6), 100)?;
    let b = suite(&[Statement::WithD, Statement::Fsll], (2, 6), 25)?;
    Ok(format!("{}; {}", clean(&a, 500)?, clean(&b, 500)?))
}

fn poly_and_main_theorem() -> Outcome {
    let r = suite(&[Statement::LemmaPoly, Statement::MainTheorem], (2, 7), 50)?;
    let d = clean(&r, 300)?;
    let p = NcPolynomial::variable(1, 0).map_err(|e| e.to_string())?;
    let catalogue = MonotoneFn::catalogue();
    let mut worst = 0.0_f64;
    for i in 0..200u64 {
        let g = &catalogue[i as usize % catalogue.len()];
        let spec = EnsembleSpec::new(EnsembleKind::cycle(i), 2 + (i % 5) as usize, derive_seed(7, i));
        let (a, b) = random_pair(&spec).map_err(|e| e.to_string())?;
        let ando = check_ando(g, &a, &b, 1.0).map_err(|e| e.to_string())?;
        let main = check_main_theorem(&p, std::slice::from_ref(g), &[], &a, &b, &[], Orientation::Alternating, 1.0)
            .map_err(|e| e.to_string())?;
        if ando.holds != main.holds {
            return Err(format!("reduction verdicts differ on trial {i}"));
        }
        worst = worst.max((ando.margin - main.margin).abs());
    }
    if worst > REDUCTION_AGREEMENT {
        return Err(format!("reduction margins differ by {worst:e}"));
    }
    Ok(format!("{d}; reduction max |diff| {worst:.1e}"))
}

fn corollaries() -> Outcome {
    let r = suite(
        &[Statement::CorProduct, Statement::CorPair, Statement::CorWeightedSum, Statement::CorExp],
        (2, 5),
        50,
    )?;
    clean(&r, 200)
}

fn convex_and_trace() -> Outcome {
    let r = suite(
        &[Statement::ConvexTheorem, Statement::TraceMonotone, Statement::TraceConvex],
        (2, 7),
        50,
    )?;
    clean(&r, 300)
}

fn replay_bits(out: &miq_core::inequalities::SearchOutcome) -> Result<bool, String> {
    let text = Witness::from_search(out).to_json().map_err(|e| e.to_string())?;
    let w = Witness::from_json(&text).map_err(|e| e.to_string())?;
    let r = replay_witness(&w).map_err(|e| e.to_string())?;
    Ok(r.result.margin.to_bits() == out.best.margin.to_bits())
}

fn counterexample_reproduction() -> Outcome {
    let start = Instant::now();
    let min1 = CatalogFn::from(PlainFn::min1());
    let cfg = |seed| SearchConfig {
        budget: SEARCH_BUDGET,
        seed,
        n: 2,
        ..SearchConfig::default()
    };
    let op = search_counterexample(&min1, NormKind::Op, &cfg(7)).map_err(|e| e.to_string())?;
    let tr = search_counterexample(&min1, NormKind::Trace, &cfg(8)).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let detail = format!(
        "op violation {:.4e}, trace violation {:.4e}, {elapsed:.2?}",
        op.violation, tr.violation
    );
    if !(op.found && op.violation > SEARCH_MIN_OP_VIOLATION) {
        return Err(format!("operator norm: {detail}"));
    }
    if !tr.found {
        return Err(format!("trace norm: {detail}"));
    }
    if !(replay_bits(&op)? && replay_bits(&tr)?) {
        return Err(format!("witness replay not bit-exact: {detail}"));
    }
    if elapsed >= SEARCH_TIME_LIMIT {
        return Err(format!("too slow: {detail}"));
    }
    Ok(format!("{detail}, witnesses replay bit-exactly"))
}

fn direction_sanity() -> Outcome {
    let fns: Vec<CatalogFn> = vec![MonotoneFn::brick(1.0).unwrap().into(), MonotoneFn::power(0.5).unwrap().into()];
    let mut parts = Vec::new();
    for f in &fns {
        for norm in [NormKind::Op, NormKind::Trace] {
            let cfg = SearchConfig {
                budget: SEARCH_BUDGET / 10,
                seed: 11,
                n: 2,
                ..SearchConfig::default()
            };
            let out = search_counterexample(f, norm, &cfg).map_err(|e| e.to_string())?;
            let replayed = evaluate_violation(
                f,
                norm,
                &miq_core::PsdMatrix::new(miq_core::HermitianMatrix::new(out.a.clone()).unwrap()).unwrap(),
                &miq_core::PsdMatrix::new(miq_core::HermitianMatrix::new(out.b.clone()).unwrap()).unwrap(),
            )
            .map_err(|e| e.to_string())?;
            if out.found || out.violation > out.best.tol || !replayed.holds {
                return Err(format!("{f} {norm}: violation {:e}", out.violation));
            }
            parts.push(format!("{f}/{norm} best {:.1e}", out.violation));
        }
    }
    Ok(parts.join(", "))
}

fn determinism() -> Outcome {
    let base = SuiteConfig {
        master_seed: MASTER_SEED,
        ..SuiteConfig::default()
    };
    let mut texts = Vec::new();
    let mut exit = 0;
    let mut trials = 0;
    for jobs in [1, 4, 0] {
        let mut r = run_suite(&SuiteConfig { jobs, ..base.clone() }).map_err(|e| e.to_string())?;
        r.wall_time_secs = 0.0;
        exit = r.exit_status();
        trials = r.records.len();
        for s in &r.summary {
            if s.expected_to_hold && (s.violations > 0 || s.errors > 0) {
                return Err(format!("default suite: {} has {} violations", s.statement, s.violations));
            }
        }
        texts.push(r.to_json().map_err(|e| e.to_string())?);
    }
    if texts.windows(2).any(|w| w[0] != w[1]) {
        return Err("reports differ across --jobs values".into());
    }
    if exit != 0 {
        return Err(format!("default suite exit status {exit}"));
    }
    Ok(format!("default suite, {trials} trials, identical reports for jobs 1, 4 and auto, exit 0"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("eigensolver quality", eigensolver_quality),
        ("representation fidelity", representation_fidelity),
        ("Ando suite", ando_suite),
        ("dominance lemmas", dominance_lemmas),
        ("lemma poly and main theorem", poly_and_main_theorem),
        ("corollary families", corollaries),
        ("convex theorem and trace inequalities", convex_and_trace),
        ("counterexample reproduction", counterexample_reproduction),
        ("direction sanity", direction_sanity),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("[PASS] criterion {}: {name}: {detail} [{took:.1?}]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] criterion {}: {name}: {detail} [{took:.1?}]", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
