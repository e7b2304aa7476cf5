use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use miq_core::functions::{parse_function, ConvexFn, MonotoneFn, PlainFn};
use miq_core::inequalities::{search_counterexample, NormKind, SearchConfig, Statement};
use miq_core::suite::{replay_witness, run_suite, DimRange, Report, SuiteConfig, Witness};
use miq_core::Error;

const USAGE_ERROR: u8 = 2;

#[derive(Parser)]
#[command(name = "miq", version, about = "Randomized verification of matrix norm inequalities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Norm {
    Op,
    Trace,
}

impl From<Norm> for NormKind {
    fn from(n: Norm) -> Self {
        match n {
            Norm::Op => NormKind::Op,
            Norm::Trace => NormKind::Trace,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the inequality suite and write a report.
    Verify {
        /// Comma-separated statement tags (default: all).
        #[arg(long, value_delimiter = ',')]
        statements: Option<Vec<String>>,
        /// Inclusive dimension range, e.g. 2..6.
        #[arg(long, default_value = "2..6")]
        dims: String,
        /// Trials per (statement, variant, n) cell.
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, env = "MIQ_DEFAULT_SEED", default_value_t = 42)]
        seed: u64,
        /// Multiplier on the default comparison tolerance.
        #[arg(long, default_value_t = 1.0)]
        tol_scale: f64,
        /// Comma-separated catalogue filters, e.g. brick,power:p=0.5.
        #[arg(long, value_delimiter = ',')]
        functions: Option<Vec<String>>,
        /// Report path; the report goes to stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Random pairs per counterexample search in cx_search cells.
        #[arg(long, default_value_t = 2000)]
        search_budget: usize,
    },
    /// Search for a pair violating Ando's inequality for a given function.
    Search {
        #[arg(long, default_value = "min1")]
        function: String,
        #[arg(long, value_enum, default_value = "op")]
        norm: Norm,
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
        #[arg(long, env = "MIQ_DEFAULT_SEED", default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Hill-climbing rounds after random sampling.
        #[arg(long, default_value_t = 200)]
        rounds: usize,
        /// Witness path; printed to stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recompute the margin of a stored witness.
    Replay { witness: PathBuf },
    /// Print statement tags and function catalogues.
    List,
}

fn statements(tags: Option<Vec<String>>) -> Result<Vec<Statement>, Error> {
    match tags {
        None => Ok(Statement::ALL.to_vec()),
        Some(tags) => tags.iter().map(|t| t.trim().parse()).collect(),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, text),
        None => io::stdout().write_all(text.as_bytes()),
    }
}

fn print_summary(report: &Report) {
    eprintln!(
        "{:<18} {:>7} {:>7} {:>6} {:>6} {:>6} {:>12}",
        "statement", "trials", "passes", "viol", "errors", "near", "min margin"
    );
    for s in &report.summary {
        let margin = s.min_margin.map_or("-".to_string(), |m| format!("{m:.3e}"));
        eprintln!(
            "{:<18} {:>7} {:>7} {:>6} {:>6} {:>6} {:>12}{}",
            s.statement.tag(),
            s.trials,
            s.passes,
            s.violations,
            s.errors,
            s.near_misses,
            margin,
            if s.expected_to_hold { "" } else { "  (search)" }
        );
    }
    eprintln!("wall time {:.2}s, exit status {}", report.wall_time_secs, report.exit_status());
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Verify {
            statements: tags,
            dims,
            trials,
            seed,
            tol_scale,
            functions,
            out,
            format,
            jobs,
            search_budget,
        } => {
            let config = SuiteConfig {
                statements: statements(tags)?,
                dims: dims.parse::<DimRange>()?,
                trials_per_cell: trials,
                master_seed: seed,
                tol_scale,
                function_filters: functions,
                search_budget,
                jobs,
            };
            let report = run_suite(&config)?;
            match format {
                Format::Json => emit(&out, &(report.to_json()? + "\n"))?,
                Format::Csv => match &out {
                    Some(path) => report.write_csv(fs::File::create(path)?)?,
                    None => report.write_csv(io::stdout().lock())?,
                },
            }
            print_summary(&report);
            Ok(report.exit_status() as u8)
        }
        Command::Search {
            function,
            norm,
            budget,
            seed,
            dim,
            rounds,
            out,
        } => {
            let f = parse_function(&function)?;
            let cfg = SearchConfig {
                budget,
                seed,
                n: dim,
                hill_rounds: rounds,
                stop_at: f64::INFINITY,
            };
            let outcome = search_counterexample(&f, norm.into(), &cfg)?;
            let witness = Witness::from_search(&outcome);
            emit(&out, &(witness.to_json()? + "\n"))?;
            eprintln!(
                "{} ({} norm, n = {}): violation {:.6e}, margin {:.6e}, {}",
                outcome.function,
                outcome.norm,
                dim,
                outcome.violation,
                outcome.best.margin,
                if outcome.found { "counterexample found" } else { "no violation found" }
            );
            Ok(0)
        }
        Command::Replay { witness } => {
            let text = fs::read_to_string(&witness)?;
            let w = Witness::from_json(&text)?;
            let r = replay_witness(&w)?;
            println!(
                "{} [{}]: margin {:e} (stored {:e}), holds {}, worst k {}, tol {:e}",
                w.statement,
                w.functions.join(", "),
                r.result.margin,
                w.margin,
                r.result.holds,
                r.result.worst_k,
                r.result.tol
            );
            if let (Some(l), Some(rhs)) = (&r.lhs_profile, &r.rhs_profile) {
                println!("lhs singular values: {l:?}");
                println!("rhs singular values: {rhs:?}");
            }
            println!("bit-exact: {}", r.result.margin.to_bits() == w.margin.to_bits());
            Ok(0)
        }
        Command::List => {
            println!("statements:");
            for s in Statement::ALL {
                println!("  {:<18} {}", s.tag(), s.description());
            }
            println!("operator monotone (g):");
            for g in MonotoneFn::catalogue() {
                println!("  {g}");
            }
            println!("operator convex (f):");
            for f in ConvexFn::catalogue() {
                println!("  {f}");
            }
            println!("nondecreasing (h):");
            for h in PlainFn::catalogue().into_iter().chain(PlainFn::parity_catalogue()) {
                println!("  {h}");
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::NoConvergence { .. } => 3,
                Error::Io(_) => 1,
                _ => USAGE_ERROR,
            })
        }
    }
}
