//! The `nullweight` command line. [`run`] is the whole program; `main` only
//! binds it to the process streams.
//!
//! Exit codes: 0 success, 1 a verification did not match, 2 usage or input
//! error, 3 internal defect.

mod commands;

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nullweight::solver::ListStyle;
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DEFECT: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "nullweight",
    version,
    about = "Proper (1,3)-total-weightings of generalized Petersen graphs"
)]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads for fan-out commands (default: one per core).
    #[arg(long, global = true, env = "NULLWEIGHT_JOBS", value_parser = clap::value_parser!(u32).range(1..))]
    jobs: Option<u32>,

    /// Report wall-clock times. Without it, timing fields are zero so that
    /// repeated runs are byte-identical.
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GraphArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    t: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum KindArg {
    I,
    Ii,
    Iii,
}

#[derive(Debug, Args)]
struct VerifyLemmaArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    /// Cycle length. Omitted: the standard range for the kind.
    #[arg(long)]
    n: Option<u32>,
    /// Kind III only. Omitted: every `t` in the standard table.
    #[arg(long)]
    t: Option<u32>,
    /// Kind III only: also compare every intermediate residual.
    #[arg(long)]
    steps: bool,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    t: u32,
    /// JSON list assignment; excludes --seed and --style.
    #[arg(long, conflicts_with_all = ["seed", "style"])]
    lists: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// constant, arithmetic or random.
    #[arg(long)]
    style: Option<ListStyle>,
    /// Write the final weighting here as JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    lists: PathBuf,
    /// Largest number of combinations to enumerate.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    budget: Option<u64>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(3..))]
    max_n: u32,
    /// Seeds `0..seeds` per style.
    #[arg(long, default_value_t = 25, value_parser = clap::value_parser!(u64).range(1..))]
    seeds: u64,
    /// Repeatable; default all three styles.
    #[arg(long)]
    style: Vec<ListStyle>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(3..))]
    t: u32,
    #[arg(long, default_value_t = 40)]
    max_n: u32,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print P(n,t) as graph JSON.
    Gen(GraphArgs),
    /// Print the outer cycle, legs and inner part of P(n,t).
    Decompose(GraphArgs),
    /// Recompute witness coefficients of the reducible configurations.
    VerifyLemma(VerifyLemmaArgs),
    /// Check the path-product coefficient for all 1 <= s < t <= max-t.
    VerifyObservation {
        #[arg(long, default_value_t = 25)]
        max_t: u32,
    },
    /// Build and verify a proper weighting of P(n,t).
    Solve(SolveArgs),
    /// Exhaustive search for a proper weighting.
    Oracle(OracleArgs),
    /// Solve every P(n,t) with n <= max-n over generated lists.
    Sweep(SweepArgs),
    /// Time coefficient extraction on configurations of growing size.
    Bench(BenchArgs),
}

#[derive(Debug, Error)]
enum Failure {
    #[error(transparent)]
    Core(#[from] nullweight::Error),
    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: io::Error },
    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Usage(String),
}

impl Failure {
    fn exit_code(&self) -> i32 {
        use nullweight::Error as E;
        match self {
            Failure::Core(E::Internal(_)) => EXIT_DEFECT,
            Failure::Core(E::Witness(_) | E::Unsatisfiable(_)) => EXIT_MISMATCH,
            Failure::Core(E::Param(_) | E::Input(_) | E::Size(_) | E::Json(_))
            | Failure::Read { .. }
            | Failure::Write { .. }
            | Failure::Usage(_) => EXIT_USAGE,
        }
    }
}

/// Text for stdout, whether every check in it passed, and a defect found
/// after the text was complete.
struct Outcome {
    text: String,
    ok: bool,
    defect: Option<String>,
}

impl Outcome {
    fn new(text: String, ok: bool) -> Self {
        Outcome {
            text,
            ok,
            defect: None,
        }
    }
}

/// Parses `argv` (program name first), runs the command and returns the exit
/// code. Nothing is written to `out` unless the command completes or, for
/// `sweep`, finishes with defects.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                EXIT_USAGE
            } else {
                let _ = out.write_all(text.as_bytes());
                EXIT_OK
            };
        }
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs.unwrap_or(0) as usize)
        .build();
    let result = match pool {
        Ok(pool) => pool.install(|| commands::dispatch(&cli)),
        Err(e) => Err(Failure::Core(nullweight::Error::Internal(format!(
            "thread pool: {e}"
        )))),
    };
    match result {
        Ok(outcome) => {
            if out
                .write_all(outcome.text.as_bytes())
                .and_then(|_| out.flush())
                .is_err()
            {
                return EXIT_DEFECT;
            }
            if let Some(d) = outcome.defect {
                let _ = writeln!(err, "internal defect: {d}");
                return EXIT_DEFECT;
            }
            if outcome.ok {
                EXIT_OK
            } else {
                EXIT_MISMATCH
            }
        }
        Err(f) => {
            let code = f.exit_code();
            let label = if code == EXIT_DEFECT {
                "internal defect"
            } else {
                "error"
            };
            let _ = writeln!(err, "{label}: {f}");
            code
        }
    }
}
