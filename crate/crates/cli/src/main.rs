//! `tesler-alpha`: faces, alpha values, table verification and Ehrhart
//! checks for Tesler polytopes.
//!
//! Exit codes: 0 when every check passes, 1 on a mathematical mismatch,
//! 2 on a usage error.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use tesler_alpha::tesler::HookSumVector;

#[derive(Parser, Debug)]
#[command(name = "tesler-alpha", version, about = "Exact alpha values and Ehrhart checks for Tesler polytopes")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, global = true, env = "TESLER_ALPHA_JOBS")]
    jobs: Option<usize>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args, Debug, Clone)]
pub struct SizeArgs {
    /// Matrix size n.
    #[arg(long)]
    n: usize,

    /// Hook sums as comma-separated integers (default: all ones).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    a: Option<Vec<i64>>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the faces of a given codimension.
    Faces {
        #[command(flatten)]
        size: SizeArgs,
        #[arg(long)]
        codim: usize,
    },
    /// Alpha value and case of every face of a given codimension (0 to 3).
    Alpha {
        #[command(flatten)]
        size: SizeArgs,
        #[arg(long)]
        codim: usize,
        /// Only report the minimum and the faces attaining it.
        #[arg(long)]
        min: bool,
    },
    /// Check every codim-2 and codim-3 face against the case tables.
    Verify {
        #[command(flatten)]
        size: SizeArgs,
        /// Also run the edge-direction oracle (n <= 4).
        #[arg(long)]
        oracle: bool,
    },
    /// Ehrhart polynomial and McMullen cross-check (n <= 4).
    Ehrhart {
        #[command(flatten)]
        size: SizeArgs,
    },
    /// Vertex graph of Tes_n(a).
    Vertices {
        #[command(flatten)]
        size: SizeArgs,
    },
    /// Check whether a vertex map defines a deformation.
    DeformationCheck {
        /// Vertex graph of the source polytope (JSON from `vertices`).
        #[arg(long)]
        p: PathBuf,
        /// Target vertices: a vertex-graph JSON file or a JSON array of matrices.
        #[arg(long)]
        q: PathBuf,
        /// JSON array mapping source vertex i to target vertex map[i].
        #[arg(long)]
        map: PathBuf,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Internal(anyhow::Error),
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Internal(e)
    }
}

/// Rendered output plus whether every check passed.
pub struct Outcome {
    pub text: String,
    pub passed: bool,
}

/// Validated size and hook sums, after trimming leading zeros.
pub struct Size {
    pub n: usize,
    pub a: HookSumVector,
}

fn resolve(size: &SizeArgs) -> Result<Size, CliError> {
    if size.n < 2 {
        return Err(CliError::Usage(format!("--n must be at least 2, got {}", size.n)));
    }
    let Some(values) = &size.a else {
        return Ok(Size {
            n: size.n,
            a: HookSumVector::ones(size.n),
        });
    };
    if values.len() != size.n {
        return Err(CliError::Usage(format!(
            "--a has {} entries but --n is {}",
            values.len(),
            size.n
        )));
    }
    let a = HookSumVector::from_integers(values).map_err(|e| CliError::Usage(e.to_string()))?;
    let (p, rest) = a.normalized().map_err(|e| CliError::Usage(e.to_string()))?;
    let n = size.n - p;
    if p > 0 {
        eprintln!("notice: dropped {p} leading zero hook sum(s); using n = {n}");
    }
    if n < 2 {
        return Err(CliError::Usage(format!("after trimming, n = {n} is too small")));
    }
    Ok(Size { n, a: rest })
}

fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    let f = cli.format;
    match &cli.command {
        Command::Faces { size, codim } => commands::faces(&resolve(size)?, *codim, f),
        Command::Alpha { size, codim, min } => commands::alpha(&resolve(size)?, *codim, *min, f),
        Command::Verify { size, oracle } => commands::verify(&resolve(size)?, *oracle, f),
        Command::Ehrhart { size } => commands::ehrhart(&resolve(size)?, f),
        Command::Vertices { size } => commands::vertices(&resolve(size)?, f),
        Command::DeformationCheck { p, q, map } => commands::deformation_check(p, q, map, f),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let outcome = match dispatch(&cli) {
        Ok(o) => o,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(CliError::Internal(e)) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    };
    if let Err(e) = output::emit(&outcome.text, cli.out.as_deref()) {
        eprintln!("error: {e:#}");
        return ExitCode::from(1);
    }
    if outcome.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
