//! `drift-hodge` command-line front end.

mod commands;
mod input;
mod report;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::input::InputError;
use crate::report::{to_json_string, Report};

#[derive(Parser, Debug)]
#[command(name = "drift-hodge", version, about = "Helmholtz–Hodge decompositions of diffusion drifts")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Omit the timestamp so identical inputs give identical bytes.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
    /// Overrides the command's default residual tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Do not echo warnings on stderr.
    #[arg(long, global = true)]
    pub quiet: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Auto,
    #[value(name = "2x2")]
    TwoByTwo,
    Kron,
    Integral,
    Schur,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve SG + GᵀS = 2SAS with trace(G − AS) = 0.
    Riccati {
        #[arg(long)]
        drift: PathBuf,
        #[arg(long)]
        diffusion: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
    },
    /// Classify a linear drift against a Gaussian potential.
    ClassifyLinear {
        #[arg(long)]
        drift: PathBuf,
        #[arg(long)]
        diffusion: PathBuf,
        /// Potential matrix S; solved for when absent.
        #[arg(long)]
        potential: Option<PathBuf>,
    },
    /// Check WHHD/OHHD/SOHHD of a polynomial drift.
    PolyCheck {
        #[arg(long)]
        potential: PathBuf,
        #[arg(long)]
        drift: PathBuf,
        #[arg(long)]
        diffusion: PathBuf,
        /// Also run the finiteness and uniqueness clauses.
        #[arg(long)]
        lyapunov: bool,
    },
    /// Query the Gaussian measure e^⟨x,Sx⟩dx.
    Measure {
        #[arg(long)]
        potential: PathBuf,
        /// Point as inline JSON array or a file path.
        #[arg(long, group = "query")]
        at: Option<String>,
        #[arg(long, group = "query")]
        normalizer: bool,
        #[arg(long, group = "query")]
        covariance: bool,
    },
    /// Test ∫Lf dμ = 0 over monomials by Gauss–Hermite quadrature.
    InvarianceTest {
        #[arg(long)]
        potential: PathBuf,
        #[arg(long)]
        drift: PathBuf,
        #[arg(long)]
        diffusion: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_degree: u32,
    },
    /// Euler–Maruyama estimate of the stationary moments.
    Simulate {
        #[arg(long)]
        drift: PathBuf,
        #[arg(long)]
        diffusion: PathBuf,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        #[arg(long, default_value_t = 100_000)]
        steps: usize,
        #[arg(long, default_value_t = 64)]
        paths: usize,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        burn_in: usize,
        /// Initial state as inline JSON array or a file path.
        #[arg(long)]
        x0: Option<String>,
        /// Compare the covariance with (−2S)⁻¹.
        #[arg(long)]
        potential: Option<PathBuf>,
        /// CSV dump of the pooled samples.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error(transparent)]
    Core(#[from] drift_hodge::Error),
    #[error("cannot write {path}: {source}")]
    Output { path: String, source: std::io::Error },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if !e.is_precondition() => 3,
            _ => 2,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Input(_) => "InvalidInput",
            CliError::Core(e) => e.kind(),
            CliError::Output { .. } => "OutputError",
        }
    }
}

/// Command result payload plus warnings.
pub struct Outcome {
    pub name: &'static str,
    pub digest: String,
    pub result: serde_json::Value,
    pub warnings: Vec<String>,
}

fn emit(global: &GlobalOpts, outcome: Outcome) -> Result<(), CliError> {
    let timestamp = (!global.no_timestamp)
        .then(|| SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0));
    if !global.quiet {
        for w in &outcome.warnings {
            eprintln!("warning: {w}");
        }
    }
    let report = Report {
        command: outcome.name.to_string(),
        version: env!("CARGO_PKG_VERSION"),
        inputs_digest: outcome.digest,
        result: outcome.result,
        warnings: outcome.warnings,
        timestamp,
    };
    let mut text = to_json_string(&report).expect("report values serialize");
    text.push('\n');
    match &global.out {
        Some(path) => fs::write(path, text)
            .map_err(|source| CliError::Output { path: path.display().to_string(), source }),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Output { path: "stdout".into(), source }),
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("DRIFT_HODGE_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    match commands::run(&cli.command, &cli.global).and_then(|o| emit(&cli.global, o)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.kind());
            ExitCode::from(e.exit_code())
        }
    }
}
