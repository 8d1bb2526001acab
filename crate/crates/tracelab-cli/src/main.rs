//! Command-line front end: evaluate trace functionals, run certification
//! suites and counterexample searches, verify superoperator monotonicity, and
//! reproduce the scripted channel demonstrations. Reports are JSON and are
//! byte-identical across reruns of the same configuration.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::RunConfig;

/// Exit codes: 0 success/holds/witness, 2 schema violation, 3 domain error,
/// 4 claim violated, 5 inconclusive or search exhausted.
pub const EXIT_OK: u8 = 0;
pub const EXIT_SCHEMA: u8 = 2;
pub const EXIT_DOMAIN: u8 = 3;
pub const EXIT_VIOLATED: u8 = 4;
pub const EXIT_INCONCLUSIVE: u8 = 5;

#[derive(Parser)]
#[command(name = "tracelab", version, about = "Numerical laboratory for matrix trace functionals", long_about = None)]
struct Cli {
    /// JSON run configuration; flags below override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// RNG seed (default 0).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Number of randomized trials (default 1000).
    #[arg(long, global = true)]
    trials: Option<u64>,

    /// Evaluation budget for searches (default 100000).
    #[arg(long, global = true)]
    budget: Option<u64>,

    /// Matrix dimension (default 3).
    #[arg(long, global = true)]
    dim: Option<usize>,

    /// Relative verdict tolerance override (default 1e-7).
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Report destination; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Per-trial gap CSV destination (columns: trial, gap, scale).
    #[arg(long, global = true)]
    csv: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a trace functional on matrices from the config file.
    /// Targets: psi-pqs, lambda, psi-ps, phi-triple, two-var.
    Eval { target: Option<String> },
    /// Run a randomized certification suite. Targets: joint-convexity,
    /// channel-monotonicity, lambda-monotonicity, quadratic-monotonicity,
    /// scalar-boundary.
    Certify { target: Option<String> },
    /// Hunt for a counterexample. Targets: nonconcavity, nonconvexity,
    /// nonconcavity-congruent, triple-nonconcavity, lambda-violation,
    /// specialization-violation.
    Search { target: Option<String> },
    /// Superoperator and metric suites. Targets: kernel-agreement,
    /// hessian-fd, metric-monotonicity, kernel-monotonicity,
    /// norm-metric-mismatch, quadrature, q-inverse.
    Metrics { target: Option<String> },
    /// Scripted demonstrations. Targets: trace-doubling,
    /// block-swap-midpoint, lambda-violation, all (default).
    Demo { target: Option<String> },
}

pub enum Failure {
    Schema(String),
    Domain(tracelab::Error),
}

impl From<tracelab::Error> for Failure {
    fn from(e: tracelab::Error) -> Self {
        Failure::Domain(e)
    }
}

pub type CmdResult = Result<(serde_json::Value, u8), Failure>;

fn load_config(cli: &Cli) -> Result<RunConfig, Failure> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Schema(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str::<RunConfig>(&text)
                .map_err(|e| Failure::Schema(format!("bad config: {e}")))?
        }
        None => RunConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(t) = cli.trials {
        cfg.trials = t;
    }
    if let Some(b) = cli.budget {
        cfg.budget = b;
    }
    if let Some(d) = cli.dim {
        cfg.dim = d;
    }
    if cli.tol.is_some() {
        cfg.tol = cli.tol;
    }
    if cli.out.is_some() {
        cfg.out = cli.out.clone();
    }
    if cli.csv.is_some() {
        cfg.csv = cli.csv.clone();
    }
    Ok(cfg)
}

fn resolve_target(cfg: &mut RunConfig, positional: Option<String>) -> Result<String, Failure> {
    if let Some(t) = positional {
        cfg.target = Some(t);
    }
    cfg.target
        .clone()
        .ok_or_else(|| Failure::Schema("no target given (positional or config.target)".into()))
}

fn emit(cfg: &RunConfig, value: &serde_json::Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("reports are serializable");
    match &cfg.out {
        Some(path) => std::fs::write(path, text.as_bytes())
            .map_err(|e| Failure::Schema(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn configure_threads() {
    if let Ok(v) = std::env::var("TRACELAB_THREADS") {
        if let Ok(k) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(k.max(1)).build_global();
        }
    }
}

fn main() -> ExitCode {
    configure_threads();
    let cli = Cli::parse();
    let outcome = (|| -> CmdResult {
        let mut cfg = load_config(&cli)?;
        let (value, code) = match &cli.command {
            Command::Eval { target } => {
                let t = resolve_target(&mut cfg, target.clone())?;
                commands::eval(&cfg, &t)?
            }
            Command::Certify { target } => {
                let t = resolve_target(&mut cfg, target.clone())?;
                commands::certify(&cfg, &t)?
            }
            Command::Search { target } => {
                let t = resolve_target(&mut cfg, target.clone())?;
                commands::search(&cfg, &t)?
            }
            Command::Metrics { target } => {
                let t = resolve_target(&mut cfg, target.clone())?;
                commands::metrics(&cfg, &t)?
            }
            Command::Demo { target } => {
                if let Some(t) = target.clone() {
                    cfg.target = Some(t);
                }
                let t = cfg.target.clone().unwrap_or_else(|| "all".to_string());
                commands::demo(&cfg, &t)?
            }
        };
        emit(&cfg, &value)?;
        Ok((value, code))
    })();

    match outcome {
        Ok((_, code)) => ExitCode::from(code),
        Err(Failure::Schema(msg)) => {
            eprintln!("schema error: {msg}");
            ExitCode::from(EXIT_SCHEMA)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("domain error: {e}");
            match e {
                tracelab::Error::SearchExhausted { .. } => ExitCode::from(EXIT_INCONCLUSIVE),
                _ => ExitCode::from(EXIT_DOMAIN),
            }
        }
    }
}
