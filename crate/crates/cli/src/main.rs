//! `degenwave` batch front-end.
//!
//! Parameters resolve in layers: built-in defaults, then the `params`
//! object of `--config`, then per-subcommand flags (each also readable from
//! a `DEGENWAVE_*` environment variable). Exit codes: 0 success, 1 numerical
//! failure, 2 configuration error; failures print a JSON error to stderr.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::{ContextKind, ContextValue, ErrorKind};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use commands::RunContext;
use config::{resolve, RunFile};
use error::CliError;

#[derive(Parser)]
#[command(name = "degenwave", version, about = "Experiments for boundary-degenerate wave equations")]
struct Cli {
    /// JSON run configuration with optional `subcommand`, `out`, `seed`, `params`.
    #[arg(long, global = true, env = "DEGENWAVE_CONFIG")]
    config: Option<PathBuf>,
    /// Output directory (default `degenwave-out`).
    #[arg(long, global = true, env = "DEGENWAVE_OUT")]
    out: Option<PathBuf>,
    #[arg(long, global = true, env = "DEGENWAVE_SEED")]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Radial eigenpairs table.
    Spectrum(SpectrumArgs),
    /// Energy and observation time series of seeded modal data.
    Simulate(SimulateArgs),
    /// Subcritical and critical Hardy constants.
    Hardy(HardyArgs),
    /// Conjugation identity residuals and Carleman component integrals.
    CarlemanCheck(CarlemanArgs),
    /// Hidden-trace ensemble and high-mode obstruction scan.
    Observability(ObservabilityArgs),
    /// Derive and certify Carleman parameters.
    ValidateParams(ValidateArgs),
}

// Override structs serialize only the flags that were given; field names
// match the parameter keys of the config file.

#[derive(Args, Serialize)]
struct SpectrumArgs {
    #[arg(long, env = "DEGENWAVE_ALPHA")]
    alpha: Option<f64>,
    /// Number of cells.
    #[arg(long, env = "DEGENWAVE_N")]
    n: Option<usize>,
    #[arg(long, env = "DEGENWAVE_GRADING")]
    grading: Option<f64>,
    #[arg(long, env = "DEGENWAVE_K_MAX")]
    k_max: Option<usize>,
    /// `consistent` or `lumped`.
    #[arg(long, env = "DEGENWAVE_MASS")]
    mass: Option<String>,
}

#[derive(Args, Serialize)]
struct SimulateArgs {
    #[arg(long, env = "DEGENWAVE_ALPHA")]
    alpha: Option<f64>,
    #[arg(long, env = "DEGENWAVE_CELLS")]
    cells: Option<usize>,
    #[arg(long, env = "DEGENWAVE_N_MAX")]
    n_max: Option<usize>,
    #[arg(long, env = "DEGENWAVE_K_MAX")]
    k_max: Option<usize>,
    #[arg(long = "horizon", env = "DEGENWAVE_T")]
    #[serde(rename = "T")]
    horizon: Option<f64>,
    #[arg(long, env = "DEGENWAVE_SAMPLES")]
    samples: Option<usize>,
    #[arg(long, env = "DEGENWAVE_MEMBER")]
    member: Option<u64>,
}

#[derive(Args, Serialize)]
struct HardyArgs {
    /// Critical truncated problem on `(δ, 1)`.
    #[arg(long)]
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    critical: bool,
    #[arg(long, env = "DEGENWAVE_ALPHA")]
    alpha: Option<f64>,
    #[arg(long, env = "DEGENWAVE_CELLS")]
    cells: Option<usize>,
    #[arg(long, env = "DEGENWAVE_DELTA")]
    delta: Option<f64>,
    /// Comma-separated blow-up scan, e.g. `0.1,0.01,0.001,0.0001`.
    #[arg(long, value_delimiter = ',', env = "DEGENWAVE_DELTAS")]
    deltas: Option<Vec<f64>>,
    #[arg(long, env = "DEGENWAVE_BC")]
    bc: Option<String>,
    /// `direct` or `log-transform`.
    #[arg(long, env = "DEGENWAVE_METHOD")]
    method: Option<String>,
}

#[derive(Args, Serialize)]
struct CarlemanArgs {
    #[arg(long, env = "DEGENWAVE_ALPHA")]
    alpha: Option<f64>,
    #[arg(long, env = "DEGENWAVE_DELTA0")]
    delta0: Option<f64>,
    #[arg(long, env = "DEGENWAVE_BETA")]
    beta: Option<f64>,
    #[arg(long = "horizon", env = "DEGENWAVE_T")]
    #[serde(rename = "T")]
    horizon: Option<f64>,
    #[arg(long, env = "DEGENWAVE_LAMBDA")]
    lambda: Option<f64>,
    #[arg(long, env = "DEGENWAVE_S")]
    s: Option<f64>,
    #[arg(long, env = "DEGENWAVE_LEVELS")]
    levels: Option<usize>,
    /// Skip the component integrals.
    #[arg(long)]
    #[serde(skip)]
    no_integrals: bool,
    #[arg(skip)]
    integrals: Option<bool>,
}

#[derive(Args, Serialize)]
struct ObservabilityArgs {
    #[arg(long, env = "DEGENWAVE_ALPHA")]
    alpha: Option<f64>,
    #[arg(long, env = "DEGENWAVE_CELLS")]
    cells: Option<usize>,
    #[arg(long, env = "DEGENWAVE_DELTA0")]
    delta0: Option<f64>,
    #[arg(long, env = "DEGENWAVE_BETA")]
    beta: Option<f64>,
    #[arg(long = "horizon", env = "DEGENWAVE_T")]
    #[serde(rename = "T")]
    horizon: Option<f64>,
    #[arg(long, env = "DEGENWAVE_MEMBERS")]
    members: Option<usize>,
    #[arg(long, env = "DEGENWAVE_N_MAX")]
    n_max: Option<usize>,
    #[arg(long, env = "DEGENWAVE_K_MAX")]
    k_max: Option<usize>,
    /// Comma-separated angular indices, e.g. `8,16,32,64`.
    #[arg(long, value_delimiter = ',', env = "DEGENWAVE_OBSTRUCTION")]
    obstruction: Option<Vec<usize>>,
}

#[derive(Args, Serialize)]
struct ValidateArgs {
    #[arg(long, env = "DEGENWAVE_ALPHA")]
    alpha: Option<f64>,
    #[arg(long, env = "DEGENWAVE_DELTA0")]
    delta0: Option<f64>,
    #[arg(long, env = "DEGENWAVE_BETA")]
    beta: Option<f64>,
    #[arg(long = "horizon", env = "DEGENWAVE_T")]
    #[serde(rename = "T")]
    horizon: Option<f64>,
    #[arg(long, env = "DEGENWAVE_LAMBDA")]
    lambda: Option<f64>,
    #[arg(long, env = "DEGENWAVE_S")]
    s: Option<f64>,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Self::Spectrum(_) => "spectrum",
            Self::Simulate(_) => "simulate",
            Self::Hardy(_) => "hardy",
            Self::CarlemanCheck(_) => "carleman-check",
            Self::Observability(_) => "observability",
            Self::ValidateParams(_) => "validate-params",
        }
    }
}

/// Drops `null` entries so that absent flags never override the file.
fn present<T: Serialize>(args: &T) -> serde_json::Value {
    let mut v = serde_json::to_value(args).expect("flags serialize");
    if let serde_json::Value::Object(m) = &mut v {
        m.retain(|_, x| !x.is_null());
    }
    v
}

fn run(cli: Cli) -> Result<Vec<PathBuf>, CliError> {
    let file = match &cli.config {
        Some(path) => RunFile::load(path)?,
        None => RunFile::default(),
    };
    let name = cli.command.name();
    if let Some(s) = &file.subcommand {
        if s != name {
            return Err(CliError::config("subcommand", format!("config is for `{s}` but `{name}` was invoked")));
        }
    }
    let ctx = RunContext {
        subcommand: name,
        out: cli.out.or(file.out).unwrap_or_else(|| PathBuf::from("degenwave-out")),
        seed: cli.seed.or(file.seed).unwrap_or(0),
    };
    let fp = &file.params;
    match cli.command {
        Command::Spectrum(a) => commands::spectrum(&ctx, &resolve(fp, &present(&a))?),
        Command::Simulate(a) => commands::simulate(&ctx, &resolve(fp, &present(&a))?),
        Command::Hardy(a) => commands::hardy(&ctx, &resolve(fp, &present(&a))?),
        Command::CarlemanCheck(mut a) => {
            if a.no_integrals {
                a.integrals = Some(false);
            }
            commands::carleman_check(&ctx, &resolve(fp, &present(&a))?)
        }
        Command::Observability(a) => commands::observability(&ctx, &resolve(fp, &present(&a))?),
        Command::ValidateParams(a) => commands::validate_params(&ctx, &resolve(fp, &present(&a))?),
    }
}

/// Flag name from a clap error, e.g. `--alpha <ALPHA>` becomes `alpha`.
fn clap_key(e: &clap::Error) -> Option<String> {
    match e.get(ContextKind::InvalidArg) {
        Some(ContextValue::String(s)) => {
            let flag = s.split_whitespace().next().unwrap_or(s);
            Some(flag.trim_start_matches('-').to_string())
        }
        _ => None,
    }
}

fn fail(e: CliError) -> ExitCode {
    eprintln!("{}", e.to_json());
    ExitCode::from(e.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.render().to_string();
            let first = rendered.lines().next().unwrap_or_default();
            let message = first.trim_start_matches("error: ").to_string();
            return fail(CliError::Config { key: clap_key(&e), message });
        }
    };
    let name = cli.command.name();
    match run(cli) {
        Ok(artifacts) => {
            println!("{}", json!({ "status": "ok", "subcommand": name, "artifacts": artifacts }));
            ExitCode::SUCCESS
        }
        Err(e) => fail(e),
    }
}
