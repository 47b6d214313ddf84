use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use scenario_drift::experiments::{self, table, ExperimentConfig, ExperimentKind, Params};
use scenario_drift::Error;

const EXIT_OTHER: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_CAPACITY: u8 = 3;
const EXIT_VALIDATION: u8 = 4;

/// Scenario approach experiments under drifting scenario distributions.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Robust interval covering: gamma and beta for each r0.
    Cover(Common),
    /// Quantized control: solution, invariant set and epsilon(k) curves.
    Control(Common),
    /// W1 between each step and the evaluation step.
    Wasserstein(Common),
    /// beta against r0 and sample sizes against epsilon.
    Bounds(Common),
    /// Monte Carlo check of the certified beta.
    Validate(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    seed: Option<u64>,
    /// TOML key-value file with parameters.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Primary CSV path; further tables go to `<stem>_<table>.csv`. Stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Parameter override, repeatable: `--set n=100 --set r0=1.8,2.0`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Control at T = 4 with exhaustive search.
    #[arg(long)]
    desk_scale: bool,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    horizon: Option<usize>,
    #[arg(long)]
    repetitions: Option<usize>,
    #[arg(long)]
    samples: Option<u64>,
}

fn build_config(kind: ExperimentKind, c: &Common) -> Result<ExperimentConfig, Error> {
    let mut config = match &c.config {
        Some(path) => ExperimentConfig::load(path, Some(kind))?,
        None => ExperimentConfig::new(kind, 0),
    };
    if let Some(seed) = c.seed {
        config.seed = seed;
    }
    let p: &mut Params = &mut config.params;
    if c.desk_scale {
        *p = p.clone().desk_scale();
    }
    let numeric = [
        ("n", c.n.map(|v| v.to_string())),
        ("epsilon", c.epsilon.map(|v| v.to_string())),
        ("beta", c.beta.map(|v| v.to_string())),
        ("horizon", c.horizon.map(|v| v.to_string())),
        ("repetitions", c.repetitions.map(|v| v.to_string())),
        ("samples", c.samples.map(|v| v.to_string())),
    ];
    for (key, value) in numeric {
        if let Some(v) = value {
            p.set(key, &v)?;
        }
    }
    for kv in &c.overrides {
        let (k, v) = kv.split_once('=').ok_or_else(|| Error::Config(format!("expected KEY=VALUE, got `{kv}`")))?;
        p.set(k.trim(), v.trim())?;
    }
    Ok(config)
}

fn execute(kind: ExperimentKind, c: &Common) -> Result<Option<bool>, Error> {
    let config = build_config(kind, c)?;
    let output = experiments::run(&config)?;
    match &c.out {
        Some(path) => {
            for written in table::write_tables(&output.tables, path)? {
                eprintln!("wrote {}", written.display());
            }
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            table::write_concatenated(&output.tables, &mut lock)?;
            lock.flush()?;
        }
    }
    Ok(output.validation_passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, common) = match &cli.command {
        Command::Cover(c) => (ExperimentKind::Cover, c),
        Command::Control(c) => (ExperimentKind::Control, c),
        Command::Wasserstein(c) => (ExperimentKind::WassersteinCurve, c),
        Command::Bounds(c) => (ExperimentKind::BoundsCurve, c),
        Command::Validate(c) => (ExperimentKind::Validate, c),
    };
    match execute(kind, common) {
        Ok(Some(false)) => {
            eprintln!("validation failed: exceedance rate above the certified bound");
            ExitCode::from(EXIT_VALIDATION)
        }
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Config(_) | Error::Domain(_) | Error::Horizon { .. } => EXIT_CONFIG,
                Error::Capacity { .. } => EXIT_CAPACITY,
                _ => EXIT_OTHER,
            })
        }
    }
}
