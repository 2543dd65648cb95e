use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;

use usp_core::harness::{
    output, regret_audit, run_bound_checks, signal_norm_experiment, sweep_degrees, BoundsConfig, ExperimentConfig,
    TrialData,
};

#[derive(Parser)]
#[command(name = "usp", version, about = "Chebyshev-preconditioned sequence prediction experiments")]
struct Cli {
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON configuration; omitted keys take their defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the configured base seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (created if missing).
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Generate one system and its trace: `trace.csv`, `system.json`.
    Simulate(Common),
    /// Degree sweep with grid search: `sweep.csv`.
    Sweep(Common),
    /// Max-norm of raw, Chebyshev-filtered and differenced signals: `norms.csv`.
    Norms {
        #[command(flatten)]
        common: Common,
        /// Comma-separated degrees.
        #[arg(long, value_delimiter = ',', default_value = "0,2,4,6,8,10,12,14,16,18,20")]
        degrees: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Chebyshev bound checks: `bounds.json`.
    VerifyBounds(Common),
    /// Regret audit on a noiseless system: `regret.json`.
    Regret {
        #[command(flatten)]
        common: Common,
        /// Filter degree; defaults to ceil(3 log2(|C||B| kappa T)).
        #[arg(long)]
        degree: Option<usize>,
        /// Regularization; defaults to 1/|x*|^2.
        #[arg(long)]
        lambda: Option<f64>,
    },
}

fn load<T: DeserializeOwned>(path: Option<&Path>, fallback: T) -> Result<T> {
    match path {
        None => Ok(fallback),
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))
        }
    }
}

fn experiment(common: &Common, fallback: ExperimentConfig) -> Result<ExperimentConfig> {
    let mut config = load(common.config.as_deref(), fallback)?;
    if let Some(seed) = common.seed {
        config.base_seed = seed;
    }
    config.validate()?;
    Ok(config)
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate(common) => {
            let config = experiment(&common, ExperimentConfig::high_dim())?;
            let data = TrialData::generate(&config, config.base_seed)?;
            write(&common.out, "trace.csv", &output::trace_csv(&data.trace))?;
            write(&common.out, "system.json", &output::to_json(&data.system.record())?)?;
        }
        Command::Sweep(common) => {
            let config = experiment(&common, ExperimentConfig::high_dim())?;
            write(&common.out, "sweep.csv", &output::sweep_csv(&sweep_degrees(&config)?))?;
        }
        Command::Norms { common, degrees, trials } => {
            let config = experiment(&common, ExperimentConfig::high_dim())?;
            write(&common.out, "norms.csv", &output::norms_csv(&signal_norm_experiment(&config, &degrees, trials)?))?;
        }
        Command::VerifyBounds(common) => {
            let config: BoundsConfig = load(common.config.as_deref(), BoundsConfig::default())?;
            let summary = run_bound_checks(&config, common.seed.unwrap_or(0))?;
            write(&common.out, "bounds.json", &output::to_json(&summary)?)?;
            let failed: Vec<&str> = summary.reports.iter().filter(|r| !r.pass).map(|r| r.lemma.as_str()).collect();
            if !failed.is_empty() {
                eprintln!("checks not satisfied: {}", failed.join(", "));
            }
        }
        Command::Regret { common, degree, lambda } => {
            let config = experiment(&common, ExperimentConfig::noiseless_sector())?;
            if config.noise_sigma != 0.0 {
                bail!("regret audit needs noise_sigma = 0, got {}", config.noise_sigma);
            }
            let report = regret_audit(&config, degree, lambda, config.base_seed)?;
            write(&common.out, "regret.json", &output::to_json(&report)?)?;
        }
    }
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring the thread pool")?;
    }
    run(cli)
}
