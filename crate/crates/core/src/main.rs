use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use chanrate::bounds::bound_report;
use chanrate::env::SyntheticDriftSpec;
use chanrate::harness::{output::emit_outputs, run_experiment, ExperimentConfig};
use chanrate::io::{read_rates_json, read_theta_csv, structure_report};

#[derive(Parser)]
#[command(name = "chanrate", version, about = "Channel and rate selection bandits: simulation, bounds and structure checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a JSON config.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Use seeds 0..N instead of the config's seed list.
        #[arg(long)]
        seeds: Option<u64>,
        #[arg(long, default_value = "results")]
        out: PathBuf,
    },
    /// Print the regret constants of a success-probability table as JSON.
    Bounds {
        #[arg(long)]
        theta: PathBuf,
        #[arg(long)]
        rates: PathBuf,
    },
    /// Print monotonicity and unimodality checks as JSON.
    Check {
        #[arg(long)]
        theta: PathBuf,
        #[arg(long)]
        rates: PathBuf,
    },
    /// Generate a synthetic drifting trace as CSV.
    GenEnv {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate { config, seeds, out } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            if let Some(n) = seeds {
                cfg.seeds = (0..n).collect();
            }
            let exp = cfg.validate()?;
            let rates = exp.rates();
            let result = run_experiment(&exp)?;
            emit_outputs(&result, &rates, &out)?;
            println!("wrote results to {}", out.display());
        }
        Command::Bounds { theta, rates } => {
            let model = read_theta_csv(&theta, &read_rates_json(&rates)?)?;
            println!("{}", serde_json::to_string_pretty(&bound_report(&model))?);
        }
        Command::Check { theta, rates } => {
            let model = read_theta_csv(&theta, &read_rates_json(&rates)?)?;
            println!("{}", serde_json::to_string_pretty(&structure_report(&model))?);
        }
        Command::GenEnv { spec, out } => {
            let text = fs::read_to_string(&spec).with_context(|| format!("reading {}", spec.display()))?;
            let spec: SyntheticDriftSpec =
                serde_json::from_str(&text).with_context(|| format!("parsing {}", spec.display()))?;
            let trace = spec.generate()?;
            let file = fs::File::create(&out).with_context(|| format!("creating {}", out.display()))?;
            trace.write_csv(file)?;
            println!("wrote {} segments to {}", trace.segments().len(), out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
