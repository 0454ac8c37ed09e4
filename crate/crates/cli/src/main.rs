use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};
use mcg_cli::commands::{self, ThermistorConfig};
use mcg_cli::{AlphaRange, RunConfig};

#[derive(Parser)]
#[command(name = "mcg", version, about = "Thermistor-memristor oscillator: simulation, sweeps and stability analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Configuration file (`key = value` text or flat JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for sweeps.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    /// Lower sweep bound; for `simulate`, the alpha to run
    #[arg(long, global = true)]
    alpha_min: Option<f64>,
    /// Upper sweep bound (inclusive)
    #[arg(long, global = true)]
    alpha_max: Option<f64>,
    /// Sweep step
    #[arg(long, global = true)]
    alpha_step: Option<f64>,
    /// Reserved; every method is deterministic.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate and analyse one parameter point.
    Simulate,
    /// Sweep alpha: bifurcation maxima, Lyapunov spectra and classes.
    Sweep,
    /// Origin eigenvalues over an alpha range.
    Eigen,
    /// Compare the exponential thermistor law with its Taylor surrogate.
    FitThermistor,
}

impl Common {
    fn run_config(&self) -> Result<RunConfig> {
        match &self.config {
            Some(p) => RunConfig::load(p),
            None => Ok(RunConfig::default()),
        }
    }

    fn range(&self, from_config: Option<AlphaRange>, fallback: AlphaRange) -> AlphaRange {
        let base = from_config.unwrap_or(fallback);
        AlphaRange {
            min: self.alpha_min.unwrap_or(base.min),
            max: self.alpha_max.unwrap_or(base.max),
            step: self.alpha_step.unwrap_or(base.step),
        }
    }
}

fn run(cli: Cli) -> Result<String> {
    let c = &cli.common;
    match cli.command {
        Command::Simulate => {
            let mut cfg = c.run_config()?;
            if let Some(a) = c.alpha_min {
                cfg.params = cfg.params.with_alpha(a)?;
            }
            commands::simulate(&cfg, c.out.as_deref())
        }
        Command::Sweep => {
            let cfg = c.run_config()?;
            let range = c.range(cfg.alpha_range, AlphaRange { min: 0.001, max: 1.2, step: 0.01 });
            let Some(out) = &c.out else { bail!("sweep needs --out <dir>") };
            let spec = commands::sweep_spec(&cfg, range, c.workers);
            Ok(commands::sweep(&spec, out)?.1)
        }
        Command::Eigen => {
            let cfg = c.run_config()?;
            let range = c.range(cfg.alpha_range, AlphaRange { min: 0.5, max: 10.0, step: 0.5 });
            let table = commands::eigen_table(&cfg, range)?;
            if let Some(out) = &c.out {
                std::fs::create_dir_all(out)?;
                std::fs::write(out.join("eigen.csv"), &table)?;
            }
            Ok(table)
        }
        Command::FitThermistor => {
            let cfg = match &c.config {
                Some(p) => ThermistorConfig::load(p)?,
                None => ThermistorConfig::default(),
            };
            commands::fit_thermistor_cmd(&cfg, c.out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
