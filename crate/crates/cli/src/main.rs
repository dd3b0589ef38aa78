use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod config;
mod error;
mod io;
mod selftest;

use config::ExperimentConfig;
use error::CliError;

/// Forward synthesis and inverse source recovery for the time-dependent Lamé system.
#[derive(Parser)]
#[command(name = "lamesrc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Experiment configuration (TOML); built-in defaults when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory. Falls back to `output.dir`, then `$LAMESRC_OUT/<command>`, then `lamesrc-out/<command>`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides `noise.seed`.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesise receiver data for both experiments.
    Forward(Common),
    /// Reconstruct the spatial source from circular frequency data.
    InvertSpatial {
        #[command(flatten)]
        common: Common,
        /// Data file or a `forward` output directory.
        #[arg(long)]
        data: PathBuf,
        /// Grid file with the true source, for error reporting.
        #[arg(long)]
        truth: Option<PathBuf>,
    },
    /// Recover the temporal source from point time series.
    InvertTemporal {
        #[command(flatten)]
        common: Common,
        /// Data file or a `forward` output directory.
        #[arg(long)]
        data: PathBuf,
    },
    /// Run the invariant checks of every module.
    Selftest {
        #[command(flatten)]
        common: Common,
        /// Force the named check to fail (repeatable).
        #[arg(long)]
        breach: Vec<String>,
    },
}

fn load(common: &Common) -> Result<ExperimentConfig, CliError> {
    let mut cfg = match &common.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(s) = common.seed {
        cfg.noise.seed = s;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn out_dir(common: &Common, cfg: &ExperimentConfig, command: &str) -> PathBuf {
    if let Some(o) = &common.out {
        return o.clone();
    }
    if let Some(o) = &cfg.output.dir {
        return o.join(command);
    }
    match std::env::var_os("LAMESRC_OUT") {
        Some(v) if !v.is_empty() => Path::new(&v).join(command),
        _ => Path::new("lamesrc-out").join(command),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Forward(common) => {
            let cfg = load(&common)?;
            let m = commands::run_forward(&cfg, &out_dir(&common, &cfg, "forward"))?;
            println!("wrote {}", m.display());
        }
        Command::InvertSpatial { common, data, truth } => {
            let cfg = load(&common)?;
            let m = commands::run_invert_spatial(&cfg, &data, truth.as_deref(), &out_dir(&common, &cfg, "invert-spatial"))?;
            println!("wrote {}", m.display());
        }
        Command::InvertTemporal { common, data } => {
            let cfg = load(&common)?;
            let m = commands::run_invert_temporal(&cfg, &data, &out_dir(&common, &cfg, "invert-temporal"))?;
            println!("wrote {}", m.display());
        }
        Command::Selftest { common, breach } => {
            let cfg = load(&common)?;
            let results = selftest::run(&cfg.medium()?, &breach)?;
            let mut failed = Vec::new();
            for r in &results {
                let status = if r.passed() { "PASS" } else { "FAIL" };
                match &r.error {
                    Some(e) => println!("{status} {:<26} error: {e} ({:.3}s)", r.name, r.seconds),
                    None => println!("{status} {:<26} {:.3e} (tol {:.0e}) ({:.3}s)", r.name, r.value, r.tolerance, r.seconds),
                }
                if !r.passed() {
                    failed.push(r.name);
                }
            }
            if !failed.is_empty() {
                return Err(CliError::Numeric(format!("failed checks: {}", failed.join(", "))));
            }
            println!("all {} checks passed", results.len());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("lamesrc: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
