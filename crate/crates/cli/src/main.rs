use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use mi_spectra_core::{AnalyticError, HillError, StokesError, SymbolError, VerifyError};
use serde_json::json;

mod commands;
mod config;
mod output;
mod svg;

use config::RunConfig;
use output::Sink;

/// Modulational stability spectra of periodic waves of generalized KdV equations.
#[derive(Parser)]
#[command(name = "mi-spectra", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Run configuration (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; overrides the config's `outputs`.
    #[arg(long, global = true, env = "MI_SPECTRA_OUT")]
    out: Option<PathBuf>,
    /// Worker threads for μ slices and sweeps.
    #[arg(long, global = true, env = "MI_SPECTRA_THREADS")]
    threads: Option<usize>,
}

#[derive(Subcommand, Clone, Copy, Debug)]
enum Command {
    /// Check the dispersion symbol hypotheses.
    Check,
    /// Stokes expansion and wave profile.
    Stokes,
    /// Whitham–Benjamin coefficient and verdict.
    Wb,
    /// Closed-form spectrum near the origin.
    Spectrum,
    /// Hill's method spectrum.
    Hill,
    /// Analytic against Hill, with an overlay plot.
    Compare,
    /// Whitham–Benjamin coefficient over a range of ρ.
    Sweep,
}

/// Exit code when a run finished but its checks failed.
const CHECKS_FAILED: u8 = 2;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(CHECKS_FAILED),
        Err(e) => {
            eprintln!("{}", error_json(&cli, &e));
            ExitCode::FAILURE
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<bool> {
    let path = cli.config.as_ref().context("--config <path> is required")?;
    let cfg = RunConfig::load(path)?;
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let dir = cli.out.clone().unwrap_or_else(|| cfg.outputs.clone());
    let mut sink = Sink::new(&dir)?;
    let outcome = match cli.command {
        Command::Check => commands::check(&cfg, &mut sink),
        Command::Stokes => commands::stokes(&cfg, &mut sink),
        Command::Wb => commands::wb(&cfg, &mut sink),
        Command::Spectrum => commands::spectrum(&cfg, &mut sink),
        Command::Hill => commands::hill(&cfg, &mut sink),
        Command::Compare => commands::compare(&cfg, &mut sink),
        Command::Sweep => commands::sweep(&cfg, &mut sink),
    }?;
    println!("{}", outcome.summary);
    for p in sink.written() {
        log::info!("wrote {}", p.display());
    }
    Ok(outcome.passed)
}

/// Category of the innermost library error in the chain.
fn kind(e: &anyhow::Error) -> &'static str {
    for cause in e.chain() {
        if cause.is::<SymbolError>() {
            return "symbol";
        }
        if cause.is::<StokesError>() {
            return "stokes";
        }
        if cause.is::<AnalyticError>() {
            return "analytic";
        }
        if cause.is::<HillError>() {
            return "hill";
        }
        if cause.is::<VerifyError>() {
            return "verify";
        }
        if cause.is::<serde_json::Error>() {
            return "config";
        }
        if cause.is::<std::io::Error>() {
            return "io";
        }
    }
    "config"
}

fn error_json(cli: &Cli, e: &anyhow::Error) -> String {
    json!({
        "error": {
            "command": format!("{:?}", cli.command).to_lowercase(),
            "kind": kind(e),
            "message": e.to_string(),
            "causes": e.chain().skip(1).map(|c| c.to_string()).collect::<Vec<_>>(),
        }
    })
    .to_string()
}
