//! Command-line driver: reads a flat configuration, runs one subcommand and
//! writes its CSV tables to the output directory.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod validate;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use commands::Table;
use config::RunConfig;

#[derive(Parser)]
#[command(name = "qdot-turnstile", version, about = "Quantum-dot two-photon turnstile simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Flat `key = value` configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory (overrides `out`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Random seed (overrides `seed`).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Trajectory count (overrides `trajectories`).
    #[arg(long, global = true)]
    trajectories: Option<usize>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Emission spectra for a series of bias and gate offsets.
    Spectrum,
    /// Cascade probabilities against the tunneling rate.
    Cascade,
    /// Entanglement entropy against the tunneling rate.
    Entangle,
    /// Entanglement entropy against the cavity misalignment.
    Cavity,
    /// Stochastic photon streams and estimators.
    Simulate,
    /// Run the invariant suite; exits nonzero if any check fails.
    Validate,
}

fn load(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
            RunConfig::parse(&text).with_context(|| format!("in {}", path.display()))?
        }
        None => RunConfig::default(),
    };
    if let Some(out) = &cli.out {
        cfg.out = out.clone();
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(n) = cli.trajectories {
        cfg.trajectories = n;
    }
    cfg.check()?;
    Ok(cfg)
}

fn write_tables(cfg: &RunConfig, tables: &[Table]) -> Result<()> {
    fs::create_dir_all(&cfg.out).with_context(|| format!("cannot create {}", cfg.out.display()))?;
    for t in tables {
        let path = cfg.out.join(t.name);
        fs::write(&path, &t.bytes).with_context(|| format!("cannot write {}", path.display()))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<bool> {
    let cfg = load(cli)?;
    let tables = match cli.command {
        Command::Spectrum => commands::spectrum(&cfg)?,
        Command::Cascade => commands::cascade(&cfg)?,
        Command::Entangle => commands::entangle(&cfg)?,
        Command::Cavity => commands::cavity(&cfg)?,
        Command::Simulate => commands::simulate(&cfg)?,
        Command::Validate => {
            let checks = validate::run_all(&cfg);
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(Vec::new());
            w.write_record(["check", "status", "detail"])?;
            for c in &checks {
                let status = if c.pass { "PASS" } else { "FAIL" };
                println!("{status}  {:<36} {}", c.name, c.detail);
                w.write_record([c.name, status, c.detail.as_str()])?;
            }
            let failed = checks.iter().filter(|c| !c.pass).count();
            println!("{} of {} checks passed", checks.len() - failed, checks.len());
            write_tables(
                &cfg,
                &[Table {
                    name: "validate.csv",
                    bytes: w.into_inner()?,
                }],
            )?;
            return Ok(failed == 0);
        }
    };
    write_tables(&cfg, &tables)?;
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
