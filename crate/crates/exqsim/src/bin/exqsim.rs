// Copyright 2026 the exqsim developers
// SPDX-License-Identifier: Apache-2.0

//! Experiment runner CLI: `exqsim <kind> --config <path> [overrides]`.

use clap::Parser;
use exqsim::experiments::{run_experiment, ExperimentConfig, ExperimentKind};
use exqsim::mcwf::Backend;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "exqsim",
    about = "Exchange-only spin-chain simulator: gate verification, synthesis and fidelity sweeps",
    version
)]
struct Cli {
    /// Experiment kind: gate-verify | synth | cnot-fidelity | free-evolution |
    /// emission-fidelity | dj | sandwich | bare-cnot-compare
    kind: String,

    /// JSON experiment configuration
    #[arg(long)]
    config: PathBuf,

    /// Override the config seed
    #[arg(long)]
    seed: Option<u64>,

    /// Override the trajectory count
    #[arg(long)]
    n_traj: Option<usize>,

    /// Override the propagation backend
    #[arg(long, value_parser = parse_backend)]
    backend: Option<Backend>,

    /// Output directory
    #[arg(long, default_value = "exqsim-out")]
    out: PathBuf,
}

fn parse_backend(s: &str) -> Result<Backend, String> {
    match s {
        "dense" => Ok(Backend::Dense),
        "split" => Ok(Backend::Split),
        other => Err(format!("unknown backend '{other}' (use dense or split)")),
    }
}

fn run(cli: Cli) -> exqsim::Result<()> {
    let kind = ExperimentKind::parse(&cli.kind)?;
    let text = std::fs::read_to_string(&cli.config)?;
    let mut config = ExperimentConfig::from_json(&text)?;
    if config.kind != kind {
        return Err(exqsim::Error::InvalidConfig(format!(
            "config kind '{}' does not match requested '{}'",
            config.kind.name(),
            kind.name()
        )));
    }
    if let Some(seed) = cli.seed {
        config.seed = Some(seed);
    }
    if let Some(n) = cli.n_traj {
        config.n_traj = Some(n);
    }
    if let Some(b) = cli.backend {
        config.backend = Some(b);
    }
    let report = run_experiment(&config, &cli.out)?;
    println!("{}: wrote {}", kind.name(), report.out_dir.display());
    for f in &report.data_files {
        println!("  data    {}", f.display());
    }
    println!("  summary {}", report.summary_file.display());
    println!("  manifest {}", report.manifest_file.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
