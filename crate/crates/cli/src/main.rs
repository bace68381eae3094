// Copyright 2026 nhbath Contributors
// SPDX-License-Identifier: Apache-2.0

//! `nhbath`: poles, decay curves, sweeps and figure data for an emitter at
//! the edge of a lossy lattice.
//!
//! Exit codes: 0 success, 2 invalid input, 3 numerical failure, 1 output
//! could not be written. Errors go to stderr as a one-line JSON object.

mod commands;
mod config;
mod error;
mod fig;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{Flags, Needs, Route, RunConfig};
use error::CliError;
use report::Report;

#[derive(Debug, Parser)]
#[command(name = "nhbath", version, about, propagate_version = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// Poles on both sheets, critical loss rates and exceptional point
    Poles,
    /// Survival amplitude along one or more routes
    Decay,
    /// Pole trajectories and events along a loss-rate sweep
    Sweep,
    /// Regime, pole census and asymptotic channel on a (g0, gamma) grid
    PhaseDiagram,
    /// Loss rate that maximises the asymptotic decay rate
    Optimal,
    /// Cross-check spectral, lattice, momentum and master-equation routes
    Verify,
    /// Data behind one of the published figures
    Fig {
        /// Figure number: 3, 4, 5, 6, 7, 8, 9, 10, 11 or 13
        id: u32,
    },
}

impl Command {
    fn needs(self) -> Needs {
        match self {
            Command::Poles | Command::Decay | Command::Verify => Needs::Model,
            Command::Sweep | Command::Optimal => Needs::Coupling,
            Command::PhaseDiagram | Command::Fig { .. } => Needs::Nothing,
        }
    }

    fn routes(self, cfg: &RunConfig) -> Vec<Route> {
        match self {
            Command::Decay => cfg.route.expand(),
            Command::Verify => vec![Route::Spectral, Route::Lattice],
            Command::Fig { .. } => vec![Route::Spectral],
            _ => Vec::new(),
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let text = match &cli.flags.config {
        Some(path) => Some(config::read_config_file(path)?),
        None => None,
    };
    let (cfg, output) = config::resolve(&cli.flags, text.as_deref())?;
    cfg.validate(cli.command.needs(), &cli.command.routes(&cfg))?;
    if let Command::Fig { id } = cli.command {
        if fig::figure(id).is_none() {
            return Err(CliError::Usage(format!(
                "no data for figure {id}; available: {:?}",
                fig::FIGURE_IDS
            )));
        }
    }

    let mut failure = None;
    let report: Report = match cli.command {
        Command::Poles => commands::poles(&cfg)?,
        Command::Decay => commands::decay(&cfg)?,
        Command::Sweep => commands::sweep(&cfg)?,
        Command::PhaseDiagram => commands::phase(&cfg)?,
        Command::Optimal => commands::optimal(&cfg)?,
        Command::Verify => {
            let (report, failed) = commands::verify(&cfg)?;
            failure = failed;
            report
        }
        Command::Fig { id } => fig::run(id, &cfg)?,
    };

    let text = report.render(output.format);
    match &output.path {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    match failure {
        Some(msg) => Err(CliError::Verification(msg)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::Usage(e.to_string().trim().to_string());
            eprintln!("{}", err.to_json());
            return ExitCode::from(err.exit_code() as u8);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{}", err.to_json());
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
