// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use spinlink_cli::{execute, Command, Overrides};

#[derive(Parser)]
#[command(name = "sim", version, about = "Run interface-simulator scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the scenario named in the config (or in a run manifest).
    Run(Common),
    /// Sweep the swap fidelity over the config's (kappa, coupling) grid.
    Sweep(Common),
    /// Fit the network sech pulse width and center.
    Calibrate(Common),
}

#[derive(Args)]
struct Common {
    config: PathBuf,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for seeded-random ensemble sampling.
    #[arg(long)]
    seed: Option<u64>,
    /// Relative integrator tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Also write plot.svg.
    #[arg(long)]
    svg: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cmd, c) = match cli.command {
        Cmd::Run(c) => (Command::Run, c),
        Cmd::Sweep(c) => (Command::Sweep, c),
        Cmd::Calibrate(c) => (Command::Calibrate, c),
    };
    let overrides = Overrides { out: c.out, seed: c.seed, rel_tol: c.tol, svg: c.svg };
    match execute(cmd, &c.config, &overrides) {
        Ok(m) => {
            println!("{}", serde_json::to_string(&m.metrics).expect("metrics serialize"));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("sim: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
