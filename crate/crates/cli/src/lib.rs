// SPDX-License-Identifier: Apache-2.0

//! Scenario runner for the spinlink simulator.
//!
//! A scenario is a JSON config whose physical quantities carry unit tags.
//! [`execute`] runs one command on a config and writes its CSV, SVG and
//! manifest outputs; the `sim` binary is a thin wrapper around it.

pub mod config;
pub mod error;
pub mod output;
pub mod run;
pub mod svg;

use std::path::{Path, PathBuf};
use std::time::Instant;

pub use config::Config;
pub use error::CliError;
use output::{RunManifest, Software, Summary};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Whatever the scenario names.
    Run,
    Sweep,
    Calibrate,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Run => "run",
            Command::Sweep => "sweep",
            Command::Calibrate => "calibrate",
        }
    }
}

/// Command-line settings layered over the config.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub rel_tol: Option<f64>,
    pub svg: bool,
}

impl Overrides {
    pub fn apply(&self, mut cfg: Config) -> Result<Config, CliError> {
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(t) = self.rel_tol {
            if !(t > 0.0) {
                return Err(CliError::config("--tol must be positive"));
            }
            cfg.integrator.rel_tol = t;
        }
        if let Some(o) = &self.out {
            cfg.output = Some(o.display().to_string());
        }
        cfg.resolved()
    }
}

enum Mode {
    Single,
    Sweep,
    Calibrate,
}

fn mode(cmd: Command, cfg: &Config) -> Mode {
    use config::Scenario;
    match cmd {
        Command::Sweep => Mode::Sweep,
        Command::Calibrate => Mode::Calibrate,
        Command::Run => match cfg.scenario {
            Scenario::Sweep => Mode::Sweep,
            Scenario::Calibrate => Mode::Calibrate,
            _ => Mode::Single,
        },
    }
}

fn population_plot(out: &run::RunOutput) -> Result<String, CliError> {
    let series: Vec<(&str, &[f64])> =
        out.columns.iter().filter(|(n, _)| !n.starts_with("control_")).map(|(n, v)| (n.as_str(), v.as_slice())).collect();
    svg::line_plot("time (1/base rate)", &out.times, &series)
}

fn sweep_plot(s: &run::SweepOutput) -> Result<String, CliError> {
    let mut kappas: Vec<f64> = Vec::new();
    for c in &s.cells {
        if !kappas.contains(&c.kappa) {
            kappas.push(c.kappa);
        }
    }
    let row = |k: f64| s.cells.iter().filter(move |c| c.kappa == k);
    let xs: Vec<f64> = row(kappas[0]).map(|c| c.coupling).collect();
    let names: Vec<String> = kappas.iter().map(|k| format!("kappa {k}")).collect();
    let ys: Vec<Vec<f64>> = kappas.iter().map(|&k| row(k).map(|c| c.peak_fidelity.unwrap_or(f64::NAN)).collect()).collect();
    let series: Vec<(&str, &[f64])> = names.iter().zip(&ys).map(|(n, y)| (n.as_str(), y.as_slice())).collect();
    svg::line_plot("coupling", &xs, &series)
}

/// Runs `cmd` on an already parsed config and writes outputs to the
/// config's output directory (default `out`).
pub fn execute_config(cmd: Command, cfg: Config, overrides: &Overrides) -> Result<RunManifest, CliError> {
    let cfg = overrides.apply(cfg)?;
    let dir = PathBuf::from(cfg.output.clone().unwrap_or_else(|| "out".into()));
    let started = Instant::now();
    let mut files: Vec<(String, String)> = Vec::new();
    let summary = match mode(cmd, &cfg) {
        Mode::Single => {
            let out = run::run_single(&cfg)?;
            files.push(("timeseries.csv".into(), output::timeseries_csv(&out)));
            if let Some(w) = &out.wigner {
                files.push(("wigner.csv".into(), output::wigner_csv(&w.grid)));
            }
            if overrides.svg {
                files.push(("plot.svg".into(), population_plot(&out)?));
            }
            Summary::Run(out.metrics)
        }
        Mode::Sweep => {
            let s = run::run_sweep(&cfg)?;
            files.push(("grid.csv".into(), output::grid_csv(&s)));
            if overrides.svg {
                files.push(("plot.svg".into(), sweep_plot(&s)?));
            }
            Summary::of_sweep(&s)
        }
        Mode::Calibrate => {
            let c = run::calibrate(&cfg)?;
            files.push(("calibrated.json".into(), c.calibrated_config.to_json() + "\n"));
            Summary::of_calibration(&c)
        }
    };
    let manifest = RunManifest {
        software: Software::current(),
        command: cmd.name().into(),
        seed: cfg.seed,
        wall_clock_seconds: started.elapsed().as_secs_f64(),
        outputs: files.iter().map(|(n, _)| n.clone()).chain(["manifest.json".to_string()]).collect(),
        metrics: summary,
        config: cfg,
    };
    std::fs::create_dir_all(&dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    for (name, text) in &files {
        output::write(&dir, name, text)?;
    }
    output::write(&dir, "manifest.json", &manifest.to_json())?;
    Ok(manifest)
}

/// Loads `path` (a config or a manifest) and runs `cmd` on it.
pub fn execute(cmd: Command, path: &Path, overrides: &Overrides) -> Result<RunManifest, CliError> {
    execute_config(cmd, Config::load(path)?, overrides)
}
