// SPDX-License-Identifier: Apache-2.0

//! CSV and manifest serialization. Numbers are written in shortest
//! round-trip form, so reruns are byte-identical and values parse back
//! exactly.

use std::fmt::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use spinlink::analysis::WignerGrid;

use crate::config::Config;
use crate::error::CliError;
use crate::run::{CalibrationOutput, Metrics, RunOutput, SweepOutput};

pub fn timeseries_csv(out: &RunOutput) -> String {
    let mut s = String::from("time");
    for (name, _) in &out.columns {
        s.push(',');
        s.push_str(name);
    }
    s.push('\n');
    for (k, t) in out.times.iter().enumerate() {
        let _ = write!(s, "{t}");
        for (_, col) in &out.columns {
            let _ = write!(s, ",{}", col[k]);
        }
        s.push('\n');
    }
    s
}

/// Dense grid: the header row holds `Re(alpha)`, each following row starts
/// with its `Im(alpha)`.
pub fn wigner_csv(grid: &WignerGrid<f64>) -> String {
    let n = grid.points;
    let mut s = String::from("im\\re");
    for c in 0..n {
        let _ = write!(s, ",{}", grid.coordinate(c));
    }
    s.push('\n');
    for r in 0..n {
        let _ = write!(s, "{}", grid.coordinate(r));
        for c in 0..n {
            let _ = write!(s, ",{}", grid.value(r, c));
        }
        s.push('\n');
    }
    s
}

pub fn grid_csv(sweep: &SweepOutput) -> String {
    let mut s = String::from("kappa,g,peakFidelity,peakTime,pass,error\n");
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for c in &sweep.cells {
        let err = c.error.as_deref().unwrap_or("").replace(['"', '\n'], "'");
        let err = if err.is_empty() { err } else { format!("\"{err}\"") };
        let _ = writeln!(s, "{},{},{},{},{},{}", c.kappa, c.coupling, opt(c.peak_fidelity), opt(c.peak_time), c.pass, err);
    }
    s
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Software {
    pub name: String,
    pub version: String,
}

impl Software {
    pub fn current() -> Self {
        Self { name: env!("CARGO_PKG_NAME").into(), version: env!("CARGO_PKG_VERSION").into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Summary {
    Run(Metrics),
    Sweep { min_peak_fidelity: Option<f64>, failed_cells: usize, passing_cells: usize, cells: usize },
    Calibration { tau_c: f64, center: f64, peak_fidelity: f64, peak_time: f64, evaluations: usize, converged: bool },
}

impl Summary {
    pub fn of_sweep(s: &SweepOutput) -> Self {
        Summary::Sweep {
            min_peak_fidelity: s.min_fidelity(),
            failed_cells: s.failures(),
            passing_cells: s.cells.iter().filter(|c| c.pass).count(),
            cells: s.cells.len(),
        }
    }

    pub fn of_calibration(c: &CalibrationOutput) -> Self {
        Summary::Calibration {
            tau_c: c.tau_c,
            center: c.center,
            peak_fidelity: c.peak_fidelity,
            peak_time: c.peak_time,
            evaluations: c.evaluations,
            converged: c.converged,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub software: Software,
    pub command: String,
    pub seed: u64,
    pub wall_clock_seconds: f64,
    pub outputs: Vec<String>,
    pub metrics: Summary,
    /// Fully resolved config; `sim run` accepts the manifest in its place.
    pub config: Config,
}

impl RunManifest {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::config(format!("manifest: {e}")))
    }
}

pub fn write(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    std::fs::write(dir.join(name), contents).map_err(|e| CliError::Io(format!("{}: {e}", dir.join(name).display())))
}
