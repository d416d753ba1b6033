// SPDX-License-Identifier: Apache-2.0

//! Scenario execution: single runs, sweeps and pulse calibration.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use spinlink::analysis::{reduce_to_cavity, wigner, WignerGrid};
use spinlink::evolve::{uniform_times, EvolveOptions};
use spinlink::network::{run_transfer_with_snapshot, NetworkModel};
use spinlink::node::{CouplingMode, NodeModel};
use spinlink::optimize::{minimize_bounded, NelderMeadOptions};
use spinlink::protocol::run_swap_with_snapshot;
use spinlink::pulse::ChirpMode;
use spinlink::{NetworkParams, NodeParams, PulseSchedule};

use crate::config::{Bound, Config, NodeLabel, PulseConfig, PulseScaling, Quantity, Units, Window};
use crate::error::CliError;

/// STIRAP pulse pair in base units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StirapPulse {
    pub j1_peak: f64,
    pub tau_f: f64,
    pub tau_c: f64,
    pub optical_center: f64,
    pub qubit_delay: f64,
    pub start: f64,
    pub end: f64,
    pub chirp: ChirpMode,
}

impl StirapPulse {
    pub fn schedule(&self, omega_c0: f64) -> Result<PulseSchedule, CliError> {
        Ok(PulseSchedule::stirap(self.j1_peak, omega_c0, self.tau_f, self.tau_c, self.optical_center, self.qubit_delay, self.chirp)?)
    }

    /// Stretches every time by `factor`.
    pub fn stretched(&self, factor: f64) -> Self {
        Self {
            tau_f: self.tau_f * factor,
            tau_c: self.tau_c * factor,
            optical_center: self.optical_center * factor,
            start: self.start * factor,
            end: self.end * factor,
            ..*self
        }
    }
}

/// Sech drive in base units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SechPulse {
    pub center: f64,
    pub width: f64,
    pub start: f64,
    pub end: f64,
    pub chirp: ChirpMode,
}

fn window(u: &Units, w: &Window) -> Result<(f64, f64), CliError> {
    let s = u.time(&w.start, "pulse.window.start")?;
    let e = u.time(&w.end, "pulse.window.end")?;
    if !(e > s) {
        return Err(CliError::config("pulse.window: end must exceed start"));
    }
    Ok((s, e))
}

pub fn stirap_pulse(cfg: &Config) -> Result<StirapPulse, CliError> {
    let u = cfg.units()?;
    match &cfg.pulse {
        PulseConfig::Stirap { j1_peak, tau_f, tau_c, optical_center, qubit_delay, window: w, chirp } => {
            let (start, end) = window(&u, w)?;
            Ok(StirapPulse {
                j1_peak: u.dimensionless(j1_peak, "pulse.j1_peak")?,
                tau_f: u.time(tau_f, "pulse.tau_f")?,
                tau_c: u.time(tau_c, "pulse.tau_c")?,
                optical_center: u.time(optical_center, "pulse.optical_center")?,
                qubit_delay: u.dimensionless(qubit_delay, "pulse.qubit_delay")?,
                start,
                end,
                chirp: chirp.unwrap_or(cfg.scenario.default_chirp()),
            })
        }
        PulseConfig::Sech { .. } => Err(CliError::config("pulse: expected a `stirap` pulse")),
    }
}

pub fn sech_pulse(cfg: &Config) -> Result<SechPulse, CliError> {
    let u = cfg.units()?;
    match &cfg.pulse {
        PulseConfig::Sech { center, width, window: w, chirp } => {
            let (start, end) = window(&u, w)?;
            Ok(SechPulse {
                center: u.time(center, "pulse.center")?,
                width: u.time(width, "pulse.width")?,
                start,
                end,
                chirp: chirp.unwrap_or(cfg.scenario.default_chirp()),
            })
        }
        PulseConfig::Stirap { .. } => Err(CliError::config("pulse: expected a `sech` pulse")),
    }
}

pub fn node_params(cfg: &Config) -> Result<NodeParams, CliError> {
    let node = cfg.node.as_ref().ok_or_else(|| CliError::config("missing `node` block"))?;
    node.resolve(&cfg.units()?, cfg.seed, "node")
}

pub fn network_params(cfg: &Config) -> Result<NetworkParams, CliError> {
    let net = cfg.network.as_ref().ok_or_else(|| CliError::config("missing `network` block"))?;
    net.resolve(&cfg.units()?, cfg.seed)
}

pub fn evolve_options(cfg: &Config) -> Result<EvolveOptions<f64>, CliError> {
    let i = &cfg.integrator;
    let max_step = match &i.max_step {
        Some(q) => Some(cfg.units()?.time(q, "integrator.max_step")?),
        None => None,
    };
    Ok(EvolveOptions { rel_tol: i.rel_tol, abs_tol: i.abs_tol, max_step, max_steps: i.max_steps })
}

/// Summary numbers of one trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    /// Photon fidelity (single node) or qubit-B fidelity (network).
    pub peak_fidelity: f64,
    pub peak_population: f64,
    /// Base units.
    pub peak_time: f64,
    /// Ground-sink population at the end of the window.
    pub final_loss: f64,
    pub max_spin_population: f64,
    /// Largest deviation of the summed populations from 1 over all samples.
    pub bookkeeping_error: f64,
}

#[derive(Debug, Clone)]
pub struct WignerSnapshot {
    pub time: f64,
    pub grid: WignerGrid<f64>,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub times: Vec<f64>,
    /// Time-series columns after `time`, in output order.
    pub columns: Vec<(String, Vec<f64>)>,
    pub metrics: Metrics,
    pub wigner: Option<WignerSnapshot>,
}

impl RunOutput {
    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns.iter().find(|(n, _)| n == name).map(|(_, v)| v.as_slice())
    }
}

fn nearest_index(times: &[f64], t: f64) -> usize {
    let mut best = 0;
    for (k, &s) in times.iter().enumerate() {
        if (s - t).abs() < (times[best] - t).abs() {
            best = k;
        }
    }
    best
}

fn wigner_request(cfg: &Config, times: &[f64]) -> Result<Option<(usize, usize)>, CliError> {
    let Some(w) = &cfg.wigner else { return Ok(None) };
    let t = cfg.units()?.time(&w.time, "wigner.time")?;
    let node = match w.node {
        NodeLabel::A => 0,
        NodeLabel::B => 1,
    };
    if node == 1 && !cfg.scenario.is_network() {
        return Err(CliError::config("wigner.node: single-node scenarios only have node A"));
    }
    if w.points < 2 || !(w.half_width > 0.0) {
        return Err(CliError::config("wigner: needs points >= 2 and a positive half_width"));
    }
    Ok(Some((nearest_index(times, t), node)))
}

fn snapshot_wigner(cfg: &Config, times: &[f64], req: Option<(usize, usize)>, state: Option<&spinlink::DensityMatrix>) -> Result<Option<WignerSnapshot>, CliError> {
    let (Some((k, node)), Some(rho), Some(w)) = (req, state, &cfg.wigner) else { return Ok(None) };
    let cav = reduce_to_cavity(rho, node)?;
    Ok(Some(WignerSnapshot { time: times[k], grid: wigner(&cav, w.half_width, w.points)? }))
}

fn bookkeeping(populations: &[Vec<f64>]) -> f64 {
    populations.iter().map(|p| (p.iter().sum::<f64>() - 1.0).abs()).fold(0.0, f64::max)
}

/// Single-node swap with the given parameters and pulse.
pub fn swap_once(cfg: &Config, params: NodeParams, pulse: &StirapPulse, with_wigner: bool) -> Result<RunOutput, CliError> {
    let model = NodeModel::from_params(params.clone(), CouplingMode::Sideband)?;
    let schedule = pulse.schedule(params.omega_c0)?;
    let times = uniform_times(pulse.start, pulse.end, cfg.integrator.samples)?;
    let req = if with_wigner { wigner_request(cfg, &times)? } else { None };
    let r = run_swap_with_snapshot(&model, schedule, &times, &evolve_options(cfg)?, false, req.map(|x| x.0))?;
    let wig = snapshot_wigner(cfg, &times, req, r.snapshot.as_ref())?;
    let s = r.series;
    let columns = vec![
        ("qubitA".to_string(), s.qubit),
        ("spinsTotal".to_string(), s.spins),
        ("cavityA".to_string(), s.cavity),
        ("sink".to_string(), s.sink.clone()),
        ("control_opticalLeg".to_string(), times.iter().map(|&t| schedule.optical(t)).collect()),
        ("control_qubitLeg".to_string(), times.iter().map(|&t| schedule.qubit_leg(t)).collect()),
    ];
    Ok(RunOutput {
        metrics: Metrics {
            peak_fidelity: r.peak_fidelity,
            peak_population: r.peak_population,
            peak_time: r.peak_time,
            final_loss: *s.sink.last().expect("samples"),
            max_spin_population: r.max_spin_population,
            bookkeeping_error: bookkeeping(&r.trajectory.populations),
        },
        times,
        columns,
        wigner: wig,
    })
}

/// Two-node transfer driven by the same sech pulse on both nodes.
pub fn transfer_once(cfg: &Config, params: NetworkParams, pulse: &SechPulse) -> Result<RunOutput, CliError> {
    let omega = [params.node_a.omega_c0, params.node_b.omega_c0];
    let model = NetworkModel::new(params)?;
    let sched = |o: f64| PulseSchedule::raman_sech(o, pulse.center, pulse.width, pulse.chirp);
    let controls = [sched(omega[0])?, sched(omega[1])?];
    let times = uniform_times(pulse.start, pulse.end, cfg.integrator.samples)?;
    let req = wigner_request(cfg, &times)?;
    let r = run_transfer_with_snapshot(&model, controls, &times, &evolve_options(cfg)?, req.map(|x| x.0))?;
    let wig = snapshot_wigner(cfg, &times, req, r.snapshot.as_ref())?;
    let s = r.series;
    let max_spin_population = s.spins.iter().cloned().fold(0.0, f64::max);
    let columns = vec![
        ("qubitA".to_string(), s.qubit_a),
        ("qubitB".to_string(), s.qubit_b),
        ("spinsTotal".to_string(), s.spins),
        ("cavityA".to_string(), s.cavity_a),
        ("cavityB".to_string(), s.cavity_b),
        ("antisym".to_string(), s.antisymmetric),
        ("sink".to_string(), s.sink.clone()),
        ("control_opticalLeg".to_string(), times.iter().map(|&t| controls[0].optical(t)).collect()),
        ("control_qubitLeg".to_string(), times.iter().map(|&t| controls[0].qubit_leg(t)).collect()),
    ];
    Ok(RunOutput {
        metrics: Metrics {
            peak_fidelity: r.peak_fidelity,
            peak_population: r.peak_population,
            peak_time: r.peak_time,
            final_loss: *s.sink.last().expect("samples"),
            max_spin_population,
            bookkeeping_error: bookkeeping(&r.trajectory.populations),
        },
        times,
        columns,
        wigner: wig,
    })
}

/// Runs the scenario's reference trajectory.
pub fn run_single(cfg: &Config) -> Result<RunOutput, CliError> {
    if cfg.scenario.is_network() {
        transfer_once(cfg, network_params(cfg)?, &sech_pulse(cfg)?)
    } else {
        swap_once(cfg, node_params(cfg)?, &stirap_pulse(cfg)?, true)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    /// Axis values as written in the config.
    pub kappa: f64,
    pub coupling: f64,
    pub peak_fidelity: Option<f64>,
    pub peak_time: Option<f64>,
    pub pass: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepOutput {
    /// Row-major over (kappa, coupling).
    pub cells: Vec<SweepCell>,
    pub threshold: f64,
}

impl SweepOutput {
    pub fn min_fidelity(&self) -> Option<f64> {
        self.cells.iter().filter_map(|c| c.peak_fidelity).reduce(f64::min)
    }

    pub fn failures(&self) -> usize {
        self.cells.iter().filter(|c| c.error.is_some()).count()
    }
}

fn sweep_cell(cfg: &Config, base: &NodeParams, pulse: &StirapPulse, kappa: f64, coupling: f64) -> Result<(f64, f64), CliError> {
    let sweep = cfg.sweep.as_ref().expect("checked by caller");
    let u = cfg.units()?;
    let mut p = base.clone();
    p.kappa = u.frequency(&Quantity { value: kappa, unit: sweep.kappa.unit }, "sweep.kappa")?;
    let g = u.frequency(&Quantity { value: coupling, unit: sweep.coupling.unit }, "sweep.coupling")?;
    let reference = pulse.j1_peak * base.ensemble.g_f;
    if reference == 0.0 {
        return Err(CliError::config("sweep: reference coupling J1_peak * g_f is zero"));
    }
    let s = g / reference;
    p.ensemble.g_f *= s;
    p.omega_c0 *= s;
    let pulse = match sweep.scaling {
        PulseScaling::Fixed => *pulse,
        PulseScaling::ConstantArea => {
            if !(s > 0.0) {
                return Err(CliError::config("sweep: constant-area scaling needs a positive coupling"));
            }
            pulse.stretched(1.0 / s)
        }
    };
    let out = swap_once(cfg, p, &pulse, false)?;
    Ok((out.metrics.peak_fidelity, out.metrics.peak_time))
}

/// Peak swap fidelity over the (kappa, coupling) grid. Cells run in
/// parallel; a failing cell is recorded and the sweep continues.
pub fn run_sweep(cfg: &Config) -> Result<SweepOutput, CliError> {
    let sweep = cfg.sweep.as_ref().ok_or_else(|| CliError::config("missing `sweep` block"))?;
    if cfg.scenario.is_network() {
        return Err(CliError::config("sweeps run single-node swap scenarios"));
    }
    if sweep.kappa.values.is_empty() || sweep.coupling.values.is_empty() {
        return Err(CliError::config("sweep: both axes need at least one value"));
    }
    let base = node_params(cfg)?;
    let pulse = stirap_pulse(cfg)?;
    let grid: Vec<(f64, f64)> =
        sweep.kappa.values.iter().flat_map(|&k| sweep.coupling.values.iter().map(move |&g| (k, g))).collect();
    let cells = grid
        .par_iter()
        .map(|&(kappa, coupling)| match sweep_cell(cfg, &base, &pulse, kappa, coupling) {
            Ok((f, t)) => SweepCell { kappa, coupling, peak_fidelity: Some(f), peak_time: Some(t), pass: f > sweep.threshold, error: None },
            Err(e) => SweepCell { kappa, coupling, peak_fidelity: None, peak_time: None, pass: false, error: Some(e.to_string()) },
        })
        .collect();
    Ok(SweepOutput { cells, threshold: sweep.threshold })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationOutput {
    /// Sech width, base units.
    pub tau_c: f64,
    /// Sech center, base units.
    pub center: f64,
    pub peak_fidelity: f64,
    pub peak_time: f64,
    pub evaluations: usize,
    pub converged: bool,
    /// The input config with the calibrated pulse written in.
    pub calibrated_config: Config,
}

fn bound(u: &Units, b: &Bound, path: &str) -> Result<(f64, f64, f64), CliError> {
    let t = |v: f64| u.time(&Quantity { value: v, unit: b.unit }, path);
    let (lo, hi, x0) = (t(b.lower)?, t(b.upper)?, t(b.start)?);
    if !(lo <= hi) {
        return Err(CliError::config(format!("{path}: lower exceeds upper")));
    }
    Ok((lo, hi, x0))
}

/// Maximizes the peak qubit-B fidelity over the sech width and center.
pub fn calibrate(cfg: &Config) -> Result<CalibrationOutput, CliError> {
    let cal = cfg.calibration.as_ref().ok_or_else(|| CliError::config("missing `calibration` block"))?;
    if !cfg.scenario.is_network() {
        return Err(CliError::config("calibration needs a network scenario"));
    }
    let u = cfg.units()?;
    let (wl, wh, w0) = bound(&u, &cal.tau_c, "calibration.tau_c")?;
    let (cl, ch, c0) = bound(&u, &cal.center, "calibration.center")?;
    if !(wl > 0.0) {
        return Err(CliError::config("calibration.tau_c: lower bound must be positive"));
    }
    let params = network_params(cfg)?;
    let pulse = sech_pulse(cfg)?;
    let objective = |x: &[f64]| -> spinlink::Result<f64> {
        let p = SechPulse { width: x[0], center: x[1], ..pulse };
        match transfer_once(cfg, params.clone(), &p) {
            Ok(o) => Ok(-o.metrics.peak_fidelity),
            Err(e) => Err(spinlink::Error::Config(e.to_string())),
        }
    };
    let opts = NelderMeadOptions {
        max_evaluations: cal.max_evaluations,
        f_tol: cal.f_tol,
        x_tol: cal.x_tol,
        initial_step: cal.initial_step,
    };
    let m = minimize_bounded(objective, &[w0, c0], &[wl, cl], &[wh, ch], &opts)?;
    let (tau_c, center) = (m.x[0], m.x[1]);
    let mut calibrated = cfg.clone();
    if let PulseConfig::Sech { center: c, width: w, .. } = &mut calibrated.pulse {
        *c = Quantity::ratio(center);
        *w = Quantity::ratio(tau_c);
    }
    // Deterministic, so this reproduces the optimizer's best value.
    let check = transfer_once(cfg, params, &SechPulse { width: tau_c, center, ..pulse })?;
    Ok(CalibrationOutput {
        tau_c,
        center,
        peak_fidelity: check.metrics.peak_fidelity,
        peak_time: check.metrics.peak_time,
        evaluations: m.evaluations,
        converged: m.converged,
        calibrated_config: calibrated,
    })
}
