// SPDX-License-Identifier: Apache-2.0

//! Scenario configuration: the on-disk schema and its conversion into
//! simulator parameters in units of the base rate.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};
use spinlink::ensemble::{CouplingFractionModel, EnsembleSpec, SamplingMode};
use spinlink::pulse::ChirpMode;
use spinlink::{NetworkParams, NodeParams};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Unit {
    /// Already in units of the base rate (or its inverse, for times).
    #[serde(rename = "ratio")]
    Ratio,
    /// Angular frequency in 10^6 rad/s.
    #[serde(rename = "MHz-angular")]
    MhzAngular,
    /// Cyclic frequency in MHz; multiplied by 2π.
    #[serde(rename = "MHz-cyclic")]
    MhzCyclic,
    #[serde(rename = "rad")]
    Rad,
    /// Multiples of π radians.
    #[serde(rename = "pi-rad")]
    PiRad,
    #[serde(rename = "us")]
    Microseconds,
    #[serde(rename = "ns")]
    Nanoseconds,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Quantity {
    pub value: f64,
    pub unit: Unit,
}

impl Quantity {
    pub const fn ratio(value: f64) -> Self {
        Self { value, unit: Unit::Ratio }
    }
}

fn zero() -> Quantity {
    Quantity::ratio(0.0)
}

fn one() -> Quantity {
    Quantity::ratio(1.0)
}

/// Frequency every other quantity is measured against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseRate {
    /// Name of the parameter the base rate stands for, e.g. `gamma1_qb`.
    pub label: String,
    pub value: f64,
    pub unit: Unit,
}

/// Converts tagged quantities into base units.
#[derive(Debug, Clone, Copy)]
pub struct Units {
    /// Base rate in 10^6 rad/s.
    angular: f64,
}

impl Units {
    pub fn new(base: &BaseRate) -> Result<Self, CliError> {
        let angular = match base.unit {
            Unit::MhzAngular => base.value,
            Unit::MhzCyclic => 2.0 * PI * base.value,
            u => return Err(CliError::config(format!("base_rate: unit {u:?} is not a frequency unit"))),
        };
        if !(angular > 0.0 && angular.is_finite()) {
            return Err(CliError::config("base_rate: value must be positive and finite"));
        }
        Ok(Self { angular })
    }

    fn finite(v: f64, path: &str) -> Result<f64, CliError> {
        if v.is_finite() {
            Ok(v)
        } else {
            Err(CliError::config(format!("{path}: value must be finite")))
        }
    }

    pub fn frequency(&self, q: &Quantity, path: &str) -> Result<f64, CliError> {
        let v = match q.unit {
            Unit::Ratio => q.value,
            Unit::MhzAngular => q.value / self.angular,
            Unit::MhzCyclic => 2.0 * PI * q.value / self.angular,
            u => return Err(CliError::config(format!("{path}: unit {u:?} is not a frequency unit"))),
        };
        Self::finite(v, path)
    }

    pub fn time(&self, q: &Quantity, path: &str) -> Result<f64, CliError> {
        let v = match q.unit {
            Unit::Ratio => q.value,
            Unit::Microseconds => q.value * self.angular,
            Unit::Nanoseconds => q.value * 1e-3 * self.angular,
            u => return Err(CliError::config(format!("{path}: unit {u:?} is not a time unit"))),
        };
        Self::finite(v, path)
    }

    pub fn angle(&self, q: &Quantity, path: &str) -> Result<f64, CliError> {
        let v = match q.unit {
            Unit::Rad => q.value,
            Unit::PiRad => q.value * PI,
            u => return Err(CliError::config(format!("{path}: unit {u:?} is not an angle unit"))),
        };
        Self::finite(v, path)
    }

    pub fn dimensionless(&self, q: &Quantity, path: &str) -> Result<f64, CliError> {
        match q.unit {
            Unit::Ratio => Self::finite(q.value, path),
            u => Err(CliError::config(format!("{path}: expected unit \"ratio\", got {u:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    Swap,
    SwapConstantChirp,
    NetworkNv,
    NetworkEr,
    Sweep,
    Calibrate,
}

impl Scenario {
    pub fn default_chirp(self) -> ChirpMode {
        match self {
            Scenario::SwapConstantChirp => ChirpMode::Constant,
            _ => ChirpMode::Tracking,
        }
    }

    pub fn is_network(self) -> bool {
        matches!(self, Scenario::NetworkNv | Scenario::NetworkEr | Scenario::Calibrate)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Sampling {
    #[default]
    Stratified,
    /// Normal draws from the run seed.
    SeededRandom,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleConfig {
    pub groups: usize,
    pub sigma_delta: Quantity,
    pub sigma_theta: Quantity,
    #[serde(default)]
    pub sampling: Sampling,
    /// Collective magnetic coupling.
    pub g_f: Quantity,
    /// Per-group `xi_j`; uniform when absent.
    #[serde(default)]
    pub coupling_fractions: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeConfig {
    pub gamma1_qb: Quantity,
    #[serde(default = "zero")]
    pub gamma2_qb: Quantity,
    pub kappa: Quantity,
    /// `kappa_ex / kappa`.
    #[serde(default = "one")]
    pub xi: Quantity,
    pub gamma1_en: Quantity,
    pub gamma2_en: Quantity,
    pub delta0: Quantity,
    pub delta1: Quantity,
    #[serde(default = "zero")]
    pub d_bar: Quantity,
    #[serde(default = "zero")]
    pub delta_q: Quantity,
    pub g_c: Quantity,
    pub omega_c0: Quantity,
    #[serde(default = "zero")]
    pub optical_decay0: Quantity,
    #[serde(default = "zero")]
    pub optical_decay1: Quantity,
    pub ensemble: EnsembleConfig,
}

impl NodeConfig {
    pub fn resolve(&self, u: &Units, seed: u64, path: &str) -> Result<NodeParams, CliError> {
        let f = |q: &Quantity, name: &str| u.frequency(q, &format!("{path}.{name}"));
        let e = &self.ensemble;
        let p = NodeParams {
            gamma1_qb: f(&self.gamma1_qb, "gamma1_qb")?,
            gamma2_qb: f(&self.gamma2_qb, "gamma2_qb")?,
            kappa: f(&self.kappa, "kappa")?,
            xi: u.dimensionless(&self.xi, &format!("{path}.xi"))?,
            gamma1_en: f(&self.gamma1_en, "gamma1_en")?,
            gamma2_en: f(&self.gamma2_en, "gamma2_en")?,
            delta0: f(&self.delta0, "delta0")?,
            delta1: f(&self.delta1, "delta1")?,
            d_bar: f(&self.d_bar, "d_bar")?,
            delta_q: f(&self.delta_q, "delta_q")?,
            g_c: f(&self.g_c, "g_c")?,
            omega_c0: f(&self.omega_c0, "omega_c0")?,
            optical_decay0: f(&self.optical_decay0, "optical_decay0")?,
            optical_decay1: f(&self.optical_decay1, "optical_decay1")?,
            ensemble: EnsembleSpec {
                groups: e.groups,
                sigma_delta: f(&e.sigma_delta, "ensemble.sigma_delta")?,
                sigma_theta: u.angle(&e.sigma_theta, &format!("{path}.ensemble.sigma_theta"))?,
                mode: match e.sampling {
                    Sampling::Stratified => SamplingMode::Stratified,
                    Sampling::SeededRandom => SamplingMode::SeededRandom(seed),
                },
                g_f: f(&e.g_f, "ensemble.g_f")?,
                coupling_fraction: match &e.coupling_fractions {
                    None => CouplingFractionModel::Uniform,
                    Some(v) => CouplingFractionModel::Explicit(v.clone()),
                },
            },
        };
        p.validate().map_err(|err| CliError::config(format!("{path}: {err}")))?;
        Ok(p)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkConfig {
    pub node_a: NodeConfig,
    /// Copy of `node_a` when absent.
    #[serde(default)]
    pub node_b: Option<NodeConfig>,
    /// Common shift of the spin manifolds away from qubit and cavity.
    pub dispersive_detuning: Quantity,
}

impl NetworkConfig {
    pub fn resolve(&self, u: &Units, seed: u64) -> Result<NetworkParams, CliError> {
        let a = self.node_a.resolve(u, seed, "network.node_a")?;
        let b = self.node_b.as_ref().unwrap_or(&self.node_a).resolve(u, seed, "network.node_b")?;
        let d = u.frequency(&self.dispersive_detuning, "network.dispersive_detuning")?;
        NetworkParams::new(a, b, d).map_err(|e| CliError::config(format!("network: {e}")))
    }
}

/// Simulated time interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Window {
    pub start: Quantity,
    pub end: Quantity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PulseConfig {
    /// Gaussian optical pulse followed by the qubit-leg pulse.
    Stirap {
        /// Peak `J1` value of the qubit leg.
        j1_peak: Quantity,
        tau_f: Quantity,
        tau_c: Quantity,
        optical_center: Quantity,
        /// Qubit-leg center minus optical center, in units of `tau_f`.
        qubit_delay: Quantity,
        window: Window,
        #[serde(default)]
        chirp: Option<ChirpMode>,
    },
    /// Sech optical drive, the same on both nodes.
    Sech {
        center: Quantity,
        width: Quantity,
        window: Window,
        #[serde(default)]
        chirp: Option<ChirpMode>,
    },
}

impl PulseConfig {
    pub fn chirp(&self) -> Option<ChirpMode> {
        match self {
            PulseConfig::Stirap { chirp, .. } | PulseConfig::Sech { chirp, .. } => *chirp,
        }
    }

    fn set_chirp(&mut self, c: ChirpMode) {
        match self {
            PulseConfig::Stirap { chirp, .. } | PulseConfig::Sech { chirp, .. } => *chirp = Some(c),
        }
    }

    pub fn window(&self) -> &Window {
        match self {
            PulseConfig::Stirap { window, .. } | PulseConfig::Sech { window, .. } => window,
        }
    }
}

fn default_rel_tol() -> f64 {
    1e-8
}
fn default_abs_tol() -> f64 {
    1e-10
}
fn default_samples() -> usize {
    2001
}
fn default_max_steps() -> usize {
    5_000_000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorConfig {
    #[serde(default = "default_rel_tol")]
    pub rel_tol: f64,
    #[serde(default = "default_abs_tol")]
    pub abs_tol: f64,
    /// Uniform samples over the pulse window.
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Largest internal step; 1/100 of the window when absent.
    #[serde(default)]
    pub max_step: Option<Quantity>,
    #[serde(default = "default_max_steps")]
    pub max_steps: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            rel_tol: default_rel_tol(),
            abs_tol: default_abs_tol(),
            samples: default_samples(),
            max_step: None,
            max_steps: default_max_steps(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub values: Vec<f64>,
    pub unit: Unit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum PulseScaling {
    /// Pulse durations and centers scale inversely with the coupling.
    #[default]
    ConstantArea,
    Fixed,
}

fn default_threshold() -> f64 {
    0.81
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// Cavity decay rate of each row.
    pub kappa: Axis,
    /// Collective qubit-leg coupling `J1_peak * g_f` of each column; both
    /// legs scale with it.
    pub coupling: Axis,
    #[serde(default)]
    pub scaling: PulseScaling,
    /// Cells with peak fidelity above this are flagged as passing.
    #[serde(default = "default_threshold")]
    pub threshold: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bound {
    pub lower: f64,
    pub upper: f64,
    pub start: f64,
    pub unit: Unit,
}

fn default_max_evaluations() -> usize {
    60
}
fn default_f_tol() -> f64 {
    1e-4
}
fn default_x_tol() -> f64 {
    1e-3
}
fn default_initial_step() -> f64 {
    0.25
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrationConfig {
    /// Sech width.
    pub tau_c: Bound,
    /// Sech center.
    pub center: Bound,
    #[serde(default = "default_max_evaluations")]
    pub max_evaluations: usize,
    #[serde(default = "default_f_tol")]
    pub f_tol: f64,
    #[serde(default = "default_x_tol")]
    pub x_tol: f64,
    /// First simplex step as a fraction of each range.
    #[serde(default = "default_initial_step")]
    pub initial_step: f64,
}

fn default_half_width() -> f64 {
    3.0
}
fn default_points() -> usize {
    201
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum NodeLabel {
    #[default]
    A,
    B,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WignerConfig {
    /// Taken at the nearest sample.
    pub time: Quantity,
    #[serde(default)]
    pub node: NodeLabel,
    #[serde(default = "default_half_width")]
    pub half_width: f64,
    #[serde(default = "default_points")]
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub scenario: Scenario,
    pub base_rate: BaseRate,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub node: Option<NodeConfig>,
    #[serde(default)]
    pub network: Option<NetworkConfig>,
    pub pulse: PulseConfig,
    #[serde(default)]
    pub integrator: IntegratorConfig,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub calibration: Option<CalibrationConfig>,
    #[serde(default)]
    pub wigner: Option<WignerConfig>,
    #[serde(default)]
    pub output: Option<String>,
}

/// A manifest carries the resolved config it was produced from.
#[derive(Deserialize)]
struct ManifestConfig {
    config: Config,
}

impl Config {
    /// Parses a config, or the resolved config inside a run manifest.
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| CliError::config(format!("line {}, column {}: {e}", e.line(), e.column())))?;
        let is_manifest = value.get("config").is_some() && value.get("scenario").is_none();
        let cfg = if is_manifest {
            let de = &mut serde_json::Deserializer::from_str(text);
            serde_path_to_error::deserialize::<_, ManifestConfig>(de).map(|m| m.config)
        } else {
            let de = &mut serde_json::Deserializer::from_str(text);
            serde_path_to_error::deserialize::<_, Config>(de)
        }
        .map_err(|e| {
            let inner = e.inner();
            CliError::config(format!("line {}, column {}, field `{}`: {inner}", inner.line(), inner.column(), e.path()))
        })?;
        cfg.resolved()
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    /// Fills defaults that depend on the scenario and checks block presence.
    pub fn resolved(mut self) -> Result<Self, CliError> {
        if self.pulse.chirp().is_none() {
            self.pulse.set_chirp(self.scenario.default_chirp());
        }
        if let Some(n) = &mut self.network {
            if n.node_b.is_none() {
                n.node_b = Some(n.node_a.clone());
            }
        }
        let network = self.scenario.is_network();
        match (network, self.node.is_some(), self.network.is_some()) {
            (true, _, false) => return Err(CliError::config("scenario needs a `network` block")),
            (false, false, _) => return Err(CliError::config("scenario needs a `node` block")),
            _ => {}
        }
        match (&self.pulse, network) {
            (PulseConfig::Sech { .. }, false) => return Err(CliError::config("single-node scenarios need a `stirap` pulse")),
            (PulseConfig::Stirap { .. }, true) => return Err(CliError::config("network scenarios need a `sech` pulse")),
            _ => {}
        }
        if self.scenario == Scenario::Sweep && self.sweep.is_none() {
            return Err(CliError::config("scenario `sweep` needs a `sweep` block"));
        }
        if self.scenario == Scenario::Calibrate && self.calibration.is_none() {
            return Err(CliError::config("scenario `calibrate` needs a `calibration` block"));
        }
        if self.scenario == Scenario::SwapConstantChirp && self.pulse.chirp() != Some(ChirpMode::Constant) {
            return Err(CliError::config("scenario `swap-constant-chirp` needs `chirp: constant`"));
        }
        let i = &self.integrator;
        if !(i.rel_tol > 0.0 && i.abs_tol > 0.0) || i.samples < 2 || i.max_steps == 0 {
            return Err(CliError::config("integrator: tolerances must be positive, samples >= 2, max_steps >= 1"));
        }
        self.units()?;
        Ok(self)
    }

    pub fn units(&self) -> Result<Units, CliError> {
        Units::new(&self.base_rate)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base(unit: Unit) -> BaseRate {
        BaseRate { label: "gamma1_qb".into(), value: 0.4, unit }
    }

    #[test]
    fn unit_conversion() {
        let u = Units::new(&base(Unit::MhzAngular)).unwrap();
        let q = |value, unit| Quantity { value, unit };
        assert!((u.frequency(&q(3.0, Unit::MhzAngular), "k").unwrap() - 7.5).abs() < 1e-12);
        assert_eq!(u.frequency(&q(7.5, Unit::Ratio), "k").unwrap(), 7.5);
        assert!((u.frequency(&q(3.0, Unit::MhzCyclic), "k").unwrap() - 7.5 * 2.0 * PI).abs() < 1e-12);
        assert!((u.time(&q(90.0, Unit::Nanoseconds), "t").unwrap() - 0.036).abs() < 1e-15);
        assert!((u.angle(&q(0.1, Unit::PiRad), "a").unwrap() - 0.1 * PI).abs() < 1e-15);
        assert!(u.frequency(&q(1.0, Unit::Nanoseconds), "k").is_err());
        assert!(u.time(&q(1.0, Unit::MhzAngular), "t").is_err());
        assert!(u.dimensionless(&q(1.0, Unit::Rad), "x").is_err());
        // A cyclic base rate cancels against cyclic quantities.
        let c = Units::new(&base(Unit::MhzCyclic)).unwrap();
        assert!((c.frequency(&q(3.0, Unit::MhzCyclic), "k").unwrap() - 7.5).abs() < 1e-12);
        assert!(Units::new(&base(Unit::Ratio)).is_err());
        assert!(Units::new(&BaseRate { label: "x".into(), value: -1.0, unit: Unit::MhzAngular }).is_err());
    }

    #[test]
    fn unknown_keys_are_rejected_with_path() {
        let text = r#"{"scenario": "swap", "base_rate": {"label": "g", "value": 0.4, "unit": "MHz-angular", "extra": 1},
            "pulse": {"kind": "sech"}}"#;
        let err = Config::from_json(text).unwrap_err().to_string();
        assert!(err.contains("base_rate") && err.contains("extra"), "{err}");
        let bad_unit = r#"{"scenario": "swap", "base_rate": {"label": "g", "value": 0.4, "unit": "MHz"}}"#;
        let err = Config::from_json(bad_unit).unwrap_err().to_string();
        assert!(err.contains("base_rate.unit"), "{err}");
        assert!(Config::from_json("{").unwrap_err().to_string().contains("line 1"));
    }
}
