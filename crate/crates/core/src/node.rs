// SPDX-License-Identifier: Apache-2.0

//! One interface node: flux qubit, grouped spin ensemble and optical cavity.
//!
//! Two Hamiltonians are provided. The effective one works in the
//! one-excitation basis with the optical excited level adiabatically
//! eliminated; the full oracle keeps that level (`SpinOptical`) and the
//! explicit sideband modulation of the qubit, and exists to check the
//! elimination.

use crate::basis::{BasisState, OesBasis};
use crate::bessel::inverse_j1;
use crate::ensemble::{sample_ensemble, EnsembleSpec, SpinGroup};
use crate::error::{Error, Result};
use crate::lindblad::{CollapseChannel, Generator, Hamiltonian};
use crate::operator::OperatorMatrix;
use crate::pulse::{resonance_conditions, PulseSchedule};
use crate::{c, cr, CMatrix, Real};

/// Rates and detunings of one node, in units of the scenario base rate.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeParams<T> {
    pub gamma1_qb: T,
    /// Qubit pure dephasing; coherences decay at exactly this rate.
    pub gamma2_qb: T,
    pub kappa: T,
    /// Extraction fraction, `kappa_ex = xi * kappa`.
    pub xi: T,
    pub gamma1_en: T,
    pub gamma2_en: T,
    /// `omega_r - omega_c`.
    pub delta0: T,
    /// `(omega_r - omega_L) - D`.
    pub delta1: T,
    /// Mean ground splitting `D`.
    pub d_bar: T,
    /// `omega_q - delta`.
    pub delta_q: T,
    /// Collective optical coupling.
    pub g_c: T,
    pub omega_c0: T,
    /// Decay of the optical excited level to the ground/sink.
    pub optical_decay0: T,
    /// Decay of the optical excited level into the spin-flip level.
    pub optical_decay1: T,
    pub ensemble: EnsembleSpec<T>,
}

impl<T: Real> NodeParams<T> {
    pub fn validate(&self) -> Result<()> {
        let rates = [
            ("gamma1_qb", self.gamma1_qb),
            ("gamma2_qb", self.gamma2_qb),
            ("kappa", self.kappa),
            ("gamma1_en", self.gamma1_en),
            ("gamma2_en", self.gamma2_en),
            ("optical_decay0", self.optical_decay0),
            ("optical_decay1", self.optical_decay1),
        ];
        for (name, r) in rates {
            if !(r >= T::zero() && r.is_finite()) {
                return Err(Error::config(format!("{name} must be a finite nonnegative rate, got {r}")));
            }
        }
        if !(self.xi >= T::zero() && self.xi <= T::one()) {
            return Err(Error::config(format!("extraction fraction xi = {} outside [0, 1]", self.xi)));
        }
        for (name, v) in [
            ("delta0", self.delta0),
            ("delta1", self.delta1),
            ("d_bar", self.d_bar),
            ("delta_q", self.delta_q),
            ("g_c", self.g_c),
            ("omega_c0", self.omega_c0),
        ] {
            if !v.is_finite() {
                return Err(Error::config(format!("{name} must be finite")));
            }
        }
        self.ensemble.validate()
    }

    /// Laser detuning `delta = omega_L - omega_c`, from `D1 - D0 = delta - D`.
    pub fn laser_detuning(&self) -> T {
        self.delta1 - self.delta0 + self.d_bar
    }

    pub fn kappa_ex(&self) -> T {
        self.xi * self.kappa
    }

    pub fn kappa_i(&self) -> T {
        (T::one() - self.xi) * self.kappa
    }

    /// Messages for optical detunings within 10x of the largest linewidth,
    /// where adiabatic elimination is questionable.
    pub fn dispersive_warnings(&self) -> Vec<String> {
        let width = [
            self.gamma1_qb,
            self.gamma2_qb,
            self.kappa,
            self.gamma1_en,
            self.gamma2_en,
            self.optical_decay0,
            self.optical_decay1,
        ]
        .into_iter()
        .fold(T::zero(), |a, b| a.max(b));
        let mut out = Vec::new();
        for (name, d) in [("delta0", self.delta0), ("delta1", self.delta1)] {
            if d.abs() < T::lit(10.0) * width {
                out.push(format!("|{name}| = {} is less than 10x the largest linewidth {width}", d.abs()));
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CouplingMode<T> {
    /// Qubit leg through the first sideband, scaled by the scheduled `J1`.
    Sideband,
    /// Static magnetic coupling with the spin manifold detuned by `detuning`
    /// from the qubit and the cavity.
    Dispersive { detuning: T },
}

#[derive(Debug, Clone)]
pub struct NodeModel<T: Real> {
    params: NodeParams<T>,
    groups: Vec<SpinGroup<T>>,
    mode: CouplingMode<T>,
    delta_en: T,
}

fn nonzero<T: Real>(v: T, what: impl FnOnce() -> String) -> Result<T> {
    if v == T::zero() {
        Err(Error::SingularDetuning(what()))
    } else {
        Ok(v)
    }
}

impl<T: Real> NodeModel<T> {
    pub fn new(params: NodeParams<T>, groups: Vec<SpinGroup<T>>, mode: CouplingMode<T>) -> Result<Self> {
        params.validate()?;
        if groups.is_empty() {
            return Err(Error::config("node needs at least one spin group"));
        }
        let wsum = groups.iter().fold(T::zero(), |a, g| a + g.weight);
        if (wsum - T::one()).abs() > T::lit(1e-12) {
            return Err(Error::config(format!("group weights sum to {wsum}, not 1")));
        }
        if groups.iter().any(|g| !(g.fraction > T::zero()) || !(g.weight >= T::zero())) {
            return Err(Error::config("group coupling fractions must be positive and weights nonnegative"));
        }
        let mut delta_en = T::zero();
        for (j, g) in groups.iter().enumerate() {
            let d0 = nonzero(params.delta0 + g.optical_offset, || format!("Delta_0 + Delta_{j}"))?;
            nonzero(params.delta1 + g.optical_offset - g.delta, || format!("Delta_1 + Delta_{j} - delta_{j}"))?;
            let gc = g.fraction * params.g_c * g.weight.sqrt();
            delta_en += gc * gc / d0;
        }
        match mode {
            CouplingMode::Sideband => {
                nonzero(params.delta1, || "Delta_1".into())?;
            }
            CouplingMode::Dispersive { .. } => {
                let model = Self { params: params.clone(), groups: groups.clone(), mode, delta_en };
                for j in 0..groups.len() {
                    for oc in [T::zero(), params.omega_c0] {
                        nonzero(model.dispersive_gap(j, oc), || format!("dispersive gap of group {j}"))?;
                    }
                }
            }
        }
        Ok(Self { params, groups, mode, delta_en })
    }

    /// Samples the ensemble described by `params.ensemble`.
    pub fn from_params(params: NodeParams<T>, mode: CouplingMode<T>) -> Result<Self> {
        let groups = sample_ensemble(&params.ensemble)?;
        Self::new(params, groups, mode)
    }

    pub fn params(&self) -> &NodeParams<T> {
        &self.params
    }

    pub fn groups(&self) -> &[SpinGroup<T>] {
        &self.groups
    }

    pub fn mode(&self) -> CouplingMode<T> {
        self.mode
    }

    pub fn basis(&self) -> OesBasis {
        OesBasis::single(self.groups.len()).expect("nonempty groups")
    }

    /// `delta_en = sum_j g_c,j^2 / (D0 + Delta_j)`.
    pub fn delta_en(&self) -> T {
        self.delta_en
    }

    pub fn g_f(&self, j: usize) -> T {
        self.params.ensemble.g_f * self.groups[j].weight.sqrt()
    }

    pub fn g_c(&self, j: usize) -> T {
        let g = &self.groups[j];
        g.fraction * self.params.g_c * g.weight.sqrt()
    }

    /// Raman coupling `Lambda_j` at drive `omega_c`, excluding `xi_j`.
    pub fn lambda(&self, j: usize, omega_c: T) -> T {
        let g = &self.groups[j];
        let p = &self.params;
        omega_c * T::lit(0.5) * p.g_c * g.weight.sqrt()
            * (T::one() / (p.delta0 + g.optical_offset) + T::one() / (p.delta1 + g.optical_offset - g.delta))
    }

    /// `Delta_Spin,j = D1 - D0 - delta_j - phi_dot + Oc^2 / (D1 + Delta_j - delta_j)`.
    pub fn spin_detuning(&self, j: usize, omega_c: T, chirp: T) -> T {
        let g = &self.groups[j];
        let p = &self.params;
        p.delta1 - p.delta0 - g.delta - chirp + omega_c * omega_c / (p.delta1 + g.optical_offset - g.delta)
    }

    /// Chirp and sideband frequency at time `t` per the schedule's chirp mode.
    pub fn chirp_and_sideband(&self, schedule: &PulseSchedule<T>, t: T) -> (T, T) {
        let oc = schedule.chirp_drive(t);
        let r = resonance_conditions(&self.params, self.delta_en, oc.unwrap_or(T::zero()))
            .expect("Delta_1 checked at construction");
        match oc {
            Some(_) => (r.chirp, r.sideband),
            None => (T::zero(), r.sideband),
        }
    }

    /// Spin-manifold energy above the qubit and cavity in dispersive mode,
    /// before the chirp.
    pub fn dispersive_gap(&self, j: usize, omega_c: T) -> T {
        let CouplingMode::Dispersive { detuning } = self.mode else {
            return T::zero();
        };
        let g = &self.groups[j];
        let p = &self.params;
        detuning + g.delta - omega_c * omega_c / (p.delta1 + g.optical_offset - g.delta) - (p.delta1 - p.delta0)
    }

    /// Dispersive-mode chirp that cancels the differential second-order shift
    /// of qubit and cavity.
    pub fn dispersive_chirp(&self, schedule: &PulseSchedule<T>, t: T) -> T {
        let Some(oc) = schedule.chirp_drive(t) else {
            return T::zero();
        };
        (0..self.groups.len()).fold(T::zero(), |acc, j| {
            let gf = self.g_f(j);
            let l = self.lambda(j, oc) * self.groups[j].fraction;
            acc + (gf * gf - l * l) / self.dispersive_gap(j, oc)
        })
    }

    /// Writes this node's block of the effective Hamiltonian into `out`,
    /// leaving every other entry untouched.
    pub fn write_effective(&self, basis: &OesBasis, node: usize, schedule: &PulseSchedule<T>, t: T, out: &mut CMatrix<T>) {
        let q = basis.qubit(node);
        let cav = basis.cavity(node);
        let oc = schedule.optical(t);
        match self.mode {
            CouplingMode::Sideband => {
                let (chirp, sideband) = self.chirp_and_sideband(schedule, t);
                let a = schedule.qubit_leg(t);
                out[(q, q)] = cr(chirp + self.params.delta_q - sideband);
                out[(cav, cav)] = cr(-self.delta_en);
                for (j, g) in self.groups.iter().enumerate() {
                    let e = basis.spin(node, j);
                    out[(e, e)] = cr(-self.spin_detuning(j, oc, chirp));
                    let v = cr(-self.g_f(j) * a);
                    out[(e, q)] = v;
                    out[(q, e)] = v.conj();
                    let w = c(g.phase.cos(), g.phase.sin()) * (-self.lambda(j, oc) * g.fraction);
                    out[(cav, e)] = w;
                    out[(e, cav)] = w.conj();
                }
            }
            CouplingMode::Dispersive { .. } => {
                let chirp = self.dispersive_chirp(schedule, t);
                out[(q, q)] = cr(chirp);
                out[(cav, cav)] = cr(T::zero());
                for (j, g) in self.groups.iter().enumerate() {
                    let e = basis.spin(node, j);
                    out[(e, e)] = cr(self.dispersive_gap(j, oc) + chirp);
                    let v = cr(-self.g_f(j));
                    out[(e, q)] = v;
                    out[(q, e)] = v;
                    let w = c(g.phase.cos(), g.phase.sin()) * (-self.lambda(j, oc) * g.fraction);
                    out[(cav, e)] = w;
                    out[(e, cav)] = w.conj();
                }
            }
        }
    }

    pub fn effective_hamiltonian(&self, schedule: &PulseSchedule<T>, t: T) -> OperatorMatrix<T> {
        let b = self.basis();
        let mut h = OperatorMatrix::zeros(b);
        self.write_effective(&b, 0, schedule, t, h.entries_mut());
        h
    }

    /// Full Hamiltonian with the optical excited levels kept and the qubit
    /// modulated at `sideband_freq`, over [`OesBasis::with_optical_levels`].
    pub fn full_oracle_hamiltonian(&self, schedule: &PulseSchedule<T>, sideband_freq: T, t: T) -> Result<OperatorMatrix<T>> {
        let b = OesBasis::with_optical_levels(self.groups.len())?;
        let mut h = OperatorMatrix::zeros(b);
        self.write_oracle(&b, schedule, sideband_freq, t, h.entries_mut())?;
        Ok(h)
    }

    fn write_oracle(&self, b: &OesBasis, schedule: &PulseSchedule<T>, sideband_freq: T, t: T, out: &mut CMatrix<T>) -> Result<()> {
        if self.mode != CouplingMode::Sideband {
            return Err(Error::config("the full oracle models the sideband coupling only"));
        }
        if !(sideband_freq > T::zero()) {
            return Err(Error::config("oracle sideband frequency must be positive"));
        }
        let p = &self.params;
        let (chirp, sideband) = self.chirp_and_sideband(schedule, t);
        let oc = schedule.optical(t);
        let drive = sideband_freq * inverse_j1(schedule.qubit_leg(t))?;
        let q = b.qubit(0);
        let cav = b.cavity(0);
        out[(q, q)] = cr(chirp + p.delta_q - sideband + sideband_freq + drive * (sideband_freq * t).cos());
        out[(cav, cav)] = cr(T::zero());
        for (j, g) in self.groups.iter().enumerate() {
            let e = b.spin(0, j);
            let r = b.optical(0, j);
            out[(e, e)] = cr(-(p.delta1 - p.delta0 - g.delta - chirp));
            out[(r, r)] = cr(p.delta0 + g.optical_offset);
            let v = cr(self.g_f(j));
            out[(e, q)] = v;
            out[(q, e)] = v;
            out[(r, e)] = cr(oc);
            out[(e, r)] = cr(oc);
            let w = c(g.phase.cos(), g.phase.sin()) * self.g_c(j);
            out[(cav, r)] = w;
            out[(r, cav)] = w.conj();
        }
        Ok(())
    }

    /// Channels of this node inside `basis` at index `node`, with the cavity
    /// decaying at `cavity_rate` (the full `kappa` for an isolated node, the
    /// intrinsic part when the cavity feeds a link).
    pub fn collapse_channels_in(&self, basis: &OesBasis, node: usize, cavity_rate: T) -> Result<Vec<CollapseChannel<T>>> {
        let p = &self.params;
        let mut out = Vec::new();
        let sink = BasisState::GroundSink;
        let mut push = |label: String, to: BasisState, from: BasisState, rate: T| -> Result<()> {
            if rate > T::zero() {
                out.push(CollapseChannel::new(label, OperatorMatrix::transition(*basis, to, from)?, rate)?);
            } else if rate < T::zero() {
                return Err(Error::config(format!("channel '{label}' has negative rate {rate}")));
            }
            Ok(())
        };
        let qubit = BasisState::QubitExcited(node);
        push(format!("qubit-decay[{node}]"), sink, qubit, p.gamma1_qb)?;
        push(format!("qubit-dephasing[{node}]"), qubit, qubit, T::lit(2.0) * p.gamma2_qb)?;
        for j in 0..self.groups.len() {
            let e = BasisState::SpinExcited(node, j);
            push(format!("spin-decay[{node},{j}]"), sink, e, p.gamma1_en)?;
            push(format!("spin-dephasing[{node},{j}]"), e, e, T::lit(2.0) * p.gamma2_en)?;
            if basis.has_optical_levels() {
                let r = BasisState::SpinOptical(node, j);
                push(format!("optical-decay0[{node},{j}]"), sink, r, p.optical_decay0)?;
                push(format!("optical-decay1[{node},{j}]"), e, r, p.optical_decay1)?;
            }
        }
        push(format!("cavity-decay[{node}]"), sink, BasisState::CavityPhoton(node), cavity_rate)?;
        Ok(out)
    }

    pub fn collapse_channels(&self) -> Result<Vec<CollapseChannel<T>>> {
        self.collapse_channels_in(&self.basis(), 0, self.params.kappa)
    }

    /// Isolated-node generator under the effective Hamiltonian.
    pub fn generator(&self, schedule: PulseSchedule<T>) -> Result<Generator<T>> {
        let b = self.basis();
        Generator::new(
            b,
            NodeHamiltonian { model: self.clone(), schedule, basis: b },
            self.collapse_channels()?,
            None,
        )
    }

    /// Isolated-node generator under the full oracle Hamiltonian.
    pub fn oracle_generator(&self, schedule: PulseSchedule<T>, sideband_freq: T) -> Result<Generator<T>> {
        let b = OesBasis::with_optical_levels(self.groups.len())?;
        // Fail early on anything the time-dependent writer would reject.
        self.full_oracle_hamiltonian(&schedule, sideband_freq, T::zero())?;
        let channels = self.collapse_channels_in(&b, 0, self.params.kappa)?;
        Generator::new(b, OracleHamiltonian { model: self.clone(), schedule, sideband_freq, basis: b }, channels, None)
    }
}

struct NodeHamiltonian<T: Real> {
    model: NodeModel<T>,
    schedule: PulseSchedule<T>,
    basis: OesBasis,
}

impl<T: Real> Hamiltonian<T> for NodeHamiltonian<T> {
    fn write(&self, t: T, out: &mut CMatrix<T>) {
        out.as_mut_slice().fill(cr(T::zero()));
        self.model.write_effective(&self.basis, 0, &self.schedule, t, out);
    }
}

struct OracleHamiltonian<T: Real> {
    model: NodeModel<T>,
    schedule: PulseSchedule<T>,
    sideband_freq: T,
    basis: OesBasis,
}

impl<T: Real> Hamiltonian<T> for OracleHamiltonian<T> {
    fn write(&self, t: T, out: &mut CMatrix<T>) {
        out.as_mut_slice().fill(cr(T::zero()));
        self.model
            .write_oracle(&self.basis, &self.schedule, self.sideband_freq, t, out)
            .expect("validated when the generator was built");
    }
}

pub fn build_effective_hamiltonian<T: Real>(
    params: &NodeParams<T>,
    groups: &[SpinGroup<T>],
    controls: &PulseSchedule<T>,
    t: T,
) -> Result<OperatorMatrix<T>> {
    Ok(NodeModel::new(params.clone(), groups.to_vec(), CouplingMode::Sideband)?.effective_hamiltonian(controls, t))
}

pub fn build_full_oracle_hamiltonian<T: Real>(
    params: &NodeParams<T>,
    groups: &[SpinGroup<T>],
    controls: &PulseSchedule<T>,
    sideband_freq: T,
    t: T,
) -> Result<OperatorMatrix<T>> {
    NodeModel::new(params.clone(), groups.to_vec(), CouplingMode::Sideband)?.full_oracle_hamiltonian(controls, sideband_freq, t)
}

pub fn build_collapse_channels<T: Real>(params: &NodeParams<T>, groups: &[SpinGroup<T>]) -> Result<Vec<CollapseChannel<T>>> {
    NodeModel::new(params.clone(), groups.to_vec(), CouplingMode::Sideband)?.collapse_channels()
}
