// SPDX-License-Identifier: Apache-2.0

//! Two nodes joined by a unidirectional optical channel, A to B.

use nalgebra::DMatrix;

use crate::analysis::antisymmetric_population_in;
use crate::basis::{BasisState, OesBasis};
use crate::error::{Error, Result};
use crate::evolve::{evolve_with, EvolveOptions, Trajectory};
use crate::lindblad::{CollapseChannel, Generator, Hamiltonian};
use crate::node::{CouplingMode, NodeModel, NodeParams};
use crate::operator::{DensityMatrix, OperatorMatrix};
use crate::pulse::PulseSchedule;
use crate::{cr, CMatrix, Real};

/// Cascaded coupling from node A's cavity into node B's cavity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiralLink<T> {
    kappa_ex_a: T,
    kappa_ex_b: T,
}

impl<T: Real> ChiralLink<T> {
    pub fn new(kappa_ex_a: T, kappa_ex_b: T) -> Result<Self> {
        if !(kappa_ex_a >= T::zero() && kappa_ex_b >= T::zero()) {
            return Err(Error::config("extraction rates must be nonnegative"));
        }
        Ok(Self { kappa_ex_a, kappa_ex_b })
    }

    pub fn kappa_ex_a(&self) -> T {
        self.kappa_ex_a
    }

    pub fn kappa_ex_b(&self) -> T {
        self.kappa_ex_b
    }

    /// Adds `-s (aB^† aA rho - aA rho aB^† + rho aA^† aB - aB rho aA^†)`,
    /// `s = sqrt(kA kB)`, to `out`. `a_l = |sink><photon_l|`.
    pub fn accumulate(&self, basis: &OesBasis, rho: &CMatrix<T>, out: &mut CMatrix<T>) {
        let s = (self.kappa_ex_a * self.kappa_ex_b).sqrt();
        if s == T::zero() {
            return;
        }
        let a = basis.cavity(0);
        let b = basis.cavity(1);
        let z = basis.sink();
        let n = rho.nrows();
        let s = cr(s);
        for j in 0..n {
            out[(b, j)] -= s * rho[(a, j)];
        }
        for i in 0..n {
            out[(i, b)] -= s * rho[(i, a)];
        }
        out[(z, z)] += s * (rho[(a, b)] + rho[(b, a)]);
    }
}

/// The chiral contribution as a standalone matrix.
pub fn build_chiral_term<T: Real>(link: &ChiralLink<T>, rho: &DensityMatrix<T>) -> Result<CMatrix<T>> {
    if rho.basis().nodes() != 2 {
        return Err(Error::config("chiral term needs a two-node basis"));
    }
    let n = rho.dim();
    let mut out = DMatrix::zeros(n, n);
    link.accumulate(rho.basis(), rho.entries(), &mut out);
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkParams<T> {
    pub node_a: NodeParams<T>,
    pub node_b: NodeParams<T>,
    pub link: ChiralLink<T>,
    /// Spin-manifold detuning in both nodes.
    pub dispersive_detuning: T,
}

impl<T: Real> NetworkParams<T> {
    /// Link rates taken from each node's `xi * kappa`.
    pub fn new(node_a: NodeParams<T>, node_b: NodeParams<T>, dispersive_detuning: T) -> Result<Self> {
        let link = ChiralLink::new(node_a.kappa_ex(), node_b.kappa_ex())?;
        Ok(Self { node_a, node_b, link, dispersive_detuning })
    }

    pub fn validate(&self) -> Result<()> {
        self.node_a.validate()?;
        self.node_b.validate()?;
        if self.link.kappa_ex_a > self.node_a.kappa || self.link.kappa_ex_b > self.node_b.kappa {
            return Err(Error::config("link extraction rate exceeds the node's cavity decay rate"));
        }
        Ok(())
    }
}

/// The two node models of a network in dispersive mode.
#[derive(Debug, Clone)]
pub struct NetworkModel<T: Real> {
    params: NetworkParams<T>,
    nodes: [NodeModel<T>; 2],
    basis: OesBasis,
}

impl<T: Real> NetworkModel<T> {
    /// Samples both ensembles from their specs.
    pub fn new(params: NetworkParams<T>) -> Result<Self> {
        params.validate()?;
        let mode = CouplingMode::Dispersive { detuning: params.dispersive_detuning };
        let a = NodeModel::from_params(params.node_a.clone(), mode)?;
        let b = NodeModel::from_params(params.node_b.clone(), mode)?;
        Self::from_models(params, a, b)
    }

    pub fn from_models(params: NetworkParams<T>, a: NodeModel<T>, b: NodeModel<T>) -> Result<Self> {
        params.validate()?;
        if a.groups().len() != b.groups().len() {
            return Err(Error::config("both nodes need the same number of spin groups"));
        }
        let basis = OesBasis::pair(a.groups().len())?;
        Ok(Self { params, nodes: [a, b], basis })
    }

    pub fn params(&self) -> &NetworkParams<T> {
        &self.params
    }

    pub fn basis(&self) -> OesBasis {
        self.basis
    }

    pub fn node(&self, l: usize) -> &NodeModel<T> {
        &self.nodes[l]
    }

    pub fn hamiltonian_at(&self, controls: &[PulseSchedule<T>; 2], t: T) -> OperatorMatrix<T> {
        let mut h = OperatorMatrix::zeros(self.basis);
        for l in 0..2 {
            self.nodes[l].write_effective(&self.basis, l, &controls[l], t, h.entries_mut());
        }
        h
    }

    pub fn generator(&self, controls: [PulseSchedule<T>; 2]) -> Result<Generator<T>> {
        let mut channels: Vec<CollapseChannel<T>> = Vec::new();
        let link = self.params.link;
        for (l, kex) in [(0, link.kappa_ex_a), (1, link.kappa_ex_b)] {
            let node = &self.nodes[l];
            let ki = (node.params().kappa - kex).max(T::zero());
            channels.extend(node.collapse_channels_in(&self.basis, l, ki)?);
            if kex > T::zero() {
                channels.push(CollapseChannel::new(
                    format!("cavity-extraction[{l}]"),
                    OperatorMatrix::transition(self.basis, BasisState::GroundSink, BasisState::CavityPhoton(l))?,
                    kex,
                )?);
            }
        }
        Generator::new(
            self.basis,
            NetworkHamiltonian { nodes: self.nodes.clone(), controls, basis: self.basis },
            channels,
            Some(link),
        )
    }
}

struct NetworkHamiltonian<T: Real> {
    nodes: [NodeModel<T>; 2],
    controls: [PulseSchedule<T>; 2],
    basis: OesBasis,
}

impl<T: Real> Hamiltonian<T> for NetworkHamiltonian<T> {
    fn write(&self, t: T, out: &mut CMatrix<T>) {
        out.as_mut_slice().fill(cr(T::zero()));
        for l in 0..2 {
            self.nodes[l].write_effective(&self.basis, l, &self.controls[l], t, out);
        }
    }
}

pub fn build_network_generator<T: Real>(params: &NetworkParams<T>, controls: [PulseSchedule<T>; 2]) -> Result<Generator<T>> {
    NetworkModel::new(params.clone())?.generator(controls)
}

/// Per-sample observables of a transfer run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TransferSeries<T> {
    pub qubit_a: Vec<T>,
    pub qubit_b: Vec<T>,
    pub cavity_a: Vec<T>,
    pub cavity_b: Vec<T>,
    pub antisymmetric: Vec<T>,
    pub spins: Vec<T>,
    pub sink: Vec<T>,
}

#[derive(Debug, Clone)]
pub struct TransferResult<T: Real> {
    pub trajectory: Trajectory<T>,
    pub series: TransferSeries<T>,
    /// `sqrt` of the peak qubit-B population.
    pub peak_fidelity: T,
    pub peak_population: T,
    pub peak_time: T,
    /// State at the sample requested from [`run_transfer_with_snapshot`].
    pub snapshot: Option<DensityMatrix<T>>,
}

/// Starts with qubit A excited and tracks the transfer to qubit B.
pub fn run_transfer<T: Real>(
    model: &NetworkModel<T>,
    controls: [PulseSchedule<T>; 2],
    sample_times: &[T],
    options: &EvolveOptions<T>,
) -> Result<TransferResult<T>> {
    run_transfer_with_snapshot(model, controls, sample_times, options, None)
}

/// [`run_transfer`], also keeping the full state at sample index `snapshot`.
pub fn run_transfer_with_snapshot<T: Real>(
    model: &NetworkModel<T>,
    controls: [PulseSchedule<T>; 2],
    sample_times: &[T],
    options: &EvolveOptions<T>,
    snapshot: Option<usize>,
) -> Result<TransferResult<T>> {
    let generator = model.generator(controls)?;
    let b = model.basis();
    let rho0 = DensityMatrix::basis_state(b, BasisState::QubitExcited(0))?;
    let spin_idx: Vec<usize> = (0..2).flat_map(|l| b.spin_range(l)).collect();
    let mut series = TransferSeries::default();
    let mut snap = None;
    let trajectory = evolve_with(&generator, &rho0, sample_times, options, |k, _, rho| {
        if snapshot == Some(k) {
            snap = Some(rho.clone());
        }
        let p = |i: usize| rho[(i, i)].re;
        series.qubit_a.push(p(b.qubit(0)));
        series.qubit_b.push(p(b.qubit(1)));
        series.cavity_a.push(p(b.cavity(0)));
        series.cavity_b.push(p(b.cavity(1)));
        series.spins.push(spin_idx.iter().fold(T::zero(), |a, &i| a + p(i)));
        series.sink.push(p(b.sink()));
        series.antisymmetric.push(antisymmetric_population_in(&b, rho));
    })?;
    let (k, &peak_population) = series
        .qubit_b
        .iter()
        .enumerate()
        .fold((0, &series.qubit_b[0]), |best, cur| if *cur.1 > *best.1 { cur } else { best });
    Ok(TransferResult {
        peak_fidelity: peak_population.max(T::zero()).sqrt(),
        peak_population,
        peak_time: trajectory.times[k],
        snapshot: snap.map(|m| DensityMatrix::from_entries(b, m)).transpose()?,
        trajectory,
        series,
    })
}
