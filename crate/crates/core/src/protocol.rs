// SPDX-License-Identifier: Apache-2.0

//! Single-node STIRAP swap from the qubit into the cavity photon.

use crate::basis::BasisState;
use crate::error::Result;
use crate::evolve::{evolve_with, EvolveOptions, Trajectory};
use crate::node::NodeModel;
use crate::operator::DensityMatrix;
use crate::pulse::PulseSchedule;
use crate::{CMatrix, Real};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SwapSeries<T> {
    pub qubit: Vec<T>,
    pub cavity: Vec<T>,
    pub spins: Vec<T>,
    pub sink: Vec<T>,
    /// Smallest eigenvalue of each sampled state, when requested.
    pub min_eigenvalue: Vec<T>,
}

#[derive(Debug, Clone)]
pub struct SwapResult<T: Real> {
    pub trajectory: Trajectory<T>,
    pub series: SwapSeries<T>,
    /// `sqrt` of the peak photon population.
    pub peak_fidelity: T,
    pub peak_population: T,
    pub peak_time: T,
    pub peak_state: DensityMatrix<T>,
    pub max_spin_population: T,
    /// State at the sample requested from [`run_swap_with_snapshot`].
    pub snapshot: Option<DensityMatrix<T>>,
}

/// Starts from the excited qubit and records the photon population.
pub fn run_swap<T: Real>(
    model: &NodeModel<T>,
    schedule: PulseSchedule<T>,
    sample_times: &[T],
    options: &EvolveOptions<T>,
    track_eigenvalues: bool,
) -> Result<SwapResult<T>> {
    run_swap_with_snapshot(model, schedule, sample_times, options, track_eigenvalues, None)
}

/// [`run_swap`], also keeping the full state at sample index `snapshot`.
pub fn run_swap_with_snapshot<T: Real>(
    model: &NodeModel<T>,
    schedule: PulseSchedule<T>,
    sample_times: &[T],
    options: &EvolveOptions<T>,
    track_eigenvalues: bool,
    snapshot: Option<usize>,
) -> Result<SwapResult<T>> {
    let generator = model.generator(schedule)?;
    let b = model.basis();
    let rho0 = DensityMatrix::basis_state(b, BasisState::QubitExcited(0))?;
    let spins: Vec<usize> = b.spin_range(0).collect();
    let mut series = SwapSeries::default();
    let mut best: Option<(usize, T, CMatrix<T>)> = None;
    let mut snap = None;
    let trajectory = evolve_with(&generator, &rho0, sample_times, options, |k, _, rho| {
        if snapshot == Some(k) {
            snap = Some(rho.clone());
        }
        let p = |i: usize| rho[(i, i)].re;
        let cav = p(b.cavity(0));
        series.qubit.push(p(b.qubit(0)));
        series.cavity.push(cav);
        series.spins.push(spins.iter().fold(T::zero(), |a, &i| a + p(i)));
        series.sink.push(p(b.sink()));
        if track_eigenvalues {
            let d = DensityMatrix::from_entries(b, rho.clone()).expect("dimension");
            series.min_eigenvalue.push(d.min_eigenvalue());
        }
        if best.as_ref().map_or(true, |(_, v, _)| cav > *v) {
            best = Some((k, cav, rho.clone()));
        }
    })?;
    let (k, peak_population, state) = best.expect("at least one sample");
    let max_spin_population = series.spins.iter().fold(T::zero(), |a, &v| a.max(v));
    Ok(SwapResult {
        peak_fidelity: peak_population.max(T::zero()).sqrt(),
        peak_population,
        peak_time: trajectory.times[k],
        peak_state: DensityMatrix::from_entries(b, state)?,
        max_spin_population,
        snapshot: snap.map(|m| DensityMatrix::from_entries(b, m)).transpose()?,
        trajectory,
        series,
    })
}
