// SPDX-License-Identifier: Apache-2.0

//! Time evolution of a density matrix under a [`Generator`].

use crate::error::{Error, Result};
use crate::integrate::{integrate_sampled, IntegrationStats, StepControl};
use crate::lindblad::Generator;
use crate::operator::DensityMatrix;
use crate::{CMatrix, Real};

#[derive(Debug, Clone, Copy)]
pub struct EvolveOptions<T> {
    pub rel_tol: T,
    pub abs_tol: T,
    /// Defaults to 1/100 of the sampled span.
    pub max_step: Option<T>,
    pub max_steps: usize,
}

impl<T: Real> Default for EvolveOptions<T> {
    fn default() -> Self {
        Self { rel_tol: T::lit(1e-8), abs_tol: T::lit(1e-10), max_step: None, max_steps: 5_000_000 }
    }
}

impl<T: Real> EvolveOptions<T> {
    pub fn with_rel_tol(mut self, rel_tol: T) -> Self {
        self.rel_tol = rel_tol;
        self
    }
}

/// Sampled populations and the final state of one run.
#[derive(Debug, Clone)]
pub struct Trajectory<T: Real> {
    pub times: Vec<T>,
    /// `populations[k][i]` is the diagonal entry `i` at `times[k]`.
    pub populations: Vec<Vec<T>>,
    pub final_state: DensityMatrix<T>,
    pub stats: IntegrationStats,
}

impl<T: Real> Trajectory<T> {
    /// Population of basis index `i` at every sample.
    pub fn series(&self, i: usize) -> Vec<T> {
        self.populations.iter().map(|p| p[i]).collect()
    }

    /// Summed population of several basis indices at every sample.
    pub fn summed_series(&self, indices: &[usize]) -> Vec<T> {
        self.populations.iter().map(|p| indices.iter().fold(T::zero(), |a, &i| a + p[i])).collect()
    }
}

/// `points` uniformly spaced samples on `[t0, t1]`, endpoints included.
pub fn uniform_times<T: Real>(t0: T, t1: T, points: usize) -> Result<Vec<T>> {
    if points < 2 || !(t1 > t0) {
        return Err(Error::config("sample grid needs at least two points and t1 > t0"));
    }
    let n = T::from_usize(points - 1).expect("count");
    Ok((0..points).map(|k| t0 + (t1 - t0) * T::from_usize(k).expect("index") / n).collect())
}

pub fn evolve<T: Real>(
    generator: &Generator<T>,
    rho0: &DensityMatrix<T>,
    sample_times: &[T],
    options: &EvolveOptions<T>,
) -> Result<Trajectory<T>> {
    evolve_with(generator, rho0, sample_times, options, |_, _, _| {})
}

/// Like [`evolve`], also handing every sampled state to `observer`.
pub fn evolve_with<T, O>(
    generator: &Generator<T>,
    rho0: &DensityMatrix<T>,
    sample_times: &[T],
    options: &EvolveOptions<T>,
    mut observer: O,
) -> Result<Trajectory<T>>
where
    T: Real,
    O: FnMut(usize, T, &CMatrix<T>),
{
    Error::check_dim(generator.dim(), rho0.dim())?;
    let span = match (sample_times.first(), sample_times.last()) {
        (Some(&a), Some(&b)) => b - a,
        _ => return Err(Error::config("no sample times")),
    };
    let ctl = StepControl {
        rel_tol: options.rel_tol,
        abs_tol: options.abs_tol,
        max_step: Some(options.max_step.unwrap_or(span / T::lit(100.0))),
        max_steps: options.max_steps,
    };
    let n = generator.dim();
    let mut ws = generator.workspace();
    let mut populations = Vec::with_capacity(sample_times.len());
    let (rho, stats) = integrate_sampled(
        |t, y, out| generator.apply_into(t, y, out, &mut ws),
        rho0.entries().clone(),
        sample_times,
        &ctl,
        |k, t, y| {
            populations.push((0..n).map(|i| y[(i, i)].re).collect());
            observer(k, t, y);
        },
    )?;
    Ok(Trajectory {
        times: sample_times.to_vec(),
        populations,
        final_state: DensityMatrix::from_entries(*generator.basis(), rho)?,
        stats,
    })
}
