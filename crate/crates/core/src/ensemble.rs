// SPDX-License-Identifier: Apache-2.0

//! Discretization of an inhomogeneous spin ensemble into weighted groups.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum SamplingMode {
    /// Groups at the equal-probability quantiles of the normal distribution.
    #[default]
    Stratified,
    SeededRandom(u64),
}

/// Optical coupling fraction `xi_j = g_c,j / g_c` per group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum CouplingFractionModel<T> {
    #[default]
    Uniform,
    Explicit(Vec<T>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSpec<T> {
    pub groups: usize,
    /// Std-dev of the spin detunings.
    pub sigma_delta: T,
    /// Std-dev of the optical coupling phases, radians.
    pub sigma_theta: T,
    pub mode: SamplingMode,
    /// Collective magnetic coupling `g_f`, split as `g_f,j = g_f sqrt(w_j)`.
    pub g_f: T,
    pub coupling_fraction: CouplingFractionModel<T>,
}

impl<T: Real> EnsembleSpec<T> {
    pub fn homogeneous(groups: usize, g_f: T) -> Self {
        Self {
            groups,
            sigma_delta: T::zero(),
            sigma_theta: T::zero(),
            mode: SamplingMode::Stratified,
            g_f,
            coupling_fraction: CouplingFractionModel::Uniform,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.groups == 0 {
            return Err(Error::config("ensemble needs at least one group"));
        }
        if !(self.sigma_delta >= T::zero() && self.sigma_theta >= T::zero()) {
            return Err(Error::config("ensemble widths must be nonnegative"));
        }
        if !self.g_f.is_finite() {
            return Err(Error::config("collective coupling must be finite"));
        }
        if let CouplingFractionModel::Explicit(v) = &self.coupling_fraction {
            if v.len() != self.groups {
                return Err(Error::config(format!("{} coupling fractions for {} groups", v.len(), self.groups)));
            }
            if v.iter().any(|&x| !(x > T::zero())) {
                return Err(Error::config("coupling fractions must be positive"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinGroup<T> {
    /// Ground-splitting offset `D_j - D`.
    pub delta: T,
    /// Optical detuning offset `omega_r,j - omega_r`.
    pub optical_offset: T,
    pub phase: T,
    /// `xi_j`.
    pub fraction: T,
    pub weight: T,
}

/// Low-discrepancy ordering: argsort of `frac(k * step)`.
fn scramble(n: usize, step: f64) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| (a as f64 * step).fract().total_cmp(&(b as f64 * step).fract()));
    idx
}

const GOLDEN: f64 = 0.618_033_988_749_894_9;
const SILVER: f64 = 0.414_213_562_373_095_03;

pub fn sample_ensemble<T: Real>(spec: &EnsembleSpec<T>) -> Result<Vec<SpinGroup<T>>> {
    spec.validate()?;
    let n = spec.groups;
    let sd = spec.sigma_delta.to_f64_lossy();
    let st = spec.sigma_theta.to_f64_lossy();
    let (delta, theta, optical): (Vec<f64>, Vec<f64>, Vec<f64>) = match spec.mode {
        SamplingMode::Stratified => {
            let normal = Normal::new(0.0, 1.0).expect("standard normal");
            let z: Vec<f64> = (0..n).map(|i| normal.inverse_cdf((i as f64 + 0.5) / n as f64)).collect();
            let p1 = scramble(n, GOLDEN);
            let p2 = scramble(n, SILVER);
            (
                z.iter().map(|x| sd * x).collect(),
                p1.iter().map(|&k| st * z[k]).collect(),
                p2.iter().map(|&k| sd * z[k]).collect(),
            )
        }
        SamplingMode::SeededRandom(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut draw = |s: f64| -> Vec<f64> {
                (0..n).map(|_| s * <StandardNormal as Distribution<f64>>::sample(&StandardNormal, &mut rng)).collect()
            };
            let d = draw(sd);
            let t = draw(st);
            let o = draw(sd);
            (d, t, o)
        }
    };
    let w = T::one() / T::from_usize(n).expect("count");
    Ok((0..n)
        .map(|j| SpinGroup {
            delta: T::lit(delta[j]),
            optical_offset: T::lit(optical[j]),
            phase: T::lit(theta[j]),
            fraction: match &spec.coupling_fraction {
                CouplingFractionModel::Uniform => T::one(),
                CouplingFractionModel::Explicit(v) => v[j],
            },
            weight: w,
        })
        .collect())
}
