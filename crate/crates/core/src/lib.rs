// SPDX-License-Identifier: Apache-2.0

//! Open-system simulation of a microwave/optical quantum interface.
//!
//! A superconducting flux qubit couples magnetically to an inhomogeneous spin
//! ensemble, which in turn couples to an optical cavity through a Raman
//! transition. The crate integrates the Lindblad dynamics of one such node, or
//! of two nodes joined by a unidirectional optical channel, inside the
//! one-excitation subspace.
//!
//! Everything numeric is generic over a [`Real`] scalar (`f32` or `f64`). The
//! aliases at the crate root fix the scalar to `f64`, which is what the
//! scenario runner and the tolerances in the test suites assume.
//!
//! Module map:
//!
//! * [`basis`], [`operator`], [`lindblad`], [`integrate`], [`evolve`]: dense
//!   matrix algebra, the Lindblad generator and its adaptive integration.
//! * [`ensemble`], [`node`]: spin-group sampling and the single-node
//!   Hamiltonians and collapse channels.
//! * [`bessel`], [`pulse`]: control-field envelopes and resonance conditions.
//! * [`network`]: the cascaded two-node system.
//! * [`analysis`]: fidelities, reduced cavity states, Wigner functions.
//! * [`protocol`]: the single-node STIRAP swap driver.
//! * [`optimize`]: bounded derivative-free search used for pulse calibration.

pub mod analysis;
pub mod basis;
pub mod bessel;
pub mod ensemble;
pub mod error;
pub mod evolve;
pub mod integrate;
pub mod lindblad;
pub mod network;
pub mod node;
pub mod operator;
pub mod optimize;
pub mod protocol;
pub mod pulse;

use std::fmt::{Debug, Display};

use nalgebra::RealField;
use num_traits::{FromPrimitive, ToPrimitive};

pub use basis::{BasisState, OesBasis};
pub use error::{Error, Result};

/// Scalar type the simulator is generic over.
pub trait Real:
    RealField + Copy + Default + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Converts an `f64` literal. Every supported scalar represents all finite
    /// `f64` values (possibly rounded), so this never fails for finite input.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

pub type Complex<T> = num_complex::Complex<T>;
pub type CMatrix<T> = nalgebra::DMatrix<Complex<T>>;
pub type CVector<T> = nalgebra::DVector<Complex<T>>;

pub type OperatorMatrix = operator::OperatorMatrix<f64>;
pub type DensityMatrix = operator::DensityMatrix<f64>;
pub type CollapseChannel = lindblad::CollapseChannel<f64>;
pub type Generator = lindblad::Generator<f64>;
pub type Trajectory = evolve::Trajectory<f64>;
pub type EvolveOptions = evolve::EvolveOptions<f64>;
pub type EnsembleSpec = ensemble::EnsembleSpec<f64>;
pub type SpinGroup = ensemble::SpinGroup<f64>;
pub type NodeParams = node::NodeParams<f64>;
pub type NodeModel = node::NodeModel<f64>;
pub type PulseSchedule = pulse::PulseSchedule<f64>;
pub type Envelope = pulse::Envelope<f64>;
pub type ChiralLink = network::ChiralLink<f64>;
pub type NetworkParams = network::NetworkParams<f64>;
pub type CavityState = analysis::CavityState<f64>;

pub(crate) fn c<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

pub(crate) fn cr<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}
