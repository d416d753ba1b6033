// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

use std::f64::consts::PI;

use spinlink::ensemble::{CouplingFractionModel, EnsembleSpec, SamplingMode};
use spinlink::network::NetworkParams;
use spinlink::node::NodeParams;
use spinlink::pulse::{ChirpMode, PulseSchedule};

/// Swap working point in units of the qubit decay rate (0.4 MHz).
pub fn swap_params(groups: usize) -> NodeParams<f64> {
    NodeParams {
        gamma1_qb: 1.0,
        gamma2_qb: 0.0,
        kappa: 7.5,
        xi: 1.0,
        gamma1_en: 0.0,
        gamma2_en: 2.25,
        delta0: 60000.0,
        delta1: 60000.0,
        d_bar: 0.0,
        delta_q: 0.0,
        g_c: 5250.0,
        omega_c0: 3000.0,
        optical_decay0: 0.0,
        optical_decay1: 0.0,
        ensemble: EnsembleSpec {
            groups,
            sigma_delta: 34.5,
            sigma_theta: 0.03 * PI,
            mode: SamplingMode::Stratified,
            g_f: 262.5 / 0.58,
            coupling_fraction: CouplingFractionModel::Uniform,
        },
    }
}

pub fn swap_schedule(chirp: ChirpMode) -> PulseSchedule<f64> {
    PulseSchedule::stirap(0.58, 3000.0, 0.008, 0.008, 0.020, 1.25, chirp).unwrap()
}

/// Network node in units of the cavity linewidth (10 MHz), NV ensemble.
pub fn nv_node(groups: usize) -> NodeParams<f64> {
    NodeParams {
        gamma1_qb: 0.002,
        gamma2_qb: 0.0,
        kappa: 1.0,
        xi: 1.0,
        gamma1_en: 1.2,
        gamma2_en: 0.09,
        delta0: 4000.0,
        delta1: 4000.0,
        d_bar: 0.0,
        delta_q: 0.0,
        g_c: 200.0,
        omega_c0: 200.0,
        optical_decay0: 0.0,
        optical_decay1: 0.0,
        ensemble: EnsembleSpec {
            groups,
            sigma_delta: 1.44,
            sigma_theta: 0.1 * PI,
            mode: SamplingMode::Stratified,
            g_f: 10.0,
            coupling_fraction: CouplingFractionModel::Uniform,
        },
    }
}

/// Every loss switched off except the cavity output into the link.
pub fn lossless_node(groups: usize) -> NodeParams<f64> {
    let mut p = nv_node(groups);
    p.gamma1_qb = 0.0;
    p.gamma1_en = 0.0;
    p.gamma2_en = 0.0;
    p.ensemble.sigma_delta = 0.0;
    p.ensemble.sigma_theta = 0.0;
    p
}

pub fn network(a: NodeParams<f64>, b: NodeParams<f64>) -> NetworkParams<f64> {
    NetworkParams::new(a, b, 200.0).unwrap()
}

pub fn sech(center: f64, width: f64) -> PulseSchedule<f64> {
    PulseSchedule::raman_sech(200.0, center, width, ChirpMode::Tracking).unwrap()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
