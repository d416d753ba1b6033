// SPDX-License-Identifier: Apache-2.0

//! Two-node cascaded transfer: limits, causality and bookkeeping.

mod common;

use spinlink::evolve::{evolve_with, uniform_times, EvolveOptions};
use spinlink::network::{run_transfer, NetworkModel};
use spinlink::operator::DensityMatrix;
use spinlink::pulse::{ChirpMode, Envelope, PulseSchedule};
use spinlink::BasisState;

fn idle_optical() -> PulseSchedule<f64> {
    PulseSchedule::new(Envelope::Zero, Envelope::Zero, ChirpMode::Tracking).unwrap()
}

#[test]
fn no_raman_leg_means_no_arrival() {
    let model = NetworkModel::new(common::network(common::nv_node(4), common::nv_node(4))).unwrap();
    let times = uniform_times(0.0, 20.0, 401).unwrap();
    let r = run_transfer(&model, [idle_optical(), idle_optical()], &times, &EvolveOptions::default()).unwrap();
    assert!(r.series.qubit_b.iter().all(|&p| p < 1e-6), "qubit B reached {}", r.peak_population);
}

#[test]
fn uncoupled_qubit_decays_exponentially() {
    let mut a = common::nv_node(2);
    a.ensemble.g_f = 0.0;
    a.g_c = 0.0;
    a.gamma1_qb = 0.3;
    let b = a.clone();
    let model = NetworkModel::new(common::network(a, b)).unwrap();
    let times = uniform_times(0.0, 10.0, 201).unwrap();
    let r = run_transfer(&model, [common::sech(5.0, 2.0), common::sech(5.0, 2.0)], &times, &EvolveOptions::default()).unwrap();
    for (k, &t) in times.iter().enumerate() {
        assert!((r.series.qubit_a[k] - (-0.3 * t).exp()).abs() < 1e-6);
        assert!(r.series.qubit_b[k].abs() < 1e-12);
    }
}

#[test]
fn lossless_symmetric_link_transfers_almost_everything() {
    let model = NetworkModel::new(common::network(common::lossless_node(2), common::lossless_node(2))).unwrap();
    let times = uniform_times(0.0, 20.0, 2001).unwrap();
    let s = common::sech(5.5, 2.0);
    let r = run_transfer(&model, [s, s], &times, &EvolveOptions::default()).unwrap();
    assert!(r.peak_population > 0.98, "peak population {}", r.peak_population);
    // Only the link output leaves the system, and it ends in the sink.
    let last = r.trajectory.populations.last().unwrap();
    let b = model.basis();
    let inside: f64 = (0..b.dim()).filter(|&i| i != b.sink()).map(|i| last[i]).sum();
    assert!((last[b.sink()] - (1.0 - inside)).abs() < 1e-6);
    assert!(model.generator([s, s]).unwrap().channels().iter().all(|c| !c.label().starts_with("cavity-decay")));
}

#[test]
fn node_a_ignores_node_b_and_states_stay_physical() {
    let params = common::network(common::nv_node(20), common::nv_node(20));
    let model = NetworkModel::new(params).unwrap();
    let b = model.basis();
    let times = uniform_times(0.0, 20.0, 2001).unwrap();
    let sa = common::sech(5.5, 2.0);
    let opts = EvolveOptions::default();
    let node_a: Vec<usize> = [b.qubit(0), b.cavity(0)].into_iter().chain(b.spin_range(0)).collect();

    let rho0 = DensityMatrix::basis_state(b, BasisState::QubitExcited(0)).unwrap();
    let mut min_eig = f64::INFINITY;
    let base = evolve_with(&model.generator([sa, sa]).unwrap(), &rho0, &times, &opts, |k, _, rho| {
        if k % 10 == 0 {
            let d = DensityMatrix::from_entries(b, rho.clone()).unwrap();
            min_eig = min_eig.min(d.min_eigenvalue());
        }
    })
    .unwrap();
    assert!(min_eig > -1e-6, "min eigenvalue {min_eig}");
    for row in &base.populations {
        assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-6);
    }

    let sb = PulseSchedule::raman_sech(150.0, 7.0, 1.5, ChirpMode::Tracking).unwrap();
    let moved = evolve_with(&model.generator([sa, sb]).unwrap(), &rho0, &times, &opts, |_, _, _| {}).unwrap();
    let mut worst = 0.0f64;
    for &i in &node_a {
        worst = worst.max(common::max_abs_diff(&base.series(i), &moved.series(i)));
    }
    assert!(worst < 1e-8, "node A changed by {worst}");
    // Node B itself did respond.
    assert!(common::max_abs_diff(&base.series(b.qubit(1)), &moved.series(b.qubit(1))) > 1e-3);
}
