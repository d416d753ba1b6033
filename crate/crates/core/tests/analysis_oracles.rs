// SPDX-License-Identifier: Apache-2.0

//! Cavity reduction and Wigner functions against explicit Fock-space
//! constructions.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use proptest::prelude::*;
use spinlink::analysis::{basis_fidelity, reduce_to_cavity, wigner, wigner_at, CavityState};
use spinlink::operator::{trace, DensityMatrix};
use spinlink::{BasisState, CMatrix, Complex, OesBasis};

type M = DMatrix<Complex<f64>>;

fn random_density(basis: OesBasis, vals: &[f64]) -> DensityMatrix<f64> {
    let n = basis.dim();
    let a = CMatrix::<f64>::from_fn(n, n, |i, j| {
        let k = 2 * (i * n + j);
        Complex::new(vals[k % vals.len()], vals[(k + 1) % vals.len()])
    });
    let p = &a * a.adjoint();
    let tr = trace(&p).re;
    DensityMatrix::from_entries(basis, p / Complex::new(tr, 0.0)).unwrap()
}

/// Product-space index of a one-excitation state of a single node with two
/// groups, factors ordered (qubit, group 0, group 1, cavity).
fn product_index(s: BasisState) -> usize {
    match s {
        BasisState::GroundSink => 0,
        BasisState::QubitExcited(_) => 0b1000,
        BasisState::SpinExcited(_, 0) => 0b0100,
        BasisState::SpinExcited(_, _) => 0b0010,
        BasisState::CavityPhoton(_) => 0b0001,
        BasisState::SpinOptical(..) => unreachable!(),
    }
}

/// Embeds into the 16-dimensional product space and traces out everything
/// but the cavity.
fn partial_trace_oracle(rho: &DensityMatrix<f64>) -> M {
    let b = rho.basis();
    let mut big = M::zeros(16, 16);
    for (i, si) in b.states().enumerate() {
        for (j, sj) in b.states().enumerate() {
            big[(product_index(si), product_index(sj))] = rho.entries()[(i, j)];
        }
    }
    let mut out = M::zeros(2, 2);
    for env in 0..8 {
        for a in 0..2 {
            for c in 0..2 {
                out[(a, c)] += big[((env << 1) | a, (env << 1) | c)];
            }
        }
    }
    out
}

fn annihilation(n: usize) -> M {
    M::from_fn(n, n, |i, j| if j == i + 1 { Complex::new((j as f64).sqrt(), 0.0) } else { Complex::new(0.0, 0.0) })
}

/// `(2/pi) Tr[D(-alpha) rho D(alpha) P]` with `D` from the matrix
/// exponential in a truncated Fock space and `P` the photon-number parity.
fn displaced_parity(cav: &CavityState<f64>, alpha: Complex<f64>) -> f64 {
    let n = 40;
    let a = annihilation(n);
    let gen = a.adjoint() * alpha - &a * alpha.conj();
    let d = gen.exp();
    let d_minus = (-gen).exp();
    let mut rho = M::zeros(n, n);
    for i in 0..2 {
        for j in 0..2 {
            rho[(i, j)] = cav.entries()[(i, j)];
        }
    }
    let shifted = &d_minus * rho * &d;
    let parity: Complex<f64> = (0..n).map(|k| shifted[(k, k)] * if k % 2 == 0 { 1.0 } else { -1.0 }).sum();
    2.0 / PI * parity.re
}

fn cavity_from(vals: &[f64]) -> CavityState<f64> {
    let p11 = vals[0].abs().min(1.0);
    let bound = (p11 * (1.0 - p11)).sqrt();
    let r = vals[1].abs().min(1.0) * bound;
    let coh = Complex::from_polar(r, PI * vals[2]);
    let m = nalgebra::Matrix2::new(Complex::new(1.0 - p11, 0.0), coh.conj(), coh, Complex::new(p11, 0.0));
    CavityState::new(m).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn reduction_matches_partial_trace(vals in prop::collection::vec(-1.0f64..1.0, 50)) {
        let b = OesBasis::single(2).unwrap();
        let rho = random_density(b, &vals);
        let cav = reduce_to_cavity(&rho, 0).unwrap();
        let oracle = partial_trace_oracle(&rho);
        prop_assert!((oracle[(0, 0)].re + oracle[(1, 1)].re - 1.0).abs() < 1e-10);
        prop_assert!((cav.rho00() + cav.rho11() - 1.0).abs() < 1e-10);
        for i in 0..2 {
            for j in 0..2 {
                prop_assert!((cav.entries()[(i, j)] - oracle[(i, j)]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn wigner_matches_displaced_parity(vals in prop::collection::vec(-1.0f64..1.0, 3), re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let cav = cavity_from(&vals);
        let alpha = Complex::new(re, im);
        prop_assert!((wigner_at(&cav, alpha) - displaced_parity(&cav, alpha)).abs() < 1e-9);
    }

    #[test]
    fn wigner_bounded_and_normalized(vals in prop::collection::vec(-1.0f64..1.0, 3)) {
        let cav = cavity_from(&vals);
        let g = wigner(&cav, 4.0, 201).unwrap();
        prop_assert!(g.values.iter().all(|w| w.is_finite() && w.abs() <= 2.0 / PI + 1e-9));
        prop_assert!((g.integral() - 1.0).abs() < 0.02);
    }

    #[test]
    fn basis_fidelity_squares_to_population(vals in prop::collection::vec(-1.0f64..1.0, 80)) {
        let b = OesBasis::pair(2).unwrap();
        let rho = random_density(b, &vals);
        for s in b.states() {
            let f = basis_fidelity(&rho, s).unwrap();
            prop_assert!((f * f - rho.population(s).unwrap()).abs() < 1e-14);
        }
    }
}

#[test]
fn vacuum_and_photon_parity() {
    let vac = CavityState::<f64>::vacuum();
    assert!((displaced_parity(&vac, Complex::new(0.0, 0.0)) - 2.0 / PI).abs() < 1e-12);
    assert!((wigner_at(&vac, Complex::new(0.0, 0.0)) - 2.0 / PI).abs() < 1e-15);
}
