// SPDX-License-Identifier: Apache-2.0

//! Fidelities, reduced cavity states and Wigner functions.

use nalgebra::{Matrix2, Normed};

use crate::basis::{BasisState, OesBasis};
use crate::error::{Error, Result};
use crate::operator::DensityMatrix;
use crate::{c, CMatrix, CVector, Complex, Real};

/// `sqrt(<psi|rho|psi>)` for a normalized target.
pub fn fidelity<T: Real>(rho: &DensityMatrix<T>, target: &CVector<T>) -> Result<T> {
    Error::check_dim(rho.dim(), target.len())?;
    let norm = target.norm();
    if (norm - T::one()).abs() > T::lit(1e-8) {
        return Err(Error::config(format!("target state norm {norm} is not 1")));
    }
    let v = (target.adjoint() * rho.entries() * target)[(0, 0)].re;
    Ok(v.max(T::zero()).sqrt().min(T::one()))
}

/// Fidelity against a single basis state.
pub fn basis_fidelity<T: Real>(rho: &DensityMatrix<T>, state: BasisState) -> Result<T> {
    Ok(rho.population(state)?.max(T::zero()).sqrt().min(T::one()))
}

/// Two-level Fock-space state `{|0>, |1>}` of one cavity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityState<T: Real> {
    entries: Matrix2<Complex<T>>,
}

impl<T: Real> CavityState<T> {
    pub fn new(entries: Matrix2<Complex<T>>) -> Result<Self> {
        let s = Self { entries };
        s.validate()?;
        Ok(s)
    }

    pub fn vacuum() -> Self {
        Self { entries: Matrix2::new(c(T::one(), T::zero()), c(T::zero(), T::zero()), c(T::zero(), T::zero()), c(T::zero(), T::zero())) }
    }

    pub fn entries(&self) -> &Matrix2<Complex<T>> {
        &self.entries
    }

    pub fn rho00(&self) -> T {
        self.entries[(0, 0)].re
    }

    pub fn rho11(&self) -> T {
        self.entries[(1, 1)].re
    }

    /// `<1|rho|0>`.
    pub fn rho10(&self) -> Complex<T> {
        self.entries[(1, 0)]
    }

    /// Hermitian, unit trace and positive within 1e-8.
    pub fn validate(&self) -> Result<()> {
        let tol = T::lit(1e-8);
        let e = &self.entries;
        if (e[(0, 1)] - e[(1, 0)].conj()).norm() > tol || e[(0, 0)].im.abs() > tol || e[(1, 1)].im.abs() > tol {
            return Err(Error::config("cavity state is not Hermitian"));
        }
        if (e[(0, 0)].re + e[(1, 1)].re - T::one()).abs() > tol {
            return Err(Error::config("cavity state trace is not 1"));
        }
        let (a, b) = (e[(0, 0)].re, e[(1, 1)].re);
        if a < -tol || b < -tol || a * b - e[(1, 0)].norm_sqr() < -tol {
            return Err(Error::config("cavity state is not positive"));
        }
        Ok(())
    }
}

/// Reduced state of the cavity of `node`: `rho11` is the photon population,
/// and the `|1><0|` coherence is the photon/ground-sink element.
pub fn reduce_to_cavity<T: Real>(rho: &DensityMatrix<T>, node: usize) -> Result<CavityState<T>> {
    let b = rho.basis();
    let p = b.index(BasisState::CavityPhoton(node))?;
    let e = rho.entries();
    let r11 = e[(p, p)].re;
    let zero = T::zero();
    let m = Matrix2::new(c(T::one() - r11, zero), e[(0, p)], e[(p, 0)], c(r11, zero));
    Ok(CavityState { entries: m })
}

/// Wigner function of a cavity state truncated at one photon:
/// `(2/pi) e^{-2|a|^2} [rho00 + rho11 (4|a|^2 - 1) + 4 Re(rho10 conj(a))]`.
pub fn wigner_at<T: Real>(cav: &CavityState<T>, alpha: Complex<T>) -> T {
    let r2 = alpha.norm_sqr();
    let two = T::lit(2.0);
    let four = T::lit(4.0);
    let pref = two / T::pi() * (-two * r2).exp();
    pref * (cav.rho00() + cav.rho11() * (four * r2 - T::one()) + four * (cav.rho10() * alpha.conj()).re)
}

/// Wigner function sampled on a square grid in phase space.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid<T> {
    pub half_width: T,
    pub points: usize,
    /// Row-major: row index runs over `Im(alpha)`, column over `Re(alpha)`.
    pub values: Vec<T>,
}

impl<T: Real> WignerGrid<T> {
    pub fn coordinate(&self, k: usize) -> T {
        -self.half_width + T::lit(2.0) * self.half_width * T::from_usize(k).unwrap() / T::from_usize(self.points - 1).unwrap()
    }

    pub fn value(&self, row: usize, col: usize) -> T {
        self.values[row * self.points + col]
    }

    pub fn cell_area(&self) -> T {
        let h = T::lit(2.0) * self.half_width / T::from_usize(self.points - 1).unwrap();
        h * h
    }

    /// Riemann sum of the field.
    pub fn integral(&self) -> T {
        self.values.iter().fold(T::zero(), |a, &v| a + v) * self.cell_area()
    }
}

pub fn wigner<T: Real>(cav: &CavityState<T>, half_width: T, points: usize) -> Result<WignerGrid<T>> {
    if points < 2 || !(half_width > T::zero()) {
        return Err(Error::config("Wigner grid needs at least 2 points and a positive half-width"));
    }
    cav.validate()?;
    let mut grid = WignerGrid { half_width, points, values: Vec::with_capacity(points * points) };
    for row in 0..points {
        let im = grid.coordinate(row);
        for col in 0..points {
            let re = grid.coordinate(col);
            let v = wigner_at(cav, c(re, im));
            grid.values.push(v);
        }
    }
    Ok(grid)
}

/// `<psi_-|rho|psi_->` with `psi_- = (|photon_A> - |photon_B>)/sqrt(2)`.
pub fn antisymmetric_population_in<T: Real>(basis: &OesBasis, rho: &CMatrix<T>) -> T {
    let a = basis.cavity(0);
    let b = basis.cavity(1);
    T::lit(0.5) * (rho[(a, a)].re + rho[(b, b)].re) - rho[(a, b)].re
}

pub fn antisymmetric_mode_population<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    if rho.basis().nodes() != 2 {
        return Err(Error::config("antisymmetric mode needs a two-node basis"));
    }
    Ok(antisymmetric_population_in(rho.basis(), rho.entries()))
}
