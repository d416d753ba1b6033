// SPDX-License-Identifier: Apache-2.0

//! Dense operators and density matrices over an [`OesBasis`].

use nalgebra::{DMatrix, Normed};

use crate::basis::{BasisState, OesBasis};
use crate::error::{Error, Result};
use crate::{cr, CMatrix, CVector, Complex, Real};

/// Largest entry of `|A - A^†|`.
pub fn hermiticity_defect<T: Real>(m: &CMatrix<T>) -> T {
    let n = m.nrows();
    let mut worst = T::zero();
    for i in 0..n {
        for j in i..n {
            let d = (m[(i, j)] - m[(j, i)].conj()).norm();
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}

pub fn max_abs<T: Real>(m: &CMatrix<T>) -> T {
    m.iter().fold(T::zero(), |acc, z| acc.max(z.norm()))
}

pub fn trace<T: Real>(m: &CMatrix<T>) -> Complex<T> {
    (0..m.nrows()).fold(Complex::new(T::zero(), T::zero()), |acc, i| acc + m[(i, i)])
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix<T: Real> {
    basis: OesBasis,
    entries: CMatrix<T>,
}

impl<T: Real> OperatorMatrix<T> {
    pub fn zeros(basis: OesBasis) -> Self {
        let n = basis.dim();
        Self { basis, entries: DMatrix::zeros(n, n) }
    }

    pub fn identity(basis: OesBasis) -> Self {
        let n = basis.dim();
        Self { basis, entries: DMatrix::identity(n, n) }
    }

    pub fn from_entries(basis: OesBasis, entries: CMatrix<T>) -> Result<Self> {
        Error::check_dim(basis.dim(), entries.nrows())?;
        Error::check_dim(basis.dim(), entries.ncols())?;
        Ok(Self { basis, entries })
    }

    /// `|to><from|`.
    pub fn transition(basis: OesBasis, to: BasisState, from: BasisState) -> Result<Self> {
        let mut op = Self::zeros(basis);
        let (i, j) = (basis.index(to)?, basis.index(from)?);
        op.entries[(i, j)] = cr(T::one());
        Ok(op)
    }

    /// `|s><s|`.
    pub fn projector(basis: OesBasis, state: BasisState) -> Result<Self> {
        Self::transition(basis, state, state)
    }

    pub fn basis(&self) -> &OesBasis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &CMatrix<T> {
        &self.entries
    }

    pub fn entries_mut(&mut self) -> &mut CMatrix<T> {
        &mut self.entries
    }

    pub fn into_entries(self) -> CMatrix<T> {
        self.entries
    }

    pub fn dagger(&self) -> Self {
        Self { basis: self.basis, entries: self.entries.adjoint() }
    }

    pub fn hermiticity_defect(&self) -> T {
        hermiticity_defect(&self.entries)
    }

    pub fn get(&self, row: BasisState, col: BasisState) -> Result<Complex<T>> {
        Ok(self.entries[(self.basis.index(row)?, self.basis.index(col)?)])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T: Real> {
    basis: OesBasis,
    entries: CMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// `|s><s|` for a basis state.
    pub fn basis_state(basis: OesBasis, state: BasisState) -> Result<Self> {
        let mut entries = DMatrix::zeros(basis.dim(), basis.dim());
        let i = basis.index(state)?;
        entries[(i, i)] = cr(T::one());
        Ok(Self { basis, entries })
    }

    /// `|psi><psi|` for a normalized ket.
    pub fn pure(basis: OesBasis, ket: &CVector<T>) -> Result<Self> {
        Error::check_dim(basis.dim(), ket.len())?;
        let norm = ket.norm();
        if (norm - T::one()).abs() > T::lit(1e-8) {
            return Err(Error::config(format!("state vector norm {norm} is not 1")));
        }
        Ok(Self { basis, entries: ket * ket.adjoint() })
    }

    /// Wraps raw entries without checking the density-matrix invariants; see
    /// [`DensityMatrix::validate`].
    pub fn from_entries(basis: OesBasis, entries: CMatrix<T>) -> Result<Self> {
        Error::check_dim(basis.dim(), entries.nrows())?;
        Error::check_dim(basis.dim(), entries.ncols())?;
        Ok(Self { basis, entries })
    }

    pub fn basis(&self) -> &OesBasis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &CMatrix<T> {
        &self.entries
    }

    pub fn into_entries(self) -> CMatrix<T> {
        self.entries
    }

    pub fn trace(&self) -> Complex<T> {
        trace(&self.entries)
    }

    pub fn population(&self, state: BasisState) -> Result<T> {
        let i = self.basis.index(state)?;
        Ok(self.entries[(i, i)].re)
    }

    pub fn populations(&self) -> Vec<T> {
        (0..self.dim()).map(|i| self.entries[(i, i)].re).collect()
    }

    pub fn element(&self, row: BasisState, col: BasisState) -> Result<Complex<T>> {
        Ok(self.entries[(self.basis.index(row)?, self.basis.index(col)?)])
    }

    pub fn hermiticity_defect(&self) -> T {
        hermiticity_defect(&self.entries)
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> T {
        let herm = (&self.entries + self.entries.adjoint()) * cr(T::lit(0.5));
        herm.symmetric_eigenvalues().iter().fold(T::max_value().unwrap_or(T::one()), |a, &b| a.min(b))
    }

    /// Hermitian within 1e-10, unit trace within 1e-8, eigenvalues above -1e-8.
    pub fn validate(&self) -> Result<()> {
        self.validate_with(T::lit(1e-10), T::lit(1e-8), T::lit(1e-8))
    }

    pub fn validate_with(&self, herm_tol: T, trace_tol: T, eig_tol: T) -> Result<()> {
        let h = self.hermiticity_defect();
        if h > herm_tol {
            return Err(Error::config(format!("density matrix not Hermitian (defect {h})")));
        }
        let tr = self.trace();
        if (tr.re - T::one()).abs() > trace_tol || tr.im.abs() > trace_tol {
            return Err(Error::config(format!("density matrix trace {tr} is not 1")));
        }
        let e = self.min_eigenvalue();
        if e < -eig_tol {
            return Err(Error::config(format!("density matrix has eigenvalue {e}")));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::CVector;

    #[test]
    fn transition_and_projector_shapes() {
        let b = OesBasis::single(2).unwrap();
        let t = OperatorMatrix::<f64>::transition(b, BasisState::GroundSink, BasisState::QubitExcited(0)).unwrap();
        assert_eq!(t.entries()[(0, 1)], cr(1.0));
        assert_eq!(t.entries().iter().filter(|z| z.norm() > 0.0).count(), 1);
        let p = OperatorMatrix::<f64>::projector(b, BasisState::CavityPhoton(0)).unwrap();
        assert_eq!(p.hermiticity_defect(), 0.0);
        assert!(t.hermiticity_defect() > 0.5);
    }

    #[test]
    fn from_entries_checks_dimension() {
        let b = OesBasis::single(2).unwrap();
        assert!(OperatorMatrix::<f64>::from_entries(b, CMatrix::zeros(4, 4)).is_err());
        assert!(DensityMatrix::<f64>::from_entries(b, CMatrix::zeros(5, 5)).is_ok());
    }

    #[test]
    fn pure_state_validation() {
        let b = OesBasis::single(1).unwrap();
        let mut ket = CVector::<f64>::zeros(b.dim());
        ket[1] = Complex::new(0.6, 0.0);
        ket[3] = Complex::new(0.0, 0.8);
        let rho = DensityMatrix::pure(b, &ket).unwrap();
        rho.validate().unwrap();
        assert!((rho.min_eigenvalue()).abs() < 1e-12);
        ket[3] = Complex::new(0.0, 0.9);
        assert!(DensityMatrix::pure(b, &ket).is_err());
    }

    #[test]
    fn validate_rejects_negative_and_untraced() {
        let b = OesBasis::single(1).unwrap();
        let mut m = CMatrix::<f64>::zeros(4, 4);
        m[(0, 0)] = cr(1.1);
        m[(1, 1)] = cr(-0.1);
        let rho = DensityMatrix::from_entries(b, m.clone()).unwrap();
        assert!(rho.validate().is_err());
        m[(1, 1)] = cr(0.0);
        assert!(DensityMatrix::from_entries(b, m).unwrap().validate().is_err());
    }
}
