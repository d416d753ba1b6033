// SPDX-License-Identifier: Apache-2.0

//! Lindblad generator: `-i[H(t), rho] + sum_k r_k D[C_k] rho + L_chiral rho`.

use nalgebra::{DMatrix, Normed};

use crate::basis::OesBasis;
use crate::error::{Error, Result};
use crate::network::ChiralLink;
use crate::operator::{DensityMatrix, OperatorMatrix};
use crate::{c, cr, CMatrix, Complex, Real};

#[derive(Debug, Clone)]
pub struct CollapseChannel<T: Real> {
    label: String,
    operator: OperatorMatrix<T>,
    rate: T,
}

impl<T: Real> CollapseChannel<T> {
    pub fn new(label: impl Into<String>, operator: OperatorMatrix<T>, rate: T) -> Result<Self> {
        let label = label.into();
        if !(rate >= T::zero()) {
            return Err(Error::config(format!("channel '{label}' has negative rate {rate}")));
        }
        Ok(Self { label, operator, rate })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn operator(&self) -> &OperatorMatrix<T> {
        &self.operator
    }

    pub fn rate(&self) -> T {
        self.rate
    }
}

/// `rate * (C rho C^† - {C^†C, rho}/2)`, computed with dense products.
pub fn dissipator<T: Real>(op: &OperatorMatrix<T>, rate: T, rho: &DensityMatrix<T>) -> Result<CMatrix<T>> {
    Error::check_dim(op.dim(), rho.dim())?;
    if !(rate >= T::zero()) {
        return Err(Error::config(format!("negative dissipator rate {rate}")));
    }
    let n = rho.dim();
    if rate == T::zero() {
        return Ok(DMatrix::zeros(n, n));
    }
    let cm = op.entries();
    let r = rho.entries();
    let cd = cm.adjoint();
    let cdc = &cd * cm;
    let half = cr(T::lit(0.5));
    let out = cm * r * &cd - (&cdc * r + r * &cdc) * half;
    Ok(out * cr(rate))
}

/// A time-dependent Hermitian operator. Implementations overwrite every
/// entry of `out`.
pub trait Hamiltonian<T: Real>: Send + Sync {
    fn write(&self, t: T, out: &mut CMatrix<T>);
}

/// Time-independent Hamiltonian.
pub struct StaticHamiltonian<T: Real>(pub CMatrix<T>);

impl<T: Real> Hamiltonian<T> for StaticHamiltonian<T> {
    fn write(&self, _t: T, out: &mut CMatrix<T>) {
        out.copy_from(&self.0);
    }
}

/// Adapts a closure returning the matrix at time `t`.
pub struct FnHamiltonian<F>(pub F);

impl<T: Real, F> Hamiltonian<T> for FnHamiltonian<F>
where
    F: Fn(T) -> CMatrix<T> + Send + Sync,
{
    fn write(&self, t: T, out: &mut CMatrix<T>) {
        out.copy_from(&(self.0)(t));
    }
}

/// Nonzero entries `(row, col, value)` of `sqrt(rate) * C`.
type SparseJump<T> = Vec<(usize, usize, Complex<T>)>;

pub struct Generator<T: Real> {
    basis: OesBasis,
    hamiltonian: Box<dyn Hamiltonian<T>>,
    channels: Vec<CollapseChannel<T>>,
    chiral: Option<ChiralLink<T>>,
    // Nonzero entries of -(i/2) sum_k r_k C_k^† C_k
    decay_shift: Vec<(usize, usize, Complex<T>)>,
    jumps: Vec<SparseJump<T>>,
}

/// Scratch buffers reused across generator evaluations.
pub struct GeneratorWorkspace<T: Real> {
    h_eff: CMatrix<T>,
    nonzero: Vec<(usize, usize, Complex<T>)>,
    rho_t: CMatrix<T>,
    acc_t: CMatrix<T>,
}

impl<T: Real> GeneratorWorkspace<T> {
    pub fn new(dim: usize) -> Self {
        Self {
            h_eff: DMatrix::zeros(dim, dim),
            nonzero: Vec::with_capacity(dim * 4),
            rho_t: DMatrix::zeros(dim, dim),
            acc_t: DMatrix::zeros(dim, dim),
        }
    }
}

impl<T: Real> Generator<T> {
    pub fn new(
        basis: OesBasis,
        hamiltonian: impl Hamiltonian<T> + 'static,
        channels: Vec<CollapseChannel<T>>,
        chiral: Option<ChiralLink<T>>,
    ) -> Result<Self> {
        let n = basis.dim();
        let mut decay = DMatrix::zeros(n, n);
        let mut jumps = Vec::with_capacity(channels.len());
        for ch in &channels {
            Error::check_dim(n, ch.operator.dim())?;
            if ch.rate == T::zero() {
                continue;
            }
            let cm = ch.operator.entries();
            decay += cm.adjoint() * cm * cr(ch.rate);
            let s = ch.rate.sqrt();
            let nz: SparseJump<T> = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .filter(|&(i, j)| cm[(i, j)].norm() > T::zero())
                .map(|(i, j)| (i, j, cm[(i, j)] * cr(s)))
                .collect();
            jumps.push(nz);
        }
        if chiral.is_some() && basis.nodes() != 2 {
            return Err(Error::config("chiral link requires a two-node basis"));
        }
        let half = T::lit(0.5);
        let decay_shift = (0..n)
            .flat_map(|j| (0..n).map(move |i| (i, j)))
            .filter(|&(i, j)| decay[(i, j)].norm() > T::zero())
            .map(|(i, j)| {
                let k: Complex<T> = decay[(i, j)];
                (i, j, c(k.im * half, -k.re * half))
            })
            .collect();
        Ok(Self { basis, hamiltonian: Box::new(hamiltonian), channels, chiral, decay_shift, jumps })
    }

    /// Closed system: no channels, no chiral link.
    pub fn unitary(basis: OesBasis, hamiltonian: impl Hamiltonian<T> + 'static) -> Result<Self> {
        Self::new(basis, hamiltonian, Vec::new(), None)
    }

    pub fn basis(&self) -> &OesBasis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn channels(&self) -> &[CollapseChannel<T>] {
        &self.channels
    }

    pub fn chiral(&self) -> Option<&ChiralLink<T>> {
        self.chiral.as_ref()
    }

    pub fn hamiltonian_at(&self, t: T) -> OperatorMatrix<T> {
        let n = self.dim();
        let mut h = DMatrix::zeros(n, n);
        self.hamiltonian.write(t, &mut h);
        OperatorMatrix::from_entries(self.basis, h).expect("hamiltonian dimension")
    }

    pub fn workspace(&self) -> GeneratorWorkspace<T> {
        GeneratorWorkspace::new(self.dim())
    }

    /// `d rho / dt` at time `t`.
    pub fn apply(&self, t: T, rho: &DensityMatrix<T>) -> Result<CMatrix<T>> {
        Error::check_dim(self.dim(), rho.dim())?;
        let n = self.dim();
        let mut out = DMatrix::zeros(n, n);
        let mut ws = self.workspace();
        self.apply_into(t, rho.entries(), &mut out, &mut ws);
        Ok(out)
    }

    /// Allocation-free form of [`Generator::apply`] used by the integrator.
    /// `rho` must be Hermitian; the result is then Hermitian as well.
    pub fn apply_into(&self, t: T, rho: &CMatrix<T>, out: &mut CMatrix<T>, ws: &mut GeneratorWorkspace<T>) {
        let n = self.dim();
        self.hamiltonian.write(t, &mut ws.h_eff);
        // H_eff = H - (i/2) K
        for &(i, j, k) in &self.decay_shift {
            ws.h_eff[(i, j)] += k;
        }
        ws.nonzero.clear();
        for (idx, &h) in ws.h_eff.as_slice().iter().enumerate() {
            if h.re != T::zero() || h.im != T::zero() {
                ws.nonzero.push((idx % n, idx / n, h));
            }
        }
        // For Hermitian rho the two Hamiltonian terms are X + X^† with
        // X = -i H_eff rho. X is built transposed so the inner loop runs down
        // contiguous columns.
        ws.rho_t.tr_copy_from(rho);
        ws.acc_t.as_mut_slice().fill(cr(T::zero()));
        {
            let rt = ws.rho_t.as_slice();
            let at = ws.acc_t.as_mut_slice();
            for &(i, j, h) in &ws.nonzero {
                let mh = c(h.im, -h.re);
                for (o, &r) in at[i * n..(i + 1) * n].iter_mut().zip(&rt[j * n..(j + 1) * n]) {
                    *o += mh * r;
                }
            }
        }
        let at = ws.acc_t.as_slice();
        for (idx, o) in out.as_mut_slice().iter_mut().enumerate() {
            let (i, j) = (idx % n, idx / n);
            *o = at[j + i * n] + at[idx].conj();
        }
        for jump in &self.jumps {
            for &(a, i, ca) in jump {
                for &(b, j, cb) in jump {
                    out[(a, b)] += ca * rho[(i, j)] * cb.conj();
                }
            }
        }
        if let Some(link) = &self.chiral {
            link.accumulate(&self.basis, rho, out);
        }
    }
}
