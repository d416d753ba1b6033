// SPDX-License-Identifier: Apache-2.0

//! Dormand–Prince 5(4) with step rejection and 4th-order dense output.
//!
//! The state is a complex matrix; the error norm is the RMS over real and
//! imaginary parts of `err / (atol + rtol * max(|y_old|, |y_new|))`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::{cr, CMatrix, Real};

#[derive(Debug, Clone, Copy)]
pub struct StepControl<T> {
    pub rel_tol: T,
    pub abs_tol: T,
    /// Upper bound on the step size. Without it a step started where the
    /// right-hand side is nearly zero can stride over a short control pulse.
    pub max_step: Option<T>,
    pub max_steps: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IntegrationStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// `out += h * sum_i w_i k_i` over the nonzero weights.
fn add_terms<T: Real>(out: &mut CMatrix<T>, h: T, terms: &[(f64, &CMatrix<T>)]) {
    for &(w, k) in terms {
        if w != 0.0 {
            out.zip_apply(k, |o, kv| *o += kv * cr(h * T::lit(w)));
        }
    }
}

/// `out = y + h * sum_i w_i k_i`.
fn combine<T: Real>(out: &mut CMatrix<T>, y: &CMatrix<T>, h: T, terms: &[(f64, &CMatrix<T>)]) {
    out.copy_from(y);
    add_terms(out, h, terms);
}

fn error_norm<T: Real>(err: &CMatrix<T>, y0: &CMatrix<T>, y1: &CMatrix<T>, rtol: T, atol: T) -> T {
    let mut acc = T::zero();
    for ((e, a), b) in err.iter().zip(y0.iter()).zip(y1.iter()) {
        let sr = atol + rtol * a.re.abs().max(b.re.abs());
        let si = atol + rtol * a.im.abs().max(b.im.abs());
        acc += (e.re / sr) * (e.re / sr) + (e.im / si) * (e.im / si);
    }
    (acc / T::from_usize(2 * err.len()).expect("length")).sqrt()
}

fn rms<T: Real>(m: &CMatrix<T>, y: &CMatrix<T>, rtol: T, atol: T) -> T {
    error_norm(m, y, y, rtol, atol)
}

/// Integrates `dy/dt = f(t, y)` from `times[0]` through every entry of the
/// strictly ascending `times`, calling `on_sample(index, t, y)` at each one
/// (including the initial time). Returns the final state.
pub fn integrate_sampled<T, F, S>(
    mut f: F,
    y0: CMatrix<T>,
    times: &[T],
    ctl: &StepControl<T>,
    mut on_sample: S,
) -> Result<(CMatrix<T>, IntegrationStats)>
where
    T: Real,
    F: FnMut(T, &CMatrix<T>, &mut CMatrix<T>),
    S: FnMut(usize, T, &CMatrix<T>),
{
    if times.is_empty() {
        return Err(Error::config("no sample times"));
    }
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::config("sample times must be strictly ascending"));
    }
    if !(ctl.rel_tol > T::zero() && ctl.abs_tol > T::zero()) {
        return Err(Error::config("tolerances must be positive"));
    }
    let (r, cdim) = y0.shape();
    let t0 = times[0];
    let tend = *times.last().unwrap();
    let mut stats = IntegrationStats::default();
    on_sample(0, t0, &y0);
    if times.len() == 1 {
        return Ok((y0, stats));
    }
    let span = tend - t0;
    let h_floor = T::lit(1e-14) * span;
    let h_max = ctl.max_step.unwrap_or(span).min(span);

    let zero = || -> CMatrix<T> { DMatrix::zeros(r, cdim) };
    let mut y = y0;
    let mut k1 = zero();
    let mut k2 = zero();
    let mut k3 = zero();
    let mut k4 = zero();
    let mut k5 = zero();
    let mut k6 = zero();
    let mut k7 = zero();
    let mut ytmp = zero();
    let mut ynew = zero();
    let mut err = zero();
    let mut cont = [zero(), zero(), zero(), zero(), zero()];

    let mut t = t0;
    f(t, &y, &mut k1);
    stats.evaluations += 1;

    // Initial step guess (Hairer–Wanner II.4).
    let mut h = {
        let d0 = rms(&y, &y, ctl.rel_tol, ctl.abs_tol);
        let d1 = rms(&k1, &y, ctl.rel_tol, ctl.abs_tol);
        let mut h0 = if d0 < T::lit(1e-5) || d1 < T::lit(1e-5) { T::lit(1e-6) * span } else { T::lit(0.01) * d0 / d1 };
        h0 = h0.min(h_max);
        combine(&mut ytmp, &y, h0, &[(1.0, &k1)]);
        f(t + h0, &ytmp, &mut k2);
        stats.evaluations += 1;
        k2.zip_apply(&k1, |a, b| *a -= b);
        let d2 = rms(&k2, &y, ctl.rel_tol, ctl.abs_tol) / h0;
        let h1 = if d1.max(d2) <= T::lit(1e-15) {
            (h0 * T::lit(1e-3)).max(T::lit(1e-6) * span)
        } else {
            (T::lit(0.01) / d1.max(d2)).powf(T::lit(0.2))
        };
        (T::lit(100.0) * h0).min(h1).min(h_max)
    };

    let mut next_sample = 1;
    let mut rejected_last = false;
    loop {
        if stats.accepted + stats.rejected >= ctl.max_steps {
            return Err(Error::Integration {
                time: t.to_f64_lossy(),
                reason: format!("exceeded {} steps", ctl.max_steps),
            });
        }
        if h < h_floor {
            return Err(Error::Integration { time: t.to_f64_lossy(), reason: "step size underflow".into() });
        }
        let last = t + h >= tend;
        if last {
            h = tend - t;
        }

        combine(&mut ytmp, &y, h, &[(A21, &k1)]);
        f(t + T::lit(C2) * h, &ytmp, &mut k2);
        combine(&mut ytmp, &y, h, &[(A31, &k1), (A32, &k2)]);
        f(t + T::lit(C3) * h, &ytmp, &mut k3);
        combine(&mut ytmp, &y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]);
        f(t + T::lit(C4) * h, &ytmp, &mut k4);
        combine(&mut ytmp, &y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]);
        f(t + T::lit(C5) * h, &ytmp, &mut k5);
        combine(&mut ytmp, &y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]);
        f(t + h, &ytmp, &mut k6);
        combine(&mut ynew, &y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        f(t + h, &ynew, &mut k7);
        stats.evaluations += 6;

        err.fill(cr(T::zero()));
        add_terms(&mut err, h, &[(E1, &k1), (E3, &k3), (E4, &k4), (E5, &k5), (E6, &k6), (E7, &k7)]);
        let en = error_norm(&err, &y, &ynew, ctl.rel_tol, ctl.abs_tol);
        if !en.is_finite() {
            return Err(Error::Integration { time: t.to_f64_lossy(), reason: "non-finite state".into() });
        }

        if en <= T::one() {
            stats.accepted += 1;
            let tnew = if last { tend } else { t + h };
            if next_sample < times.len() && times[next_sample] <= tnew {
                // Dense output coefficients.
                let [c0, c1, c2, c3, c4] = &mut cont;
                c0.copy_from(&y);
                c1.copy_from(&ynew);
                *c1 -= &y;
                c2.zip_zip_apply(&k1, c1, |a, k, d| *a = k * cr(h) - d);
                c3.copy_from(c1);
                c3.zip_apply(&k7, |a, k| *a -= k * cr(h));
                *c3 -= &*c2;
                c4.fill(cr(T::zero()));
                add_terms(c4, h, &[(D1, &k1), (D3, &k3), (D4, &k4), (D5, &k5), (D6, &k6), (D7, &k7)]);
                while next_sample < times.len() && times[next_sample] <= tnew {
                    let ts = times[next_sample];
                    if ts == tnew {
                        on_sample(next_sample, ts, &ynew);
                    } else {
                        let th = (ts - t) / h;
                        let th1 = T::one() - th;
                        // y = c0 + th (c1 + th1 (c2 + th (c3 + th1 c4)))
                        ytmp.copy_from(&cont[4]);
                        ytmp *= cr(th1);
                        ytmp += &cont[3];
                        ytmp *= cr(th);
                        ytmp += &cont[2];
                        ytmp *= cr(th1);
                        ytmp += &cont[1];
                        ytmp *= cr(th);
                        ytmp += &cont[0];
                        on_sample(next_sample, ts, &ytmp);
                    }
                    next_sample += 1;
                }
            }
            std::mem::swap(&mut y, &mut ynew);
            std::mem::swap(&mut k1, &mut k7);
            t = tnew;
            if last {
                break;
            }
            let fac = if en == T::zero() { T::lit(5.0) } else { T::lit(0.9) * en.powf(T::lit(-0.2)) };
            let fac = fac.min(if rejected_last { T::one() } else { T::lit(5.0) }).max(T::lit(0.2));
            h = (h * fac).min(h_max);
            rejected_last = false;
        } else {
            stats.rejected += 1;
            rejected_last = true;
            h *= (T::lit(0.9) * en.powf(T::lit(-0.2))).max(T::lit(0.1));
        }
    }
    Ok((y, stats))
}
