// SPDX-License-Identifier: Apache-2.0

//! Bessel functions of the first kind, orders 0 and 1.
//!
//! Power series below |x| = 8; above that, Miller's backward recurrence
//! normalized with `J0 + 2 (J2 + J4 + ...) = 1`.

use crate::error::{Error, Result};
use crate::Real;

/// Location of the first maximum of `J1`.
pub const J1_ARGMAX: f64 = 1.841_183_781_340_659_3;
/// `J1(J1_ARGMAX)`, the largest value `J1` attains.
pub const J1_MAX: f64 = 0.581_865_224_281_596_4;

const SERIES_LIMIT: f64 = 8.0;

fn series(x: f64, order: u32) -> f64 {
    let h = 0.5 * x;
    let q = -h * h;
    let mut term = if order == 0 { 1.0 } else { h };
    let mut sum = term;
    let mut k = 1.0;
    while term.abs() > 1e-18 * sum.abs().max(1e-300) || k < 4.0 {
        term *= q / (k * (k + order as f64));
        sum += term;
        k += 1.0;
        if k > 200.0 {
            break;
        }
    }
    sum
}

/// `(J0(x), J1(x))` by backward recurrence, `x > 0`.
fn miller(x: f64) -> (f64, f64) {
    let start = 2 * ((x as usize + 20 + (40.0 * x).sqrt() as usize) / 2);
    let mut jp1 = 0.0;
    let mut j = 1e-30;
    let mut norm = 0.0;
    let (mut j0, mut j1) = (0.0, 0.0);
    for k in (1..=start).rev() {
        let jm1 = 2.0 * k as f64 / x * j - jp1;
        jp1 = j;
        j = jm1;
        // j now holds J_{k-1}, jp1 holds J_k
        if k == 1 {
            j1 = jp1;
            j0 = j;
        }
        if (k - 1) % 2 == 0 && k > 1 {
            norm += 2.0 * j;
        }
        if j.abs() > 1e250 {
            j *= 1e-250;
            jp1 *= 1e-250;
            norm *= 1e-250;
        }
    }
    let norm = norm + j0;
    (j0 / norm, j1 / norm)
}

pub fn bessel_j0_f64(x: f64) -> f64 {
    let ax = x.abs();
    if ax < SERIES_LIMIT {
        series(ax, 0)
    } else {
        miller(ax).0
    }
}

pub fn bessel_j1_f64(x: f64) -> f64 {
    let ax = x.abs();
    let v = if ax < SERIES_LIMIT { series(ax, 1) } else { miller(ax).1 };
    if x < 0.0 {
        -v
    } else {
        v
    }
}

pub fn bessel_j0<T: Real>(x: T) -> T {
    T::lit(bessel_j0_f64(x.to_f64_lossy()))
}

pub fn bessel_j1<T: Real>(x: T) -> T {
    T::lit(bessel_j1_f64(x.to_f64_lossy()))
}

/// The `x` in `[-J1_ARGMAX, J1_ARGMAX]` with `J1(x) = y`.
pub fn inverse_j1<T: Real>(y: T) -> Result<T> {
    let yf = y.to_f64_lossy();
    if !(yf.abs() <= J1_MAX) {
        return Err(Error::config(format!("{yf} is outside the range of J1")));
    }
    let target = yf.abs();
    let (mut lo, mut hi) = (0.0, J1_ARGMAX);
    let mut x = (2.0 * target).min(J1_ARGMAX);
    for _ in 0..100 {
        let f = bessel_j1_f64(x) - target;
        if f > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let d = if x > 0.0 { bessel_j0_f64(x) - bessel_j1_f64(x) / x } else { 0.5 };
        let mut next = x - f / d;
        if !(next > lo && next < hi) || d.abs() < 1e-12 {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() < 1e-15 {
            x = next;
            break;
        }
        x = next;
    }
    Ok(T::lit(if yf < 0.0 { -x } else { x }))
}
