// SPDX-License-Identifier: Apache-2.0

//! Bounded Nelder–Mead minimization.
//!
//! Vertices are clamped into the box after every reflection, expansion and
//! contraction. Initialization is deterministic: the start point plus one
//! vertex per axis displaced by `initial_step` of that axis' range.

use crate::error::{Error, Result};
use crate::Real;

#[derive(Debug, Clone, Copy)]
pub struct NelderMeadOptions<T> {
    pub max_evaluations: usize,
    /// Stop when the simplex' objective spread falls below this.
    pub f_tol: T,
    /// Stop when every vertex lies within this of the best, per axis.
    pub x_tol: T,
    /// Initial displacement as a fraction of each axis' range.
    pub initial_step: T,
}

impl<T: Real> Default for NelderMeadOptions<T> {
    fn default() -> Self {
        Self { max_evaluations: 200, f_tol: T::lit(1e-6), x_tol: T::lit(1e-4), initial_step: T::lit(0.25) }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum<T> {
    pub x: Vec<T>,
    pub value: T,
    pub evaluations: usize,
    pub converged: bool,
}

struct Counted<'a, T, F> {
    f: &'a mut F,
    evals: usize,
    _t: std::marker::PhantomData<T>,
}

impl<T: Real, F: FnMut(&[T]) -> Result<T>> Counted<'_, T, F> {
    fn call(&mut self, x: &[T]) -> Result<T> {
        self.evals += 1;
        match (self.f)(x) {
            Ok(v) if v.is_finite() => Ok(v),
            Ok(v) => Err(Error::Objective {
                point: x.iter().map(|v| v.to_f64_lossy()).collect(),
                reason: format!("non-finite value {v}"),
            }),
            Err(e) => Err(Error::Objective {
                point: x.iter().map(|v| v.to_f64_lossy()).collect(),
                reason: e.to_string(),
            }),
        }
    }
}

fn clamp<T: Real>(x: &mut [T], lower: &[T], upper: &[T]) {
    for ((v, &lo), &hi) in x.iter_mut().zip(lower).zip(upper) {
        *v = v.max(lo).min(hi);
    }
}

/// Minimizes `f` over the box `[lower, upper]` starting from `x0` (clamped).
pub fn minimize_bounded<T, F>(
    mut f: F,
    x0: &[T],
    lower: &[T],
    upper: &[T],
    options: &NelderMeadOptions<T>,
) -> Result<Minimum<T>>
where
    T: Real,
    F: FnMut(&[T]) -> Result<T>,
{
    let n = x0.len();
    if n == 0 || lower.len() != n || upper.len() != n {
        return Err(Error::config("start point and bounds must have the same nonzero length"));
    }
    if lower.iter().zip(upper).any(|(l, u)| !(l <= u)) {
        return Err(Error::config("every lower bound must not exceed its upper bound"));
    }
    let mut obj = Counted { f: &mut f, evals: 0, _t: std::marker::PhantomData };
    let mut start = x0.to_vec();
    clamp(&mut start, lower, upper);

    let free: Vec<usize> = (0..n).filter(|&i| upper[i] > lower[i]).collect();
    if free.is_empty() {
        let value = obj.call(&start)?;
        return Ok(Minimum { x: start, value, evaluations: obj.evals, converged: true });
    }

    let mut simplex: Vec<(Vec<T>, T)> = Vec::with_capacity(free.len() + 1);
    let v0 = obj.call(&start)?;
    simplex.push((start.clone(), v0));
    for &i in &free {
        let mut x = start.clone();
        let step = options.initial_step * (upper[i] - lower[i]);
        // Step toward the side with more room.
        x[i] = if upper[i] - start[i] >= start[i] - lower[i] { start[i] + step } else { start[i] - step };
        clamp(&mut x, lower, upper);
        let v = obj.call(&x)?;
        simplex.push((x, v));
    }

    let (alpha, gamma, rho, sigma) = (T::one(), T::lit(2.0), T::lit(0.5), T::lit(0.5));
    let point = |a: &[T], b: &[T], w: T| -> Vec<T> {
        let mut p: Vec<T> = a.iter().zip(b).map(|(&ai, &bi)| ai + w * (bi - ai)).collect();
        clamp(&mut p, lower, upper);
        p
    };
    let mut converged = false;
    while obj.evals < options.max_evaluations {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).expect("finite objective"));
        let best = simplex[0].1;
        let worst = simplex[simplex.len() - 1].1;
        let spread_x = simplex[1..].iter().all(|(x, _)| {
            x.iter().zip(&simplex[0].0).all(|(&a, &b)| (a - b).abs() <= options.x_tol)
        });
        if (worst - best).abs() <= options.f_tol && spread_x {
            converged = true;
            break;
        }
        let m = simplex.len() - 1;
        let mut centroid = vec![T::zero(); n];
        for (x, _) in &simplex[..m] {
            for (c, &v) in centroid.iter_mut().zip(x) {
                *c += v / T::from_usize(m).unwrap();
            }
        }
        let worst_x = simplex[m].0.clone();
        let xr = point(&centroid, &worst_x, -alpha);
        let fr = obj.call(&xr)?;
        if fr < simplex[0].1 {
            let xe = point(&centroid, &worst_x, -gamma);
            let fe = obj.call(&xe)?;
            simplex[m] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[m - 1].1 {
            simplex[m] = (xr, fr);
        } else {
            let (xc, fc) = if fr < simplex[m].1 {
                let xc = point(&centroid, &xr, rho);
                let fc = obj.call(&xc)?;
                (xc, fc)
            } else {
                let xc = point(&centroid, &worst_x, rho);
                let fc = obj.call(&xc)?;
                (xc, fc)
            };
            if fc < fr.min(simplex[m].1) {
                simplex[m] = (xc, fc);
            } else {
                let x0 = simplex[0].0.clone();
                for k in 1..simplex.len() {
                    let xs = point(&x0, &simplex[k].0, sigma);
                    let fs = obj.call(&xs)?;
                    simplex[k] = (xs, fs);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).expect("finite objective"));
    let (x, value) = simplex.swap_remove(0);
    Ok(Minimum { x, value, evaluations: obj.evals, converged })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_interior_minimum() {
        let f = |x: &[f64]| Ok((x[0] - 1.3).powi(2) + 4.0 * (x[1] + 0.4).powi(2));
        let opts = NelderMeadOptions { max_evaluations: 500, f_tol: 1e-12, x_tol: 1e-7, initial_step: 0.25 };
        let m = minimize_bounded(f, &[0.0, 0.0], &[-2.0, -2.0], &[2.0, 2.0], &opts).unwrap();
        assert!(m.converged);
        assert!((m.x[0] - 1.3).abs() < 1e-4 && (m.x[1] + 0.4).abs() < 1e-4);
    }

    #[test]
    fn respects_bounds() {
        let f = |x: &[f64]| Ok(-x[0] - x[1]);
        let m = minimize_bounded(f, &[0.1, 0.1], &[0.0, 0.0], &[1.0, 0.5], &Default::default()).unwrap();
        assert!((m.x[0] - 1.0).abs() < 1e-3 && (m.x[1] - 0.5).abs() < 1e-3);
    }

    #[test]
    fn degenerate_bounds_evaluate_once() {
        let mut calls = 0;
        let f = |x: &[f64]| {
            calls += 1;
            Ok(x[0] * x[1])
        };
        let m = minimize_bounded(f, &[9.0, 9.0], &[2.0, 3.0], &[2.0, 3.0], &Default::default()).unwrap();
        assert_eq!(m.x, vec![2.0, 3.0]);
        assert_eq!(m.value, 6.0);
        assert_eq!(m.evaluations, 1);
        assert_eq!(calls, 1);
    }

    #[test]
    fn objective_failure_reports_point() {
        let f = |x: &[f64]| if x[0] > 0.5 { Err(Error::config("boom")) } else { Ok(-x[0]) };
        match minimize_bounded(f, &[0.4], &[0.0], &[1.0], &Default::default()) {
            Err(Error::Objective { point, .. }) => assert!(point[0] > 0.5),
            other => panic!("expected objective error, got {other:?}"),
        }
    }

    #[test]
    fn deterministic() {
        let f = |x: &[f64]| Ok((x[0] - 0.3).powi(2) + (x[0] * x[1] - 0.2).powi(2));
        let a = minimize_bounded(f, &[0.5, 0.5], &[0.0, 0.0], &[1.0, 1.0], &Default::default()).unwrap();
        let b = minimize_bounded(f, &[0.5, 0.5], &[0.0, 0.0], &[1.0, 1.0], &Default::default()).unwrap();
        assert_eq!(a, b);
    }
}
