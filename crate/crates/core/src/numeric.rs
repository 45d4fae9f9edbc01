//! Scalar root finding and minimisation on top of `argmin`.

use argmin::core::{CostFunction, Error as ArgminError, Executor, State};
use argmin::solver::brent::BrentRoot;
use argmin::solver::goldensectionsearch::GoldenSectionSearch;
use argmin::solver::neldermead::NelderMead;

use crate::error::{Error, Result};

struct Scalar<F>(F);

impl<F: Fn(f64) -> f64> CostFunction for Scalar<F> {
    type Param = f64;
    type Output = f64;

    fn cost(&self, x: &f64) -> Result<f64, ArgminError> {
        Ok((self.0)(*x))
    }
}

struct Multi<F>(F);

impl<F: Fn(&[f64]) -> f64> CostFunction for Multi<F> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, x: &Vec<f64>) -> Result<f64, ArgminError> {
        Ok((self.0)(x))
    }
}

fn numerical(err: ArgminError) -> Error {
    Error::Numerical(err.to_string())
}

/// Root of `f` in `[lo, hi]` by Brent's method. `f(lo)` and `f(hi)` must
/// differ in sign.
pub fn find_root(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    if f(lo) * f(hi) > 0.0 {
        return Err(Error::Numerical(format!("[{lo}, {hi}] does not bracket a root")));
    }
    let res = Executor::new(Scalar(f), BrentRoot::new(lo, hi, tol))
        .configure(|s| s.param(0.5 * (lo + hi)).max_iters(500))
        .run()
        .map_err(numerical)?;
    res.state()
        .get_best_param()
        .copied()
        .ok_or_else(|| Error::Numerical("Brent search returned no point".into()))
}

/// Minimiser of a unimodal `f` on `[lo, hi]` by golden-section search with
/// relative bracket tolerance `tol`.
pub fn minimize_scalar(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<(f64, f64)> {
    let solver = GoldenSectionSearch::new(lo, hi)
        .and_then(|s| s.with_tolerance(tol))
        .map_err(numerical)?;
    let res = Executor::new(Scalar(f), solver)
        .configure(|s| s.param(0.5 * (lo + hi)).max_iters(10_000))
        .run()
        .map_err(numerical)?;
    let state = res.state();
    let x = *state
        .get_best_param()
        .ok_or_else(|| Error::Numerical("golden-section search returned no point".into()))?;
    Ok((x, state.get_best_cost()))
}

/// Nelder–Mead from an axis-aligned simplex around `start` with edge
/// `step`. Stops when the spread of simplex values falls below `tol`.
pub fn minimize_simplex(
    f: impl Fn(&[f64]) -> f64,
    start: &[f64],
    step: f64,
    tol: f64,
) -> Result<(Vec<f64>, f64)> {
    let mut simplex = vec![start.to_vec()];
    for k in 0..start.len() {
        let mut v = start.to_vec();
        v[k] += step;
        simplex.push(v);
    }
    let solver = NelderMead::new(simplex)
        .with_sd_tolerance(tol)
        .map_err(numerical)?;
    let res = Executor::new(Multi(f), solver)
        .configure(|s| s.max_iters(20_000))
        .run()
        .map_err(numerical)?;
    let state = res.state();
    let x = state
        .get_best_param()
        .cloned()
        .ok_or_else(|| Error::Numerical("simplex search returned no point".into()))?;
    Ok((x, state.get_best_cost()))
}
