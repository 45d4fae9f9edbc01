//! Bell tests with displaced parity measurements.
//!
//! The expectation value of the displaced parity operator is proportional
//! to the Wigner function, `Π(α) = (π/2)^N W(α)`, so for Gaussian states the
//! CHSH-type combination
//! `ℬ₂ = Π(0,0) + Π(0,β) + Π(α,0) - Π(α,β)` needs only four Wigner values.
//! Local realism bounds `|ℬ₂| ≤ 2`.

use std::f64::consts::{FRAC_PI_2, LN_2};

use nalgebra::DVector;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{minimize_scalar, minimize_simplex};
use crate::state::{GaussianState, WignerFunction};

/// The local realist bound on `|ℬ₂|`.
pub const LOCAL_BOUND: f64 = 2.0;

/// Per-mode displacement `α = x + i p`, stored as `(x, p)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParitySetting {
    pub displacements: Vec<(f64, f64)>,
}

impl ParitySetting {
    pub fn new(displacements: Vec<(f64, f64)>) -> Result<Self> {
        if displacements.iter().any(|(x, p)| !x.is_finite() || !p.is_finite()) {
            return Err(Error::InvalidArgument("non-finite parity displacement".into()));
        }
        Ok(Self { displacements })
    }

    pub fn origin(n_modes: usize) -> Self {
        Self {
            displacements: vec![(0.0, 0.0); n_modes],
        }
    }

    fn point(&self) -> DVector<f64> {
        DVector::from_iterator(
            2 * self.displacements.len(),
            self.displacements.iter().flat_map(|&(x, p)| [x, p]),
        )
    }
}

fn parity_from(w: &WignerFunction, n_modes: usize, setting: &ParitySetting) -> Result<f64> {
    if setting.displacements.len() != n_modes {
        return Err(Error::DimensionMismatch {
            expected: n_modes,
            found: setting.displacements.len(),
        });
    }
    Ok(FRAC_PI_2.powi(n_modes as i32) * w.eval(&setting.point())?)
}

/// `Π(α) = (π/2)^N W(α)`.
pub fn displaced_parity(state: &GaussianState, setting: &ParitySetting) -> Result<f64> {
    parity_from(&state.wigner_function()?, state.n_modes(), setting)
}

/// `ℬ₂` for the local settings `α` (mode 1) and `β` (mode 2), each as `(x, p)`.
pub fn b2(state: &GaussianState, alpha: (f64, f64), beta: (f64, f64)) -> Result<f64> {
    if state.n_modes() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: state.n_modes(),
        });
    }
    let w = state.wigner_function()?;
    let pi = |a: (f64, f64), b: (f64, f64)| parity_from(&w, 2, &ParitySetting::new(vec![a, b])?);
    let zero = (0.0, 0.0);
    Ok(pi(zero, zero)? + pi(zero, beta)? + pi(alpha, zero)? - pi(alpha, beta)?)
}

/// `ℬ₂` along the family `α = β = i√𝒥`.
pub fn b2_family(state: &GaussianState, j: f64) -> Result<f64> {
    let s = j.max(0.0).sqrt();
    b2(state, (0.0, s), (0.0, s))
}

/// `1 + 2 exp(-2𝒥 cosh 2r) - exp(-4𝒥 e^{2r})`: `ℬ₂` of the two-mode squeezed
/// vacuum at `α = β = i√𝒥`.
pub fn b2_tmsv(r: f64, j: f64) -> f64 {
    1.0 + 2.0 * (-2.0 * j * (2.0 * r).cosh()).exp() - (-4.0 * j * (2.0 * r).exp()).exp()
}

/// Maximising setting of [`b2_tmsv`] for large `r`: `𝒥 e^{2r} = ln 2 / 3`.
pub fn b2_tmsv_asymptotic_optimum(r: f64) -> f64 {
    LN_2 / 3.0 * (-2.0 * r).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum B2Search {
    /// One parameter, `α = β = i√𝒥`.
    #[default]
    Family,
    /// All four real components of `α` and `β`, seeded by the family optimum.
    Full,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct B2Optimum {
    pub b2_max: f64,
    /// Optimal `𝒥 = |α|²` on the family; for a full search, `|α|²` at the optimum.
    pub j_star: f64,
    pub alpha: (f64, f64),
    pub beta: (f64, f64),
}

/// Tolerance on `𝒥` for the scalar search.
pub const J_TOLERANCE: f64 = 1e-8;

/// Maximises `ℬ₂` by a logarithmic scan in `𝒥` (plus `𝒥 = 0`) followed by a
/// golden-section refinement of the best bracket.
pub fn b2_optimize(state: &GaussianState, search: B2Search) -> Result<B2Optimum> {
    let f = |j: f64| b2_family(state, j);
    let mut grid = vec![0.0];
    let steps = 280;
    grid.extend((0..=steps).map(|k| 10f64.powf(-12.0 + 14.0 * k as f64 / steps as f64)));
    let values = grid.iter().map(|&j| f(j)).collect::<Result<Vec<_>>>()?;
    let best = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(k, _)| k)
        .unwrap_or(0);
    let (mut j_star, mut b2_max) = (grid[best], values[best]);
    if best > 0 {
        let lo = grid[best - 1];
        let hi = grid[(best + 1).min(grid.len() - 1)];
        // Objective errors cannot surface through the optimiser; map them to
        // -∞ so they are never selected, then recheck at the end.
        let (j, neg) = minimize_scalar(|j| -f(j).unwrap_or(f64::NEG_INFINITY), lo, hi, J_TOLERANCE)?;
        if -neg > b2_max {
            j_star = j;
            b2_max = -neg;
        }
    }
    let s = j_star.sqrt();
    let mut opt = B2Optimum {
        b2_max,
        j_star,
        alpha: (0.0, s),
        beta: (0.0, s),
    };
    if search == B2Search::Full {
        let g = |v: &[f64]| -b2(state, (v[0], v[1]), (v[2], v[3])).unwrap_or(f64::NEG_INFINITY);
        let step = s.max(1e-3);
        let (v, neg) = minimize_simplex(g, &[0.0, s, 0.0, s], step, 1e-14)?;
        if -neg > opt.b2_max {
            opt = B2Optimum {
                b2_max: -neg,
                j_star: v[0] * v[0] + v[1] * v[1],
                alpha: (v[0], v[1]),
                beta: (v[2], v[3]),
            };
        }
    }
    // The reported maximum is always a direct evaluation.
    opt.b2_max = b2(state, opt.alpha, opt.beta)?;
    Ok(opt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn parity_at_centres() {
        let vac = GaussianState::vacuum(1).unwrap();
        assert_relative_eq!(displaced_parity(&vac, &ParitySetting::origin(1)).unwrap(), 1.0, epsilon = 1e-15);
        let tmsv = GaussianState::two_mode_squeezed_vacuum(1.3);
        assert_relative_eq!(displaced_parity(&tmsv, &ParitySetting::origin(2)).unwrap(), 1.0, epsilon = 1e-12);
        let coh = GaussianState::coherent(0.7, -1.1);
        let here = ParitySetting::new(vec![(0.7, -1.1)]).unwrap();
        assert_relative_eq!(displaced_parity(&coh, &here).unwrap(), 1.0, epsilon = 1e-15);
        assert!(ParitySetting::new(vec![(f64::NAN, 0.0)]).is_err());
        assert!(displaced_parity(&coh, &ParitySetting::origin(2)).is_err());
    }

    #[test]
    fn tmsv_matches_closed_form() {
        for &(r, j) in &[(0.0, 0.1), (0.5, 0.05), (1.0, 0.01), (3.0, 1e-4), (2.0, 0.3)] {
            let st = GaussianState::two_mode_squeezed_vacuum(r);
            assert_relative_eq!(b2_family(&st, j).unwrap(), b2_tmsv(r, j), epsilon = 1e-10);
        }
        let st = GaussianState::two_mode_squeezed_vacuum(0.8);
        assert_relative_eq!(b2(&st, (0.0, 0.0), (0.0, 0.0)).unwrap(), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn optimum_grows_to_limit() {
        let mut last = 0.0;
        for &r in &[0.0, 0.5, 1.0, 2.0, 3.0] {
            let opt = b2_optimize(&GaussianState::two_mode_squeezed_vacuum(r), B2Search::Family).unwrap();
            assert!(opt.b2_max >= last - 1e-12);
            last = opt.b2_max;
            if r == 0.0 {
                assert_relative_eq!(opt.b2_max, 2.0, epsilon = 1e-12);
            }
        }
        assert!((last - 2.19).abs() < 0.01, "{last}");
        let opt = b2_optimize(&GaussianState::two_mode_squeezed_vacuum(3.0), B2Search::Family).unwrap();
        assert_relative_eq!(opt.j_star, b2_tmsv_asymptotic_optimum(3.0), max_relative = 0.01);
    }

    #[test]
    fn full_search_is_no_worse() {
        let st = GaussianState::two_mode_squeezed_vacuum(1.0);
        let fam = b2_optimize(&st, B2Search::Family).unwrap();
        let full = b2_optimize(&st, B2Search::Full).unwrap();
        assert!(full.b2_max >= fam.b2_max - 1e-12);
    }

    #[test]
    fn vacuum_never_violates() {
        let st = GaussianState::vacuum(2).unwrap();
        let axis: Vec<f64> = (-6..=6).map(|k| 0.25 * k as f64).collect();
        for &ax in &axis {
            for &ap in &axis {
                for &bp in &axis {
                    let v = b2(&st, (ax, ap), (0.3 * ax, bp)).unwrap();
                    assert!(v.abs() <= LOCAL_BOUND + 1e-9);
                }
            }
        }
    }
}
