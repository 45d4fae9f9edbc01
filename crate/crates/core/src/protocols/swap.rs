use rand::Rng;
use serde::Serialize;

use super::{squeezing, teleport_mode, MAX_SQUEEZING};
use crate::error::{Error, Result};
use crate::linalg::max_abs_diff;
use crate::measurement::{bell_measure, Outcome};
use crate::ops::GaussianChannel;
use crate::state::GaussianState;

/// Squeezing `R` of the swapped pair: `tanh R = tanh r · tanh r′`.
pub fn swap_squeezing(r: f64, r_prime: f64) -> Result<f64> {
    let t = squeezing(r)?.tanh() * squeezing(r_prime)?.tanh();
    Ok(t.atanh().min(MAX_SQUEEZING))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SwapResult {
    pub r: f64,
    pub r_prime: f64,
    pub big_r: f64,
    pub state: GaussianState,
}

/// Closed-form swapping: the outer modes end up in `TMSV(R)`.
pub fn swap(r: f64, r_prime: f64) -> Result<SwapResult> {
    let big_r = swap_squeezing(r, r_prime)?;
    Ok(SwapResult {
        r: squeezing(r)?,
        r_prime: squeezing(r_prime)?,
        big_r,
        state: GaussianState::two_mode_squeezed_vacuum(big_r),
    })
}

/// `TMSV(r)` on modes 0, 1 and `TMSV(r′)` on modes 2, 3.
pub fn swap_setup(r: f64, r_prime: f64) -> Result<GaussianState> {
    Ok(GaussianState::two_mode_squeezed_vacuum(squeezing(r)?)
        .tensor(&GaussianState::two_mode_squeezed_vacuum(squeezing(r_prime)?)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwapShot {
    /// `[x_u, p_v]` from the Bell detection of modes 1 and 2.
    pub outcomes: Vec<f64>,
    /// Outer modes 0 and 3 right after detection.
    pub conditional: GaussianState,
    /// After displacing both outer modes so their means vanish.
    pub corrected: GaussianState,
}

/// Operational swapping: Bell detection on the inner modes, then the
/// displacement that cancels the conditional mean of both outer modes.
pub fn swap_operational<R: Rng + ?Sized>(
    r: f64,
    r_prime: f64,
    outcomes: [Outcome; 2],
    rng: &mut R,
) -> Result<SwapShot> {
    let setup = swap_setup(r, r_prime)?;
    let rec = bell_measure(&setup, 1, 2, outcomes, rng)?;
    let conditional = rec
        .conditional
        .ok_or_else(|| Error::InvalidState("no outer modes left".into()))?;
    let shift = GaussianChannel::displace(-conditional.mean())?;
    let corrected = shift.apply(&conditional)?;
    Ok(SwapShot {
        outcomes: rec.outcomes,
        conditional,
        corrected,
    })
}

/// Ensemble state of the outer modes when the inner Bell result is applied
/// to one outer mode with unit gain: `TMSV(r)` with mode 1 teleported
/// through `TMSV(r′)`.
pub fn swap_unit_gain(r: f64, r_prime: f64) -> Result<GaussianState> {
    teleport_mode(&GaussianState::two_mode_squeezed_vacuum(squeezing(r)?), 1, r_prime, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TmsvFit {
    pub r: f64,
    /// `max |V - V_TMSV(r)|`.
    pub residual: f64,
}

/// Best two-mode squeezed vacuum matching the diagonal of a two-mode
/// covariance, with the element-wise residual.
pub fn fit_tmsv(state: &GaussianState) -> Result<TmsvFit> {
    if state.n_modes() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: state.n_modes(),
        });
    }
    let v = state.cov();
    let diag = (0..4).map(|k| v[(k, k)]).sum::<f64>() / 4.0;
    let r = (4.0 * diag).max(1.0).acosh() / 2.0;
    let residual = max_abs_diff(v, GaussianState::two_mode_squeezed_vacuum(r).cov());
    Ok(TmsvFit { r, residual })
}
