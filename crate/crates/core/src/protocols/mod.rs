//! Communication protocols over Gaussian resources, each with a closed form
//! and, where a physical procedure exists, an operational simulation built
//! from gates and measurements.

mod capacity;
mod cloning;
mod ghz;
mod swap;
mod teleport;

pub use capacity::*;
pub use cloning::*;
pub use ghz::*;
pub use swap::*;
pub use teleport::*;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::state::GaussianState;

/// Squeezing values above this are clamped; `e^{-40}` is below every
/// tolerance used here.
pub const MAX_SQUEEZING: f64 = 20.0;

pub(crate) fn squeezing(r: f64) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::InvalidArgument(format!("squeezing must be nonnegative, got {r}")));
    }
    Ok(r.min(MAX_SQUEEZING))
}

/// `Tr(ρ_a ρ_b)` for Gaussian states with the same number of modes. This is
/// the fidelity whenever one of the two is pure.
pub fn overlap(a: &GaussianState, b: &GaussianState) -> Result<f64> {
    let n = a.n_modes();
    if b.n_modes() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: b.n_modes(),
        });
    }
    let sigma: DMatrix<f64> = a.cov() + b.cov();
    let delta = a.mean() - b.mean();
    let chol = sigma
        .cholesky()
        .ok_or_else(|| Error::InvalidState("sum of covariances is singular".into()))?;
    let q = delta.dot(&chol.solve(&delta));
    Ok((-0.5 * q).exp() / (2f64.powi(n as i32) * chol.determinant().sqrt()))
}

/// Fidelity `⟨ψ|ρ|ψ⟩` of `state` with the pure Gaussian `pure`.
pub fn fidelity_with_pure(pure: &GaussianState, state: &GaussianState) -> Result<f64> {
    if !pure.is_pure()? {
        return Err(Error::InvalidArgument("reference state is not pure".into()));
    }
    overlap(pure, state)
}

/// Nats to bits.
pub fn nats_to_bits(nats: f64) -> f64 {
    nats / std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn overlap_of_coherent_states() {
        let a = GaussianState::coherent(0.3, -0.2);
        assert_relative_eq!(overlap(&a, &a).unwrap(), 1.0, epsilon = 1e-14);
        // |⟨α|β⟩|² = exp(-|α-β|²) with α = x + i p.
        let b = GaussianState::coherent(1.0, 0.5);
        let d2 = 0.7f64.powi(2) + 0.7f64.powi(2);
        assert_relative_eq!(overlap(&a, &b).unwrap(), (-d2).exp(), epsilon = 1e-14);
        let th = GaussianState::thermal(1.0).unwrap();
        assert!(fidelity_with_pure(&th, &a).is_err());
        // Vacuum population of a thermal state: 1/(1+n̄).
        let vac = GaussianState::vacuum(1).unwrap();
        assert_relative_eq!(fidelity_with_pure(&vac, &th).unwrap(), 0.5, epsilon = 1e-14);
        assert!(squeezing(-1.0).is_err());
        assert_eq!(squeezing(1e3).unwrap(), MAX_SQUEEZING);
    }
}
