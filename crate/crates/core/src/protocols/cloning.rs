use serde::Serialize;

use super::fidelity_with_pure;
use crate::error::{Error, Result};
use crate::ops::{balanced_beam_splitter, GaussianChannel};
use crate::state::GaussianState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Alphabet {
    /// Gaussian-distributed coherent states.
    Coherent,
    /// All pure states of a `d`-dimensional system; `None` is `d → ∞`.
    Universal { dim: Option<u64> },
}

/// Optimal `N → M` cloning fidelity.
///
/// Coherent: `MN/(MN + M - N)`. Universal:
/// `(N(d-1) + M(N+1)) / (M(N+d))`, tending to `N/M` for `d → ∞`.
pub fn clone_fidelity(n: u64, m: u64, alphabet: Alphabet) -> Result<f64> {
    if n == 0 || m < n {
        return Err(Error::InvalidArgument(format!("need 1 <= N <= M, got N={n}, M={m}")));
    }
    let (nf, mf) = (n as f64, m as f64);
    Ok(match alphabet {
        Alphabet::Coherent => mf * nf / (mf * nf + mf - nf),
        Alphabet::Universal { dim: None } => nf / mf,
        Alphabet::Universal { dim: Some(d) } => {
            if d < 2 {
                return Err(Error::InvalidArgument("dimension must be at least 2".into()));
            }
            let d = d as f64;
            (nf * (d - 1.0) + mf * (nf + 1.0)) / (mf * (nf + d))
        }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CloningResult {
    /// Input, idler and second-clone modes after the circuit.
    pub joint: GaussianState,
    pub clones: [GaussianState; 2],
    /// Fidelity of each clone with the input, if the input is pure.
    pub fidelities: Option<[f64; 2]>,
}

/// Squeezing of the two-mode squeezer acting as a gain-2 phase-insensitive
/// amplifier: `cosh r = √2`.
pub fn amplifier_squeezing() -> f64 {
    std::f64::consts::SQRT_2.acosh()
}

/// `1 → 2` Gaussian duplicator: the input (mode 0) is amplified with an
/// idler (mode 1), then split with a vacuum (mode 2) on a balanced beam
/// splitter. The clones are modes 0 and 2.
pub fn clone_coherent_circuit(input: &GaussianState) -> Result<CloningResult> {
    if input.n_modes() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: input.n_modes(),
        });
    }
    let start = input.tensor(&GaussianState::vacuum(2)?);
    let amp = GaussianChannel::two_mode_squeeze(3, 0, 1, amplifier_squeezing())?;
    let split = balanced_beam_splitter(3, 0, 2)?;
    let joint = split.compose(&amp)?.apply(&start)?;
    let clones = [joint.partial_trace(&[0])?, joint.partial_trace(&[2])?];
    let fidelities = if input.is_pure()? {
        Some([
            fidelity_with_pure(input, &clones[0])?,
            fidelity_with_pure(input, &clones[1])?,
        ])
    } else {
        None
    };
    Ok(CloningResult {
        joint,
        clones,
        fidelities,
    })
}

/// Squeezing needed for `1 → M` telecloning of coherent states at the
/// optimal fidelity: `e^{-2r} = (√M - 1)/(√M + 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TelecloningResource {
    pub m: u64,
    pub r: f64,
    /// `10 log₁₀ e^{2r}`.
    pub db: f64,
}

pub fn telecloning_resource(m: u64) -> Result<TelecloningResource> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!("telecloning needs M >= 2, got {m}")));
    }
    let s = (m as f64).sqrt();
    let ratio = (s + 1.0) / (s - 1.0);
    Ok(TelecloningResource {
        m,
        r: ratio.ln() / 2.0,
        db: 10.0 * ratio.log10(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::{Complex, DMatrix, DVector};

    #[test]
    fn fidelity_formulas() {
        assert_relative_eq!(clone_fidelity(1, 2, Alphabet::Coherent).unwrap(), 2.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(clone_fidelity(1, 1_000_000, Alphabet::Coherent).unwrap(), 0.5, epsilon = 1e-6);
        assert_eq!(clone_fidelity(1, 2, Alphabet::Universal { dim: None }).unwrap(), 0.5);
        // Qubits, 1 → 2: 5/6.
        assert_relative_eq!(clone_fidelity(1, 2, Alphabet::Universal { dim: Some(2) }).unwrap(), 5.0 / 6.0, epsilon = 1e-15);
        let big = clone_fidelity(3, 7, Alphabet::Universal { dim: Some(1 << 40) }).unwrap();
        assert_relative_eq!(big, 3.0 / 7.0, epsilon = 1e-9);
        assert_eq!(clone_fidelity(2, 2, Alphabet::Coherent).unwrap(), 1.0);
        assert!(clone_fidelity(3, 2, Alphabet::Coherent).is_err());
        assert!(clone_fidelity(0, 2, Alphabet::Coherent).is_err());
    }

    #[test]
    fn circuit_adds_a_vacuum_unit() {
        let input = GaussianState::coherent(1.2, -0.7);
        let res = clone_coherent_circuit(&input).unwrap();
        for (k, clone) in res.clones.iter().enumerate() {
            assert!((clone.mean() - input.mean()).amax() < 1e-12);
            assert!((clone.cov() - DMatrix::identity(2, 2) * 0.5).amax() < 1e-12);
            assert_relative_eq!(res.fidelities.unwrap()[k], 2.0 / 3.0, epsilon = 1e-12);
        }
        assert!(res.joint.validate().is_ok());
    }

    #[test]
    fn amplifier_is_the_lubo_map() {
        let s2 = std::f64::consts::SQRT_2;
        let a = DMatrix::from_diagonal_element(2, 2, Complex::new(s2, 0.0));
        let b = DMatrix::from_row_slice(2, 2, &[Complex::new(0.0, 0.0), Complex::new(1.0, 0.0), Complex::new(1.0, 0.0), Complex::new(0.0, 0.0)]);
        let lubo = GaussianChannel::from_lubo(&a, &b, &DVector::zeros(2)).unwrap();
        let tms = GaussianChannel::two_mode_squeeze(2, 0, 1, amplifier_squeezing()).unwrap();
        assert!((lubo.matrix() - tms.matrix()).amax() < 1e-12);
    }

    #[test]
    fn telecloning_levels() {
        let expect = [7.66, 5.72, 4.77, 4.18];
        for (m, want) in (2..=5).zip(expect) {
            let res = telecloning_resource(m).unwrap();
            assert!((res.db - want).abs() < 0.01, "M={m}: {}", res.db);
            assert_relative_eq!((-2.0 * res.r).exp(), ((m as f64).sqrt() - 1.0) / ((m as f64).sqrt() + 1.0), epsilon = 1e-14);
        }
        assert!(telecloning_resource(1_000_000).unwrap().r < 1e-2);
        assert!(telecloning_resource(1).is_err());
    }
}
