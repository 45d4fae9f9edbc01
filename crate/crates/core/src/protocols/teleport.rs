use nalgebra::{DMatrix, DVector};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use super::{fidelity_with_pure, squeezing};
use crate::error::{check_mode, Error, Result};
use crate::linalg::VACUUM_VARIANCE;
use crate::measurement::{bell_measure, Outcome};
use crate::ops::GaussianChannel;
use crate::stabilizer::{Quadrature, StabilizerTableau};
use crate::state::GaussianState;

/// Excess noise variance added per quadrature by teleporting through a
/// two-mode squeezed vacuum of squeezing `r` with gain `g`:
/// `((g-1)² e^{2r} + (g+1)² e^{-2r}) / 8`.
pub fn teleport_noise(r: f64, g: f64) -> f64 {
    ((g - 1.0).powi(2) * (2.0 * r).exp() + (g + 1.0).powi(2) * (-2.0 * r).exp()) / 8.0
}

/// Fidelity of teleporting the coherent state with amplitude `α = x + i p`.
pub fn teleport_fidelity_coherent(r: f64, g: f64, alpha: (f64, f64)) -> f64 {
    let sigma = g * g * VACUUM_VARIANCE + teleport_noise(r, g) + VACUUM_VARIANCE;
    let delta2 = (g - 1.0).powi(2) * (alpha.0 * alpha.0 + alpha.1 * alpha.1);
    (-delta2 / (2.0 * sigma)).exp() / (2.0 * sigma)
}

/// Unit-gain fidelity from the transfer-operator picture, `(1 + √λ)/2` with
/// `λ = tanh² r`.
pub fn transfer_operator_fidelity(r: f64) -> f64 {
    let lambda = r.tanh().powi(2);
    (1.0 + lambda.sqrt()) / 2.0
}

/// Ensemble effect of teleporting `mode` of `state` with resource squeezing
/// `r` and gain `g`: that mode's quadratures become `g ξ + noise`.
pub fn teleport_mode(state: &GaussianState, mode: usize, r: f64, g: f64) -> Result<GaussianState> {
    check_mode(mode, state.n_modes())?;
    let r = squeezing(r)?;
    if !g.is_finite() {
        return Err(Error::InvalidArgument("non-finite gain".into()));
    }
    let dim = 2 * state.n_modes();
    let mut s = DMatrix::<f64>::identity(dim, dim);
    s[(2 * mode, 2 * mode)] = g;
    s[(2 * mode + 1, 2 * mode + 1)] = g;
    let mut cov = &s * state.cov() * s.transpose();
    let noise = teleport_noise(r, g);
    cov[(2 * mode, 2 * mode)] += noise;
    cov[(2 * mode + 1, 2 * mode + 1)] += noise;
    GaussianState::new(&s * state.mean(), cov)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TeleportResult {
    pub gain: f64,
    pub squeezing: f64,
    /// Added noise variance per quadrature.
    pub excess_noise: f64,
    /// Output averaged over all Bell outcomes.
    pub ensemble: GaussianState,
    /// Bob's state when both Bell outcomes are zero (no correction needed).
    pub single_shot_zero: GaussianState,
    /// Fidelity with the input, if the input is pure.
    pub fidelity: Option<f64>,
}

/// Input in mode 0, resource `TMSV(r)` on modes 1 (Alice) and 2 (Bob).
pub fn teleport_setup(input: &GaussianState, r: f64) -> Result<GaussianState> {
    if input.n_modes() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: input.n_modes(),
        });
    }
    Ok(input.tensor(&GaussianState::two_mode_squeezed_vacuum(squeezing(r)?)))
}

/// Bob's corrected state for one run with the given Bell outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct TeleportShot {
    /// `[x_u, p_v]`.
    pub outcomes: Vec<f64>,
    pub output: GaussianState,
}

/// One operational run: Bell detection of modes 0 and 1, then Bob displaces
/// by `g√2 (x_u, p_v)`.
pub fn teleport_shot<R: Rng + ?Sized>(
    setup: &GaussianState,
    g: f64,
    outcomes: [Outcome; 2],
    rng: &mut R,
) -> Result<TeleportShot> {
    let rec = bell_measure(setup, 0, 1, outcomes, rng)?;
    let bob = rec
        .conditional
        .ok_or_else(|| Error::InvalidState("no mode left after Bell detection".into()))?;
    let k = g * std::f64::consts::SQRT_2;
    let shift = GaussianChannel::displace_mode(1, 0, k * rec.outcomes[0], k * rec.outcomes[1])?;
    Ok(TeleportShot {
        outcomes: rec.outcomes,
        output: shift.apply(&bob)?,
    })
}

/// Closed-form teleportation of a one-mode state.
pub fn teleport(input: &GaussianState, r: f64, g: f64) -> Result<TeleportResult> {
    let setup = teleport_setup(input, r)?;
    let r = squeezing(r)?;
    let ensemble = teleport_mode(input, 0, r, g)?;
    // Outcomes are imposed, so the generator is never drawn from.
    let mut unused = StdRng::seed_from_u64(0);
    let zero = teleport_shot(&setup, g, [Outcome::Forced(0.0); 2], &mut unused)?;
    let fidelity = if input.is_pure()? {
        Some(fidelity_with_pure(input, &ensemble)?)
    } else {
        None
    };
    Ok(TeleportResult {
        gain: g,
        squeezing: r,
        excess_noise: teleport_noise(r, g),
        ensemble,
        single_shot_zero: zero.output,
        fidelity,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloTeleport {
    pub shots: usize,
    pub mean: Vec<f64>,
    /// Row-major 2×2 ensemble covariance estimate.
    pub cov: Vec<Vec<f64>>,
    /// Mean per-shot fidelity with the (pure) input.
    pub fidelity: Option<f64>,
    pub fidelity_std_error: Option<f64>,
}

/// Monte Carlo estimate of the teleported ensemble from `shots` sampled Bell
/// outcomes. The ensemble covariance is the (outcome-independent)
/// conditional covariance plus the spread of the corrected means.
pub fn teleport_monte_carlo<R: Rng + ?Sized>(
    input: &GaussianState,
    r: f64,
    g: f64,
    shots: usize,
    rng: &mut R,
) -> Result<MonteCarloTeleport> {
    if shots < 2 {
        return Err(Error::InvalidArgument("Monte Carlo needs at least two shots".into()));
    }
    let setup = teleport_setup(input, r)?;
    let pure = input.is_pure()?;
    let mut means = Vec::with_capacity(shots);
    let mut fids = Vec::with_capacity(if pure { shots } else { 0 });
    let mut cond_cov = DMatrix::zeros(2, 2);
    for _ in 0..shots {
        let shot = teleport_shot(&setup, g, [Outcome::Sample; 2], rng)?;
        if pure {
            fids.push(fidelity_with_pure(input, &shot.output)?);
        }
        cond_cov = shot.output.cov().clone();
        means.push(shot.output.mean().clone());
    }
    let n = shots as f64;
    let avg: DVector<f64> = means.iter().fold(DVector::zeros(2), |acc, m| acc + m) / n;
    let mut spread = DMatrix::zeros(2, 2);
    for m in &means {
        let d = m - &avg;
        spread += &d * d.transpose();
    }
    let cov = cond_cov + spread / (n - 1.0);
    let (fidelity, fidelity_std_error) = if pure {
        let f = fids.iter().sum::<f64>() / n;
        let var = fids.iter().map(|x| (x - f).powi(2)).sum::<f64>() / (n - 1.0);
        (Some(f), Some((var / n).sqrt()))
    } else {
        (None, None)
    };
    Ok(MonteCarloTeleport {
        shots,
        mean: avg.iter().copied().collect(),
        cov: (0..2).map(|i| (0..2).map(|j| cov[(i, j)]).collect()).collect(),
        fidelity,
        fidelity_std_error,
    })
}

/// Teleportation written in the Clifford-analog gate set.
///
/// Modes: 0 input (coherent, amplitude `alpha`), 1 Alice, 2 Bob. The EPR
/// pair is a SUM from a `p`-squeezed onto an `x`-squeezed mode, with
/// squeezing `r - ln2/2` so that `Var(x₁ - x₂) = Var(p₁ + p₂) = e^{-2r}/2`.
/// Bell detection is an inverse SUM, a Fourier gate on the input and two
/// `x` measurements; Bob corrects by feed-forward.
pub fn teleport_tableau<R: Rng + ?Sized>(r: f64, alpha: (f64, f64), rng: &mut R) -> Result<StabilizerTableau> {
    let r = squeezing(r)?;
    let epr = r - std::f64::consts::LN_2 / 2.0;
    let mut t = StabilizerTableau::new(&[0.0, -epr, epr])?;
    t.gate_pauli(alpha.0, alpha.1, 0)?;
    t.gate_sum(1, 2)?;
    // Inverse SUM(0 → 1) as F² SUM F² on the control.
    for _ in 0..2 {
        t.gate_fourier(0)?;
    }
    t.gate_sum(0, 1)?;
    for _ in 0..2 {
        t.gate_fourier(0)?;
    }
    // x₁ - x_in, then -(p_in + p₁).
    t.measure_x(1, rng)?;
    t.gate_fourier(0)?;
    t.measure_x(0, rng)?;
    t.feed_forward(1, 2, Quadrature::X, -1.0)?;
    t.feed_forward(0, 2, Quadrature::P, -1.0)?;
    Ok(t)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilizerTeleport {
    pub shots: usize,
    pub mean: [f64; 2],
    pub var: [f64; 2],
    /// Fidelity with the coherent input of the Gaussian fitted to the samples.
    pub fidelity: f64,
}

/// Runs [`teleport_tableau`] `shots` times. Half of the runs read Bob's `x`,
/// the other half his `p` (through a Fourier gate), and the fidelity follows
/// from the sample means and variances.
pub fn teleport_stabilizer<R: Rng + ?Sized>(
    r: f64,
    alpha: (f64, f64),
    shots: usize,
    rng: &mut R,
) -> Result<StabilizerTeleport> {
    if shots < 4 {
        return Err(Error::InvalidArgument("need at least four shots".into()));
    }
    let mut xs = Vec::with_capacity(shots / 2 + 1);
    let mut ps = Vec::with_capacity(shots / 2 + 1);
    for shot in 0..shots {
        let mut t = teleport_tableau(r, alpha, rng)?;
        if shot % 2 == 0 {
            xs.push(t.measure_x(2, rng)?);
        } else {
            t.gate_fourier(2)?;
            // F sends p to -x.
            ps.push(-t.measure_x(2, rng)?);
        }
    }
    let stats = |v: &[f64]| {
        let n = v.len() as f64;
        let m = v.iter().sum::<f64>() / n;
        (m, v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0))
    };
    let (mx, vx) = stats(&xs);
    let (mp, vp) = stats(&ps);
    let input = GaussianState::coherent(alpha.0, alpha.1);
    let fitted = GaussianState::new(
        DVector::from_vec(vec![mx, mp]),
        DMatrix::from_diagonal(&DVector::from_vec(vec![vx, vp])),
    )?;
    Ok(StabilizerTeleport {
        shots,
        mean: [mx, mp],
        var: [vx, vp],
        fidelity: fidelity_with_pure(&input, &fitted)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn unit_gain_fidelity() {
        assert_eq!(teleport_fidelity_coherent(0.0, 1.0, (0.0, 0.0)), 0.5);
        let r0 = std::f64::consts::LN_2 / 2.0;
        assert_relative_eq!(teleport_fidelity_coherent(r0, 1.0, (0.0, 0.0)), 2.0 / 3.0, epsilon = 1e-15);
        for k in 0..30 {
            let r = 0.1 * k as f64;
            let closed = 1.0 / (1.0 + (-2.0 * r).exp());
            assert_relative_eq!(teleport_fidelity_coherent(r, 1.0, (1.3, -0.4)), closed, epsilon = 1e-14);
            assert_relative_eq!(transfer_operator_fidelity(r), closed, epsilon = 1e-12);
        }
    }

    #[test]
    fn ensemble_is_convolution() {
        let input = GaussianState::coherent(0.8, -0.3);
        for &r in &[0.0, 0.5, 1.5] {
            let res = teleport(&input, r, 1.0).unwrap();
            assert_eq!(res.ensemble.mean(), input.mean());
            let excess = res.ensemble.cov() - input.cov();
            let expect = DMatrix::identity(2, 2) * ((-2.0 * r).exp() / 2.0);
            assert!((excess - expect).abs().max() < 1e-12);
            assert_relative_eq!(res.fidelity.unwrap(), 1.0 / (1.0 + (-2.0 * r).exp()), epsilon = 1e-12);
        }
    }

    #[test]
    fn nonunit_gain_matches_overlap() {
        let input = GaussianState::coherent(0.5, 0.2);
        for &(r, g) in &[(0.7, 0.6), (1.0, 1.3), (0.2, 0.0)] {
            let res = teleport(&input, r, g).unwrap();
            assert_relative_eq!(
                res.fidelity.unwrap(),
                teleport_fidelity_coherent(r, g, (0.5, 0.2)),
                epsilon = 1e-12
            );
            assert_relative_eq!(res.ensemble.mean()[0], g * 0.5, epsilon = 1e-15);
        }
    }

    #[test]
    fn zero_outcome_shot_is_attenuated_coherent_state() {
        let input = GaussianState::coherent(1.1, -0.6);
        let r = 0.9f64;
        let res = teleport(&input, r, 1.0).unwrap();
        let out = &res.single_shot_zero;
        assert_relative_eq!(out.mean()[0], r.tanh() * 1.1, epsilon = 1e-12);
        assert_relative_eq!(out.mean()[1], r.tanh() * -0.6, epsilon = 1e-12);
        assert!((out.cov() - DMatrix::identity(2, 2) * 0.25).abs().max() < 1e-12);
    }

    #[test]
    fn monte_carlo_agrees() {
        let input = GaussianState::coherent(0.4, 0.9);
        let r = 0.8;
        let mut rng = StdRng::seed_from_u64(7);
        let mc = teleport_monte_carlo(&input, r, 1.0, 20_000, &mut rng).unwrap();
        let closed = 1.0 / (1.0 + (-2.0 * r).exp());
        assert!((mc.fidelity.unwrap() - closed).abs() / closed < 0.005);
        let expect = 0.25 + (-2.0 * r).exp() / 2.0;
        assert!((mc.cov[0][0] - expect).abs() / expect < 0.03);
        assert!(teleport_monte_carlo(&input, r, 1.0, 1, &mut rng).is_err());
    }

    #[test]
    fn teleporting_part_of_an_entangled_state() {
        let st = GaussianState::two_mode_squeezed_vacuum(0.5);
        let out = teleport_mode(&st, 1, 40.0, 1.0).unwrap();
        assert!((out.cov() - st.cov()).abs().max() < 1e-12);
        assert!(teleport_mode(&st, 2, 1.0, 1.0).is_err());
    }

    #[test]
    fn stabilizer_circuit_fidelity() {
        let mut rng = StdRng::seed_from_u64(21);
        let r = 0.7f64;
        let res = teleport_stabilizer(r, (0.6, -0.3), 40_000, &mut rng).unwrap();
        let expect = 1.0 / (1.0 + (-2.0 * r).exp());
        assert!((res.fidelity - expect).abs() < 0.01, "{} vs {expect}", res.fidelity);
        let noise = 0.25 + (-2.0 * r).exp() / 2.0;
        assert!((res.var[0] - noise).abs() / noise < 0.03);
        assert!((res.var[1] - noise).abs() / noise < 0.03);
    }
}
