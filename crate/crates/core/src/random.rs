//! Random states, channels and circuits for sweeps and property tests.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::circuit::{Circuit, Gate, Op};
use crate::error::{Error, Result};
use crate::linalg::direct_sum;
use crate::ops::GaussianChannel;
use crate::state::GaussianState;

/// Ranges used by the generators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomSpec {
    /// Single-mode squeezings are drawn from `[-max_squeezing, max_squeezing]`.
    pub max_squeezing: f64,
    /// Thermal photon numbers of the Williamson form, `[0, max_thermal]`.
    pub max_thermal: f64,
    /// Mean quadratures, `[-max_displacement, max_displacement]`.
    pub max_displacement: f64,
}

impl Default for RandomSpec {
    fn default() -> Self {
        Self {
            max_squeezing: 1.0,
            max_thermal: 1.0,
            max_displacement: 1.0,
        }
    }
}

fn uniform<R: Rng + ?Sized>(rng: &mut R, half_width: f64) -> f64 {
    if half_width == 0.0 {
        0.0
    } else {
        rng.random_range(-half_width..half_width)
    }
}

/// Random passive (photon-number preserving) network: layers of phase
/// shifts and nearest-neighbour beam splitters.
pub fn random_passive<R: Rng + ?Sized>(n_modes: usize, rng: &mut R) -> Result<GaussianChannel> {
    let mut out = GaussianChannel::identity(n_modes);
    for _ in 0..n_modes + 1 {
        for m in 0..n_modes {
            let theta = rng.random_range(0.0..std::f64::consts::TAU);
            out = GaussianChannel::phase_shift(n_modes, m, theta)?.compose(&out)?;
        }
        for m in 0..n_modes.saturating_sub(1) {
            let theta = rng.random_range(0.0..std::f64::consts::FRAC_PI_2);
            out = GaussianChannel::beam_splitter(n_modes, m, m + 1, theta)?.compose(&out)?;
        }
    }
    Ok(out)
}

/// Random symplectic map `O₁ Z O₂` with passive `O`s and single-mode
/// squeezers `Z`.
pub fn random_symplectic<R: Rng + ?Sized>(n_modes: usize, max_squeezing: f64, rng: &mut R) -> Result<GaussianChannel> {
    let mut out = random_passive(n_modes, rng)?;
    for m in 0..n_modes {
        let r = uniform(rng, max_squeezing);
        out = GaussianChannel::squeeze(n_modes, m, r, 0.0)?.compose(&out)?;
    }
    random_passive(n_modes, rng)?.compose(&out)
}

/// Random valid state: a random symplectic applied to a product of thermal
/// states, then displaced.
pub fn random_state<R: Rng + ?Sized>(n_modes: usize, spec: &RandomSpec, rng: &mut R) -> Result<GaussianState> {
    if n_modes == 0 {
        return Err(Error::InvalidArgument("need at least one mode".into()));
    }
    let mut thermal = GaussianState::thermal(rng.random_range(0.0..=spec.max_thermal))?;
    for _ in 1..n_modes {
        thermal = thermal.tensor(&GaussianState::thermal(rng.random_range(0.0..=spec.max_thermal))?);
    }
    let s = random_symplectic(n_modes, spec.max_squeezing, rng)?;
    let shift = DVector::from_fn(2 * n_modes, |_, _| uniform(rng, spec.max_displacement));
    GaussianChannel::displace(shift)?.compose(&s)?.apply(&thermal)
}

/// Random pure state (zero thermal occupation).
pub fn random_pure_state<R: Rng + ?Sized>(n_modes: usize, spec: &RandomSpec, rng: &mut R) -> Result<GaussianState> {
    random_state(n_modes, &RandomSpec { max_thermal: 0.0, ..*spec }, rng)
}

/// Random separable two-mode state `V_a ⊕ V_b + P` with `P ⪰ 0`.
pub fn random_separable_two_mode<R: Rng + ?Sized>(spec: &RandomSpec, rng: &mut R) -> Result<GaussianState> {
    let a = random_state(1, spec, rng)?;
    let b = random_state(1, spec, rng)?;
    let g = DMatrix::from_fn(4, 4, |_, _| {
        let z: f64 = StandardNormal.sample(rng);
        0.2 * z
    });
    let p = &g * g.transpose();
    let mean = DVector::from_iterator(4, a.mean().iter().chain(b.mean().iter()).copied());
    GaussianState::new(mean, direct_sum(a.cov(), b.cov()) + p)
}

/// Random channel acting on each party separately. `parties` partitions
/// the modes; each block gets its own random symplectic.
pub fn random_local_channel<R: Rng + ?Sized>(
    n_modes: usize,
    parties: &[Vec<usize>],
    max_squeezing: f64,
    rng: &mut R,
) -> Result<GaussianChannel> {
    let mut s = DMatrix::identity(2 * n_modes, 2 * n_modes);
    for party in parties {
        let local = random_symplectic(party.len(), max_squeezing, rng)?;
        for (a, &ma) in party.iter().enumerate() {
            for (b, &mb) in party.iter().enumerate() {
                for (qa, qb) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                    s[(2 * ma + qa, 2 * mb + qb)] = local.matrix()[(2 * a + qa, 2 * b + qb)];
                }
            }
        }
    }
    GaussianChannel::new(s, DVector::zeros(2 * n_modes))
}

/// Random circuit over SUM, Fourier, shear and Pauli gates on squeezed
/// inputs, ending in `measure_x` on `n_measured` distinct modes.
pub fn random_clifford_circuit<R: Rng + ?Sized>(
    n_modes: usize,
    n_gates: usize,
    n_measured: usize,
    rng: &mut R,
) -> Result<Circuit> {
    if n_measured > n_modes {
        return Err(Error::InvalidArgument(format!("cannot measure {n_measured} of {n_modes} modes")));
    }
    let squeezing = (0..n_modes).map(|_| uniform(rng, 1.0)).collect();
    let mut ops = Vec::with_capacity(n_gates + n_measured);
    for _ in 0..n_gates {
        let m = rng.random_range(0..n_modes);
        let op = match rng.random_range(0..5) {
            0 if n_modes > 1 => {
                let other = (m + rng.random_range(1..n_modes)) % n_modes;
                Op::new(Gate::Sum, &[], &[m, other])
            }
            0 | 1 => Op::new(Gate::Fourier, &[], &[m]),
            2 => Op::new(Gate::Phase, &[uniform(rng, 1.0)], &[m]),
            3 => Op::new(Gate::PauliX, &[uniform(rng, 1.0)], &[m]),
            _ => Op::new(Gate::PauliZ, &[uniform(rng, 1.0)], &[m]),
        };
        ops.push(op);
    }
    let mut modes: Vec<usize> = (0..n_modes).collect();
    for k in 0..n_measured {
        let pick = rng.random_range(k..n_modes);
        modes.swap(k, pick);
        ops.push(Op::new(Gate::MeasureX, &[], &[modes[k]]));
    }
    Circuit::new(n_modes, squeezing, ops)
}
