//! Homodyne and Bell measurements with Gaussian conditioning.
//!
//! Measuring `x^{(Θ)} = x cos Θ + p sin Θ` on a mode updates the remaining
//! modes through the Schur complement
//!
//! ```text
//! V' = V - (V f)(V f)ᵀ / (fᵀ V f),    m' = m + V f (q - fᵀ m) / (fᵀ V f)
//! ```
//!
//! after which the measured mode is removed. The conditional covariance does
//! not depend on the outcome `q`. Directions with variance below
//! [`TOL_VARIANCE`] are treated with the pseudoinverse (no update).

use nalgebra::DVector;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{check_distinct, check_mode, Error, Result};
use crate::ops::{balanced_beam_splitter, lossy};
use crate::report::CriterionReport;
use crate::state::GaussianState;

/// Variances below this are treated as exactly zero.
pub const TOL_VARIANCE: f64 = 1e-12;

/// EPR-paradox bound on the product of inferred variances.
pub const EPR_BOUND: f64 = 1.0 / 16.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasuredQuadrature {
    pub mode: usize,
    pub angle: f64,
}

/// Outcomes of one measurement round and the state left behind.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRecord {
    /// Modes and quadrature angles, indexed in the pre-measurement state.
    pub measured: Vec<MeasuredQuadrature>,
    pub outcomes: Vec<f64>,
    /// State of the unmeasured modes; `None` if every mode was measured.
    pub conditional: Option<GaussianState>,
}

/// Where an outcome comes from: drawn from the Born-rule marginal, or
/// imposed (post-selection on a given value).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Outcome {
    Sample,
    Forced(f64),
}

fn quadrature_vector(n_modes: usize, mode: usize, angle: f64) -> DVector<f64> {
    let mut f = DVector::zeros(2 * n_modes);
    f[2 * mode] = angle.cos();
    f[2 * mode + 1] = angle.sin();
    f
}

/// Conditions `state` on `fᵀ ξ` without removing any mode. Returns the
/// outcome and the updated state.
fn condition<R: Rng + ?Sized>(
    state: &GaussianState,
    f: &DVector<f64>,
    outcome: Outcome,
    rng: &mut R,
) -> (f64, GaussianState) {
    let vf = state.cov() * f;
    let var = f.dot(&vf);
    let mu = f.dot(state.mean());
    let value = match outcome {
        Outcome::Forced(q) => q,
        Outcome::Sample => {
            let z: f64 = StandardNormal.sample(rng);
            mu + var.max(0.0).sqrt() * z
        }
    };
    if var < TOL_VARIANCE {
        return (value, state.clone());
    }
    let cov = state.cov() - &vf * vf.transpose() / var;
    let cov = (&cov + cov.transpose()) * 0.5;
    let mean = state.mean() + &vf * ((value - mu) / var);
    (value, GaussianState::from_parts_unchecked(mean, cov))
}

/// Jointly measures quadratures on distinct modes, one after another, and
/// removes the measured modes.
pub fn measure_quadratures<R: Rng + ?Sized>(
    state: &GaussianState,
    quadratures: &[MeasuredQuadrature],
    outcomes: &[Outcome],
    rng: &mut R,
) -> Result<MeasurementRecord> {
    if quadratures.len() != outcomes.len() {
        return Err(Error::DimensionMismatch {
            expected: quadratures.len(),
            found: outcomes.len(),
        });
    }
    for (k, q) in quadratures.iter().enumerate() {
        check_mode(q.mode, state.n_modes())?;
        if !q.angle.is_finite() {
            return Err(Error::InvalidArgument("non-finite quadrature angle".into()));
        }
        if quadratures[..k].iter().any(|o| o.mode == q.mode) {
            return Err(Error::InvalidArgument(format!("mode {} measured twice", q.mode)));
        }
    }
    let mut current = state.clone();
    let mut values = Vec::with_capacity(quadratures.len());
    for (q, &outcome) in quadratures.iter().zip(outcomes) {
        let f = quadrature_vector(state.n_modes(), q.mode, q.angle);
        let (value, next) = condition(&current, &f, outcome, rng);
        values.push(value);
        current = next;
    }
    let measured_modes: Vec<usize> = quadratures.iter().map(|q| q.mode).collect();
    let conditional = if measured_modes.len() == state.n_modes() {
        None
    } else {
        Some(current.discard(&measured_modes)?)
    };
    Ok(MeasurementRecord {
        measured: quadratures.to_vec(),
        outcomes: values,
        conditional,
    })
}

/// Homodyne detection of `x^{(Θ)}` on one mode.
pub fn homodyne<R: Rng + ?Sized>(
    state: &GaussianState,
    mode: usize,
    angle: f64,
    outcome: Outcome,
    rng: &mut R,
) -> Result<MeasurementRecord> {
    measure_quadratures(state, &[MeasuredQuadrature { mode, angle }], &[outcome], rng)
}

/// Homodyne detection behind a detector of efficiency `eta`, modelled as
/// loss on the measured mode just before an ideal detector.
pub fn homodyne_lossy<R: Rng + ?Sized>(
    state: &GaussianState,
    mode: usize,
    angle: f64,
    eta: f64,
    outcome: Outcome,
    rng: &mut R,
) -> Result<MeasurementRecord> {
    let degraded = lossy(state, mode, eta)?;
    homodyne(&degraded, mode, angle, outcome, rng)
}

/// Bell detection of modes `i` ("in") and `j`: a balanced beam splitter
/// followed by `x` on `u = (x_i - x_j)/√2` and `p` on `v = (p_i + p_j)/√2`.
///
/// Outcomes are `[x_u, p_v]`.
pub fn bell_measure<R: Rng + ?Sized>(
    state: &GaussianState,
    i: usize,
    j: usize,
    outcomes: [Outcome; 2],
    rng: &mut R,
) -> Result<MeasurementRecord> {
    check_distinct(i, j, state.n_modes())?;
    let mixed = balanced_beam_splitter(state.n_modes(), i, j)?.apply(state)?;
    // With the phase-free splitter the difference port is j and the sum port i.
    let quads = [
        MeasuredQuadrature { mode: j, angle: 0.0 },
        MeasuredQuadrature {
            mode: i,
            angle: std::f64::consts::FRAC_PI_2,
        },
    ];
    measure_quadratures(&mixed, &quads, &outcomes, rng)
}

/// Conditional (minimal inferred) variances of mode 0 given mode 1 for a
/// two-mode state, with the optimal inference gains.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConditionalVariances {
    pub var_x: f64,
    pub var_p: f64,
    pub gain_x: f64,
    pub gain_p: f64,
}

impl ConditionalVariances {
    pub fn product(&self) -> f64 {
        self.var_x * self.var_p
    }

    pub fn epr_paradox(&self) -> bool {
        self.product() < EPR_BOUND
    }
}

pub fn conditional_variances(state: &GaussianState) -> Result<ConditionalVariances> {
    if state.n_modes() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: state.n_modes(),
        });
    }
    let v = state.cov();
    let inferred = |q: usize| -> Result<(f64, f64)> {
        let (v1, v2, c) = (v[(q, q)], v[(q + 2, q + 2)], v[(q, q + 2)]);
        if v1 <= 0.0 || v2 <= 0.0 {
            return Err(Error::InvalidState("zero quadrature variance".into()));
        }
        Ok((v1 * (1.0 - c * c / (v1 * v2)), c / v2))
    };
    let (var_x, gain_x) = inferred(0)?;
    let (var_p, gain_p) = inferred(1)?;
    Ok(ConditionalVariances {
        var_x,
        var_p,
        gain_x,
        gain_p,
    })
}

/// Reid's EPR condition `Var_inf^x · Var_inf^p < 1/16`.
pub fn epr_paradox_test(state: &GaussianState) -> Result<CriterionReport> {
    let cv = conditional_variances(state)?;
    Ok(CriterionReport::new("epr_reid", cv.product(), EPR_BOUND))
}

/// One row of an exported shot record.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShotRecord {
    pub seed: u64,
    pub shot: usize,
    pub outcomes: Vec<f64>,
    pub state_hash: String,
}

impl ShotRecord {
    pub fn new(seed: u64, shot: usize, record: &MeasurementRecord) -> Self {
        Self {
            seed,
            shot,
            outcomes: record.outcomes.clone(),
            state_hash: record
                .conditional
                .as_ref()
                .map(state_hash)
                .unwrap_or_default(),
        }
    }

    /// `seed,shot,outcome_0,...,state_hash`
    pub fn csv_fields(&self) -> Vec<String> {
        let mut out = vec![self.seed.to_string(), self.shot.to_string()];
        out.extend(self.outcomes.iter().map(|x| x.to_string()));
        out.push(self.state_hash.clone());
        out
    }
}

/// Short SHA-256 fingerprint of a state's serialised record.
pub fn state_hash(state: &GaussianState) -> String {
    let bytes = serde_json::to_vec(&state.to_record()).expect("state record serialises");
    hex::encode(&Sha256::digest(&bytes)[..8])
}
