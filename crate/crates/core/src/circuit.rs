//! Circuit descriptions shared by the covariance and stabilizer backends.
//!
//! A circuit is a JSON document
//!
//! ```json
//! {
//!   "n_modes": 2,
//!   "squeezing": [0.0, 0.0],
//!   "ops": [
//!     {"gate": "two_mode_squeeze", "params": [1.0], "modes": [0, 1]},
//!     {"gate": "measure_x", "modes": [1]}
//!   ]
//! }
//! ```
//!
//! Inputs are squeezed vacua (`squeezing[k] > 0` squeezes `x`; omitted means
//! vacuum). Measurements are terminal: a measured mode takes no further
//! gates.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{check_distinct, check_mode, Error, Result};
use crate::linalg::{max_abs_diff, max_abs_diff_vec};
use crate::ops::GaussianChannel;
use crate::stabilizer::StabilizerTableau;
use crate::state::GaussianState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gate {
    PhaseShift,
    BeamSplitter,
    Squeeze,
    TwoModeSqueeze,
    Displace,
    Sum,
    Fourier,
    /// Shear `p → p + η x`.
    Phase,
    PauliX,
    PauliZ,
    MeasureX,
    Kerr,
    CrossKerr,
    CubicPhase,
}

impl Gate {
    pub fn name(self) -> &'static str {
        match self {
            Gate::PhaseShift => "phase_shift",
            Gate::BeamSplitter => "beam_splitter",
            Gate::Squeeze => "squeeze",
            Gate::TwoModeSqueeze => "two_mode_squeeze",
            Gate::Displace => "displace",
            Gate::Sum => "sum",
            Gate::Fourier => "fourier",
            Gate::Phase => "phase",
            Gate::PauliX => "pauli_x",
            Gate::PauliZ => "pauli_z",
            Gate::MeasureX => "measure_x",
            Gate::Kerr => "kerr",
            Gate::CrossKerr => "cross_kerr",
            Gate::CubicPhase => "cubic_phase",
        }
    }

    pub fn is_gaussian(self) -> bool {
        !matches!(self, Gate::Kerr | Gate::CrossKerr | Gate::CubicPhase)
    }

    /// Member of the SUM / Fourier / shear / Pauli set.
    pub fn is_clifford(self) -> bool {
        matches!(
            self,
            Gate::Sum | Gate::Fourier | Gate::Phase | Gate::PauliX | Gate::PauliZ | Gate::MeasureX
        )
    }

    /// Accepted parameter counts and number of modes.
    fn arity(self) -> (&'static [usize], usize) {
        match self {
            Gate::PhaseShift | Gate::Phase | Gate::PauliX | Gate::PauliZ | Gate::Kerr | Gate::CubicPhase => (&[1], 1),
            Gate::Squeeze => (&[1, 2], 1),
            Gate::Displace => (&[2], 1),
            Gate::Fourier | Gate::MeasureX => (&[0], 1),
            Gate::BeamSplitter | Gate::TwoModeSqueeze | Gate::CrossKerr => (&[1], 2),
            Gate::Sum => (&[0], 2),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Op {
    pub gate: Gate,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<f64>,
    pub modes: Vec<usize>,
}

impl Op {
    pub fn new(gate: Gate, params: &[f64], modes: &[usize]) -> Self {
        Self {
            gate,
            params: params.to_vec(),
            modes: modes.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Circuit {
    pub n_modes: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub squeezing: Vec<f64>,
    pub ops: Vec<Op>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    Covariance,
    Stabilizer,
    Both,
}

/// Largest element-wise differences between the two backends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BackendDiff {
    pub mean: f64,
    pub cov: f64,
}

impl BackendDiff {
    pub fn max(&self) -> f64 {
        self.mean.max(self.cov)
    }
}

impl Circuit {
    pub fn new(n_modes: usize, squeezing: Vec<f64>, ops: Vec<Op>) -> Result<Self> {
        let c = Self { n_modes, squeezing, ops };
        c.check()?;
        Ok(c)
    }

    /// Parses and checks a circuit. Syntax errors, unknown gates and fields
    /// are reported with line and column.
    pub fn from_json(text: &str) -> Result<Self> {
        let c: Circuit = serde_json::from_str(text)?;
        c.check()?;
        Ok(c)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("circuits serialise")
    }

    fn check(&self) -> Result<()> {
        if self.n_modes == 0 {
            return Err(Error::InvalidArgument("a circuit needs at least one mode".into()));
        }
        if !self.squeezing.is_empty() && self.squeezing.len() != self.n_modes {
            return Err(Error::DimensionMismatch {
                expected: self.n_modes,
                found: self.squeezing.len(),
            });
        }
        if self.squeezing.iter().any(|r| !r.is_finite()) {
            return Err(Error::InvalidArgument("input squeezing must be finite".into()));
        }
        let mut measured = vec![false; self.n_modes];
        for (k, op) in self.ops.iter().enumerate() {
            let (counts, n_targets) = op.gate.arity();
            let bad = |what: String| Error::InvalidArgument(format!("op {k} ({}): {what}", op.gate));
            if !counts.contains(&op.params.len()) {
                return Err(bad(format!("expected {counts:?} parameters, got {}", op.params.len())));
            }
            if op.params.iter().any(|p| !p.is_finite()) {
                return Err(bad("non-finite parameter".into()));
            }
            if op.modes.len() != n_targets {
                return Err(bad(format!("expected {n_targets} modes, got {}", op.modes.len())));
            }
            match op.modes[..] {
                [m] => check_mode(m, self.n_modes)?,
                [i, j] => check_distinct(i, j, self.n_modes)?,
                _ => unreachable!(),
            }
            if let Some(&m) = op.modes.iter().find(|&&m| measured[m]) {
                return Err(bad(format!("mode {m} was already measured")));
            }
            if op.gate == Gate::MeasureX {
                measured[op.modes[0]] = true;
            }
        }
        Ok(())
    }

    fn profile(&self) -> Vec<f64> {
        if self.squeezing.is_empty() {
            vec![0.0; self.n_modes]
        } else {
            self.squeezing.clone()
        }
    }

    pub fn input_state(&self) -> GaussianState {
        let profile = self.profile();
        profile[1..]
            .iter()
            .fold(GaussianState::squeezed_vacuum(profile[0]), |acc, &r| {
                acc.tensor(&GaussianState::squeezed_vacuum(r))
            })
    }

    /// Modes read out by `measure_x`, in circuit order.
    pub fn measured_modes(&self) -> Vec<usize> {
        self.ops
            .iter()
            .filter(|op| op.gate == Gate::MeasureX)
            .map(|op| op.modes[0])
            .collect()
    }

    fn first_non_gaussian(&self) -> Result<()> {
        match self.ops.iter().find(|op| !op.gate.is_gaussian()) {
            Some(op) => Err(Error::NonGaussianGate(op.gate.name().into())),
            None => Ok(()),
        }
    }

    /// The unitary part as one affine symplectic map.
    pub fn channel(&self) -> Result<GaussianChannel> {
        self.first_non_gaussian()?;
        let n = self.n_modes;
        let mut out = GaussianChannel::identity(n);
        for op in &self.ops {
            let p = &op.params;
            let m = &op.modes;
            let step = match op.gate {
                Gate::PhaseShift => GaussianChannel::phase_shift(n, m[0], p[0])?,
                Gate::BeamSplitter => GaussianChannel::beam_splitter(n, m[0], m[1], p[0])?,
                Gate::Squeeze => GaussianChannel::squeeze(n, m[0], p[0], p.get(1).copied().unwrap_or(0.0))?,
                Gate::TwoModeSqueeze => GaussianChannel::two_mode_squeeze(n, m[0], m[1], p[0])?,
                Gate::Displace => GaussianChannel::displace_mode(n, m[0], p[0], p[1])?,
                Gate::Sum => GaussianChannel::sum(n, m[0], m[1])?,
                Gate::Fourier => GaussianChannel::fourier(n, m[0])?,
                Gate::Phase => GaussianChannel::shear(n, m[0], p[0])?,
                Gate::PauliX => GaussianChannel::displace_mode(n, m[0], p[0], 0.0)?,
                Gate::PauliZ => GaussianChannel::displace_mode(n, m[0], 0.0, p[0])?,
                Gate::MeasureX => continue,
                Gate::Kerr | Gate::CrossKerr | Gate::CubicPhase => unreachable!(),
            };
            out = step.compose(&out)?;
        }
        Ok(out)
    }

    /// Final state of the covariance backend, before the terminal
    /// measurements.
    pub fn run_covariance(&self) -> Result<GaussianState> {
        self.channel()?.apply(&self.input_state())
    }

    /// Tableau after all gates; measurements are left to the caller.
    pub fn run_stabilizer(&self) -> Result<StabilizerTableau> {
        self.first_non_gaussian()?;
        if let Some(op) = self.ops.iter().find(|op| !op.gate.is_clifford()) {
            return Err(Error::UnsupportedGate {
                gate: op.gate.name().into(),
                backend: "stabilizer",
            });
        }
        let mut t = StabilizerTableau::new(&self.profile())?;
        for op in &self.ops {
            let (p, m) = (&op.params, &op.modes);
            match op.gate {
                Gate::Sum => t.gate_sum(m[0], m[1])?,
                Gate::Fourier => t.gate_fourier(m[0])?,
                Gate::Phase => t.gate_phase(p[0], m[0])?,
                Gate::PauliX => t.gate_pauli(p[0], 0.0, m[0])?,
                Gate::PauliZ => t.gate_pauli(0.0, p[0], m[0])?,
                _ => {}
            }
        }
        Ok(t)
    }

    pub fn compare_backends(&self) -> Result<BackendDiff> {
        let a = self.run_covariance()?;
        let b = self.run_stabilizer()?.to_gaussian()?;
        Ok(BackendDiff {
            mean: max_abs_diff_vec(a.mean(), b.mean()),
            cov: max_abs_diff(a.cov(), b.cov()),
        })
    }

    /// Terminal measurement outcomes over `shots` runs, one column per
    /// measured mode. `Both` is not a sampling backend.
    pub fn sample<R: Rng + ?Sized>(&self, backend: Backend, shots: usize, rng: &mut R) -> Result<Vec<Vec<f64>>> {
        let modes = self.measured_modes();
        match backend {
            Backend::Covariance => sample_x(&self.run_covariance()?, &modes, shots, rng),
            Backend::Stabilizer => self.run_stabilizer()?.sample_measurements(&modes, shots, rng),
            Backend::Both => Err(Error::InvalidArgument("pick one backend to sample from".into())),
        }
    }
}

/// Joint samples of `x` on `modes` from a Gaussian state, one column per
/// mode.
pub fn sample_x<R: Rng + ?Sized>(
    state: &GaussianState,
    modes: &[usize],
    shots: usize,
    rng: &mut R,
) -> Result<Vec<Vec<f64>>> {
    for &m in modes {
        check_mode(m, state.n_modes())?;
    }
    let k = modes.len();
    let cov = DMatrix::from_fn(k, k, |a, b| state.cov()[(2 * modes[a], 2 * modes[b])]);
    let mean = DVector::from_iterator(k, modes.iter().map(|&m| state.mean()[2 * m]));
    // Symmetric square root, robust to (near-)singular marginals.
    let eig = cov.symmetric_eigen();
    let root = &eig.eigenvectors
        * DMatrix::from_diagonal(&eig.eigenvalues.map(|v| v.max(0.0).sqrt()))
        * eig.eigenvectors.transpose();
    let mut out = vec![Vec::with_capacity(shots); k];
    for _ in 0..shots {
        let z = DVector::from_iterator(k, (0..k).map(|_| StandardNormal.sample(rng)));
        let v = &mean + &root * z;
        for (col, x) in out.iter_mut().zip(v.iter()) {
            col.push(*x);
        }
    }
    Ok(out)
}
