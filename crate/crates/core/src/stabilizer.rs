//! Heisenberg-picture simulation of the Clifford-analog gate set.
//!
//! The tableau stores every current quadrature as an affine combination of
//! the initial quadratures, `ξ = M ξ₀ + d`, together with the squeezing of
//! each input. SUM, Fourier, shear and Pauli gates only touch `M` and `d`,
//! so a circuit on `n` modes costs `O(n²)` memory and `O(n)` work per gate.
//!
//! Initial quadratures are independent Gaussians with variances
//! `e^{∓2r}/4`. An input with `r = +∞` (`-∞`) is an ideal `x` (`p`)
//! eigenstate; its conjugate quadrature is then spread with variance
//! [`IDEAL_SPREAD`] in place of a flat distribution.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{check_distinct, check_mode, Error, Result};
use crate::linalg::VACUUM_VARIANCE;
use crate::state::GaussianState;

/// Variance standing in for the flat distribution of the quadrature
/// conjugate to an ideal eigenstate.
pub const IDEAL_SPREAD: f64 = 1e12;

/// Which quadrature a feed-forward correction displaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quadrature {
    X,
    P,
}

impl Quadrature {
    fn offset(self) -> usize {
        match self {
            Quadrature::X => 0,
            Quadrature::P => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilizerTableau {
    n: usize,
    m: DMatrix<f64>,
    d: DVector<f64>,
    squeeze_profile: Vec<f64>,
    measured: Vec<Option<f64>>,
    hidden: Option<DVector<f64>>,
}

impl StabilizerTableau {
    /// Product of squeezed vacua; `profile[k]` squeezes `x` for positive
    /// values and may be `±∞`.
    pub fn new(profile: &[f64]) -> Result<Self> {
        if profile.is_empty() {
            return Err(Error::InvalidArgument("a tableau needs at least one mode".into()));
        }
        if profile.iter().any(|r| r.is_nan()) {
            return Err(Error::InvalidArgument("NaN in squeezing profile".into()));
        }
        let n = profile.len();
        Ok(Self {
            n,
            m: DMatrix::identity(2 * n, 2 * n),
            d: DVector::zeros(2 * n),
            squeeze_profile: profile.to_vec(),
            measured: vec![None; n],
            hidden: None,
        })
    }

    pub fn vacuum(n: usize) -> Result<Self> {
        Self::new(&vec![0.0; n])
    }

    pub fn n_modes(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn displacement(&self) -> &DVector<f64> {
        &self.d
    }

    pub fn squeeze_profile(&self) -> &[f64] {
        &self.squeeze_profile
    }

    /// Number of reals held by the tableau: `4n² + 3n`.
    pub fn state_size(&self) -> usize {
        self.m.len() + self.d.len() + self.squeeze_profile.len()
    }

    pub fn outcome(&self, mode: usize) -> Option<f64> {
        self.measured.get(mode).copied().flatten()
    }

    /// Variances of the initial `(x, p)` of each mode.
    pub fn input_variances(&self) -> DVector<f64> {
        DVector::from_iterator(
            2 * self.n,
            self.squeeze_profile.iter().flat_map(|&r| input_variance(r)),
        )
    }

    fn live(&self, mode: usize) -> Result<()> {
        check_mode(mode, self.n)?;
        if self.measured[mode].is_some() {
            return Err(Error::InvalidArgument(format!("mode {mode} has already been measured")));
        }
        Ok(())
    }

    /// `x_target += x_control`, `p_control -= p_target`.
    pub fn gate_sum(&mut self, control: usize, target: usize) -> Result<()> {
        check_distinct(control, target, self.n)?;
        self.live(control)?;
        self.live(target)?;
        let (xc, xt, pc, pt) = (2 * control, 2 * target, 2 * control + 1, 2 * target + 1);
        add_row(&mut self.m, &mut self.d, xt, xc, 1.0);
        add_row(&mut self.m, &mut self.d, pc, pt, -1.0);
        Ok(())
    }

    /// `(x, p) → (-p, x)`.
    pub fn gate_fourier(&mut self, mode: usize) -> Result<()> {
        self.live(mode)?;
        let (x, p) = (2 * mode, 2 * mode + 1);
        self.m.swap_rows(x, p);
        self.d.swap_rows(x, p);
        self.m.row_mut(x).neg_mut();
        self.d[x] = -self.d[x];
        Ok(())
    }

    /// Shear `p → p + η x`.
    pub fn gate_phase(&mut self, eta: f64, mode: usize) -> Result<()> {
        self.live(mode)?;
        if !eta.is_finite() {
            return Err(Error::InvalidArgument("non-finite shear".into()));
        }
        add_row(&mut self.m, &mut self.d, 2 * mode + 1, 2 * mode, eta);
        Ok(())
    }

    /// `X(s) Z(t)`: shifts `x` by `s` and `p` by `t`.
    pub fn gate_pauli(&mut self, x_shift: f64, p_shift: f64, mode: usize) -> Result<()> {
        self.live(mode)?;
        if !x_shift.is_finite() || !p_shift.is_finite() {
            return Err(Error::InvalidArgument("non-finite Pauli shift".into()));
        }
        self.d[2 * mode] += x_shift;
        self.d[2 * mode + 1] += p_shift;
        Ok(())
    }

    fn hidden<R: Rng + ?Sized>(&mut self, rng: &mut R) -> &DVector<f64> {
        if self.hidden.is_none() {
            self.hidden = Some(draw_inputs(&self.input_variances(), rng));
        }
        self.hidden.as_ref().expect("just sampled")
    }

    /// Measures `x` of `mode`. The initial quadratures of this run are drawn
    /// once, at the first measurement, so later outcomes are jointly
    /// distributed with earlier ones. The mode is frozen afterwards.
    pub fn measure_x<R: Rng + ?Sized>(&mut self, mode: usize, rng: &mut R) -> Result<f64> {
        self.live(mode)?;
        let row = 2 * mode;
        let h = self.hidden(rng).clone();
        let value = self.m.row(row).transpose().dot(&h) + self.d[row];
        self.measured[mode] = Some(value);
        Ok(value)
    }

    /// Classically controlled displacement of `target` by `gain` times the
    /// recorded outcome of `measured`.
    pub fn feed_forward(&mut self, measured: usize, target: usize, quadrature: Quadrature, gain: f64) -> Result<()> {
        check_mode(measured, self.n)?;
        self.live(target)?;
        let value = self.measured[measured]
            .ok_or_else(|| Error::InvalidArgument(format!("mode {measured} has not been measured")))?;
        self.d[2 * target + quadrature.offset()] += gain * value;
        Ok(())
    }

    /// The same correction with the measurement deferred: the target picks
    /// up `gain` times the operator `x_measured` instead of its value.
    pub fn feed_forward_deferred(
        &mut self,
        measured: usize,
        target: usize,
        quadrature: Quadrature,
        gain: f64,
    ) -> Result<()> {
        check_distinct(measured, target, self.n)?;
        self.live(target)?;
        add_row(&mut self.m, &mut self.d, 2 * target + quadrature.offset(), 2 * measured, gain);
        Ok(())
    }

    /// Independent samples of `x_mode` over fresh runs of the circuit so far.
    pub fn sample_x<R: Rng + ?Sized>(&self, mode: usize, shots: usize, rng: &mut R) -> Result<Vec<f64>> {
        check_mode(mode, self.n)?;
        let row = self.m.row(2 * mode);
        let var: f64 = row
            .iter()
            .zip(self.input_variances().iter())
            .map(|(c, v)| c * c * v)
            .sum();
        let (mu, sd) = (self.d[2 * mode], var.sqrt());
        Ok((0..shots)
            .map(|_| {
                let z: f64 = StandardNormal.sample(rng);
                mu + sd * z
            })
            .collect())
    }

    /// Outcomes of `x` measurements on `modes` over `shots` fresh runs,
    /// one column per mode. Each run draws the initial quadratures exactly
    /// as [`measure_x`](Self::measure_x) does, so with the same generator
    /// state the first run reproduces a sequence of `measure_x` calls.
    pub fn sample_measurements<R: Rng + ?Sized>(
        &self,
        modes: &[usize],
        shots: usize,
        rng: &mut R,
    ) -> Result<Vec<Vec<f64>>> {
        for &m in modes {
            self.live(m)?;
        }
        let var = self.input_variances();
        let rows: Vec<DVector<f64>> = modes.iter().map(|&m| self.m.row(2 * m).transpose()).collect();
        let mut out = vec![Vec::with_capacity(shots); modes.len()];
        for _ in 0..shots {
            let h = draw_inputs(&var, rng);
            for (k, row) in rows.iter().enumerate() {
                out[k].push(row.dot(&h) + self.d[2 * modes[k]]);
            }
        }
        Ok(out)
    }

    /// Mean `d` and covariance `M D Mᵀ` of the current quadratures, where
    /// `D` holds the input variances. Fails for ideal inputs, which have no
    /// normalisable Gaussian description.
    pub fn to_gaussian(&self) -> Result<GaussianState> {
        if self.squeeze_profile.iter().any(|r| r.is_infinite()) {
            return Err(Error::InvalidState("ideal eigenstate inputs have no covariance matrix".into()));
        }
        let var = self.input_variances();
        let scaled = DMatrix::from_fn(2 * self.n, 2 * self.n, |r, c| self.m[(r, c)] * var[c]);
        let cov = &scaled * self.m.transpose();
        let cov = (&cov + cov.transpose()) * 0.5;
        GaussianState::new(self.d.clone(), cov)
    }
}

fn input_variance(r: f64) -> [f64; 2] {
    if r == f64::INFINITY {
        [0.0, IDEAL_SPREAD]
    } else if r == f64::NEG_INFINITY {
        [IDEAL_SPREAD, 0.0]
    } else {
        [VACUUM_VARIANCE * (-2.0 * r).exp(), VACUUM_VARIANCE * (2.0 * r).exp()]
    }
}

fn draw_inputs<R: Rng + ?Sized>(var: &DVector<f64>, rng: &mut R) -> DVector<f64> {
    DVector::from_iterator(
        var.len(),
        var.iter().map(|v| {
            let z: f64 = StandardNormal.sample(rng);
            v.sqrt() * z
        }),
    )
}

/// Row operation `row[dst] += k row[src]` on `M` and `d`.
fn add_row(m: &mut DMatrix<f64>, d: &mut DVector<f64>, dst: usize, src: usize, k: f64) {
    for c in 0..m.ncols() {
        let v = m[(src, c)];
        m[(dst, c)] += k * v;
    }
    d[dst] += k * d[src];
}
