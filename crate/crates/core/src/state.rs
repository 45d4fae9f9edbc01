//! Gaussian states described by a mean quadrature vector and a covariance
//! matrix.
//!
//! Units follow ħ = 1/2: `[x, p] = i/2` and the vacuum has quadrature
//! variance 1/4. Quadratures are ordered `(x1, p1, x2, p2, ..., xN, pN)`.
//! Physicality means `V + (i/4) Λ ⪰ 0`, which [`GaussianState::validate`]
//! checks through the smallest eigenvalue of that Hermitian matrix.

use std::f64::consts::PI;

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use serde::{Deserialize, Serialize};

use crate::error::{check_mode, Error, Result};
use crate::linalg::{
    asymmetry, direct_sum, mode_submatrix, mode_subvector, symplectic_form,
    uncertainty_min_eigenvalue, VACUUM_VARIANCE,
};

/// Tolerance on `max |V - Vᵀ|`.
pub const TOL_SYMMETRY: f64 = 1e-10;
/// Tolerance on the smallest eigenvalue of `V + (i/4) Λ`.
pub const TOL_PSD: f64 = 1e-9;
/// Tolerance for declaring a state pure.
pub const TOL_PURITY: f64 = 1e-8;

/// The symplectic form Λ for a given number of modes.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticForm {
    n_modes: usize,
    matrix: DMatrix<f64>,
}

impl SymplecticForm {
    pub fn new(n_modes: usize) -> Self {
        Self {
            n_modes,
            matrix: symplectic_form(n_modes),
        }
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }
}

/// A Gaussian state of `n_modes` bosonic modes.
///
/// Construction only checks shapes, finiteness and symmetry; whether the
/// covariance obeys the uncertainty principle is reported by
/// [`validate`](Self::validate). This lets partially transposed
/// (generally unphysical) matrices share the type.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    n_modes: usize,
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

/// What is wrong with a covariance matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Asymmetric { defect: f64 },
    Uncertainty { min_eigenvalue: f64 },
}

/// Result of [`GaussianState::validate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Diagnostic {
    pub symmetry_defect: f64,
    /// Smallest eigenvalue of `V + (i/4) Λ`.
    pub min_eigenvalue: f64,
}

impl Diagnostic {
    pub fn violation(&self) -> Option<Violation> {
        if self.symmetry_defect > TOL_SYMMETRY {
            Some(Violation::Asymmetric {
                defect: self.symmetry_defect,
            })
        } else if self.min_eigenvalue < -TOL_PSD {
            Some(Violation::Uncertainty {
                min_eigenvalue: self.min_eigenvalue,
            })
        } else {
            None
        }
    }

    pub fn is_ok(&self) -> bool {
        self.violation().is_none()
    }
}

impl GaussianState {
    /// Builds a state from a mean vector and covariance matrix.
    pub fn new(mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        let dim = mean.len();
        if dim == 0 || dim % 2 != 0 {
            return Err(Error::InvalidArgument(format!(
                "mean vector length {dim} is not a positive even number"
            )));
        }
        if cov.nrows() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: cov.nrows(),
            });
        }
        if cov.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: cov.ncols(),
            });
        }
        if mean.iter().chain(cov.iter()).any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("non-finite entry".into()));
        }
        let defect = asymmetry(&cov);
        if defect > TOL_SYMMETRY {
            return Err(Error::InvalidState(format!(
                "covariance is not symmetric (defect {defect:.3e})"
            )));
        }
        Ok(Self {
            n_modes: dim / 2,
            mean,
            cov,
        })
    }

    /// Like [`new`](Self::new), additionally requiring the uncertainty
    /// principle to hold.
    pub fn physical(mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        let state = Self::new(mean, cov)?;
        match state.validate().violation() {
            None => Ok(state),
            Some(v) => Err(Error::InvalidState(format!("{v:?}"))),
        }
    }

    pub(crate) fn from_parts_unchecked(mean: DVector<f64>, cov: DMatrix<f64>) -> Self {
        debug_assert_eq!(mean.len(), cov.nrows());
        Self {
            n_modes: mean.len() / 2,
            mean,
            cov,
        }
    }

    /// The `n`-mode vacuum: zero mean, `V = I/4`.
    pub fn vacuum(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::InvalidArgument("vacuum needs at least one mode".into()));
        }
        let dim = 2 * n_modes;
        Ok(Self::from_parts_unchecked(
            DVector::zeros(dim),
            DMatrix::identity(dim, dim) * VACUUM_VARIANCE,
        ))
    }

    /// Single-mode coherent state with amplitude `α = x + i p`.
    pub fn coherent(x: f64, p: f64) -> Self {
        Self::from_parts_unchecked(
            DVector::from_vec(vec![x, p]),
            DMatrix::identity(2, 2) * VACUUM_VARIANCE,
        )
    }

    /// Single-mode squeezed vacuum, `diag(e^{-2r}, e^{2r}) / 4`.
    ///
    /// Positive `r` squeezes position, negative `r` squeezes momentum.
    pub fn squeezed_vacuum(r: f64) -> Self {
        let cov = DMatrix::from_diagonal(&DVector::from_vec(vec![
            (-2.0 * r).exp() * VACUUM_VARIANCE,
            (2.0 * r).exp() * VACUUM_VARIANCE,
        ]));
        Self::from_parts_unchecked(DVector::zeros(2), cov)
    }

    /// Single-mode thermal state with mean photon number `nbar`.
    pub fn thermal(nbar: f64) -> Result<Self> {
        if !(nbar >= 0.0) {
            return Err(Error::InvalidArgument(format!("negative photon number {nbar}")));
        }
        Ok(Self::from_parts_unchecked(
            DVector::zeros(2),
            DMatrix::identity(2, 2) * (2.0 * nbar + 1.0) * VACUUM_VARIANCE,
        ))
    }

    /// Two-mode squeezed vacuum in standard form, written down directly.
    pub fn two_mode_squeezed_vacuum(r: f64) -> Self {
        let c = (2.0 * r).cosh() * VACUUM_VARIANCE;
        let s = (2.0 * r).sinh() * VACUUM_VARIANCE;
        #[rustfmt::skip]
        let cov = DMatrix::from_row_slice(4, 4, &[
            c, 0.0, s, 0.0,
            0.0, c, 0.0, -s,
            s, 0.0, c, 0.0,
            0.0, -s, 0.0, c,
        ]);
        Self::from_parts_unchecked(DVector::zeros(4), cov)
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    pub fn into_parts(self) -> (DVector<f64>, DMatrix<f64>) {
        (self.mean, self.cov)
    }

    /// Returns the same covariance with a different mean.
    pub fn with_mean(&self, mean: DVector<f64>) -> Result<Self> {
        if mean.len() != self.mean.len() {
            return Err(Error::DimensionMismatch {
                expected: self.mean.len(),
                found: mean.len(),
            });
        }
        Ok(Self::from_parts_unchecked(mean, self.cov.clone()))
    }

    /// Symmetry defect and smallest eigenvalue of `V + (i/4) Λ`.
    pub fn validate(&self) -> Diagnostic {
        Diagnostic {
            symmetry_defect: asymmetry(&self.cov),
            min_eigenvalue: uncertainty_min_eigenvalue(&self.cov),
        }
    }

    /// Purity `sqrt((1/16)^N / det V)`.
    pub fn purity(&self) -> Result<f64> {
        let det = self.cov.determinant();
        if !(det > 0.0) {
            return Err(Error::InvalidState(format!(
                "covariance determinant {det:.3e} is not positive"
            )));
        }
        let pure_det = VACUUM_VARIANCE.powi(2 * self.n_modes as i32);
        Ok((pure_det / det).sqrt())
    }

    pub fn is_pure(&self) -> Result<bool> {
        Ok((self.purity()? - 1.0).abs() <= TOL_PURITY)
    }

    /// Precomputes the inverse covariance and normalisation of the Wigner
    /// function for repeated evaluation.
    pub fn wigner_function(&self) -> Result<WignerFunction> {
        let chol = Cholesky::new(self.cov.clone())
            .ok_or_else(|| Error::InvalidState("covariance is not positive definite".into()))?;
        let det = chol.determinant();
        let norm = 1.0 / ((2.0 * PI).powi(self.n_modes as i32) * det.sqrt());
        Ok(WignerFunction {
            mean: self.mean.clone(),
            chol,
            norm,
        })
    }

    /// Wigner function at a phase-space point of length 2N.
    pub fn wigner(&self, point: &DVector<f64>) -> Result<f64> {
        self.wigner_function()?.eval(point)
    }

    /// Tensor product `self ⊗ other`; modes of `other` follow those of `self`.
    pub fn tensor(&self, other: &GaussianState) -> GaussianState {
        let mut mean = DVector::zeros(self.mean.len() + other.mean.len());
        mean.rows_mut(0, self.mean.len()).copy_from(&self.mean);
        mean.rows_mut(self.mean.len(), other.mean.len())
            .copy_from(&other.mean);
        Self::from_parts_unchecked(mean, direct_sum(&self.cov, &other.cov))
    }

    /// Reduced state on `keep`, in the order given.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<GaussianState> {
        if keep.is_empty() {
            return Err(Error::InvalidArgument("cannot trace out every mode".into()));
        }
        for (i, &k) in keep.iter().enumerate() {
            check_mode(k, self.n_modes)?;
            if keep[..i].contains(&k) {
                return Err(Error::InvalidArgument(format!("mode {k} listed twice")));
            }
        }
        Ok(Self::from_parts_unchecked(
            mode_subvector(&self.mean, keep),
            mode_submatrix(&self.cov, keep),
        ))
    }

    /// Removes the listed modes, keeping the rest in their original order.
    pub fn discard(&self, drop: &[usize]) -> Result<GaussianState> {
        for &k in drop {
            check_mode(k, self.n_modes)?;
        }
        let keep: Vec<usize> = (0..self.n_modes).filter(|k| !drop.contains(k)).collect();
        self.partial_trace(&keep)
    }

    /// `⟨x²⟩ + ⟨p²⟩ - 1/2` on one mode.
    pub fn mean_photon_number(&self, mode: usize) -> Result<f64> {
        check_mode(mode, self.n_modes)?;
        let (x, p) = (2 * mode, 2 * mode + 1);
        Ok(self.cov[(x, x)] + self.cov[(p, p)] + self.mean[x].powi(2) + self.mean[p].powi(2)
            - 0.5)
    }

    pub fn total_photon_number(&self) -> f64 {
        (0..self.n_modes)
            .map(|k| self.mean_photon_number(k).expect("mode in range"))
            .sum()
    }

    /// Structured record `{n_modes, mean, cov}` with `cov` row-major.
    pub fn to_record(&self) -> StateRecord {
        StateRecord {
            n_modes: self.n_modes,
            mean: self.mean.iter().copied().collect(),
            cov: self
                .cov
                .row_iter()
                .map(|row| row.iter().copied().collect())
                .collect(),
        }
    }

    pub fn from_record(record: &StateRecord) -> Result<Self> {
        let dim = 2 * record.n_modes;
        if record.mean.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: record.mean.len(),
            });
        }
        if record.cov.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: record.cov.len(),
            });
        }
        if let Some(row) = record.cov.iter().find(|row| row.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: row.len(),
            });
        }
        let cov = DMatrix::from_fn(dim, dim, |r, c| record.cov[r][c]);
        Self::new(DVector::from_vec(record.mean.clone()), cov)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_record()).expect("state record serialises")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let record: StateRecord = serde_json::from_str(text)?;
        Self::from_record(&record)
    }
}

impl Serialize for GaussianState {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_record().serialize(serializer)
    }
}

/// Serialised form of a [`GaussianState`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateRecord {
    pub n_modes: usize,
    pub mean: Vec<f64>,
    pub cov: Vec<Vec<f64>>,
}

/// A Wigner function with its inverse covariance already factorised.
#[derive(Debug, Clone)]
pub struct WignerFunction {
    mean: DVector<f64>,
    chol: Cholesky<f64, Dyn>,
    norm: f64,
}

impl WignerFunction {
    pub fn eval(&self, point: &DVector<f64>) -> Result<f64> {
        if point.len() != self.mean.len() {
            return Err(Error::DimensionMismatch {
                expected: self.mean.len(),
                found: point.len(),
            });
        }
        let delta = point - &self.mean;
        let solved = self.chol.solve(&delta);
        Ok(self.norm * (-0.5 * delta.dot(&solved)).exp())
    }

    /// Value at the centre of the distribution.
    pub fn peak(&self) -> f64 {
        self.norm
    }
}
