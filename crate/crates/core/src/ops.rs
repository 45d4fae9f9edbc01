//! Gaussian unitaries as affine symplectic maps on the quadratures.
//!
//! A [`GaussianChannel`] acts in the Heisenberg picture as `ξ → S ξ + d`, so
//! on a state the mean becomes `S m + d` and the covariance `S V Sᵀ`. All
//! channels are global (2N×2N); single- and two-mode gates are embedded by
//! their constructors.

use std::f64::consts::FRAC_PI_4;

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{check_distinct, check_mode, Error, Result};
use crate::linalg::{max_abs_diff, symplectic_form};
use crate::state::GaussianState;

/// Tolerance on `max |S Λ Sᵀ - Λ|`.
pub const TOL_SYMPLECTIC: f64 = 1e-10;
/// Tolerance on the LUBO conditions `A Bᵀ = B Aᵀ` and `A A† = B B† + 1`.
pub const TOL_LUBO: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianChannel {
    n_modes: usize,
    s: DMatrix<f64>,
    d: DVector<f64>,
}

impl GaussianChannel {
    /// Builds a channel from its symplectic matrix and displacement,
    /// rejecting matrices that are not symplectic within [`TOL_SYMPLECTIC`].
    pub fn new(s: DMatrix<f64>, d: DVector<f64>) -> Result<Self> {
        let dim = d.len();
        if dim == 0 || dim % 2 != 0 {
            return Err(Error::InvalidArgument(format!(
                "displacement length {dim} is not a positive even number"
            )));
        }
        if s.nrows() != dim || s.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: s.nrows().max(s.ncols()),
            });
        }
        let ch = Self {
            n_modes: dim / 2,
            s,
            d,
        };
        let defect = ch.symplectic_defect();
        if !(defect <= TOL_SYMPLECTIC) {
            return Err(Error::InvalidArgument(format!(
                "matrix is not symplectic (defect {defect:.3e})"
            )));
        }
        Ok(ch)
    }

    pub fn identity(n_modes: usize) -> Self {
        Self {
            n_modes,
            s: DMatrix::identity(2 * n_modes, 2 * n_modes),
            d: DVector::zeros(2 * n_modes),
        }
    }

    /// Identity with a 2×2 block placed on one mode.
    fn single_mode(n_modes: usize, mode: usize, block: [[f64; 2]; 2]) -> Result<Self> {
        check_mode(mode, n_modes)?;
        let mut ch = Self::identity(n_modes);
        for r in 0..2 {
            for c in 0..2 {
                ch.s[(2 * mode + r, 2 * mode + c)] = block[r][c];
            }
        }
        Ok(ch)
    }

    /// Quadrature rotation `x → x cos θ + p sin θ`, `p → -x sin θ + p cos θ`.
    pub fn phase_shift(n_modes: usize, mode: usize, theta: f64) -> Result<Self> {
        finite(theta, "phase")?;
        let (s, c) = theta.sin_cos();
        Self::single_mode(n_modes, mode, [[c, s], [-s, c]])
    }

    /// Phase-free beam splitter: the pair `(q_i, q_j)` maps through
    /// `[[sin θ, cos θ], [cos θ, -sin θ]]` for `q = x` and `q = p` alike.
    pub fn beam_splitter(n_modes: usize, i: usize, j: usize, theta: f64) -> Result<Self> {
        check_distinct(i, j, n_modes)?;
        finite(theta, "mixing angle")?;
        let (s, c) = theta.sin_cos();
        let mut ch = Self::identity(n_modes);
        for q in 0..2 {
            let (a, b) = (2 * i + q, 2 * j + q);
            ch.s[(a, a)] = s;
            ch.s[(a, b)] = c;
            ch.s[(b, a)] = c;
            ch.s[(b, b)] = -s;
        }
        Ok(ch)
    }

    /// Single-mode squeezer. For `φ = 0` the block is `diag(e^{-r}, e^{r})`;
    /// other angles squeeze the quadrature `x^{(φ/2)}` instead.
    pub fn squeeze(n_modes: usize, mode: usize, r: f64, phi: f64) -> Result<Self> {
        finite(r, "squeezing")?;
        finite(phi, "squeezing angle")?;
        let base = Self::single_mode(n_modes, mode, [[(-r).exp(), 0.0], [0.0, r.exp()]])?;
        if phi == 0.0 {
            return Ok(base);
        }
        let rot = Self::phase_shift(n_modes, mode, phi / 2.0)?;
        let back = Self::phase_shift(n_modes, mode, -phi / 2.0)?;
        back.compose(&base)?.compose(&rot)
    }

    /// Two-mode squeezer `a_i → a_i cosh r + a_j† sinh r` (and `i ↔ j`).
    pub fn two_mode_squeeze(n_modes: usize, i: usize, j: usize, r: f64) -> Result<Self> {
        check_distinct(i, j, n_modes)?;
        finite(r, "squeezing")?;
        let (ch_, sh) = (r.cosh(), r.sinh());
        let mut ch = Self::identity(n_modes);
        for (a, b) in [(i, j), (j, i)] {
            ch.s[(2 * a, 2 * a)] = ch_;
            ch.s[(2 * a, 2 * b)] = sh;
            ch.s[(2 * a + 1, 2 * a + 1)] = ch_;
            ch.s[(2 * a + 1, 2 * b + 1)] = -sh;
        }
        Ok(ch)
    }

    /// Pure displacement by a full 2N quadrature vector.
    pub fn displace(alpha: DVector<f64>) -> Result<Self> {
        if alpha.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("non-finite displacement".into()));
        }
        let n = alpha.len() / 2;
        if alpha.len() % 2 != 0 || n == 0 {
            return Err(Error::InvalidArgument("displacement length must be even".into()));
        }
        Ok(Self {
            n_modes: n,
            s: DMatrix::identity(2 * n, 2 * n),
            d: alpha,
        })
    }

    /// Displaces one mode by `α = x + i p`.
    pub fn displace_mode(n_modes: usize, mode: usize, x: f64, p: f64) -> Result<Self> {
        check_mode(mode, n_modes)?;
        let mut d = DVector::zeros(2 * n_modes);
        d[2 * mode] = x;
        d[2 * mode + 1] = p;
        Self::displace(d)
    }

    /// Cascade of beam splitters that spreads mode 0 evenly over `n` modes:
    /// `B_{n-1,n}(asin 1/√2) ⋯ B_{12}(asin 1/√n)`, applying `B_{12}` first.
    pub fn n_splitter(n_modes: usize) -> Result<Self> {
        if n_modes < 2 {
            return Err(Error::InvalidArgument("an N-splitter needs N >= 2".into()));
        }
        let mut out = Self::identity(n_modes);
        for k in 0..n_modes - 1 {
            let theta = (1.0 / ((n_modes - k) as f64).sqrt()).asin();
            out = Self::beam_splitter(n_modes, k, k + 1, theta)?.compose(&out)?;
        }
        Ok(out)
    }

    /// SUM gate `exp(-2i x_i p_j)`: `x_j → x_j + x_i`, `p_i → p_i - p_j`.
    pub fn sum(n_modes: usize, control: usize, target: usize) -> Result<Self> {
        check_distinct(control, target, n_modes)?;
        let mut ch = Self::identity(n_modes);
        ch.s[(2 * target, 2 * control)] = 1.0;
        ch.s[(2 * control + 1, 2 * target + 1)] = -1.0;
        Ok(ch)
    }

    /// Fourier gate `(x, p) → (-p, x)`, identical to `phase_shift(-π/2)`.
    pub fn fourier(n_modes: usize, mode: usize) -> Result<Self> {
        Self::single_mode(n_modes, mode, [[0.0, -1.0], [1.0, 0.0]])
    }

    /// Shear `exp(i η x²)`: `p → p + η x`.
    pub fn shear(n_modes: usize, mode: usize, eta: f64) -> Result<Self> {
        finite(eta, "shear")?;
        Self::single_mode(n_modes, mode, [[1.0, 0.0], [eta, 1.0]])
    }

    /// Converts a linear unitary Bogoliubov map `a' = A a + B a† + γ` into
    /// quadrature form.
    ///
    /// Requires `A Bᵀ` symmetric and `A A† = B B† + 1`; otherwise returns
    /// [`Error::LuboCondition`] with the Frobenius norm of the residuals.
    pub fn from_lubo(
        a: &DMatrix<Complex<f64>>,
        b: &DMatrix<Complex<f64>>,
        gamma: &DVector<Complex<f64>>,
    ) -> Result<Self> {
        let n = a.nrows();
        for (m, name) in [(a, "A"), (b, "B")] {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::InvalidArgument(format!("{name} must be {n}x{n}")));
            }
        }
        if gamma.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: gamma.len(),
            });
        }
        let abt = a * b.transpose();
        let sym_res = (&abt - abt.transpose()).norm();
        let id = DMatrix::<Complex<f64>>::identity(n, n);
        let unit_res = (a * a.adjoint() - b * b.adjoint() - id).norm();
        let residual = sym_res + unit_res;
        if !(residual <= TOL_LUBO) {
            return Err(Error::LuboCondition { residual });
        }
        // a = x + i p, so Re a' = (A_r + B_r) x - (A_i - B_i) p + Re γ and
        // Im a' = (A_i + B_i) x + (A_r - B_r) p + Im γ.
        let mut s = DMatrix::zeros(2 * n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                let (ar, ai) = (a[(r, c)].re, a[(r, c)].im);
                let (br, bi) = (b[(r, c)].re, b[(r, c)].im);
                s[(2 * r, 2 * c)] = ar + br;
                s[(2 * r, 2 * c + 1)] = -(ai - bi);
                s[(2 * r + 1, 2 * c)] = ai + bi;
                s[(2 * r + 1, 2 * c + 1)] = ar - br;
            }
        }
        let d = DVector::from_fn(2 * n, |k, _| {
            let g = gamma[k / 2];
            if k % 2 == 0 {
                g.re
            } else {
                g.im
            }
        });
        Self::new(s, d)
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.s
    }

    pub fn displacement(&self) -> &DVector<f64> {
        &self.d
    }

    /// `max |S Λ Sᵀ - Λ|`.
    pub fn symplectic_defect(&self) -> f64 {
        let l = symplectic_form(self.n_modes);
        max_abs_diff(&(&self.s * &l * self.s.transpose()), &l)
    }

    /// `self ∘ other`: applies `other` first.
    pub fn compose(&self, other: &GaussianChannel) -> Result<GaussianChannel> {
        if self.n_modes != other.n_modes {
            return Err(Error::DimensionMismatch {
                expected: self.n_modes,
                found: other.n_modes,
            });
        }
        Ok(Self {
            n_modes: self.n_modes,
            s: &self.s * &other.s,
            d: &self.s * &other.d + &self.d,
        })
    }

    /// Inverse map `ξ → S⁻¹ (ξ - d)`, with `S⁻¹ = -Λ Sᵀ Λ`.
    pub fn inverse(&self) -> GaussianChannel {
        let l = symplectic_form(self.n_modes);
        let s_inv = -(&l * self.s.transpose() * &l);
        let d = -(&s_inv * &self.d);
        Self {
            n_modes: self.n_modes,
            s: s_inv,
            d,
        }
    }

    pub fn apply(&self, state: &GaussianState) -> Result<GaussianState> {
        if state.n_modes() != self.n_modes {
            return Err(Error::DimensionMismatch {
                expected: self.n_modes,
                found: state.n_modes(),
            });
        }
        let mean = &self.s * state.mean() + &self.d;
        let cov = &self.s * state.cov() * self.s.transpose();
        // Re-symmetrise to keep round-off from accumulating across long circuits.
        let cov = (&cov + cov.transpose()) * 0.5;
        Ok(GaussianState::from_parts_unchecked(mean, cov))
    }
}

/// Pure loss of transmissivity `eta` on one mode: mixes it with a vacuum
/// ancilla on a beam splitter and discards the ancilla.
pub fn lossy(state: &GaussianState, mode: usize, eta: f64) -> Result<GaussianState> {
    check_mode(mode, state.n_modes())?;
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::InvalidArgument(format!("transmissivity {eta} outside [0, 1]")));
    }
    let n = state.n_modes();
    let extended = state.tensor(&GaussianState::vacuum(1)?);
    let theta = eta.sqrt().asin();
    let mixed = GaussianChannel::beam_splitter(n + 1, mode, n, theta)?.apply(&extended)?;
    mixed.partial_trace(&(0..n).collect::<Vec<_>>())
}

/// The balanced beam splitter used by Bell measurements and cloning.
pub fn balanced_beam_splitter(n_modes: usize, i: usize, j: usize) -> Result<GaussianChannel> {
    GaussianChannel::beam_splitter(n_modes, i, j, FRAC_PI_4)
}

fn finite(x: f64, what: &str) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("non-finite {what}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn close(a: &GaussianChannel, b: &GaussianChannel, tol: f64) -> bool {
        max_abs_diff(a.matrix(), b.matrix()) <= tol
            && crate::linalg::max_abs_diff_vec(a.displacement(), b.displacement()) <= tol
    }

    #[test]
    fn phase_shift_quarter_turn() {
        let ch = GaussianChannel::phase_shift(1, 0, FRAC_PI_2).unwrap();
        let st = GaussianState::coherent(1.0, 2.0);
        let out = ch.apply(&st).unwrap();
        assert_relative_eq!(out.mean()[0], 2.0, epsilon = 1e-15);
        assert_relative_eq!(out.mean()[1], -1.0, epsilon = 1e-15);
        let back = GaussianChannel::phase_shift(1, 0, -FRAC_PI_2).unwrap();
        assert!(close(&back.compose(&ch).unwrap(), &GaussianChannel::identity(1), 1e-15));
        assert!(close(&GaussianChannel::phase_shift(1, 0, 0.0).unwrap(), &GaussianChannel::identity(1), 0.0));
        assert!(GaussianChannel::phase_shift(1, 1, 0.3).is_err());
    }

    #[test]
    fn beam_splitter_position_action() {
        let theta = 0.37;
        let ch = GaussianChannel::beam_splitter(2, 0, 1, theta).unwrap();
        let st = GaussianState::coherent(1.3, 0.0).tensor(&GaussianState::coherent(-0.4, 0.0));
        let out = ch.apply(&st).unwrap();
        let (s, c) = theta.sin_cos();
        assert_relative_eq!(out.mean()[0], 1.3 * s - 0.4 * c, epsilon = 1e-15);
        assert_relative_eq!(out.mean()[2], 1.3 * c + 0.4 * s, epsilon = 1e-15);
        assert_eq!(out.mean()[1], 0.0);
        assert_eq!(out.mean()[3], 0.0);
        let vac = GaussianState::vacuum(2).unwrap();
        let bs = balanced_beam_splitter(2, 0, 1).unwrap();
        assert!(max_abs_diff(bs.apply(&vac).unwrap().cov(), vac.cov()) < 1e-15);
        assert!(GaussianChannel::beam_splitter(2, 1, 1, 0.1).is_err());
    }

    #[test]
    fn balanced_beam_splitter_is_an_involution() {
        let bs = balanced_beam_splitter(3, 0, 2).unwrap();
        assert!(close(&bs.compose(&bs).unwrap(), &GaussianChannel::identity(3), 1e-15));
        assert!(close(&bs.compose(&bs.inverse()).unwrap(), &GaussianChannel::identity(3), 1e-15));
    }

    #[test]
    fn squeezer_on_vacuum() {
        let out = GaussianChannel::squeeze(1, 0, 1.0, 0.0)
            .unwrap()
            .apply(&GaussianState::vacuum(1).unwrap())
            .unwrap();
        assert_relative_eq!(out.cov()[(0, 0)], (-2f64).exp() / 4.0, epsilon = 1e-15);
        assert_relative_eq!(out.cov()[(1, 1)], 2f64.exp() / 4.0, epsilon = 1e-14);
        let round = GaussianChannel::squeeze(2, 1, -0.6, 0.4)
            .unwrap()
            .compose(&GaussianChannel::squeeze(2, 1, 0.6, 0.4).unwrap())
            .unwrap();
        assert!(close(&round, &GaussianChannel::identity(2), 1e-14));
        assert!(close(&GaussianChannel::squeeze(1, 0, 0.0, 0.0).unwrap(), &GaussianChannel::identity(1), 0.0));
    }

    #[test]
    fn rotated_squeezer_squeezes_rotated_quadrature() {
        // φ = π squeezes x^(π/2) = p.
        let out = GaussianChannel::squeeze(1, 0, 0.5, PI)
            .unwrap()
            .apply(&GaussianState::vacuum(1).unwrap())
            .unwrap();
        assert_relative_eq!(out.cov()[(1, 1)], (-1f64).exp() / 4.0, epsilon = 1e-14);
        assert_relative_eq!(out.cov()[(0, 0)], 1f64.exp() / 4.0, epsilon = 1e-14);
    }

    #[test]
    fn two_mode_squeezer_reproduces_tmsv() {
        for &r in &[0.0, 0.3, 1.0, 2.5] {
            let out = GaussianChannel::two_mode_squeeze(2, 0, 1, r)
                .unwrap()
                .apply(&GaussianState::vacuum(2).unwrap())
                .unwrap();
            let expected = GaussianState::two_mode_squeezed_vacuum(r);
            assert!(max_abs_diff(out.cov(), expected.cov()) < 1e-12 * (2.0 * r).cosh());
        }
        assert!(close(
            &GaussianChannel::two_mode_squeeze(2, 0, 1, 0.0).unwrap(),
            &GaussianChannel::identity(2),
            0.0
        ));
    }

    #[test]
    fn displacement() {
        let ch = GaussianChannel::displace_mode(1, 0, 1.0, 0.0).unwrap();
        let out = ch.apply(&GaussianState::vacuum(1).unwrap()).unwrap();
        assert_eq!(out, GaussianState::coherent(1.0, 0.0));
        let a = GaussianChannel::displace(DVector::from_vec(vec![0.5, -1.0])).unwrap();
        let b = GaussianChannel::displace(DVector::from_vec(vec![0.25, 2.0])).unwrap();
        let ab = a.compose(&b).unwrap();
        assert_eq!(ab.displacement(), &DVector::from_vec(vec![0.75, 1.0]));
        assert!(close(
            &GaussianChannel::displace(DVector::zeros(4)).unwrap(),
            &GaussianChannel::identity(2),
            0.0
        ));
    }

    #[test]
    fn n_splitter_basics() {
        let two = GaussianChannel::n_splitter(2).unwrap();
        assert!(close(&two, &balanced_beam_splitter(2, 0, 1).unwrap(), 1e-15));
        for n in 2..7 {
            let s = GaussianChannel::n_splitter(n).unwrap();
            let sts = s.matrix().transpose() * s.matrix();
            assert!(max_abs_diff(&sts, &DMatrix::identity(2 * n, 2 * n)) < TOL_SYMPLECTIC);
            assert!(s.symplectic_defect() < TOL_SYMPLECTIC);
            // Mode 0 is spread evenly over every output.
            for k in 0..n {
                assert_relative_eq!(s.matrix()[(2 * k, 0)].powi(2), 1.0 / n as f64, epsilon = 1e-12);
            }
        }
        assert!(GaussianChannel::n_splitter(1).is_err());
    }

    #[test]
    fn fourier_is_negative_quarter_turn() {
        let f = GaussianChannel::fourier(2, 1).unwrap();
        let rot = GaussianChannel::phase_shift(2, 1, -FRAC_PI_2).unwrap();
        assert!(close(&f, &rot, 1e-15));
        let f4 = f.compose(&f).unwrap().compose(&f).unwrap().compose(&f).unwrap();
        assert!(close(&f4, &GaussianChannel::identity(2), 0.0));
    }

    #[test]
    fn lubo_identity_and_two_mode_squeezer() {
        let c = |re: f64| Complex::new(re, 0.0);
        let id = GaussianChannel::from_lubo(
            &DMatrix::identity(2, 2),
            &DMatrix::zeros(2, 2),
            &DVector::zeros(2),
        )
        .unwrap();
        assert!(close(&id, &GaussianChannel::identity(2), 0.0));

        let r: f64 = 0.7;
        let a = DMatrix::from_diagonal_element(2, 2, c(r.cosh()));
        let b = DMatrix::from_row_slice(2, 2, &[c(0.0), c(r.sinh()), c(r.sinh()), c(0.0)]);
        let lubo = GaussianChannel::from_lubo(&a, &b, &DVector::zeros(2)).unwrap();
        assert!(close(&lubo, &GaussianChannel::two_mode_squeeze(2, 0, 1, r).unwrap(), 1e-15));

        // Amplifier a' = √2 a + z†, z' = √2 z + a†.
        let a = DMatrix::from_diagonal_element(2, 2, c(2f64.sqrt()));
        let b = DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]);
        let amp = GaussianChannel::from_lubo(&a, &b, &DVector::zeros(2)).unwrap();
        let tms = GaussianChannel::two_mode_squeeze(2, 0, 1, 2f64.sqrt().acosh()).unwrap();
        assert!(close(&amp, &tms, 1e-14));

        // Phase and displacement: a' = e^{iφ} a + γ.
        let phi: f64 = 0.4;
        let a = DMatrix::from_element(1, 1, Complex::from_polar(1.0, phi));
        let g = DVector::from_element(1, Complex::new(0.3, -0.2));
        let ch = GaussianChannel::from_lubo(&a, &DMatrix::zeros(1, 1), &g).unwrap();
        let expected = GaussianChannel::displace_mode(1, 0, 0.3, -0.2)
            .unwrap()
            .compose(&GaussianChannel::phase_shift(1, 0, -phi).unwrap())
            .unwrap();
        assert!(close(&ch, &expected, 1e-15));
    }

    #[test]
    fn lubo_rejects_non_canonical_maps() {
        let a = DMatrix::from_diagonal_element(1, 1, Complex::new(2.0, 0.0));
        let err = GaussianChannel::from_lubo(&a, &DMatrix::zeros(1, 1), &DVector::zeros(1));
        match err {
            Err(Error::LuboCondition { residual }) => assert_relative_eq!(residual, 3.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn new_rejects_non_symplectic() {
        let s = DMatrix::identity(2, 2) * 2.0;
        assert!(GaussianChannel::new(s, DVector::zeros(2)).is_err());
    }

    #[test]
    fn compose_dimension_mismatch() {
        let a = GaussianChannel::identity(1);
        let b = GaussianChannel::identity(2);
        assert!(matches!(a.compose(&b), Err(Error::DimensionMismatch { .. })));
        assert!(a.apply(&GaussianState::vacuum(2).unwrap()).is_err());
    }

    #[test]
    fn loss_mixes_in_vacuum() {
        let st = GaussianState::squeezed_vacuum(1.0).tensor(&GaussianState::coherent(2.0, 0.0));
        let out = lossy(&st, 0, 0.8).unwrap();
        assert_relative_eq!(
            out.cov()[(0, 0)],
            0.8 * (-2f64).exp() / 4.0 + 0.2 / 4.0,
            epsilon = 1e-14
        );
        assert_eq!(out.n_modes(), 2);
        let out = lossy(&st, 1, 0.25).unwrap();
        assert_relative_eq!(out.mean()[2], 1.0, epsilon = 1e-14);
        assert!(lossy(&st, 0, 1.5).is_err());
    }
}
