//! Separability criteria and entanglement measures for Gaussian states.
//!
//! Partial transposition acts on the covariance matrix by flipping the sign
//! of the momenta of one party. For `1 × N` bipartitions of Gaussian states a
//! negative partial transpose (NPT) is necessary and sufficient for
//! entanglement; for two modes Simon's inequality is the same test written in
//! terms of the 2×2 blocks of the covariance matrix.

use nalgebra::{DMatrix, DVector, Matrix2};
use serde::Serialize;

use crate::error::{check_mode, Error, Result};
use crate::linalg::{symplectic_eigenvalues, uncertainty_min_eigenvalue, VACUUM_VARIANCE};
use crate::report::CriterionReport;
use crate::state::{GaussianState, TOL_PSD};

/// Flips the momenta of `modes`. The result is generally unphysical.
pub fn partial_transpose(state: &GaussianState, modes: &[usize]) -> Result<GaussianState> {
    if modes.is_empty() {
        return Err(Error::InvalidArgument("partial transpose needs at least one mode".into()));
    }
    let n = state.n_modes();
    let mut gamma = DVector::from_element(2 * n, 1.0);
    for &k in modes {
        check_mode(k, n)?;
        gamma[2 * k + 1] = -1.0;
    }
    let mean = state.mean().component_mul(&gamma);
    let cov = DMatrix::from_fn(2 * n, 2 * n, |r, c| gamma[r] * gamma[c] * state.cov()[(r, c)]);
    GaussianState::new(mean, cov)
}

/// Peres-Horodecki test: the state is NPT when the partially transposed
/// covariance violates the uncertainty principle.
///
/// `lhs` is the smallest eigenvalue of `Ṽ + (i/4) Λ`, `bound` is `-τ_psd`.
pub fn npt_test(state: &GaussianState, party: &[usize]) -> Result<CriterionReport> {
    let pt = partial_transpose(state, party)?;
    Ok(CriterionReport::new(
        "npt",
        uncertainty_min_eigenvalue(pt.cov()),
        -TOL_PSD,
    ))
}

fn require_modes(state: &GaussianState, n: usize) -> Result<()> {
    if state.n_modes() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: state.n_modes(),
        });
    }
    Ok(())
}

fn block(v: &DMatrix<f64>, r: usize, c: usize) -> Matrix2<f64> {
    Matrix2::new(
        v[(2 * r, 2 * c)],
        v[(2 * r, 2 * c + 1)],
        v[(2 * r + 1, 2 * c)],
        v[(2 * r + 1, 2 * c + 1)],
    )
}

/// Simon's two-mode separability inequality
///
/// `det A det B + (1/16 - |det C|)² - Tr(A J C J B J Cᵀ J) ≥ (det A + det B)/16`.
///
/// `lhs` is the left-hand side, `bound` the right-hand side.
pub fn simon_test(state: &GaussianState) -> Result<CriterionReport> {
    require_modes(state, 2)?;
    let v = state.cov();
    let (a, b, c) = (block(v, 0, 0), block(v, 1, 1), block(v, 0, 1));
    let j = Matrix2::new(0.0, 1.0, -1.0, 0.0);
    let (da, db, dc) = (a.determinant(), b.determinant(), c.determinant());
    let trace = (a * j * c * j * b * j * c.transpose() * j).trace();
    let q = VACUUM_VARIANCE * VACUUM_VARIANCE;
    let lhs = da * db + (q - dc.abs()).powi(2) - trace;
    Ok(CriterionReport::new("simon", lhs, q * (da + db)))
}

/// Duan's sum criterion with `u = |ā| x1 - x2/ā`, `v = |ā| p1 + p2/ā`:
/// separable states obey `Var u + Var v ≥ ā²/2 + 1/(2ā²)`.
pub fn duan_test(state: &GaussianState, a_bar: f64) -> Result<CriterionReport> {
    require_modes(state, 2)?;
    if a_bar == 0.0 || !a_bar.is_finite() {
        return Err(Error::InvalidArgument("Duan parameter must be finite and nonzero".into()));
    }
    let (var_u, var_v) = duan_variances(state, a_bar);
    let a2 = a_bar * a_bar;
    Ok(CriterionReport::new("duan", var_u + var_v, a2 / 2.0 + 1.0 / (2.0 * a2)))
}

fn duan_variances(state: &GaussianState, a_bar: f64) -> (f64, f64) {
    let h = DVector::from_vec(vec![a_bar.abs(), -1.0 / a_bar]);
    let g = DVector::from_vec(vec![a_bar.abs(), 1.0 / a_bar]);
    (
        combination_variance(state, &h, 0),
        combination_variance(state, &g, 1),
    )
}

/// Tan's product criterion with `ā = 1`: separable states obey
/// `Var(x1 - x2) · Var(p1 + p2) ≥ 1/4`.
pub fn tan_test(state: &GaussianState) -> Result<CriterionReport> {
    require_modes(state, 2)?;
    let (var_u, var_v) = duan_variances(state, 1.0);
    Ok(CriterionReport::new("tan", var_u * var_v, 0.25))
}

/// Variance of `Σ_l w_l q_l` where `q` is `x` (`quadrature = 0`) or `p` (`1`).
fn combination_variance(state: &GaussianState, w: &DVector<f64>, quadrature: usize) -> f64 {
    let n = w.len();
    let v = state.cov();
    let mut total = 0.0;
    for k in 0..n {
        for l in 0..n {
            total += w[k] * w[l] * v[(2 * k + quadrature, 2 * l + quadrature)];
        }
    }
    total
}

/// Multi-mode variance witness `Var(Σ h_l x_l) + Var(Σ g_l p_l) ≥ f`.
///
/// `partition` lists groups of modes assumed to be in a product (or mixture
/// of products) across groups; the separable bound is
/// `f = Σ_groups |Σ_{l ∈ group} h_l g_l| / 2`. Singletons give the fully
/// separable bound, `[[n], [k, m]]` the bound for mode `n` split off.
pub fn witness_linear(
    state: &GaussianState,
    h: &[f64],
    g: &[f64],
    partition: &[Vec<usize>],
) -> Result<CriterionReport> {
    let n = state.n_modes();
    if h.len() != n || g.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: if h.len() != n { h.len() } else { g.len() },
        });
    }
    let mut seen = vec![false; n];
    for &k in partition.iter().flatten() {
        check_mode(k, n)?;
        if std::mem::replace(&mut seen[k], true) {
            return Err(Error::InvalidArgument(format!("mode {k} appears in two groups")));
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::InvalidArgument("partition does not cover every mode".into()));
    }
    let hv = DVector::from_column_slice(h);
    let gv = DVector::from_column_slice(g);
    let lhs = combination_variance(state, &hv, 0) + combination_variance(state, &gv, 1);
    let bound = partition
        .iter()
        .map(|group| group.iter().map(|&k| h[k] * g[k]).sum::<f64>().abs())
        .sum::<f64>()
        / 2.0;
    let label = partition
        .iter()
        .map(|grp| grp.iter().map(|k| (k + 1).to_string()).collect::<String>())
        .collect::<Vec<_>>()
        .join("|");
    Ok(CriterionReport::new(format!("witness[{label}]"), lhs, bound))
}

/// The three tripartite inequalities
/// `Var(x_k - x_l) + Var(p_1 + p_2 + p_3) ≥ 1` for the pairs (1,2), (2,3),
/// (3,1). Each is reported against the bipartition that splits off mode `k`.
pub fn tripartite_witnesses(state: &GaussianState) -> Result<Vec<CriterionReport>> {
    require_modes(state, 3)?;
    let g = [1.0, 1.0, 1.0];
    [(0usize, 1usize), (1, 2), (2, 0)]
        .iter()
        .map(|&(k, l)| {
            let mut h = [0.0; 3];
            h[k] = 1.0;
            h[l] = -1.0;
            let rest: Vec<usize> = (0..3).filter(|&m| m != k).collect();
            witness_linear(state, &h, &g, &[vec![k], rest])
        })
        .collect()
}

/// Entanglement class of a three-mode Gaussian state from the pattern of
/// single-mode partial transposes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum ThreeModeClass {
    /// Class 1: every `1 × 2` split is NPT.
    FullyInseparable,
    /// Class 2: only `mode` can be split off.
    OneModeBiseparable { mode: usize },
    /// Class 3: `modes` can each be split off, the remaining one cannot.
    TwoModeBiseparable { modes: [usize; 2] },
    /// Classes 4 and 5: every `1 × 2` split is PPT.
    ThreeModeBiseparableOrSeparable,
}

impl ThreeModeClass {
    pub fn label(&self) -> &'static str {
        match self {
            Self::FullyInseparable => "1",
            Self::OneModeBiseparable { .. } => "2",
            Self::TwoModeBiseparable { .. } => "3",
            Self::ThreeModeBiseparableOrSeparable => "4-or-5",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThreeModeClassification {
    pub class: ThreeModeClass,
    /// `npt[k]`: transposing mode `k` alone yields an unphysical matrix.
    pub npt: [bool; 3],
}

pub fn classify_three_mode(state: &GaussianState) -> Result<ThreeModeClassification> {
    require_modes(state, 3)?;
    let mut npt = [false; 3];
    for (k, flag) in npt.iter_mut().enumerate() {
        *flag = npt_test(state, &[k])?.violated();
    }
    let ppt: Vec<usize> = (0..3).filter(|&k| !npt[k]).collect();
    let class = match ppt.as_slice() {
        [] => ThreeModeClass::FullyInseparable,
        [m] => ThreeModeClass::OneModeBiseparable { mode: *m },
        [a, b] => ThreeModeClass::TwoModeBiseparable { modes: [*a, *b] },
        _ => ThreeModeClass::ThreeModeBiseparableOrSeparable,
    };
    Ok(ThreeModeClassification { class, npt })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum LogBase {
    #[default]
    Nats,
    Bits,
}

impl LogBase {
    fn convert(self, nats: f64) -> f64 {
        match self {
            LogBase::Nats => nats,
            LogBase::Bits => nats / std::f64::consts::LN_2,
        }
    }
}

fn xlnx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// Entropy `(1 + n̄) ln(1 + n̄) - n̄ ln n̄` of a thermal mode; the partial
/// entropy of any pure two-mode state whose reduced mode has `n̄` photons.
pub fn entropy_from_nbar(nbar: f64, base: LogBase) -> Result<f64> {
    if !(nbar >= 0.0) {
        return Err(Error::InvalidArgument(format!("negative photon number {nbar}")));
    }
    Ok(base.convert(xlnx(1.0 + nbar) - xlnx(nbar)))
}

/// Partial von Neumann entropy of the two-mode squeezed vacuum,
/// `cosh²r ln cosh²r - sinh²r ln sinh²r`.
pub fn entropy_tmsv(r: f64, base: LogBase) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::InvalidArgument(format!("negative squeezing {r}")));
    }
    let (c2, s2) = (r.cosh().powi(2), r.sinh().powi(2));
    Ok(base.convert(xlnx(c2) - xlnx(s2)))
}

/// Entanglement, in qunats by default, of the resource made by combining two
/// vacua squeezed by `e^{-r}` on a beam splitter, counted with the mean
/// photon number `n̄ = e^r sinh r`.
pub fn entropy_squeezed_resource(r: f64, base: LogBase) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::InvalidArgument(format!("negative squeezing {r}")));
    }
    entropy_from_nbar(r.exp() * r.sinh(), base)
}

/// Logarithmic negativity (base 2) with respect to transposing `party`:
/// `Σ_j max(0, -log₂(ν̃_j / (1/4)))` over the symplectic eigenvalues of the
/// partially transposed covariance.
pub fn log_negativity(state: &GaussianState, party: &[usize]) -> Result<f64> {
    let pt = partial_transpose(state, party)?;
    Ok(symplectic_eigenvalues(pt.cov())
        .into_iter()
        .map(|nu| (-(nu / VACUUM_VARIANCE).log2()).max(0.0))
        .sum())
}

/// First standard form of a two-mode covariance matrix,
/// `[[a,0,c,0],[0,a,0,c'],[c,0,b,0],[0,c',0,b]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StandardFormI {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub c_prime: f64,
}

impl StandardFormI {
    pub fn covariance(&self) -> DMatrix<f64> {
        let Self { a, b, c, c_prime } = *self;
        #[rustfmt::skip]
        let m = DMatrix::from_row_slice(4, 4, &[
            a, 0.0, c, 0.0,
            0.0, a, 0.0, c_prime,
            c, 0.0, b, 0.0,
            0.0, c_prime, 0.0, b,
        ]);
        m
    }

    /// Zero-mean state with this covariance; fails if it is unphysical.
    pub fn state(&self) -> Result<GaussianState> {
        GaussianState::physical(DVector::zeros(4), self.covariance())
    }

    /// Simon's inequality specialised to the standard form:
    /// `16(ab - c²)(ab - c'²) ≥ a² + b² + 2|c c'| - 1/16`.
    pub fn simon_separable(&self) -> bool {
        let Self { a, b, c, c_prime } = *self;
        16.0 * (a * b - c * c) * (a * b - c_prime * c_prime)
            >= a * a + b * b + 2.0 * (c * c_prime).abs() - 1.0 / 16.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn tmsv(r: f64) -> GaussianState {
        GaussianState::two_mode_squeezed_vacuum(r)
    }

    #[test]
    fn transpose_twice_is_identity() {
        let st = tmsv(0.6).tensor(&GaussianState::coherent(0.2, 0.5));
        let twice = partial_transpose(&partial_transpose(&st, &[0, 2]).unwrap(), &[0, 2]).unwrap();
        assert_eq!(twice, st);
        assert!(partial_transpose(&st, &[]).is_err());
        assert!(partial_transpose(&st, &[3]).is_err());
    }

    #[test]
    fn tmsv_partial_transpose_min_eigenvalue() {
        for &r in &[0.1, 0.5, 1.0, 2.0] {
            let rep = npt_test(&tmsv(r), &[1]).unwrap();
            assert_relative_eq!(rep.lhs, ((-2.0 * r).exp() - 1.0) / 4.0, epsilon = 1e-12);
            assert!(rep.violated());
        }
        assert!(!npt_test(&GaussianState::vacuum(2).unwrap(), &[0]).unwrap().violated());
    }

    #[test]
    fn noisy_tmsv_crossing() {
        let r: f64 = 0.5;
        let crossing = 1.0 - (-2.0 * r).exp();
        let noisy = |mu: f64| {
            let st = tmsv(r);
            let cov = st.cov() + DMatrix::identity(4, 4) * (mu / 4.0);
            GaussianState::new(DVector::zeros(4), cov).unwrap()
        };
        let at = npt_test(&noisy(crossing), &[0]).unwrap();
        assert!(at.lhs.abs() < 1e-12);
        assert!(npt_test(&noisy(crossing - 1e-3), &[0]).unwrap().violated());
        assert!(!npt_test(&noisy(crossing + 1e-3), &[0]).unwrap().violated());
        assert!(simon_test(&noisy(crossing - 1e-3)).unwrap().violated());
        assert!(!simon_test(&noisy(crossing + 1e-3)).unwrap().violated());
    }

    #[test]
    fn simon_verdicts() {
        assert!(simon_test(&tmsv(1.0)).unwrap().violated());
        let vac = simon_test(&GaussianState::vacuum(2).unwrap()).unwrap();
        assert!(!vac.violated());
        assert!(vac.margin.abs() < 1e-15);
        assert!(simon_test(&GaussianState::vacuum(3).unwrap()).is_err());
    }

    #[test]
    fn standard_form_agrees_with_general_simon() {
        for &r in &[0.0f64, 0.2, 1.0] {
            let c = (2.0 * r).cosh() / 4.0;
            let s = (2.0 * r).sinh() / 4.0;
            let sf = StandardFormI { a: c, b: c, c: s, c_prime: -s };
            let st = sf.state().unwrap();
            assert_eq!(st.cov(), tmsv(r).cov());
            assert_eq!(sf.simon_separable(), r == 0.0);
            assert_eq!(!simon_test(&st).unwrap().violated(), r == 0.0);
        }
        assert!(StandardFormI { a: 0.1, b: 0.1, c: 0.0, c_prime: 0.0 }.state().is_err());
    }

    #[test]
    fn duan_values() {
        for &r in &[0.0, 0.4, 1.3] {
            let rep = duan_test(&tmsv(r), 1.0).unwrap();
            assert_relative_eq!(rep.lhs, (-2.0 * r).exp(), epsilon = 1e-12);
            assert_eq!(rep.bound, 1.0);
            assert_eq!(rep.violated(), r > 0.0);
        }
        let thermal = GaussianState::thermal(0.7).unwrap().tensor(&GaussianState::thermal(0.2).unwrap());
        let rep = duan_test(&thermal, 1.0).unwrap();
        assert_relative_eq!(rep.lhs, 2.0 * (2.4 / 4.0 + 1.4 / 4.0), epsilon = 1e-12);
        assert!(!rep.violated());
        assert!(duan_test(&thermal, 0.0).is_err());
        // ā = 2 on the vacuum: 4·(1/4)·2 + (1/4)·(1/4)·2 = 2 + 1/8 = bound.
        let vac = duan_test(&GaussianState::vacuum(2).unwrap(), 2.0).unwrap();
        assert_relative_eq!(vac.lhs, vac.bound, epsilon = 1e-15);
    }

    #[test]
    fn tan_values() {
        let rep = tan_test(&tmsv(1.0)).unwrap();
        assert_relative_eq!(rep.lhs, (-4f64).exp() / 4.0, epsilon = 1e-14);
        assert!(rep.violated());
        let vac = tan_test(&GaussianState::vacuum(2).unwrap()).unwrap();
        assert_eq!(vac.lhs, 0.25);
        assert!(!vac.violated());
        let sq = GaussianState::squeezed_vacuum(0.8).tensor(&GaussianState::squeezed_vacuum(0.8));
        assert!(!tan_test(&sq).unwrap().violated());
    }

    #[test]
    fn witness_bounds() {
        let st = tmsv(0.5);
        let rep = witness_linear(&st, &[1.0, -1.0], &[1.0, 1.0], &[vec![0], vec![1]]).unwrap();
        assert_eq!(rep.bound, 1.0);
        assert_relative_eq!(rep.lhs, (-1f64).exp(), epsilon = 1e-12);
        let whole = witness_linear(&st, &[1.0, -1.0], &[1.0, 1.0], &[vec![0, 1]]).unwrap();
        assert_eq!(whole.bound, 0.0);

        let vac = GaussianState::vacuum(3).unwrap();
        let full = witness_linear(&vac, &[1.0; 3], &[1.0; 3], &[vec![0], vec![1], vec![2]]).unwrap();
        assert_eq!(full.lhs, 1.5);
        assert_eq!(full.bound, 1.5);
        assert!(!full.violated());

        assert!(witness_linear(&vac, &[1.0; 2], &[1.0; 3], &[vec![0, 1, 2]]).is_err());
        assert!(witness_linear(&vac, &[1.0; 3], &[1.0; 3], &[vec![0, 1]]).is_err());
        assert!(witness_linear(&vac, &[1.0; 3], &[1.0; 3], &[vec![0, 1], vec![1, 2]]).is_err());
    }

    #[test]
    fn classification() {
        let vac = classify_three_mode(&GaussianState::vacuum(3).unwrap()).unwrap();
        assert_eq!(vac.class, ThreeModeClass::ThreeModeBiseparableOrSeparable);
        let st = tmsv(0.7).tensor(&GaussianState::vacuum(1).unwrap());
        let c = classify_three_mode(&st).unwrap();
        assert_eq!(c.class, ThreeModeClass::OneModeBiseparable { mode: 2 });
        assert_eq!(c.class.label(), "2");
        assert_eq!(c.npt, [true, true, false]);
    }

    #[test]
    fn entropies() {
        assert_eq!(entropy_tmsv(0.0, LogBase::Nats).unwrap(), 0.0);
        for &r in &[0.1, 0.7, 2.0] {
            let direct = entropy_tmsv(r, LogBase::Nats).unwrap();
            let via_nbar = entropy_from_nbar(r.sinh().powi(2), LogBase::Nats).unwrap();
            assert_relative_eq!(direct, via_nbar, epsilon = 1e-12);
            assert_relative_eq!(
                entropy_tmsv(r, LogBase::Bits).unwrap(),
                direct / std::f64::consts::LN_2,
                epsilon = 1e-12
            );
        }
        assert_relative_eq!(entropy_squeezed_resource(1.151, LogBase::Nats).unwrap(), 2.607, epsilon = 1e-3);
        assert!(entropy_tmsv(-0.1, LogBase::Nats).is_err());
    }

    #[test]
    fn log_negativity_of_tmsv() {
        let mut last = 0.0;
        for k in 0..20 {
            let r = 0.15 * k as f64;
            let ln = log_negativity(&tmsv(r), &[1]).unwrap();
            assert_relative_eq!(ln, 2.0 * r / std::f64::consts::LN_2, epsilon = 1e-9);
            assert!(ln >= last - 1e-12);
            last = ln;
        }
        let prod = GaussianState::squeezed_vacuum(0.5).tensor(&GaussianState::thermal(1.0).unwrap());
        assert!(log_negativity(&prod, &[0]).unwrap().abs() < 1e-12);
    }
}
