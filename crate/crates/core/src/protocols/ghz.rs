use nalgebra::{DMatrix, DVector};

use super::squeezing;
use crate::error::{Error, Result};
use crate::linalg::VACUUM_VARIANCE;
use crate::ops::GaussianChannel;
use crate::state::GaussianState;

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need at least two modes, got {n}")));
    }
    Ok(())
}

/// GHZ-type state: a momentum-squeezed vacuum (`r1`, mode 0) and `N-1`
/// position-squeezed vacua (`r2`) sent through an N-splitter.
pub fn ghz_network(n: usize, r1: f64, r2: f64) -> Result<GaussianState> {
    check_n(n)?;
    let (r1, r2) = (squeezing(r1)?, squeezing(r2)?);
    let mut input = GaussianState::squeezed_vacuum(-r1);
    for _ in 1..n {
        input = input.tensor(&GaussianState::squeezed_vacuum(r2));
    }
    GaussianChannel::n_splitter(n)?.apply(&input)
}

/// Closed-form covariance of [`ghz_network`]: `x` variances `a/4`, `p`
/// variances `b/4`, `x-x` covariances `c/4`, `p-p` covariances `d/4` with
///
/// `a = e^{2r1}/N + (N-1)/N e^{-2r2}`, `b = e^{-2r1}/N + (N-1)/N e^{2r2}`,
/// `c = (e^{2r1} - e^{-2r2})/N`, `d = (e^{-2r1} - e^{2r2})/N`.
pub fn ghz_covariance(n: usize, r1: f64, r2: f64) -> Result<DMatrix<f64>> {
    check_n(n)?;
    let (r1, r2) = (squeezing(r1)?, squeezing(r2)?);
    let nf = n as f64;
    let (e1, e2) = ((2.0 * r1).exp(), (2.0 * r2).exp());
    let a = e1 / nf + (nf - 1.0) / nf / e2;
    let b = 1.0 / (e1 * nf) + (nf - 1.0) / nf * e2;
    let c = (e1 - 1.0 / e2) / nf;
    let d = (1.0 / e1 - e2) / nf;
    Ok(DMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let same_mode = i / 2 == j / 2;
        let v = match (i % 2, j % 2, same_mode) {
            (0, 0, true) => a,
            (1, 1, true) => b,
            (0, 0, false) => c,
            (1, 1, false) => d,
            _ => 0.0,
        };
        VACUUM_VARIANCE * v
    }))
}

/// `ghz_covariance` as a zero-mean state.
pub fn ghz_state(n: usize, r1: f64, r2: f64) -> Result<GaussianState> {
    GaussianState::new(DVector::zeros(2 * n), ghz_covariance(n, r1, r2)?)
}

/// Value of `Var(x_k - x_l) + Var(p_1 + ... + p_N)` on the ideal GHZ state:
/// `e^{-2r2}/2 + N e^{-2r1}/4`.
pub fn ghz_witness_value(n: usize, r1: f64, r2: f64) -> Result<f64> {
    check_n(n)?;
    Ok((-2.0 * squeezing(r2)?).exp() / 2.0 + n as f64 * (-2.0 * squeezing(r1)?).exp() / 4.0)
}

/// Equal squeezing `r1 = r2 = r` for which the three-mode witness takes the
/// value `target`.
pub fn ghz_squeezing_for_witness(target: f64) -> Result<f64> {
    if !(target > 0.0 && target <= 1.25) {
        return Err(Error::InvalidArgument(format!("witness value {target} outside (0, 5/4]")));
    }
    Ok((1.25 / target).ln() / 2.0)
}

/// The `r1` that maximises multipartite entanglement at fixed photon number
/// for given `r2`:
/// `e^{2r1} = (N-1) sinh 2r2 + √((N-1)² sinh² 2r2 + 1)`.
pub fn bowen_relation(n: usize, r2: f64) -> Result<f64> {
    check_n(n)?;
    let s = (n as f64 - 1.0) * (2.0 * squeezing(r2)?).sinh();
    Ok((s + (s * s + 1.0).sqrt()).ln() / 2.0)
}
