use serde::Serialize;

use super::squeezing;
use crate::entanglement::{entropy_from_nbar, LogBase};
use crate::error::{Error, Result};
use crate::numeric::find_root;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Photon-number states with a thermal distribution.
    Number,
    /// Coherent states with heterodyne detection.
    Coherent,
    /// Quadrature-squeezed states with homodyne detection.
    Squeezed,
    /// Modulated half of a two-mode squeezed resource.
    DenseCoding,
}

/// Capacity in nats per use at a mean photon number `nbar`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CapacityPoint {
    pub nbar: f64,
    pub capacity: f64,
    pub scheme: Scheme,
}

fn nbar_ok(nbar: f64) -> Result<()> {
    if !(nbar >= 0.0) || !nbar.is_finite() {
        return Err(Error::InvalidArgument(format!("mean photon number must be >= 0, got {nbar}")));
    }
    Ok(())
}

pub fn capacity(scheme: Scheme, nbar: f64) -> Result<CapacityPoint> {
    nbar_ok(nbar)?;
    let capacity = match scheme {
        Scheme::Number => entropy_from_nbar(nbar, LogBase::Nats)?,
        Scheme::Coherent => nbar.ln_1p(),
        Scheme::Squeezed => (2.0 * nbar).ln_1p(),
        Scheme::DenseCoding => (nbar + nbar * nbar).ln_1p(),
    };
    Ok(CapacityPoint { nbar, capacity, scheme })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelCapacities {
    pub nbar: f64,
    /// `(1+n̄) ln(1+n̄) - n̄ ln n̄`.
    pub number: f64,
    /// `ln(1+n̄)`.
    pub coherent: f64,
    /// `ln(1+2n̄)`.
    pub squeezed: f64,
}

pub fn channel_capacities(nbar: f64) -> Result<ChannelCapacities> {
    Ok(ChannelCapacities {
        nbar,
        number: capacity(Scheme::Number, nbar)?.capacity,
        coherent: capacity(Scheme::Coherent, nbar)?.capacity,
        squeezed: capacity(Scheme::Squeezed, nbar)?.capacity,
    })
}

/// Dense-coding capacity and the split of `n̄ = σ² + sinh² r` between signal
/// modulation and squeezing that attains it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DenseCoding {
    pub nbar: f64,
    /// `ln(1 + n̄ + n̄²)`.
    pub capacity: f64,
    pub sigma2: f64,
    pub r: f64,
}

/// Optimal squeezing for a photon budget: `n̄ = e^r sinh r`.
pub fn dense_coding_squeezing(nbar: f64) -> Result<f64> {
    nbar_ok(nbar)?;
    Ok((2.0 * nbar).ln_1p() / 2.0)
}

/// Photon number `e^r sinh r` spent at the optimal split for squeezing `r`.
pub fn dense_coding_nbar(r: f64) -> f64 {
    r.exp() * r.sinh()
}

pub fn dense_coding_capacity(nbar: f64) -> Result<DenseCoding> {
    let r = dense_coding_squeezing(nbar)?;
    Ok(DenseCoding {
        nbar,
        capacity: capacity(Scheme::DenseCoding, nbar)?.capacity,
        sigma2: r.sinh() * r.cosh(),
        r,
    })
}

fn mutual_info_args(sigma2: f64, r: f64) -> Result<f64> {
    if !(sigma2 >= 0.0) {
        return Err(Error::InvalidArgument(format!("signal variance must be >= 0, got {sigma2}")));
    }
    squeezing(r)
}

/// `ln(1 + σ² e^{2r})`.
pub fn dense_coding_mutual_info(sigma2: f64, r: f64) -> Result<f64> {
    let r = mutual_info_args(sigma2, r)?;
    Ok((sigma2 * (2.0 * r).exp()).ln_1p())
}

/// The same mutual information by direct quadrature of
/// `∫∫ p(α) p(β|α) ln(p(β|α)/p(β))`.
///
/// Signal and readout factor into two identical real components. Each is a
/// 2D integral over standard normals `z₁, z₂` (`a = s_a z₁`,
/// `b = a/√2 + s_n z₂`), evaluated by the trapezoid rule on `[-10, 10]²`.
pub fn dense_coding_mutual_info_numeric(sigma2: f64, r: f64) -> Result<f64> {
    let r = mutual_info_args(sigma2, r)?;
    if sigma2 == 0.0 {
        return Ok(0.0);
    }
    let s_a2 = sigma2 / 2.0;
    let s_n2 = (-2.0 * r).exp() / 4.0;
    let s_b2 = s_a2 / 2.0 + s_n2;
    let (s_a, s_n) = (s_a2.sqrt(), s_n2.sqrt());
    let ln_gauss = |x: f64, var: f64| -0.5 * (2.0 * std::f64::consts::PI * var).ln() - x * x / (2.0 * var);
    let phi = |z: f64| (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt();

    let steps = 800;
    let h = 20.0 / steps as f64;
    let nodes: Vec<(f64, f64)> = (0..=steps)
        .map(|k| {
            let z = -10.0 + h * k as f64;
            let w = if k == 0 || k == steps { 0.5 } else { 1.0 };
            (z, w * h * phi(z))
        })
        .collect();
    let mut component = 0.0;
    for &(z1, w1) in &nodes {
        let a = s_a * z1;
        for &(z2, w2) in &nodes {
            let b = a / std::f64::consts::SQRT_2 + s_n * z2;
            let ln_ratio = ln_gauss(s_n * z2, s_n2) - ln_gauss(b, s_b2);
            component += w1 * w2 * ln_ratio;
        }
    }
    Ok(2.0 * component)
}

/// Squeezing at which dense coding (with `n̄ = e^r sinh r`) first matches the
/// given single-channel scheme.
pub fn dense_coding_break_even(against: Scheme) -> Result<f64> {
    if against == Scheme::DenseCoding {
        return Err(Error::InvalidArgument("break-even against itself is undefined".into()));
    }
    let gap = |r: f64| {
        let nbar = dense_coding_nbar(r);
        let dense = (nbar + nbar * nbar).ln_1p();
        dense - capacity(against, nbar).map(|c| c.capacity).unwrap_or(f64::NAN)
    };
    find_root(gap, 0.05, 3.0, 1e-14)
}
