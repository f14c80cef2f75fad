//! Discrete moments of per-zero statistics against Gaussian predictions.
//!
//! For a statistic s(γ) evaluated at every zero ordinate γ ≤ T, the k-th
//! discrete moment is the plain sum Σ s(γ)^k — sums, not averages, so the
//! predictions carry the zero count N(T) explicitly. Two prediction families
//! are provided: the prime-polynomial main terms (explicit even *and* odd
//! main terms for Re P_X) and the centered log-modulus main terms (Gaussian
//! even moments β_k·N(T)·Ψ^{k/2}, vanishing odd mains, factorial-growth
//! error shapes). The Gaussian moment coefficients β_r = r!/(2^r·(r/2)!) are
//! computed in exact integer arithmetic and only then rounded.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::kahan::KahanSum;
use crate::zeros::ZeroSet;
use crate::{Error, Result};

/// Largest Gaussian-moment index supported by [`beta_coeff`].
const MAX_BETA_INDEX: u32 = 40;

/// Largest moment order accepted by [`moment_suite`]; beyond this the
/// empirical sums are dominated by the extreme tail of whatever sample
/// happens to be loaded and stop estimating anything.
const MAX_SUITE_ORDER: u32 = 8;

/// One empirical moment paired with its predicted main term.
#[derive(Debug, Clone, Serialize)]
pub struct MomentReport {
    /// Moment order.
    pub k: u32,
    /// Σ over zeros of statistic^k (a sum, not an average).
    pub empirical: f64,
    /// Predicted main term for this order.
    pub predicted_main: f64,
    /// Scale of the first omitted term, with unit constants.
    pub predicted_error_scale: f64,
    /// empirical / predicted_main, or 0 when the predicted main vanishes.
    pub ratio: f64,
}

/// Which family of predicted main terms a [`moment_suite`] run is compared
/// against.
#[derive(Debug, Clone, Copy, Serialize)]
pub enum MomentPredictions {
    /// Prime-polynomial predictions for Re P_X(γ+v): even main terms
    /// β_k·N(T)·Ψ^{k/2} and the explicit odd main term with its
    /// sine-difference factor.
    PrimePolynomial { t: f64, x: f64, v: f64, psi: f64 },
    /// Centered log-modulus predictions: Gaussian even main terms, zero odd
    /// mains, and the factorial-growth error shapes (unit constants).
    CenteredLogModulus { psi: f64 },
}

fn factorial_big(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// β_r = r!/(2^r·(r/2)!) as an exact rational.
fn beta_rational(r: u32) -> BigRational {
    let numerator = factorial_big(r);
    let denominator = BigInt::from(2u32).pow(r) * factorial_big(r / 2);
    BigRational::new(numerator, denominator)
}

/// Gaussian moment coefficient β_r = r!/(2^r·(r/2)!) for even r in [2, 40],
/// computed exactly in integer arithmetic before the final rounding.
pub fn beta_coeff(r: u32) -> Result<f64> {
    if r < 2 || r > MAX_BETA_INDEX || r % 2 != 0 {
        return Err(Error::Domain(format!(
            "Gaussian moment coefficient needs an even index in [2, {MAX_BETA_INDEX}], got {r}"
        )));
    }
    beta_rational(r)
        .to_f64()
        .ok_or_else(|| Error::Domain(format!("beta coefficient for r = {r} is not representable")))
}

/// Σ v_i^k with compensated accumulation.
///
/// This is the raw sum over the sample — the predictions carry the sample
/// size — so scaling the values by c scales the moment by c^k exactly.
pub fn empirical_moment(values: &[f64], k: u32) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::Domain(
            "empirical moment of an empty sample is undefined".into(),
        ));
    }
    if k == 0 {
        return Err(Error::Domain("moment order must be at least 1".into()));
    }
    let mut sum = KahanSum::new();
    for &v in values {
        sum.add(v.powi(k as i32));
    }
    Ok(sum.value())
}

/// Predicted even moment β_k·N_T·Ψ^{k/2} and the scale k²·β_k·N_T·Ψ^{(k−4)/2}
/// of its first correction.
pub fn predicted_even_moment(k: u32, n_t: f64, psi: f64) -> Result<(f64, f64)> {
    if k % 2 != 0 {
        return Err(Error::Domain(format!(
            "even-moment prediction needs even k, got {k}"
        )));
    }
    if !(n_t.is_finite() && n_t >= 0.0) || !(psi.is_finite() && psi >= 0.0) {
        return Err(Error::Domain(format!(
            "even-moment prediction needs finite nonnegative N_T and psi, got {n_t}, {psi}"
        )));
    }
    let beta = beta_coeff(k)?;
    let main = beta * n_t * psi.powi((k / 2) as i32);
    let error_scale = (k as f64).powi(2) * beta * n_t * psi.powi((k as i32 - 4) / 2);
    Ok((main, error_scale))
}

/// Predicted odd moment of Re P_X(γ+v),
/// −(β_{k+1}/π)·(sin(2v·logX) − sin(v·log2))/v·T·Ψ^{(k−1)/2}, with the
/// sine-difference factor replaced by its limit 2·logX − log2 at v = 0,
/// and the scale k²·β_{k+1}·T·logX·Ψ^{(k−3)/2} of its first correction.
pub fn predicted_odd_moment(k: u32, t: f64, x: f64, v: f64, psi: f64) -> Result<(f64, f64)> {
    if k % 2 != 1 {
        return Err(Error::Domain(format!(
            "odd-moment prediction needs odd k, got {k}"
        )));
    }
    if !(t.is_finite() && t >= 2.0) {
        return Err(Error::Domain(format!(
            "odd-moment prediction needs a finite height T >= 2, got {t}"
        )));
    }
    if !(x.is_finite() && x > 1.0) {
        return Err(Error::Domain(format!(
            "odd-moment prediction needs a finite cutoff X > 1, got {x}"
        )));
    }
    if !v.is_finite() || !(psi.is_finite() && psi >= 0.0) {
        return Err(Error::Domain(format!(
            "odd-moment prediction needs finite v and nonnegative psi, got {v}, {psi}"
        )));
    }
    let beta_next = beta_coeff(k + 1)?;
    let ln_x = x.ln();
    let factor = if v == 0.0 {
        2.0 * ln_x - 2f64.ln()
    } else {
        ((2.0 * v * ln_x).sin() - (v * 2f64.ln()).sin()) / v
    };
    let main = -(beta_next / std::f64::consts::PI) * factor * t * psi.powi(((k - 1) / 2) as i32);
    let error_scale =
        (k as f64).powi(2) * beta_next * t * ln_x * psi.powi((k as i32 - 3) / 2);
    Ok((main, error_scale))
}

/// Evaluate the statistic at every ordinate and pair the empirical moments
/// k = 1…k_max with the selected predictions.
///
/// Statistic failures abort the suite; restrict the zero set first if the
/// statistic is only feasible on part of it.
pub fn moment_suite<F>(
    zeros: &ZeroSet,
    statistic: F,
    k_max: u32,
    predictions: MomentPredictions,
) -> Result<Vec<MomentReport>>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    if k_max < 1 || k_max > MAX_SUITE_ORDER {
        return Err(Error::Domain(format!(
            "suite order must lie in [1, {MAX_SUITE_ORDER}], got {k_max}"
        )));
    }
    if zeros.is_empty() {
        return Err(Error::EmptyZeroSet);
    }
    let values: Vec<f64> = zeros
        .ordinates()
        .par_iter()
        .map(|&gamma| statistic(gamma))
        .collect::<Result<_>>()?;
    let n_t = zeros.len() as f64;
    (1..=k_max)
        .map(|k| {
            let empirical = empirical_moment(&values, k)?;
            let (predicted_main, predicted_error_scale) = match predictions {
                MomentPredictions::PrimePolynomial { t, x, v, psi } => {
                    if k % 2 == 0 {
                        predicted_even_moment(k, n_t, psi)?
                    } else {
                        predicted_odd_moment(k, t, x, v, psi)?
                    }
                }
                MomentPredictions::CenteredLogModulus { psi } => {
                    if k % 2 == 0 {
                        let (main, _) = predicted_even_moment(k, n_t, psi)?;
                        let scale = (k as f64).powf((3.0 * k as f64 + 2.0) / 2.0)
                            * beta_coeff(k)?
                            * n_t
                            * psi.powf((k as f64 - 1.0) / 2.0);
                        (main, scale)
                    } else {
                        let scale = (k as f64).powf((3.0 * k as f64 + 1.0) / 2.0)
                            * beta_coeff(k + 1)?
                            * n_t
                            * psi.powi(((k - 1) / 2) as i32);
                        (0.0, scale)
                    }
                }
            };
            let ratio = if predicted_main != 0.0 {
                empirical / predicted_main
            } else {
                0.0
            };
            Ok(MomentReport {
                k,
                empirical,
                predicted_main,
                predicted_error_scale,
                ratio,
            })
        })
        .collect()
}
