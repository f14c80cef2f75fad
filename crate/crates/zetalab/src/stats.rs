//! Distribution-level comparisons of per-zero statistics against the
//! standard Gaussian.
//!
//! The central-limit phenomenology studied here says that suitably
//! normalized statistics of the zeros — the real or imaginary part of the
//! prime polynomial, the centered log-modulus, or `log(|ζ′(ρ)|/log T)` —
//! distribute like a standard normal once divided by `√(½ log log T)`:
//!
//! ```text
//!     (1/N(T)) · #{ γ ≤ T : statistic(γ)/scale ∈ [a, b] }
//!         ≈  Φ(b) − Φ(a),
//! ```
//!
//! with `Φ` the Gaussian CDF. [`clt_report`] assembles the full comparison —
//! per-interval masses, a Kolmogorov–Smirnov distance, and a histogram — for
//! any per-zero statistic. Two normalization scales matter at accessible
//! heights: the theorem scale `√(½ log log T)` and the random-model scale
//! `√(Ψ/2)` with `Ψ = Σ_{p ≤ X²} 1/p`. They agree only up to `O(log Ψ)`, a
//! visible gap this low, so the report always carries both.
//!
//! The module also exposes `S(t) = (1/π)·arg ζ(1/2 + it)` (argument by
//! continuous variation from σ = 2), the oscillating term of the
//! Riemann–von Mangoldt counting formula
//! `N(t) = θ(t)/π + 1 + S(t)`: combined with the smooth count it predicts
//! integer zero counts, which is both a consistency check on the zero scan
//! and a statistic in its own right.

use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};
use crate::zeros::ZeroSet;

/// e^e: heights at or below this have `log log T ≤ 1` and no usable
/// Gaussian normalization.
const E_TO_E: f64 = 15.154262241479264;

/// Minimum |Z(t)| for [`s_of_t`]: below this the height is effectively on a
/// zero ordinate and the branch of arg ζ is about to jump.
const S_OF_T_ZERO_CLEARANCE: f64 = 1e-3;

/// Histogram support: normalized values are binned on [−5, 5] with outliers
/// folded into the end bins so the total mass is always one.
const HIST_HALF_RANGE: f64 = 5.0;
/// Number of histogram bins (width 0.2 each over the default support).
const HIST_BINS: usize = 50;

/// Standard Gaussian CDF `Φ(x) = (1/√(2π)) ∫_{−∞}^x e^{−u²/2} du`,
/// evaluated as `erfc(−x/√2)/2` (accurate to ~1e-15 absolute, including the
/// far tails). `Φ(±∞)` is exactly 1 resp. 0.
pub fn gaussian_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / SQRT_2)
}

/// The theorem normalization scale `√(½ log log T)`.
///
/// Requires `T > e^e` so that `log log T > 1`; anything lower makes the
/// normalization degenerate (scale ≤ √½ with the logs barely defined).
pub fn half_loglog_scale(t: f64) -> Result<f64> {
    if !t.is_finite() || t <= E_TO_E {
        return Err(Error::Domain(format!(
            "degenerate normalization: need T > e^e ≈ 15.154 so that log log T > 1, got T = {t}"
        )));
    }
    Ok((0.5 * t.ln().ln()).sqrt())
}

/// Divide each value by `√(½ log log T)`.
///
/// Centering (subtraction of the predicted mean, e.g. the smoothed shift
/// term of the log-modulus) is the caller's job; this is the pure scale
/// step, kept separate so that both centered and raw statistics share it.
pub fn normalize_statistic(values: &[f64], t: f64) -> Result<Vec<f64>> {
    let scale = half_loglog_scale(t)?;
    Ok(values.iter().map(|v| v / scale).collect())
}

/// Sup-norm (Kolmogorov–Smirnov) distance between the empirical CDF of
/// `values` and `reference_cdf`.
///
/// `values` must be nonempty and finite. The reference is any CDF evaluated
/// pointwise; for the Gaussian comparisons pass [`gaussian_cdf`].
pub fn ks_distance<F>(values: &[f64], reference_cdf: F) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if values.is_empty() {
        return Err(Error::Domain(
            "KS distance needs at least one value".into(),
        ));
    }
    if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::Domain(format!(
            "KS distance needs finite values, got {bad}"
        )));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite values are ordered"));
    let n = sorted.len() as f64;
    let mut worst = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let cdf = reference_cdf(x);
        let below = i as f64 / n;
        let above = (i + 1) as f64 / n;
        worst = worst.max(cdf - below).max(above - cdf);
    }
    Ok(worst)
}

/// Which scale divides the raw statistic in a [`clt_report`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ScaleChoice {
    /// `√(½ log log T)` — the normalization of the limit theorems (default).
    HalfLogLog,
    /// `√(Ψ/2)` with `Ψ = Σ_{p ≤ X²} 1/p` — the variance the random model
    /// assigns to `Re P_X`, natural when comparing against that model.
    HalfPsi {
        /// The prime reciprocal sum `Ψ` for the `X` in play.
        psi: f64,
    },
}

/// How a report's statistic was scaled; both candidate scales are recorded
/// because they differ noticeably at accessible heights.
#[derive(Debug, Clone, Serialize)]
pub struct Normalization {
    /// Description of the centering applied upstream (e.g. "none" for the
    /// raw prime polynomial, or the subtracted mean term for log-moduli).
    pub center: String,
    /// The scale actually divided out.
    pub scale: f64,
    /// `√(½ log log T)` at this set's `t_max`.
    pub half_loglog_scale: f64,
    /// `√(Ψ/2)` when a `Ψ` was supplied, `None` otherwise.
    pub half_psi_scale: Option<f64>,
}

/// One interval's empirical mass against the Gaussian prediction.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct IntervalProb {
    /// Left endpoint (may be −∞).
    pub a: f64,
    /// Right endpoint (may be +∞).
    pub b: f64,
    /// `(1/N) · #{γ : normalized statistic ∈ [a, b]}`.
    pub empirical: f64,
    /// `Φ(b) − Φ(a)`.
    pub gaussian: f64,
    /// `empirical − gaussian`.
    pub difference: f64,
}

/// One histogram bin of normalized values.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct HistogramBin {
    /// Left bin edge.
    pub lo: f64,
    /// Right bin edge.
    pub hi: f64,
    /// Fraction of the sample in this bin (end bins absorb outliers).
    pub mass: f64,
}

/// Full distribution-level comparison of a per-zero statistic against the
/// standard Gaussian.
#[derive(Debug, Clone, Serialize)]
pub struct DistributionReport {
    /// Human-readable name of the statistic.
    pub statistic_name: String,
    /// Number of zeros aggregated.
    pub n: usize,
    /// Scale bookkeeping (applied scale plus both candidates).
    pub normalization: Normalization,
    /// KS distance of the normalized sample from the standard Gaussian.
    pub ks_distance: f64,
    /// Per-interval masses versus `Φ(b) − Φ(a)`.
    pub interval_probs: Vec<IntervalProb>,
    /// Histogram of the normalized sample on [−5, 5], mass summing to one.
    pub histogram: Vec<HistogramBin>,
}

/// The default comparison intervals: the six unit intervals covering
/// [−3, 3] plus the symmetric intervals [−1, 1] and [−2, 2].
pub fn default_intervals() -> Vec<(f64, f64)> {
    vec![
        (-3.0, -2.0),
        (-2.0, -1.0),
        (-1.0, 0.0),
        (0.0, 1.0),
        (1.0, 2.0),
        (2.0, 3.0),
        (-1.0, 1.0),
        (-2.0, 2.0),
    ]
}

/// Count of values in the closed interval `[a, b]`.
fn count_in(values: &[f64], a: f64, b: f64) -> usize {
    values.iter().filter(|&&v| a <= v && v <= b).count()
}

/// Histogram of `values` on [−5, 5] with [`HIST_BINS`] equal bins; values
/// beyond the range are folded into the corresponding end bin, so the
/// masses always sum to one.
fn build_histogram(values: &[f64]) -> Vec<HistogramBin> {
    let n = values.len() as f64;
    let width = 2.0 * HIST_HALF_RANGE / HIST_BINS as f64;
    let mut counts = vec![0usize; HIST_BINS];
    for &v in values {
        let idx = ((v + HIST_HALF_RANGE) / width).floor();
        let idx = (idx.max(0.0) as usize).min(HIST_BINS - 1);
        counts[idx] += 1;
    }
    counts
        .into_iter()
        .enumerate()
        .map(|(i, c)| HistogramBin {
            lo: -HIST_HALF_RANGE + i as f64 * width,
            hi: -HIST_HALF_RANGE + (i + 1) as f64 * width,
            mass: c as f64 / n,
        })
        .collect()
}

/// Evaluate a per-zero statistic at every ordinate (shifted by `shift`),
/// normalize it, and compare its distribution against the standard
/// Gaussian.
///
/// * `statistic` receives the evaluation height `γ + shift` for each zero
///   ordinate `γ` and returns the raw (already centered, if applicable)
///   statistic value.
/// * `center` documents that upstream centering in the report.
/// * `intervals` are closed intervals `[a, b]` (infinite endpoints allowed,
///   `a < b` required); see [`default_intervals`].
/// * `scale` picks the applied normalization; both candidate scales are
///   recorded in the report regardless.
///
/// The empirical mass of `[a, b]` is `(1/N)·#{γ : statistic/scale ∈ [a,b]}`,
/// compared against `Φ(b) − Φ(a)`. Since counting is scale-equivariant —
/// multiplying every value and both endpoints by the same positive constant
/// leaves each count unchanged — the reported masses are exactly the counts
/// of the *raw* statistic in the scaled-up intervals.
pub fn clt_report<F>(
    zeros: &ZeroSet,
    statistic_name: &str,
    center: &str,
    statistic: F,
    shift: f64,
    intervals: &[(f64, f64)],
    scale: ScaleChoice,
) -> Result<DistributionReport>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    if zeros.is_empty() {
        return Err(Error::EmptyZeroSet);
    }
    if !shift.is_finite() {
        return Err(Error::Domain(format!(
            "statistic shift must be finite, got {shift}"
        )));
    }
    for &(a, b) in intervals {
        if a.is_nan() || b.is_nan() || !(a < b) {
            return Err(Error::Domain(format!(
                "comparison interval needs a < b, got [{a}, {b}]"
            )));
        }
    }
    let half_loglog = half_loglog_scale(zeros.t_max())?;
    let half_psi = match scale {
        ScaleChoice::HalfLogLog => None,
        ScaleChoice::HalfPsi { psi } => {
            if !psi.is_finite() || psi <= 0.0 {
                return Err(Error::Domain(format!(
                    "prime reciprocal sum Ψ must be positive, got {psi}"
                )));
            }
            Some((0.5 * psi).sqrt())
        }
    };
    let applied = half_psi.unwrap_or(half_loglog);

    let raw: Vec<f64> = zeros
        .ordinates()
        .par_iter()
        .map(|&gamma| statistic(gamma + shift))
        .collect::<Result<Vec<f64>>>()?;
    let normalized: Vec<f64> = raw.iter().map(|v| v / applied).collect();

    let n = normalized.len();
    let ks = ks_distance(&normalized, gaussian_cdf)?;
    let interval_probs = intervals
        .iter()
        .map(|&(a, b)| {
            let empirical = count_in(&normalized, a, b) as f64 / n as f64;
            let gaussian = gaussian_cdf(b) - gaussian_cdf(a);
            IntervalProb {
                a,
                b,
                empirical,
                gaussian,
                difference: empirical - gaussian,
            }
        })
        .collect();

    Ok(DistributionReport {
        statistic_name: statistic_name.to_string(),
        n,
        normalization: Normalization {
            center: center.to_string(),
            scale: applied,
            half_loglog_scale: half_loglog,
            half_psi_scale: half_psi,
        },
        ks_distance: ks,
        interval_probs,
        histogram: build_histogram(&normalized),
    })
}

/// `S(t) = (1/π)·Im log ζ(1/2 + it)`, the argument of ζ on the critical
/// line by continuous variation from the σ = 2 anchor.
///
/// Requires `t ≥ 2` and a height clear of zero ordinates: if
/// `|ζ(1/2 + it)| < 1e-3` the branch is about to jump and the evaluation is
/// refused — perturb `t` slightly and re-evaluate. Together with the smooth
/// term this reproduces the zero count: `N(t) ≈ rv_mangoldt_count(t) + S(t)`
/// to well within a hundredth.
pub fn s_of_t(t: f64) -> Result<f64> {
    if !(t >= 2.0) {
        return Err(Error::Domain(format!("S(t) needs t ≥ 2, got {t}")));
    }
    let z = crate::zeta::hardy_z(t)?;
    if z.abs() < S_OF_T_ZERO_CLEARANCE {
        return Err(Error::Domain(format!(
            "height t = {t} is too close to a zero ordinate (|ζ(1/2+it)| = {:.3e} < {S_OF_T_ZERO_CLEARANCE:.0e}); \
             perturb t away from the zero and re-evaluate",
            z.abs()
        )));
    }
    Ok(crate::zeta::log_zeta_at(0.5, t)?.im / PI)
}
