//! The prime Dirichlet polynomial P_X and the pieces needed to use it as a
//! surrogate for log ζ near the critical line.
//!
//! Near a zero ρ = 1/2 + iγ, the value log|ζ(ρ + u + iv)| is approximated by
//! a smoothed zero contribution (the mean shift, when ρ + iv is itself a
//! zero) plus Re P_X(γ + v), where P_X(t) = Σ_{p ≤ X²} p^{−1/2−it}; the
//! argument is approximated by Im P_X(γ + v) alone. The gap between the two
//! sides is controlled by four computable remainder magnitudes r₁–r₄ built
//! from the tapered von Mangoldt weights in [`crate::primes`]: r₁ captures
//! the taper on primes in (X, X²], r₂ the prime squares, r₃ a vertical
//! integral of the weighted prime sum off the half-line, and r₄ the
//! short-sum error term E(X,t) amplified when another zero sits within
//! 1/log X of the evaluation height. This module computes the polynomial,
//! the mean shift, the remainder bundle, and the assembled approximations;
//! the distribution statistics built on top of them live downstream.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kahan::KahanSum;
use crate::primes::{weight_w, PrimeTable};
use crate::zeros::ZeroSet;
use crate::zeta::{self, Shift};

/// Default subinterval count for the r₃ quadrature; doubling it moves r₃ by
/// less than 10⁻⁸ relative (the integrand is a sum of smooth exponentials).
const R3_NODES: usize = 4096;

/// Evaluation setup for P_X and its remainders: the length parameter X, a
/// prime table reaching X², and the fixed abscissa σ₁ = 1/2 + 4/log X at
/// which the short-sum error term is measured.
#[derive(Debug, Clone)]
pub struct PolyConfig {
    x: f64,
    table: PrimeTable,
    sigma1: f64,
}

impl PolyConfig {
    /// Validate X ≥ 4 and that `table` covers every prime ≤ X².
    pub fn new(x: f64, table: PrimeTable) -> Result<Self> {
        if !x.is_finite() || x < 4.0 {
            return Err(Error::Domain(format!("PolyConfig needs X ≥ 4, got {x}")));
        }
        let needed = (x * x).floor() as u64;
        if table.limit() < needed {
            return Err(Error::InsufficientSieve {
                limit: table.limit(),
                needed,
            });
        }
        Ok(Self {
            x,
            table,
            sigma1: 0.5 + 4.0 / x.ln(),
        })
    }

    /// The length parameter X.
    pub fn x(&self) -> f64 {
        self.x
    }

    /// The prime table backing every sum (limit ≥ X²).
    pub fn table(&self) -> &PrimeTable {
        &self.table
    }

    /// σ₁ = 1/2 + 4/log X, stored exactly as computed from X.
    pub fn sigma1(&self) -> f64 {
        self.sigma1
    }

    /// Largest integer that participates in any sum, ⌊X²⌋.
    fn n_max(&self) -> u64 {
        (self.x * self.x).floor() as u64
    }
}

/// The four remainder magnitudes bounding the prime-polynomial
/// approximation error at one height, together with the short-sum error
/// term E(X,t) they are built from. All fields are finite and nonnegative;
/// `e_term` ≥ log t > 0, and r₄ carries at least E(X,t)/log X.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RemainderBundle {
    /// Taper defect over primes in (X, X²]: |Σ (1−w_X(p)) p^{−1/2−it}|.
    pub r1: f64,
    /// Prime-square term: |Σ_{p≤X} w_X(p²) p^{−1−2it}|.
    pub r2: f64,
    /// Vertical integral (1/log X)·∫_{1/2}^∞ X^{1/2−σ} |Σ Λ_X(p) log(Xp) p^{−σ−it}| dσ.
    pub r3: f64,
    /// Short-sum error (1 + log⁺(1/(η log X)))·E(X,t)/log X, with η the
    /// distance to the nearest other zero ordinate.
    pub r4: f64,
    /// E(X,t) = |Σ_{n≤X²} Λ_X(n) n^{−σ₁−it}| + log t.
    pub e_term: f64,
}

impl RemainderBundle {
    /// r₁ + r₂ + r₃ + r₄, the quantity discrepancies are measured against.
    pub fn sum(&self) -> f64 {
        self.r1 + self.r2 + self.r3 + self.r4
    }
}

/// P_X(t) = Σ_{p ≤ X²} p^{−1/2−it}, the prime Dirichlet polynomial on the
/// critical line. Real coefficients give conj(P(t)) = P(−t) exactly.
pub fn eval_prime_poly(cfg: &PolyConfig, t: f64) -> Result<Complex64> {
    if !t.is_finite() {
        return Err(Error::Domain(format!(
            "eval_prime_poly needs finite t, got {t}"
        )));
    }
    let mut re = KahanSum::new();
    let mut im = KahanSum::new();
    for &p in cfg.table.primes_up_to(cfg.n_max())? {
        let ln_p = (p as f64).ln();
        let amp = 1.0 / (p as f64).sqrt();
        let phase = t * ln_p;
        re.add(amp * phase.cos());
        im.add(-amp * phase.sin());
    }
    Ok(Complex64::new(re.value(), im.value()))
}

/// P_X over many heights at once. Each point is computed by the same
/// fixed-order accumulation as [`eval_prime_poly`], so the batch agrees with
/// pointwise evaluation bit for bit; points are independent and run in
/// parallel.
pub fn eval_prime_poly_batch(cfg: &PolyConfig, ts: &[f64]) -> Result<Vec<Complex64>> {
    ts.par_iter()
        .map(|&t| eval_prime_poly(cfg, t))
        .collect()
}

/// Smoothed contribution of a zero of multiplicity m at horizontal offset
/// u > 0: m·(log(e·u·log X/4) − u·log X/4). Zero when m = 0 (the typical
/// case off the zero itself).
///
/// The working-range bound u ≤ 1/log X is enforced where shifts are
/// constructed ([`Shift::new`]); this evaluator accepts any u > 0, which
/// keeps the exact cancellation point u = 4/log X expressible.
pub fn mean_shift(multiplicity: u32, u: f64, x: f64) -> Result<f64> {
    if !x.is_finite() || x < 4.0 {
        return Err(Error::Domain(format!("mean_shift needs X ≥ 4, got {x}")));
    }
    if !u.is_finite() || u <= 0.0 {
        return Err(Error::Domain(format!("mean_shift needs u > 0, got {u}")));
    }
    if multiplicity == 0 {
        return Ok(0.0);
    }
    let q = u * x.ln() / 4.0;
    Ok(multiplicity as f64 * (1.0 + q.ln() - q))
}

/// The remainder magnitudes at height t with nearest-other-zero distance
/// `eta`, using the default r₃ quadrature resolution.
pub fn remainders(cfg: &PolyConfig, t: f64, eta: f64) -> Result<RemainderBundle> {
    remainders_with_nodes(cfg, t, eta, R3_NODES)
}

/// [`remainders`] with an explicit subinterval count for the r₃ integral
/// (must be even and ≥ 16). Exposed so convergence of the quadrature can be
/// demonstrated by node doubling.
pub fn remainders_with_nodes(
    cfg: &PolyConfig,
    t: f64,
    eta: f64,
    nodes: usize,
) -> Result<RemainderBundle> {
    if !(eta > 0.0) {
        return Err(Error::Domain(format!(
            "remainders needs a positive nearest-zero distance, got eta = {eta}"
        )));
    }
    let (r1, r2, r3, e_term) = remainder_core(cfg, t, nodes)?;
    let ln_x = cfg.x.ln();
    let log_plus = (1.0 / (eta * ln_x)).ln().max(0.0);
    let r4 = (1.0 + log_plus) * e_term / ln_x;
    Ok(RemainderBundle {
        r1,
        r2,
        r3,
        r4,
        e_term,
    })
}

/// r₁, r₂, r₃ and E(X,t) — everything except the η-dependent factor of r₄.
fn remainder_core(cfg: &PolyConfig, t: f64, nodes: usize) -> Result<(f64, f64, f64, f64)> {
    if !t.is_finite() || t < 2.0 {
        return Err(Error::Domain(format!(
            "remainders need t ≥ 2, got {t}"
        )));
    }
    if nodes < 16 || nodes % 2 != 0 {
        return Err(Error::Domain(format!(
            "r3 quadrature needs an even subinterval count ≥ 16, got {nodes}"
        )));
    }
    let x = cfg.x;
    let ln_x = x.ln();
    let n_max = cfg.n_max();
    let primes = cfg.table.primes_up_to(n_max)?;

    // r1: only primes in (X, X²] contribute, since w_X = 1 up to X.
    let mut r1_re = KahanSum::new();
    let mut r1_im = KahanSum::new();
    // r2: primes up to X, with the weight evaluated at p².
    let mut r2_re = KahanSum::new();
    let mut r2_im = KahanSum::new();
    for &p in primes {
        let pf = p as f64;
        let ln_p = pf.ln();
        if pf > x {
            let defect = 1.0 - weight_w(p, x)?;
            let amp = defect / pf.sqrt();
            let phase = t * ln_p;
            r1_re.add(amp * phase.cos());
            r1_im.add(-amp * phase.sin());
        } else {
            let amp = weight_w(p * p, x)? / pf;
            let phase = 2.0 * t * ln_p;
            r2_re.add(amp * phase.cos());
            r2_im.add(-amp * phase.sin());
        }
    }
    let r1 = Complex64::new(r1_re.value(), r1_im.value()).norm();
    let r2 = Complex64::new(r2_re.value(), r2_im.value()).norm();

    // r3: composite Simpson for ∫_{1/2}^{σ_cut} X^{1/2−σ}|S(σ)| dσ with
    // S(σ) = Σ_p Λ_X(p) log(Xp) p^{−σ−it}, truncated where the X^{1/2−σ}
    // envelope has decayed by e⁻⁴⁰, plus the analytic bound for the rest:
    // |S(σ)| ≤ S₊(σ_cut) for σ ≥ σ_cut (positive-term sum), and the
    // envelope integrates to X^{1/2−σ_cut}/log X.
    let sigma_cut = 0.5 + 40.0 / ln_x;
    let weighted: Vec<(f64, f64, f64, f64)> = primes
        .iter()
        .map(|&p| {
            let ln_p = (p as f64).ln();
            let coeff = ln_p * weight_w(p, x)? * (ln_x + ln_p);
            let phase = t * ln_p;
            Ok((ln_p, coeff, phase.cos(), phase.sin()))
        })
        .collect::<Result<_>>()?;
    let s_abs = |sigma: f64| -> f64 {
        let mut re = 0.0;
        let mut im = 0.0;
        for &(ln_p, coeff, cos_ph, sin_ph) in &weighted {
            let amp = coeff * (-sigma * ln_p).exp();
            re += amp * cos_ph;
            im -= amp * sin_ph;
        }
        re.hypot(im)
    };
    let h = (sigma_cut - 0.5) / nodes as f64;
    let samples: Vec<f64> = (0..=nodes)
        .into_par_iter()
        .map(|i| {
            let sigma = 0.5 + h * i as f64;
            x.powf(0.5 - sigma) * s_abs(sigma)
        })
        .collect();
    let mut integral = KahanSum::new();
    for (i, &f) in samples.iter().enumerate() {
        let w = if i == 0 || i == nodes {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        integral.add(w * f);
    }
    let quad = integral.value() * h / 3.0;
    let s_plus_cut: f64 = weighted
        .iter()
        .map(|&(ln_p, coeff, _, _)| coeff * (-sigma_cut * ln_p).exp())
        .sum();
    let tail = x.powf(0.5 - sigma_cut) * s_plus_cut / ln_x;
    let r3 = (quad + tail) / ln_x;

    // E(X,t): the full weighted prime-power sum at σ₁, plus log t.
    let mut e_re = KahanSum::new();
    let mut e_im = KahanSum::new();
    for pp in cfg.table.prime_powers_up_to(n_max)? {
        let nf = pp.value as f64;
        let amp = (pp.base as f64).ln() * weight_w(pp.value, x)? * nf.powf(-cfg.sigma1);
        let phase = t * nf.ln();
        e_re.add(amp * phase.cos());
        e_im.add(-amp * phase.sin());
    }
    let e_term = Complex64::new(e_re.value(), e_im.value()).norm() + t.ln();

    Ok((r1, r2, r3, e_term))
}

/// Approximate log|ζ| at ρ + u + iv for the zero ordinate γ:
/// mean shift plus Re P_X(γ+v), together with the remainder bundle that
/// bounds the discrepancy. `multiplicity` is the caller's multiplicity of
/// the point γ + v as a zero ordinate (0 when it is not one), and `eta` its
/// distance to the nearest other zero ordinate.
pub fn approx_log_modulus(
    cfg: &PolyConfig,
    gamma: f64,
    shift: &Shift,
    multiplicity: u32,
    eta: f64,
) -> Result<(f64, RemainderBundle)> {
    check_shift_config(cfg, shift)?;
    let t = gamma + shift.v();
    let approx = mean_shift(multiplicity, shift.u(), cfg.x)? + eval_prime_poly(cfg, t)?.re;
    let bundle = remainders(cfg, t, eta)?;
    Ok((approx, bundle))
}

/// Approximate the continuous argument of ζ at ρ + u + iv: Im P_X(γ+v),
/// with a bundle whose fourth entry is the plain E(X,t)/log X — the
/// argument bound does not see the nearest-zero distance.
pub fn approx_argument(
    cfg: &PolyConfig,
    gamma: f64,
    shift: &Shift,
) -> Result<(f64, RemainderBundle)> {
    check_shift_config(cfg, shift)?;
    let t = gamma + shift.v();
    let approx = eval_prime_poly(cfg, t)?.im;
    let (r1, r2, r3, e_term) = remainder_core(cfg, t, R3_NODES)?;
    Ok((
        approx,
        RemainderBundle {
            r1,
            r2,
            r3,
            r4: e_term / cfg.x.ln(),
            e_term,
        },
    ))
}

fn check_shift_config(cfg: &PolyConfig, shift: &Shift) -> Result<()> {
    if shift.x() != cfg.x {
        return Err(Error::Domain(format!(
            "shift was validated against X = {} but the config has X = {}",
            shift.x(),
            cfg.x
        )));
    }
    Ok(())
}

/// Centered log-derivative statistic at a simple zero:
/// log|ζ′(ρ)| − log(e·log X/4).
pub fn zeta_prime_statistic(gamma: f64, zeros: &ZeroSet, x: f64) -> Result<f64> {
    if !x.is_finite() || x < 4.0 {
        return Err(Error::Domain(format!(
            "zeta_prime_statistic needs X ≥ 4, got {x}"
        )));
    }
    let magnitude = zeta::zeta_prime_at_zero(gamma, zeros)?;
    Ok(magnitude.ln() - (std::f64::consts::E * x.ln() / 4.0).ln())
}

/// The log T–normalized variant log(|ζ′(ρ)|/log T) with T the certified
/// height of the zero set; differs from [`zeta_prime_statistic`] by the
/// γ-independent constant log(log T) − log(e·log X/4).
pub fn zeta_prime_statistic_log_t(gamma: f64, zeros: &ZeroSet) -> Result<f64> {
    let magnitude = zeta::zeta_prime_at_zero(gamma, zeros)?;
    Ok(magnitude.ln() - zeros.t_max().ln().ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::PrimeTable;
    use crate::zeros::find_zeros;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn cfg(x: f64) -> PolyConfig {
        let table = PrimeTable::sieve((x * x) as u64).unwrap();
        PolyConfig::new(x, table).unwrap()
    }

    #[test]
    fn config_stores_exact_sigma1_and_validates() {
        let c = cfg(10.0);
        assert_eq!(c.sigma1(), 0.5 + 4.0 / 10.0f64.ln());
        assert_eq!(c.x(), 10.0);

        let small = PrimeTable::sieve(50).unwrap();
        assert!(matches!(
            PolyConfig::new(10.0, small),
            Err(Error::InsufficientSieve { needed: 100, .. })
        ));
        let table = PrimeTable::sieve(100).unwrap();
        assert!(PolyConfig::new(3.0, table).is_err());
    }

    #[test]
    fn prime_poly_zero_frequency_and_frozen_point() {
        let c = cfg(10.0);
        // At t = 0 every phase is 1: the sum is Σ_{p≤100} p^{−1/2}, real.
        let p0 = eval_prime_poly(&c, 0.0).unwrap();
        assert_relative_eq!(p0.re, 5.536_481_852_598_516, max_relative = 1e-14);
        assert_eq!(p0.im, 0.0);

        let p50 = eval_prime_poly(&c, 50.0).unwrap();
        assert!((p50.re - -1.553_257_400_049_739).abs() < 1e-12);
        assert!((p50.im - 1.337_024_428_899_078_6).abs() < 1e-12);
    }

    #[test]
    fn prime_poly_matches_hand_sum_at_smallest_x() {
        // X = 4 uses exactly the primes up to 16.
        let c = cfg(4.0);
        let t = 1.75;
        let mut hand = Complex64::new(0.0, 0.0);
        for p in [2.0f64, 3.0, 5.0, 7.0, 11.0, 13.0] {
            hand += Complex64::from_polar(p.powf(-0.5), -t * p.ln());
        }
        let poly = eval_prime_poly(&c, t).unwrap();
        assert!((poly - hand).norm() < 1e-15);
    }

    #[test]
    fn prime_poly_conjugate_symmetry_is_exact() {
        let c = cfg(10.0);
        let plus = eval_prime_poly(&c, 37.5862).unwrap();
        let minus = eval_prime_poly(&c, -37.5862).unwrap();
        assert_eq!(plus.re, minus.re);
        assert_eq!(plus.im, -minus.im);
    }

    #[test]
    fn batch_matches_pointwise_bitwise() {
        let c = cfg(10.0);
        let ts: Vec<f64> = (0..200).map(|k| 2.0 + 0.73 * k as f64).collect();
        let batch = eval_prime_poly_batch(&c, &ts).unwrap();
        for (&t, &b) in ts.iter().zip(&batch) {
            let p = eval_prime_poly(&c, t).unwrap();
            assert_eq!(p.re, b.re);
            assert_eq!(p.im, b.im);
        }
    }

    #[test]
    fn mean_shift_reference_points() {
        // Zero multiplicity kills the whole term.
        assert_eq!(mean_shift(0, 0.01, 50.0).unwrap(), 0.0);
        // u·log X = 4 is the exact cancellation point: log e − 1 = 0.
        let x: f64 = 30.0;
        let v = mean_shift(1, 4.0 / x.ln(), x).unwrap();
        assert!(v.abs() < 1e-15);
        // u = 1/log X gives log(e/4) − 1/4, independent of X.
        for x in [10.0f64, 100.0, 2500.0] {
            let v = mean_shift(1, 1.0 / x.ln(), x).unwrap();
            assert_relative_eq!(v, -0.636_294_361_119_890_6, max_relative = 1e-14);
        }
        // Linear in the multiplicity.
        let m3 = mean_shift(3, 0.05, 40.0).unwrap();
        assert_relative_eq!(m3, 3.0 * mean_shift(1, 0.05, 40.0).unwrap(), max_relative = 1e-15);

        assert!(mean_shift(1, 0.0, 40.0).is_err());
        assert!(mean_shift(1, -0.1, 40.0).is_err());
        assert!(mean_shift(1, 0.1, 2.0).is_err());
    }

    #[test]
    fn remainders_match_frozen_values() {
        let c = cfg(10.0);
        let b = remainders(&c, 50.0, 0.5).unwrap();
        assert!((b.r1 - 0.483_471_790_744_392_5).abs() < 1e-12);
        assert!((b.r2 - 0.119_298_293_745_637_9).abs() < 1e-13);
        assert!((b.r3 - 1.041_385_757_156_977_3).abs() < 1e-8);
        assert!((b.e_term - 4.110_186_819_924_855).abs() < 1e-12);
        // 1/(0.5·log 10) < 1, so the log⁺ factor is inert here.
        assert!((b.r4 - 1.785_031_455_484_839).abs() < 1e-11);

        // A tight gap switches the log⁺ factor on.
        let tight = remainders(&c, 50.0, 0.1).unwrap();
        assert!((tight.r4 - 4.406_444_125_747_156).abs() < 1e-11);
    }

    #[test]
    fn r4_threshold_at_reciprocal_log() {
        let c = cfg(10.0);
        let ln_x = 10.0f64.ln();
        let b = remainders(&c, 50.0, 1.0 / ln_x).unwrap();
        assert_relative_eq!(b.r4, b.e_term / ln_x, max_relative = 1e-15);
    }

    #[test]
    fn r1_supported_on_upper_prime_range_only() {
        // Rebuild r1 from its definition restricted to p ∈ (X, X²]; the
        // primes up to X carry weight 1 and drop out.
        let c = cfg(10.0);
        let t = 50.0;
        let b = remainders(&c, t, 0.5).unwrap();
        let mut re = KahanSum::new();
        let mut im = KahanSum::new();
        for &p in c.table().primes_up_to(100).unwrap() {
            if p <= 10 {
                continue;
            }
            let pf = p as f64;
            let defect = 1.0 - weight_w(p, 10.0).unwrap();
            let phase = t * pf.ln();
            re.add(defect / pf.sqrt() * phase.cos());
            im.add(-defect / pf.sqrt() * phase.sin());
        }
        let direct = Complex64::new(re.value(), im.value()).norm();
        assert_relative_eq!(b.r1, direct, max_relative = 1e-14);
    }

    #[test]
    fn r2_hand_value_at_smallest_x() {
        // X = 4: only p = 2 (w(4) = 1) and p = 3 (w(9) = log(16/9)/log 4).
        let c = cfg(4.0);
        let t = 2.6;
        let b = remainders(&c, t, 0.5).unwrap();
        let w9 = (16.0f64 / 9.0).ln() / 4.0f64.ln();
        let term2 = Complex64::from_polar(0.5, -2.0 * t * 2.0f64.ln());
        let term3 = w9 * Complex64::from_polar(1.0 / 3.0, -2.0 * t * 3.0f64.ln());
        assert!((b.r2 - (term2 + term3).norm()).abs() < 1e-15);
    }

    #[test]
    fn r3_quadrature_converged_under_node_doubling() {
        let c = cfg(10.0);
        let default = remainders(&c, 50.0, 0.5).unwrap().r3;
        let fine = remainders_with_nodes(&c, 50.0, 0.5, 2 * R3_NODES).unwrap().r3;
        assert!((default - fine).abs() / fine < 1e-8);
        assert!(remainders_with_nodes(&c, 50.0, 0.5, 15).is_err());
        assert!(remainders_with_nodes(&c, 50.0, 0.5, 21).is_err());
    }

    #[test]
    fn remainders_reject_bad_input() {
        let c = cfg(10.0);
        assert!(remainders(&c, 1.0, 0.5).is_err());
        assert!(remainders(&c, 50.0, 0.0).is_err());
        assert!(remainders(&c, 50.0, -1.0).is_err());
    }

    #[test]
    fn approx_log_modulus_tracks_branch_tracked_log_zeta() {
        // Joint check against the independent log ζ evaluator on every zero
        // below 100: the discrepancy stays within one remainder-bundle sum
        // (sampled maximum ratio ≈ 0.57).
        let zeros = find_zeros(100.0).unwrap();
        let x = 25.0f64;
        let c = cfg(x);
        let shift = Shift::new(1.0 / x.ln(), 0.0, x).unwrap();
        let mut worst: f64 = 0.0;
        for &g in zeros.ordinates() {
            let eta = zeros.nearest_gap(g).unwrap();
            let (approx, bundle) = approx_log_modulus(&c, g, &shift, 1, eta).unwrap();
            let direct = zeta::log_zeta_shifted(g, &shift).unwrap().re;
            worst = worst.max((direct - approx).abs() / bundle.sum());
        }
        assert!(worst <= 1.0, "worst discrepancy ratio {worst}");
    }

    #[test]
    fn approx_argument_tracks_branch_tracked_log_zeta() {
        let zeros = find_zeros(100.0).unwrap();
        let x = 25.0f64;
        let c = cfg(x);
        let shift = Shift::new(1.0 / x.ln(), 0.0, x).unwrap();
        let mut worst: f64 = 0.0;
        for &g in zeros.ordinates() {
            let (approx, bundle) = approx_argument(&c, g, &shift).unwrap();
            let direct = zeta::log_zeta_shifted(g, &shift).unwrap().im;
            worst = worst.max((direct - approx).abs() / bundle.sum());
        }
        assert!(worst <= 1.0, "worst discrepancy ratio {worst}");
    }

    #[test]
    fn approx_argument_bundle_ignores_gap() {
        let c = cfg(10.0);
        let shift = Shift::new(0.2, 0.0, 10.0).unwrap();
        let (_, bundle) = approx_argument(&c, 50.0, &shift).unwrap();
        assert_relative_eq!(
            bundle.r4,
            bundle.e_term / 10.0f64.ln(),
            max_relative = 1e-15
        );
    }

    #[test]
    fn shift_config_mismatch_is_rejected() {
        let c = cfg(10.0);
        let shift = Shift::new(0.05, 0.0, 25.0).unwrap();
        assert!(approx_argument(&c, 50.0, &shift).is_err());
        assert!(approx_log_modulus(&c, 50.0, &shift, 0, 0.5).is_err());
    }

    #[test]
    fn zeta_prime_statistic_first_zero_frozen() {
        let zeros = find_zeros(100.0).unwrap();
        let g1 = zeros.ordinates()[0];
        let stat = zeta_prime_statistic(g1, &zeros, 100.0).unwrap();
        assert!((stat - -1.372_615_030_572_621).abs() < 5e-5);
        assert!(zeta_prime_statistic(15.0, &zeros, 100.0).is_err());
        assert!(zeta_prime_statistic(g1, &zeros, 2.0).is_err());
    }

    #[test]
    fn statistic_variants_differ_by_height_constant() {
        let zeros = find_zeros(100.0).unwrap();
        let x = 50.0f64;
        let expected = zeros.t_max().ln().ln() - (std::f64::consts::E * x.ln() / 4.0).ln();
        for &g in &zeros.ordinates()[..5] {
            let a = zeta_prime_statistic(g, &zeros, x).unwrap();
            let b = zeta_prime_statistic_log_t(g, &zeros).unwrap();
            assert_relative_eq!(a - b, expected, max_relative = 1e-12);
        }
    }

    #[test]
    fn weight_split_identity_bounded_on_grid() {
        // Re Σ_{n≤X²} Λ_X(n)/(n^{σ₁+it} log n) differs from Re P_X(t) by at
        // most r₁ + r₂ + r₃ plus a small absolute constant (grid maximum of
        // the excess ≈ 0.022; frozen allowance 0.5).
        let c = cfg(10.0);
        for k in 0..11 {
            let t = 5.0 + 10.0 * k as f64;
            let mut lhs = KahanSum::new();
            for pp in c.table().prime_powers_up_to(100).unwrap() {
                let nf = pp.value as f64;
                let w = weight_w(pp.value, 10.0).unwrap();
                let amp = w / pp.exponent as f64 * nf.powf(-c.sigma1());
                lhs.add(amp * (t * nf.ln()).cos());
            }
            let p = eval_prime_poly(&c, t).unwrap();
            let b = remainders(&c, t, 0.5).unwrap();
            let diff = (lhs.value() - p.re).abs();
            assert!(
                diff <= b.r1 + b.r2 + b.r3 + 0.5,
                "t = {t}: diff {diff} vs bound {}",
                b.r1 + b.r2 + b.r3 + 0.5
            );
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn bundle_is_nonnegative_with_r4_floor(
            t in 2.0f64..500.0,
            eta in 1e-4f64..5.0,
        ) {
            let c = cfg(10.0);
            let b = remainders(&c, t, eta).unwrap();
            prop_assert!(b.r1 >= 0.0 && b.r2 >= 0.0 && b.r3 >= 0.0);
            prop_assert!(b.e_term >= t.ln());
            // The log⁺ factor can only amplify E/log X.
            prop_assert!(b.r4 >= b.e_term / 10.0f64.ln() * (1.0 - 1e-15));
        }

        #[test]
        fn poly_reflection_is_conjugation(t in 0.0f64..1000.0) {
            let c = cfg(6.0);
            let plus = eval_prime_poly(&c, t).unwrap();
            let minus = eval_prime_poly(&c, -t).unwrap();
            prop_assert_eq!(plus.re, minus.re);
            prop_assert_eq!(plus.im, -minus.im);
        }
    }
}
