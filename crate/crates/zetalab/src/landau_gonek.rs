//! Phase sums over zero ordinates and prime-product combinatorics.
//!
//! The centrepiece is the power sum Σ_{0<γ≤T} x^{iγ} over the imaginary
//! parts of the nontrivial zeros. Its mean acts as a prime-power detector:
//! the sum concentrates at −(T/2π)Λ(x)/√x when x is a prime power and
//! fluctuates around zero otherwise, with the fluctuation controlled by a
//! three-term envelope in x and T. On top of the power sum sit the bilinear
//! expansion of Σ_γ A(γ)conj(B(γ)) for short Dirichlet polynomials and the
//! 2k-th moment bound for prime-supported polynomials.
//!
//! The combinatorial half of the module counts ordered factorizations:
//! `aj_counts` tabulates how many ordered j-tuples of listed primes multiply
//! to each integer, which powers the identity Σ_n a_j(n)/n = (Σ_p 1/p)^j and
//! the squarefree/non-squarefree split behind the moment analysis. Small
//! instances are verified in exact rational arithmetic.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::kahan::KahanSum;
use crate::primes::{self, PrimeTable};
use crate::zeros::ZeroSet;
use crate::{Error, Result};

/// Largest coefficient support accepted by [`bilinear_sum_check`]; beyond
/// this the direct double sum over zeros shifts from cheap to wasteful.
const MAX_BILINEAR_SUPPORT: usize = 100;

/// Exact rational arithmetic is used for the combinatorial identities when
/// the prime list is at most this long ...
const EXACT_PRIME_LIMIT: usize = 25;

/// ... and the tuple length is at most this.
const EXACT_POWER_LIMIT: u32 = 5;

/// Zero-ordinate chunk size for parallel summation. Chunk partials are
/// reduced in index order, so results are independent of thread count.
const SUM_CHUNK: usize = 4096;

/// Outcome of evaluating the power sum Σ_{0<γ≤T} x^{iγ}.
#[derive(Debug, Clone, Serialize)]
pub struct PowerSumResult {
    /// The base of the phases, as supplied (reciprocal bases < 1 allowed).
    pub x: f64,
    /// Upper limit of the zero ordinates included in the sum.
    pub t: f64,
    /// The direct sum over computed zeros.
    pub computed: Complex64,
    /// The prime-power detector mean −(T/2π)Λ(x)/√x (always real; zero
    /// unless max(x, 1/x) is exactly a prime power).
    pub main_term: f64,
    /// Three-term fluctuation envelope evaluated with unit constants:
    /// √x·log(xT)·loglog(3x) + (log x/√x)·min(T, x/⟨x⟩)
    /// + (log T/√x)·min(T, 1/log x), taken at max(x, 1/x).
    pub envelope: f64,
}

impl PowerSumResult {
    /// Deviation of the computed sum from the main term.
    pub fn residual(&self) -> Complex64 {
        Complex64::new(self.computed.re - self.main_term, self.computed.im)
    }

    /// |computed − main| measured in units of the envelope.
    pub fn envelope_ratio(&self) -> f64 {
        if self.envelope == 0.0 {
            0.0
        } else {
            self.residual().norm() / self.envelope
        }
    }
}

/// Von Mangoldt weight of a real argument: nonzero only when the argument
/// is exactly an integer prime power.
fn von_mangoldt_real(x: f64) -> f64 {
    if x.fract() == 0.0 && x >= 2.0 && x < (1u64 << 62) as f64 {
        primes::von_mangoldt(x as u64)
    } else {
        0.0
    }
}

/// The three-term fluctuation envelope at a base y > 1.
fn power_sum_envelope(y: f64, t: f64) -> Result<f64> {
    let ln_y = y.ln();
    let gap = primes::nearest_prime_power_distance(y)?;
    let first = y.sqrt() * (y * t).ln() * (3.0 * y).ln().ln();
    let second = (ln_y / y.sqrt()) * t.min(y / gap);
    let third = (t.ln() / y.sqrt()) * t.min(1.0 / ln_y);
    Ok(first + second + third)
}

/// Sum e^{iγ·lnx} over the ordinates, chunked in parallel with a
/// deterministic in-order reduction of the chunk partials.
fn phase_sum(ordinates: &[f64], ln_x: f64) -> Complex64 {
    let partials: Vec<(f64, f64)> = ordinates
        .par_chunks(SUM_CHUNK)
        .map(|chunk| {
            let mut re = KahanSum::new();
            let mut im = KahanSum::new();
            for &gamma in chunk {
                let (s, c) = (gamma * ln_x).sin_cos();
                re.add(c);
                im.add(s);
            }
            (re.value(), im.value())
        })
        .collect();
    let mut re = KahanSum::new();
    let mut im = KahanSum::new();
    for (r, i) in partials {
        re.add(r);
        im.add(i);
    }
    Complex64::new(re.value(), im.value())
}

/// Evaluate Σ_{0<γ≤T} x^{iγ} together with its predicted mean and envelope.
///
/// The natural domain is x > 1; reciprocal bases 0 < x < 1 are accepted as
/// well and produce the complex conjugate of the sum at 1/x (phases negate),
/// with the main term and envelope taken at 1/x.
pub fn zero_power_sum(zeros: &ZeroSet, x: f64, t: f64) -> Result<PowerSumResult> {
    if !x.is_finite() || x <= 0.0 || x == 1.0 {
        return Err(Error::Domain(format!(
            "power-sum base must be finite, positive, and != 1, got {x}"
        )));
    }
    if !t.is_finite() || t < 2.0 {
        return Err(Error::Domain(format!(
            "power-sum height must be finite and >= 2, got {t}"
        )));
    }
    if t > zeros.t_max() {
        return Err(Error::InsufficientZeros {
            t_max: zeros.t_max(),
            requested: t,
        });
    }
    let y = if x > 1.0 { x } else { 1.0 / x };
    let main_term = -(t / std::f64::consts::TAU) * von_mangoldt_real(y) / y.sqrt();
    let envelope = power_sum_envelope(y, t)?;
    let computed = phase_sum(zeros.ordinates_up_to(t), x.ln());
    Ok(PowerSumResult {
        x,
        t,
        computed,
        main_term,
        envelope,
    })
}

fn validate_prime_list(prime_list: &[u64]) -> Result<()> {
    for &p in prime_list {
        if !primes::is_prime(p) {
            return Err(Error::Domain(format!("{p} in the prime list is not prime")));
        }
    }
    let mut sorted: Vec<u64> = prime_list.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Domain(
            "prime list contains a duplicate entry".into(),
        ));
    }
    Ok(())
}

/// Count ordered j-tuples of primes from the list by their product.
///
/// The result maps each integer n expressible as a product of exactly j
/// listed primes (with repetition) to the number of orderings that produce
/// it; `a_0 = {1: 1}`. Products or counts that overflow the exact integer
/// range are reported as an infeasibility error rather than silently
/// wrapping.
pub fn aj_counts(prime_list: &[u64], j: u32) -> Result<BTreeMap<u64, u64>> {
    validate_prime_list(prime_list)?;
    let mut counts = BTreeMap::from([(1u64, 1u64)]);
    for level in 0..j {
        let mut next: BTreeMap<u64, u64> = BTreeMap::new();
        for (&n, &count) in &counts {
            for &p in prime_list {
                let product = n.checked_mul(p).ok_or_else(|| {
                    Error::Infeasible(format!(
                        "prime product overflows 64-bit range at tuple length {}",
                        level + 1
                    ))
                })?;
                let slot = next.entry(product).or_insert(0);
                *slot = slot.checked_add(count).ok_or_else(|| {
                    Error::Infeasible(format!(
                        "ordering count overflows 64-bit range at tuple length {}",
                        level + 1
                    ))
                })?;
            }
        }
        counts = next;
    }
    Ok(counts)
}

/// Both sides of the identity Σ_n a_j(n)/n = (Σ_p 1/p)^j.
#[derive(Debug, Clone, Serialize)]
pub struct PowerIdentityReport {
    /// Σ_n a_j(n)/n over the ordered-factorization counts.
    pub lhs: f64,
    /// (Σ_p 1/p)^j.
    pub rhs: f64,
    /// Exact rational equality verdict, present when the instance is small
    /// enough for exact arithmetic (≤ 25 primes, j ≤ 5).
    pub exact_match: Option<bool>,
}

/// Reciprocal sum Σ 1/p over the list as an exact rational.
fn rational_reciprocal_sum(prime_list: &[u64]) -> BigRational {
    let mut sum = BigRational::zero();
    for &p in prime_list {
        sum += BigRational::new(BigInt::one(), BigInt::from(p));
    }
    sum
}

/// Exact rational sides of the power identity for small instances.
fn exact_identity_sides(prime_list: &[u64], j: u32) -> Result<(BigRational, BigRational)> {
    let counts = aj_counts(prime_list, j)?;
    let mut lhs = BigRational::zero();
    for (&n, &count) in &counts {
        lhs += BigRational::new(BigInt::from(count), BigInt::from(n));
    }
    let psi = rational_reciprocal_sum(prime_list);
    let mut rhs = BigRational::one();
    for _ in 0..j {
        rhs *= &psi;
    }
    Ok((lhs, rhs))
}

/// Verify Σ_n a_j(n)/n = (Σ_p 1/p)^j, exactly on small instances and in
/// floating point beyond.
pub fn psi_power_identity_check(prime_list: &[u64], j: u32) -> Result<PowerIdentityReport> {
    if prime_list.len() <= EXACT_PRIME_LIMIT && j <= EXACT_POWER_LIMIT {
        let (lhs, rhs) = exact_identity_sides(prime_list, j)?;
        return Ok(PowerIdentityReport {
            lhs: lhs.to_f64().unwrap_or(f64::NAN),
            rhs: rhs.to_f64().unwrap_or(f64::NAN),
            exact_match: Some(lhs == rhs),
        });
    }
    let counts = aj_counts(prime_list, j)?;
    let lhs = crate::kahan::kahan_sum(
        counts
            .iter()
            .map(|(&n, &count)| count as f64 / n as f64),
    );
    let psi = crate::kahan::kahan_sum(prime_list.iter().map(|&p| 1.0 / p as f64));
    Ok(PowerIdentityReport {
        lhs,
        rhs: psi.powi(j as i32),
        exact_match: None,
    })
}

/// Split of Σ_n a_j(n)/n into squarefree and non-squarefree parts, with the
/// non-squarefree mass compared against its j²Ψ^{j−2} scale.
#[derive(Debug, Clone, Serialize)]
pub struct SquarefreeSplitReport {
    /// Σ a_j(n)/n over squarefree n.
    pub squarefree_sum: f64,
    /// Σ a_j(n)/n over non-squarefree n.
    pub non_squarefree_sum: f64,
    /// Ψ^j where Ψ = Σ_p 1/p over the list.
    pub psi_power: f64,
    /// The comparison scale j²·Ψ^{j−2}.
    pub bound_scale: f64,
    /// non_squarefree_sum / bound_scale (zero when the numerator vanishes).
    pub bound_ratio: f64,
}

fn is_squarefree_product(n: u64, prime_list: &[u64]) -> bool {
    prime_list.iter().all(|&p| match p.checked_mul(p) {
        Some(square) => n % square != 0,
        None => true,
    })
}

/// Exact rational (squarefree, non-squarefree) partial sums for small
/// instances.
fn exact_split_sums(prime_list: &[u64], j: u32) -> Result<(BigRational, BigRational)> {
    let counts = aj_counts(prime_list, j)?;
    let mut squarefree = BigRational::zero();
    let mut repeated = BigRational::zero();
    for (&n, &count) in &counts {
        let term = BigRational::new(BigInt::from(count), BigInt::from(n));
        if is_squarefree_product(n, prime_list) {
            squarefree += term;
        } else {
            repeated += term;
        }
    }
    Ok((squarefree, repeated))
}

/// Split Σ_n a_j(n)/n by squarefreeness of n and report the non-squarefree
/// mass relative to j²Ψ^{j−2}.
pub fn squarefree_split_check(prime_list: &[u64], j: u32) -> Result<SquarefreeSplitReport> {
    let (squarefree_sum, non_squarefree_sum) =
        if prime_list.len() <= EXACT_PRIME_LIMIT && j <= EXACT_POWER_LIMIT {
            let (sf, nsf) = exact_split_sums(prime_list, j)?;
            (
                sf.to_f64().unwrap_or(f64::NAN),
                nsf.to_f64().unwrap_or(f64::NAN),
            )
        } else {
            let counts = aj_counts(prime_list, j)?;
            let mut sf = KahanSum::new();
            let mut nsf = KahanSum::new();
            for (&n, &count) in &counts {
                let term = count as f64 / n as f64;
                if is_squarefree_product(n, prime_list) {
                    sf.add(term);
                } else {
                    nsf.add(term);
                }
            }
            (sf.value(), nsf.value())
        };
    let psi = crate::kahan::kahan_sum(prime_list.iter().map(|&p| 1.0 / p as f64));
    let psi_power = psi.powi(j as i32);
    let bound_scale = (j as f64).powi(2) * psi.powi(j as i32 - 2);
    let bound_ratio = if non_squarefree_sum == 0.0 {
        0.0
    } else {
        non_squarefree_sum / bound_scale
    };
    Ok(SquarefreeSplitReport {
        squarefree_sum,
        non_squarefree_sum,
        psi_power,
        bound_scale,
        bound_ratio,
    })
}

/// Bilinear zero sum Σ_γ A(γ)·conj(B(γ)) against its two predicted main
/// terms and the residual shape.
#[derive(Debug, Clone, Serialize)]
pub struct BilinearReport {
    /// The direct double sum over zeros.
    pub lhs: Complex64,
    /// Diagonal main term N(T)·Σ_{n≤min(M,N)} a_n·conj(b_n).
    pub diagonal_main: Complex64,
    /// Off-diagonal main term
    /// −(T/2π)·Σ a_n·conj(b_m)·(m/n)^{iv}·{Λ(m/n)/√(m/n) + Λ(n/m)/√(n/m)}.
    pub offdiagonal_main: Complex64,
    /// lhs − diagonal_main − offdiagonal_main.
    pub residual: Complex64,
    /// Unit-constant residual shape:
    /// max{M,N}log²T·(Σ|a|²+Σ|b|²) plus the cross term
    /// max{M,N}logT·loglogT·(Σ|b_m|/√m·Σ_{n>m}|a_n|√n + symmetric).
    pub error_shape: f64,
    /// |residual| / error_shape.
    pub shape_ratio: f64,
    /// Number of zero ordinates entering the sum.
    pub zero_count: usize,
}

/// Evaluate the bilinear zero sum for coefficient vectors indexed from n = 1
/// (`coeffs_a[i]` multiplies (i+1)^{−i(γ+v)}) and compare it against the
/// predicted main terms.
pub fn bilinear_sum_check(
    zeros: &ZeroSet,
    coeffs_a: &[Complex64],
    coeffs_b: &[Complex64],
    v: f64,
    t: f64,
) -> Result<BilinearReport> {
    if coeffs_a.len() > MAX_BILINEAR_SUPPORT || coeffs_b.len() > MAX_BILINEAR_SUPPORT {
        return Err(Error::Infeasible(format!(
            "bilinear support {}x{} exceeds the feasible cap of {MAX_BILINEAR_SUPPORT}",
            coeffs_a.len(),
            coeffs_b.len()
        )));
    }
    if !v.is_finite() {
        return Err(Error::Domain(format!("phase shift must be finite, got {v}")));
    }
    if !t.is_finite() || t < 2.0 {
        return Err(Error::Domain(format!(
            "bilinear height must be finite and >= 2, got {t}"
        )));
    }
    if t > zeros.t_max() {
        return Err(Error::InsufficientZeros {
            t_max: zeros.t_max(),
            requested: t,
        });
    }
    let ordinates = zeros.ordinates_up_to(t);
    let log_n: Vec<f64> = (1..=coeffs_a.len()).map(|n| (n as f64).ln()).collect();
    let log_m: Vec<f64> = (1..=coeffs_b.len()).map(|m| (m as f64).ln()).collect();

    let polynomial = |phases: &[f64], coeffs: &[Complex64], angle: f64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (coeff, &ln_n) in coeffs.iter().zip(phases) {
            let (s, c) = (-angle * ln_n).sin_cos();
            acc += coeff * Complex64::new(c, s);
        }
        acc
    };
    let partials: Vec<(f64, f64)> = ordinates
        .par_chunks(SUM_CHUNK)
        .map(|chunk| {
            let mut re = KahanSum::new();
            let mut im = KahanSum::new();
            for &gamma in chunk {
                let angle = gamma + v;
                let a_val = polynomial(&log_n, coeffs_a, angle);
                let b_val = polynomial(&log_m, coeffs_b, angle);
                let term = a_val * b_val.conj();
                re.add(term.re);
                im.add(term.im);
            }
            (re.value(), im.value())
        })
        .collect();
    let mut re = KahanSum::new();
    let mut im = KahanSum::new();
    for (r, i) in partials {
        re.add(r);
        im.add(i);
    }
    let lhs = Complex64::new(re.value(), im.value());

    let zero_count = ordinates.len();
    let diag_len = coeffs_a.len().min(coeffs_b.len());
    let mut diagonal_main = Complex64::new(0.0, 0.0);
    for idx in 0..diag_len {
        diagonal_main += coeffs_a[idx] * coeffs_b[idx].conj();
    }
    diagonal_main *= zero_count as f64;

    let mut off = Complex64::new(0.0, 0.0);
    for (ni, a_n) in coeffs_a.iter().enumerate() {
        let n = (ni + 1) as u64;
        for (mi, b_m) in coeffs_b.iter().enumerate() {
            let m = (mi + 1) as u64;
            if m == n {
                continue;
            }
            let mut weight = 0.0;
            if m % n == 0 {
                let ratio = m / n;
                weight += primes::von_mangoldt(ratio) / (ratio as f64).sqrt();
            }
            if n % m == 0 {
                let ratio = n / m;
                weight += primes::von_mangoldt(ratio) / (ratio as f64).sqrt();
            }
            if weight != 0.0 {
                let phase = Complex64::from_polar(1.0, v * (log_m[mi] - log_n[ni]));
                off += a_n * b_m.conj() * phase * weight;
            }
        }
    }
    let offdiagonal_main = off * (-(t / std::f64::consts::TAU));

    let residual = lhs - diagonal_main - offdiagonal_main;
    let sum_a_sq: f64 = coeffs_a.iter().map(|z| z.norm_sqr()).sum();
    let sum_b_sq: f64 = coeffs_b.iter().map(|z| z.norm_sqr()).sum();
    let max_support = coeffs_a.len().max(coeffs_b.len()) as f64;
    let log_t = t.ln();
    let mut cross = 0.0;
    for (mi, b_m) in coeffs_b.iter().enumerate() {
        let m = (mi + 1) as f64;
        let tail: f64 = coeffs_a
            .iter()
            .enumerate()
            .skip(mi + 1)
            .map(|(ni, a_n)| a_n.norm() * ((ni + 1) as f64).sqrt())
            .sum();
        cross += b_m.norm() / m.sqrt() * tail;
    }
    for (ni, a_n) in coeffs_a.iter().enumerate() {
        let n = (ni + 1) as f64;
        let tail: f64 = coeffs_b
            .iter()
            .enumerate()
            .skip(ni + 1)
            .map(|(mi, b_m)| b_m.norm() * ((mi + 1) as f64).sqrt())
            .sum();
        cross += a_n.norm() / n.sqrt() * tail;
    }
    let error_shape = max_support * log_t * log_t * (sum_a_sq + sum_b_sq)
        + max_support * log_t * log_t.ln().max(0.0) * cross;
    let shape_ratio = if residual.norm() == 0.0 {
        0.0
    } else {
        residual.norm() / error_shape
    };
    Ok(BilinearReport {
        lhs,
        diagonal_main,
        offdiagonal_main,
        residual,
        error_shape,
        shape_ratio,
        zero_count,
    })
}

/// 2k-th discrete moment of a prime-supported polynomial against the
/// factorial moment bound.
#[derive(Debug, Clone, Serialize)]
pub struct MomentBoundReport {
    /// Prime cutoff Y.
    pub y: f64,
    /// Moment order k (the polynomial modulus is raised to 2k).
    pub k: u32,
    /// Σ_γ |Σ_{p≤Y} a_p p^{−1/2−iγ}|^{2k}.
    pub moment_sum: f64,
    /// k!·N(T)·(Σ|a_p|²/p)^k.
    pub bound: f64,
    /// moment_sum / bound (zero when both vanish).
    pub ratio: f64,
    /// Number of zero ordinates entering the sum.
    pub zero_count: usize,
    /// Σ|a_p|²/p.
    pub weight_sum: f64,
}

/// Compare the 2k-th moment of Σ_{p≤Y} a_p p^{−1/2−iγ} over the zero set
/// against k!·N(T)·(Σ|a_p|²/p)^k.
///
/// `coeffs_p[i]` multiplies the i-th prime ≤ Y; the coefficient count must
/// match the number of such primes. The cutoff must satisfy
/// Y^{3k} ≤ T/log T with T the top of the zero set.
pub fn moment_bound_check(
    zeros: &ZeroSet,
    coeffs_p: &[Complex64],
    y: f64,
    k: u32,
) -> Result<MomentBoundReport> {
    if k == 0 {
        return Err(Error::Domain("moment order k must be at least 1".into()));
    }
    if !y.is_finite() || y <= 1.0 {
        return Err(Error::Domain(format!(
            "prime cutoff must be finite and > 1, got {y}"
        )));
    }
    if zeros.is_empty() {
        return Err(Error::EmptyZeroSet);
    }
    let t = zeros.t_max();
    let budget = t / t.ln();
    if y.powi(3 * k as i32) > budget {
        return Err(Error::Domain(format!(
            "cutoff {y} with k = {k} violates Y^(3k) <= T/log T = {budget:.3}; \
             need Y <= {:.3}",
            budget.powf(1.0 / (3.0 * k as f64))
        )));
    }
    let bound_limit = y.floor() as u64;
    let prime_list: Vec<u64> = if bound_limit >= 2 {
        PrimeTable::sieve(bound_limit)?.primes().to_vec()
    } else {
        Vec::new()
    };
    if coeffs_p.len() != prime_list.len() {
        return Err(Error::Domain(format!(
            "expected {} coefficients for the primes up to {y}, got {}",
            prime_list.len(),
            coeffs_p.len()
        )));
    }
    let weight_sum = crate::kahan::kahan_sum(
        coeffs_p
            .iter()
            .zip(&prime_list)
            .map(|(a, &p)| a.norm_sqr() / p as f64),
    );
    let amps: Vec<Complex64> = coeffs_p
        .iter()
        .zip(&prime_list)
        .map(|(a, &p)| a / (p as f64).sqrt())
        .collect();
    let log_p: Vec<f64> = prime_list.iter().map(|&p| (p as f64).ln()).collect();
    let partials: Vec<f64> = zeros
        .ordinates()
        .par_chunks(SUM_CHUNK)
        .map(|chunk| {
            let mut acc = KahanSum::new();
            for &gamma in chunk {
                let mut s = Complex64::new(0.0, 0.0);
                for (amp, &ln_p) in amps.iter().zip(&log_p) {
                    let (sn, cs) = (-gamma * ln_p).sin_cos();
                    s += amp * Complex64::new(cs, sn);
                }
                acc.add(s.norm_sqr().powi(k as i32));
            }
            acc.value()
        })
        .collect();
    let moment_sum = crate::kahan::kahan_sum(partials);
    let factorial: f64 = (1..=k).map(|i| i as f64).product();
    let bound = factorial * zeros.len() as f64 * weight_sum.powi(k as i32);
    let ratio = if moment_sum == 0.0 {
        0.0
    } else {
        moment_sum / bound
    };
    Ok(MomentBoundReport {
        y,
        k,
        moment_sum,
        bound,
        ratio,
        zero_count: zeros.len(),
        weight_sum,
    })
}
