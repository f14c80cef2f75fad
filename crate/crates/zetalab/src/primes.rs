//! Prime tables and prime-power arithmetic.
//!
//! Everything downstream — Dirichlet polynomials over primes, explicit-formula
//! sums over prime powers, moment predictions phrased in terms of
//! Ψ(Y) = Σ_{p≤Y} 1/p — starts from the same ingredients: a sieve, the
//! von Mangoldt function Λ, the truncation weight w_X, and prefix sums of 1/p
//! and (log p)/p accurate to a few ulps. [`PrimeTable`] bundles them for a
//! fixed sieve limit; the standalone functions ([`is_prime`], [`von_mangoldt`],
//! [`nearest_prime_power_distance`], …) work on arbitrary `u64` input via
//! deterministic Miller–Rabin so that callers never silently misclassify a
//! number that happens to exceed a table's limit.

use crate::error::{Error, Result};
use crate::kahan::KahanSum;

/// Sieved primes up to a fixed limit together with compensated prefix sums of
/// 1/p and (log p)/p.
///
/// The sieve itself is a bit-packed odd-only bitmap (limit/16 bytes), so even
/// a limit of 10⁹ stays near 60 MB during construction; the retained arrays
/// are proportional to π(limit).
#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
    /// `recip_prefix[i]` = Σ_{j ≤ i} 1/primes[j].
    recip_prefix: Vec<f64>,
    /// `logrecip_prefix[i]` = Σ_{j ≤ i} log(primes[j])/primes[j].
    logrecip_prefix: Vec<f64>,
}

impl PrimeTable {
    /// Sieve all primes up to `limit` (inclusive). Requires `limit ≥ 2`.
    pub fn sieve(limit: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::Domain(format!(
                "sieve limit must be at least 2, got {limit}"
            )));
        }
        if limit > (1 << 40) {
            return Err(Error::Domain(format!(
                "sieve limit {limit} exceeds the supported maximum 2^40"
            )));
        }

        // Bit i of the map represents the odd number 2i+1; bit 0 (the number 1)
        // is cleared up front.
        let n_odds = ((limit - 1) / 2 + 1) as usize;
        let mut bits = vec![u64::MAX; n_odds.div_ceil(64)];
        let clear = |bits: &mut [u64], i: usize| bits[i / 64] &= !(1u64 << (i % 64));
        let get = |bits: &[u64], i: usize| bits[i / 64] >> (i % 64) & 1 == 1;
        clear(&mut bits, 0);

        let mut p = 3u64;
        while p * p <= limit {
            if get(&bits, (p / 2) as usize) {
                let mut m = p * p;
                while m <= limit {
                    clear(&mut bits, (m / 2) as usize);
                    m += 2 * p;
                }
            }
            p += 2;
        }

        let mut primes = Vec::new();
        let mut recip_prefix = Vec::new();
        let mut logrecip_prefix = Vec::new();
        let mut recip = KahanSum::new();
        let mut logrecip = KahanSum::new();
        let mut push = |q: u64,
                        primes: &mut Vec<u64>,
                        rp: &mut Vec<f64>,
                        lp: &mut Vec<f64>| {
            let qf = q as f64;
            recip.add(1.0 / qf);
            logrecip.add(qf.ln() / qf);
            primes.push(q);
            rp.push(recip.value());
            lp.push(logrecip.value());
        };

        push(2, &mut primes, &mut recip_prefix, &mut logrecip_prefix);
        for i in 1..n_odds {
            if get(&bits, i) {
                push(
                    2 * i as u64 + 1,
                    &mut primes,
                    &mut recip_prefix,
                    &mut logrecip_prefix,
                );
            }
        }

        Ok(Self {
            limit,
            primes,
            recip_prefix,
            logrecip_prefix,
        })
    }

    /// The sieve limit (largest integer whose primality the table knows).
    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// All primes up to the limit, ascending.
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// π(limit), the number of primes in the table.
    pub fn count(&self) -> usize {
        self.primes.len()
    }

    /// The primes ≤ `bound`, as a slice of the full table.
    pub fn primes_up_to(&self, bound: u64) -> Result<&[u64]> {
        self.check_bound(bound)?;
        let idx = self.primes.partition_point(|&p| p <= bound);
        Ok(&self.primes[..idx])
    }

    /// Ψ(bound) = Σ_{p ≤ bound} 1/p. Requires `2 ≤ bound ≤ limit`.
    pub fn reciprocal_sum(&self, bound: u64) -> Result<f64> {
        self.check_bound(bound)?;
        let idx = self.primes.partition_point(|&p| p <= bound);
        Ok(if idx == 0 {
            0.0
        } else {
            self.recip_prefix[idx - 1]
        })
    }

    /// Σ_{p ≤ bound} (log p)/p. Requires `2 ≤ bound ≤ limit`.
    pub fn log_reciprocal_sum(&self, bound: u64) -> Result<f64> {
        self.check_bound(bound)?;
        let idx = self.primes.partition_point(|&p| p <= bound);
        Ok(if idx == 0 {
            0.0
        } else {
            self.logrecip_prefix[idx - 1]
        })
    }

    /// Ψ(limit) over the whole table.
    pub fn psi(&self) -> f64 {
        *self.recip_prefix.last().expect("table is never empty")
    }

    /// All prime powers p^k ≤ `bound` (k ≥ 1), sorted ascending by value.
    pub fn prime_powers_up_to(&self, bound: u64) -> Result<Vec<PrimePower>> {
        self.check_bound(bound)?;
        let mut out = Vec::new();
        for &p in self.primes_up_to(bound)? {
            let mut n = p;
            let mut k = 1u32;
            loop {
                out.push(PrimePower {
                    value: n,
                    base: p,
                    exponent: k,
                });
                match n.checked_mul(p) {
                    Some(next) if next <= bound => {
                        n = next;
                        k += 1;
                    }
                    _ => break,
                }
            }
        }
        out.sort_unstable_by_key(|pp| pp.value);
        Ok(out)
    }

    fn check_bound(&self, bound: u64) -> Result<()> {
        if bound < 2 {
            return Err(Error::Domain(format!(
                "bound must be at least 2, got {bound}"
            )));
        }
        if bound > self.limit {
            return Err(Error::InsufficientSieve {
                limit: self.limit,
                needed: bound,
            });
        }
        Ok(())
    }
}

/// A prime power p^k with its base and exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimePower {
    /// The value p^k.
    pub value: u64,
    /// The prime base p.
    pub base: u64,
    /// The exponent k ≥ 1.
    pub exponent: u32,
}

/// Deterministic Miller–Rabin primality test, exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &SMALL {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    // These twelve bases are a known deterministic witness set for all u64.
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Largest integer r with r^k ≤ n.
fn integer_root(n: u64, k: u32) -> u64 {
    if k == 1 {
        return n;
    }
    let mut r = (n as f64).powf(1.0 / k as f64).round() as u64;
    // Float rounding can be off by one either way; nudge to the exact floor.
    while r > 1 && checked_pow(r, k).map_or(true, |v| v > n) {
        r -= 1;
    }
    while checked_pow(r + 1, k).map_or(false, |v| v <= n) {
        r += 1;
    }
    r
}

fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    let mut acc = 1u64;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

/// If n = p^k for a prime p and k ≥ 1, return (p, k); otherwise `None`.
pub fn prime_power_base(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    for k in 1..=63u32 {
        if (1u64 << k.min(63)) > n && k > 1 {
            break;
        }
        let r = integer_root(n, k);
        if checked_pow(r, k) == Some(n) && is_prime(r) {
            return Some((r, k));
        }
    }
    None
}

/// Von Mangoldt function: Λ(n) = log p when n = p^k, otherwise 0.
pub fn von_mangoldt(n: u64) -> f64 {
    match prime_power_base(n) {
        Some((p, _)) => (p as f64).ln(),
        None => 0.0,
    }
}

/// Distance ⟨x⟩ from a real x > 1 to the nearest prime power *other than x
/// itself* (so ⟨4⟩ = 1, the distance to 3 or 5, not 0).
pub fn nearest_prime_power_distance(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 1.0 {
        return Err(Error::Domain(format!(
            "nearest_prime_power_distance needs a finite x > 1, got {x}"
        )));
    }
    if x >= (1u64 << 62) as f64 {
        return Err(Error::Domain(format!(
            "nearest_prime_power_distance argument {x} exceeds the supported range"
        )));
    }
    let left = {
        let mut q = x.floor() as u64;
        loop {
            if q < 2 {
                break None;
            }
            if (q as f64) != x && prime_power_base(q).is_some() {
                break Some(x - q as f64);
            }
            q -= 1;
        }
    };
    let right = {
        let mut q = (x.ceil() as u64).max(2);
        loop {
            if (q as f64) != x && prime_power_base(q).is_some() {
                break q as f64 - x;
            }
            q += 1;
        }
    };
    Ok(match left {
        Some(l) => l.min(right),
        None => right,
    })
}

/// Truncation weight w_X: 1 on [1, X], log(X²/n)/log X on (X, X²], undefined
/// beyond X². Requires X ≥ 4.
pub fn weight_w(n: u64, x: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("weight_w needs n ≥ 1".into()));
    }
    if !(x >= 4.0) {
        return Err(Error::Domain(format!(
            "weight_w needs X ≥ 4, got {x}"
        )));
    }
    let nf = n as f64;
    if nf <= x {
        Ok(1.0)
    } else if nf <= x * x {
        Ok((x * x / nf).ln() / x.ln())
    } else {
        Err(Error::OutOfSupport(format!(
            "weight_w({n}, {x}) is outside the support n ≤ X²"
        )))
    }
}

/// Weighted von Mangoldt function Λ_X(n) = Λ(n)·w_X(n), extended by zero
/// beyond X².
pub fn weighted_von_mangoldt(n: u64, x: f64) -> Result<f64> {
    if !(x >= 4.0) {
        return Err(Error::Domain(format!(
            "weighted_von_mangoldt needs X ≥ 4, got {x}"
        )));
    }
    if n == 0 {
        return Err(Error::Domain("weighted_von_mangoldt needs n ≥ 1".into()));
    }
    if (n as f64) > x * x {
        return Ok(0.0);
    }
    let lambda = von_mangoldt(n);
    if lambda == 0.0 {
        return Ok(0.0);
    }
    Ok(lambda * weight_w(n, x)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    const FIRST_25: [u64; 25] = [
        2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83,
        89, 97,
    ];

    #[test]
    fn sieve_lists_first_primes() {
        let table = PrimeTable::sieve(100).unwrap();
        assert_eq!(table.primes(), &FIRST_25);
        assert_eq!(table.count(), 25);
        assert_eq!(table.limit(), 100);
    }

    #[test]
    fn sieve_prime_counts() {
        assert_eq!(PrimeTable::sieve(1_000).unwrap().count(), 168);
        assert_eq!(PrimeTable::sieve(10_000).unwrap().count(), 1_229);
        assert_eq!(PrimeTable::sieve(2).unwrap().primes(), &[2]);
        assert_eq!(PrimeTable::sieve(3).unwrap().primes(), &[2, 3]);
    }

    #[test]
    fn sieve_rejects_tiny_limit() {
        assert!(PrimeTable::sieve(0).is_err());
        assert!(PrimeTable::sieve(1).is_err());
    }

    #[test]
    fn reciprocal_sum_to_100() {
        let table = PrimeTable::sieve(100).unwrap();
        assert_relative_eq!(
            table.reciprocal_sum(100).unwrap(),
            1.802_817_201_048_870_9,
            max_relative = 1e-15
        );
        assert_relative_eq!(table.psi(), 1.802_817_201_048_870_9, max_relative = 1e-15);
    }

    #[test]
    fn reciprocal_sum_small_bound_is_exact() {
        let table = PrimeTable::sieve(100).unwrap();
        let expect = 0.5 + 1.0 / 3.0 + 0.2 + 1.0 / 7.0;
        assert_relative_eq!(
            table.reciprocal_sum(10).unwrap(),
            expect,
            max_relative = 1e-15
        );
        // Bound between primes: same prefix as the largest prime below it.
        assert_eq!(
            table.reciprocal_sum(10).unwrap(),
            table.reciprocal_sum(7).unwrap()
        );
    }

    #[test]
    fn log_reciprocal_sums() {
        let table = PrimeTable::sieve(10_000).unwrap();
        assert_relative_eq!(
            table.log_reciprocal_sum(100).unwrap(),
            3.369_470_874_998_981_9,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            table.log_reciprocal_sum(10_000).unwrap(),
            7.890_863_604_287_117_6,
            max_relative = 1e-14
        );
    }

    #[test]
    fn bound_checks() {
        let table = PrimeTable::sieve(100).unwrap();
        assert!(matches!(
            table.reciprocal_sum(101),
            Err(Error::InsufficientSieve { .. })
        ));
        assert!(table.reciprocal_sum(1).is_err());
        assert!(table.primes_up_to(200).is_err());
    }

    #[test]
    fn von_mangoldt_values() {
        assert_eq!(von_mangoldt(1), 0.0);
        assert_relative_eq!(von_mangoldt(2), 2f64.ln());
        assert_relative_eq!(von_mangoldt(4), 2f64.ln());
        assert_relative_eq!(von_mangoldt(1024), 2f64.ln());
        assert_relative_eq!(von_mangoldt(9), 3f64.ln());
        assert_relative_eq!(von_mangoldt(125), 5f64.ln());
        assert_relative_eq!(von_mangoldt(2401), 7f64.ln());
        assert_eq!(von_mangoldt(6), 0.0);
        assert_eq!(von_mangoldt(12), 0.0);
        assert_eq!(von_mangoldt(36), 0.0);
    }

    #[test]
    fn prime_power_base_cases() {
        assert_eq!(prime_power_base(1), None);
        assert_eq!(prime_power_base(2), Some((2, 1)));
        assert_eq!(prime_power_base(64), Some((2, 6)));
        assert_eq!(prime_power_base(243), Some((3, 5)));
        assert_eq!(prime_power_base(36), None);
        assert_eq!(prime_power_base(1 << 62), Some((2, 62)));
        assert_eq!(prime_power_base(3u64.pow(39)), Some((3, 39)));
    }

    #[test]
    fn miller_rabin_matches_sieve_below_10k() {
        let table = PrimeTable::sieve(10_000).unwrap();
        let mut idx = 0;
        for n in 0..=10_000u64 {
            let in_table = idx < table.count() && table.primes()[idx] == n;
            assert_eq!(is_prime(n), in_table, "n = {n}");
            if in_table {
                idx += 1;
            }
        }
    }

    #[test]
    fn miller_rabin_large_values() {
        assert!(is_prime((1 << 61) - 1)); // Mersenne prime 2^61 - 1
        assert!(is_prime(1_000_000_007));
        assert!(is_prime(1_000_000_009));
        assert!(!is_prime(561)); // Carmichael
        assert!(!is_prime(2_047)); // strong pseudoprime base 2
        assert!(!is_prime(3_215_031_751)); // strong psp bases 2,3,5,7
        assert!(!is_prime((1 << 61) + 1));
    }

    #[test]
    fn weight_plateau_ramp_and_edges() {
        assert_eq!(weight_w(1, 10.0).unwrap(), 1.0);
        assert_eq!(weight_w(10, 10.0).unwrap(), 1.0);
        assert_relative_eq!(
            weight_w(50, 10.0).unwrap(),
            2f64.ln() / 10f64.ln(),
            max_relative = 1e-15
        );
        assert_relative_eq!(weight_w(100, 10.0).unwrap(), 0.0, epsilon = 1e-15);
        assert!(weight_w(101, 10.0).is_err());
        assert!(weight_w(0, 10.0).is_err());
        assert!(weight_w(5, 3.9).is_err());
    }

    #[test]
    fn weighted_von_mangoldt_composes() {
        let x = 10.0;
        assert_relative_eq!(
            weighted_von_mangoldt(8, x).unwrap(),
            2f64.ln(),
            max_relative = 1e-15
        );
        assert_relative_eq!(
            weighted_von_mangoldt(64, x).unwrap(),
            2f64.ln() * (100f64 / 64.0).ln() / 10f64.ln(),
            max_relative = 1e-14
        );
        assert_eq!(weighted_von_mangoldt(60, x).unwrap(), 0.0);
        assert_eq!(weighted_von_mangoldt(101, x).unwrap(), 0.0);
        assert_eq!(weighted_von_mangoldt(10_000, x).unwrap(), 0.0);
    }

    #[test]
    fn nearest_prime_power_distance_cases() {
        let d = |x: f64| nearest_prime_power_distance(x).unwrap();
        assert_eq!(d(2.0), 1.0); // 3 is nearest, 2 itself excluded
        assert_eq!(d(2.5), 0.5);
        assert_eq!(d(4.0), 1.0);
        assert_eq!(d(6.0), 1.0);
        assert_eq!(d(9.0), 1.0); // 8
        assert_eq!(d(16.0), 1.0); // 17
        assert_eq!(d(27.0), 2.0); // 25 and 29
        assert_eq!(d(8.5), 0.5);
        assert_eq!(d(121.0), 4.0); // 125 = 5³
        assert_eq!(d(1.5), 0.5);
        assert!(nearest_prime_power_distance(1.0).is_err());
        assert!(nearest_prime_power_distance(f64::NAN).is_err());
    }

    #[test]
    fn prime_powers_up_to_100() {
        let table = PrimeTable::sieve(100).unwrap();
        let pps = table.prime_powers_up_to(100).unwrap();
        assert_eq!(pps.len(), 35);
        assert!(pps.windows(2).all(|w| w[0].value < w[1].value));
        let chebyshev: f64 = pps.iter().map(|pp| (pp.base as f64).ln()).sum();
        assert_relative_eq!(chebyshev, 94.045_311_229_357_39, max_relative = 1e-13);
        assert!(pps.iter().all(|pp| {
            checked_pow(pp.base, pp.exponent) == Some(pp.value) && is_prime(pp.base)
        }));
    }

    proptest! {
        #[test]
        fn reciprocal_prefix_matches_naive(bound in 2u64..2_000) {
            let table = PrimeTable::sieve(2_000).unwrap();
            let naive: f64 = table
                .primes()
                .iter()
                .take_while(|&&p| p <= bound)
                .map(|&p| 1.0 / p as f64)
                .sum();
            prop_assert!((table.reciprocal_sum(bound).unwrap() - naive).abs() < 1e-12);
        }

        #[test]
        fn weight_is_monotone_and_bounded(n in 1u64..=256, m in 1u64..=256) {
            let x = 16.0;
            let (lo, hi) = (n.min(m), n.max(m));
            let w_lo = weight_w(lo, x).unwrap();
            let w_hi = weight_w(hi, x).unwrap();
            prop_assert!((0.0..=1.0).contains(&w_lo));
            prop_assert!((0.0..=1.0).contains(&w_hi));
            prop_assert!(w_lo >= w_hi);
        }

        #[test]
        fn von_mangoldt_positive_iff_prime_power(n in 1u64..100_000) {
            let lambda = von_mangoldt(n);
            prop_assert_eq!(lambda > 0.0, prime_power_base(n).is_some());
        }
    }
}
