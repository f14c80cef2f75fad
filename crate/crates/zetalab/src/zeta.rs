//! Critical-line and near-line evaluation of the Riemann zeta function.
//!
//! Two complementary evaluation methods cover the working range:
//!
//! * **Euler–Maclaurin** for arbitrary points with Re s > 0 — cost O(|Im s|)
//!   per point, absolute accuracy ~10⁻⁸ with the default term count; also the
//!   source of the analytic derivative ζ′.
//! * **Riemann–Siegel** on the critical line for t ≥ 2000 — cost O(√t) per
//!   point, main sum plus four correction terms C₀..C₃ built from the entire
//!   function Ψ(z) = cos(π(z²/2 + 3/8))/cos(πz), giving absolute errors well
//!   below 10⁻⁸ everywhere at or above the cutover.
//!
//! The two methods are cross-validated against each other in an overlap band
//! by the test suite, so a convention slip in either one (phase, sign, or
//! normalization) cannot survive unnoticed.
//!
//! `log_zeta_at` tracks the continuous branch of log ζ from the σ = 2 anchor,
//! where |ζ(2+it) − 1| ≤ ζ(2) − 1 < 1 guarantees the principal branch is the
//! continuous one, by integrating Im(ζ′/ζ) along a horizontal segment.

use crate::error::{Error, Result};
use crate::kahan::KahanSum;
use crate::quad::adaptive_simpson;
use crate::zeros::ZeroSet;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Heights at or above this are evaluated by Riemann–Siegel; below it the
/// correction series has not yet reached full accuracy, so Euler–Maclaurin
/// (still fast at these heights) is used instead.
const RS_CUTOVER: f64 = 2000.0;

/// Which evaluation method produced a critical-line value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ZetaMethod {
    /// Euler–Maclaurin summation of ζ(1/2 + it), rotated by e^{iθ(t)}.
    EulerMaclaurin,
    /// Riemann–Siegel main sum plus correction terms C₀..C₃.
    RiemannSiegel,
}

/// A critical-line sample: Z(t), θ(t), and the method that produced them.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CriticalPoint {
    /// Ordinate t.
    pub t: f64,
    /// Hardy Z(t); ζ(1/2+it) = Z(t)·e^{−iθ(t)}.
    pub z_value: f64,
    /// Riemann–Siegel phase θ(t).
    pub theta: f64,
    /// Evaluation method used for `z_value`.
    pub method: ZetaMethod,
}

/// The complex offset z = u + iv at which log ζ(ρ + z) is sampled, with the
/// admissibility bounds tied to a polynomial length X: 0 < u ≤ 1/log X and
/// |v| ≤ C_v/log X.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Shift {
    u: f64,
    v: f64,
    x: f64,
}

impl Shift {
    /// A shift with the default bound |v| ≤ 1/log X.
    pub fn new(u: f64, v: f64, x: f64) -> Result<Self> {
        Self::with_v_bound(u, v, x, 1.0)
    }

    /// A shift with a configurable bound |v| ≤ c_v/log X.
    pub fn with_v_bound(u: f64, v: f64, x: f64, c_v: f64) -> Result<Self> {
        if !(x >= 4.0) {
            return Err(Error::Domain(format!("shift needs X ≥ 4, got {x}")));
        }
        if !(c_v > 0.0) {
            return Err(Error::Domain(format!("shift needs C_v > 0, got {c_v}")));
        }
        let log_x = x.ln();
        if !(u > 0.0 && u <= 1.0 / log_x) {
            return Err(Error::Domain(format!(
                "shift needs 0 < u ≤ 1/log X = {:.6}, got u = {u}",
                1.0 / log_x
            )));
        }
        if !(v.abs() <= c_v / log_x) {
            return Err(Error::Domain(format!(
                "shift needs |v| ≤ {c_v}/log X = {:.6}, got v = {v}",
                c_v / log_x
            )));
        }
        Ok(Self { u, v, x })
    }

    /// Real part u of the shift.
    pub fn u(&self) -> f64 {
        self.u
    }

    /// Imaginary part v of the shift.
    pub fn v(&self) -> f64 {
        self.v
    }

    /// The polynomial length X the bounds refer to.
    pub fn x(&self) -> f64 {
        self.x
    }

    /// The shift as a complex number u + iv.
    pub fn z(&self) -> Complex64 {
        Complex64::new(self.u, self.v)
    }
}

/// Riemann–Siegel phase θ(t) by the standard asymptotic expansion
/// (t/2)·log(t/2π) − t/2 − π/8 + 1/(48t) + 7/(5760t³) + 31/(80640t⁵),
/// accurate to well under 10⁻⁹ for t ≥ 20 (usefully accurate down to t ≈ 10,
/// degrading to ~10⁻³ by t = 2).
pub fn riemann_siegel_theta(t: f64) -> Result<f64> {
    if !t.is_finite() || t < 2.0 {
        return Err(Error::Domain(format!(
            "riemann_siegel_theta needs t ≥ 2, got {t}"
        )));
    }
    let t2 = t * t;
    Ok(0.5 * t * (t / (2.0 * PI)).ln() - 0.5 * t - PI / 8.0
        + 1.0 / (48.0 * t)
        + 7.0 / (5760.0 * t * t2)
        + 31.0 / (80640.0 * t * t2 * t2))
}

/// Default Euler–Maclaurin truncation: N = max(⌈|t|⌉, 30) + 20 keeps the
/// absolute error near 10⁻⁹ throughout the working strip.
pub fn euler_maclaurin_terms(t: f64) -> usize {
    (t.abs().ceil().max(30.0) as usize) + 20
}

/// ζ(s) by Euler–Maclaurin with N = `terms`:
/// Σ_{n≤N} n^{−s} + N^{1−s}/(s−1) − N^{−s}/2 + Bernoulli corrections B₂–B₈.
///
/// Requires Re s > 0, s ≠ 1, terms ≥ 10. Absolute error is ~10⁻⁹ once
/// N ≥ |Im s| + 20 (relative error 10⁻⁹ wherever |ζ| is of order one).
pub fn zeta_euler_maclaurin(s: Complex64, terms: usize) -> Result<Complex64> {
    em_core(s, terms, false).map(|(z, _)| z)
}

/// ζ(s) together with ζ′(s), both from the same Euler–Maclaurin truncation,
/// ζ′ by exact term-by-term differentiation of the truncated formula.
pub fn zeta_em_with_derivative(s: Complex64, terms: usize) -> Result<(Complex64, Complex64)> {
    em_core(s, terms, true).map(|(z, dz)| (z, dz.expect("derivative requested")))
}

fn em_core(
    s: Complex64,
    terms: usize,
    derivative: bool,
) -> Result<(Complex64, Option<Complex64>)> {
    if s.re <= 0.0 {
        return Err(Error::Domain(format!(
            "zeta_euler_maclaurin needs Re s > 0, got {s}"
        )));
    }
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::Domain("zeta has a pole at s = 1".into()));
    }
    if terms < 10 {
        return Err(Error::Domain(format!(
            "zeta_euler_maclaurin needs at least 10 terms, got {terms}"
        )));
    }

    let n = terms;
    let mut sum_re = KahanSum::new();
    let mut sum_im = KahanSum::new();
    let mut dsum_re = KahanSum::new();
    let mut dsum_im = KahanSum::new();
    for k in 1..=n {
        let ln_k = (k as f64).ln();
        let term = (-s * ln_k).exp();
        sum_re.add(term.re);
        sum_im.add(term.im);
        if derivative {
            dsum_re.add(-ln_k * term.re);
            dsum_im.add(-ln_k * term.im);
        }
    }

    let nf = n as f64;
    let ln_n = nf.ln();
    let n_minus_s = (-s * ln_n).exp(); // N^{−s}
    let s1 = s - 1.0;

    // Bernoulli polynomial factors: P₁ = s, P₂ = s(s+1)(s+2), P₃ = s(s+1)…(s+4),
    // P₄ = s(s+1)…(s+6).
    let p1 = s;
    let p2 = s * (s + 1.0) * (s + 2.0);
    let p3 = p2 * (s + 3.0) * (s + 4.0);
    let p4 = p3 * (s + 5.0) * (s + 6.0);
    let nf2 = nf * nf;
    let nf4 = nf2 * nf2;
    let bernoulli = p1 / (12.0 * nf) - p2 / (720.0 * nf * nf2) + p3 / (30_240.0 * nf * nf4)
        - p4 / (1_209_600.0 * nf * nf2 * nf4);

    let tail = n_minus_s * (nf / s1 - 0.5 + bernoulli);
    let zeta = Complex64::new(sum_re.value(), sum_im.value()) + tail;

    let dz = if derivative {
        // d/ds of each closed-form tail piece; the shared factor N^{−s}
        // differentiates to −log N · N^{−s}.
        let p1d = Complex64::new(1.0, 0.0);
        let p2d = 3.0 * s * s + 6.0 * s + 2.0;
        let p3d = ((5.0 * s + 40.0) * s + 105.0) * s * s + 100.0 * s + 24.0;
        let p4d = (((((7.0 * s + 126.0) * s + 875.0) * s + 2940.0) * s + 4872.0) * s + 3528.0) * s
            + 720.0;
        let bern_d = p1d / (12.0 * nf) - p2d / (720.0 * nf * nf2) + p3d / (30_240.0 * nf * nf4)
            - p4d / (1_209_600.0 * nf * nf2 * nf4);
        let tail_d = n_minus_s
            * (-ln_n * (nf / s1 - 0.5 + bernoulli) - nf / (s1 * s1) + bern_d);
        Some(Complex64::new(dsum_re.value(), dsum_im.value()) + tail_d)
    } else {
        None
    };
    Ok((zeta, dz))
}

/// Z(t), θ(t), and the evaluation method, as one sample.
pub fn critical_point(t: f64) -> Result<CriticalPoint> {
    let theta = riemann_siegel_theta(t)?;
    let (z_value, method) = if t >= RS_CUTOVER {
        (riemann_siegel_z(t, theta), ZetaMethod::RiemannSiegel)
    } else {
        (euler_maclaurin_z(t, theta)?, ZetaMethod::EulerMaclaurin)
    };
    Ok(CriticalPoint {
        t,
        z_value,
        theta,
        method,
    })
}

/// Hardy's function Z(t) = e^{iθ(t)} ζ(1/2 + it), real for real t.
/// Riemann–Siegel for t ≥ 2000, Euler–Maclaurin fallback below (see
/// [`critical_point`] for the method flag).
pub fn hardy_z(t: f64) -> Result<f64> {
    critical_point(t).map(|c| c.z_value)
}

pub(crate) fn euler_maclaurin_z(t: f64, theta: f64) -> Result<f64> {
    let s = Complex64::new(0.5, t);
    let z = zeta_euler_maclaurin(s, euler_maclaurin_terms(t))?;
    Ok((Complex64::from_polar(1.0, theta) * z).re)
}

pub(crate) fn riemann_siegel_z(t: f64, theta: f64) -> f64 {
    let tau = (t / (2.0 * PI)).sqrt();
    let m = tau.floor();
    let mut main = KahanSum::new();
    let mut n = 1u64;
    while (n as f64) <= m {
        let nf = n as f64;
        main.add((theta - t * nf.ln()).cos() / nf.sqrt());
        n += 1;
    }
    let p = tau - m;
    let z = 1.0 - 2.0 * p;
    let inv_tau = 1.0 / tau;
    let corr = rs_coefficient(0, z)
        + inv_tau
            * (rs_coefficient(1, z)
                + inv_tau * (rs_coefficient(2, z) + inv_tau * rs_coefficient(3, z)));
    let sign = if (m as u64) % 2 == 0 { -1.0 } else { 1.0 }; // (−1)^{m+1}
    2.0 * main.value() + sign * corr / tau.sqrt()
}

/// |ζ′(1/2 + iγ)| at a zero ordinate, computed as |Z′(γ)| by Richardson-
/// extrapolated central differences of Z. The identity |ζ′(ρ)| = |Z′(γ)|
/// holds exactly at zeros since ζ(1/2+it) = Z(t)e^{−iθ(t)} and Z(γ) = 0.
///
/// `gamma` must match an ordinate of `zeros` to within 10⁻⁶; the matched
/// (refined) ordinate is the one differentiated.
pub fn zeta_prime_at_zero(gamma: f64, zeros: &ZeroSet) -> Result<f64> {
    let t = zeros
        .nearest_within(gamma, 1e-6)
        .ok_or(Error::UnknownZero(gamma))?;
    // Step size balances the O(h⁴) Richardson truncation against the ~1e-8
    // absolute noise of a single Z evaluation.
    let h = 5e-3;
    let d = |h: f64| -> Result<f64> { Ok((hardy_z(t + h)? - hardy_z(t - h)?) / (2.0 * h)) };
    let d1 = d(h)?;
    let d2 = d(0.5 * h)?;
    Ok(((4.0 * d2 - d1) / 3.0).abs())
}

/// log ζ(σ₀ + it) = log|ζ| + i·arg ζ with the argument obtained by continuous
/// variation from the σ = 2 anchor (principal branch there), integrating
/// Im(ζ′/ζ) along the horizontal segment at height t.
///
/// Requires σ₀ ≥ 1/2 and t ≥ 2; at σ₀ = 1/2 the height must keep clear of
/// zero ordinates (the endpoint sits on the critical line, where all known
/// zeros live). Fails with a path-through-zero error if the segment passes
/// within ~10⁻¹² of a zero of ζ.
pub fn log_zeta_at(sigma0: f64, t: f64) -> Result<Complex64> {
    if !(sigma0 >= 0.5) {
        return Err(Error::Domain(format!(
            "log_zeta_at needs σ ≥ 1/2, got {sigma0}"
        )));
    }
    if !(t >= 2.0) {
        return Err(Error::Domain(format!("log_zeta_at needs t ≥ 2, got {t}")));
    }
    let terms = euler_maclaurin_terms(t);
    let here = zeta_euler_maclaurin(Complex64::new(sigma0, t), terms)?;
    if here.norm() < 1e-12 {
        return Err(Error::PathThroughZero {
            t,
            distance: here.norm(),
        });
    }
    let re = here.norm().ln();

    // Anchor: |ζ(2+it) − 1| ≤ ζ(2) − 1 < 1, so the principal argument at
    // σ = 2 is already the continuously varied one.
    let anchor = zeta_euler_maclaurin(Complex64::new(2.0, t), terms)?.arg();

    // Im log ζ(σ₀+it) = arg ζ(2+it) − ∫_{σ₀}^{2} Im(ζ′/ζ)(σ+it) dσ.
    let integral = adaptive_simpson(
        |sigma| {
            let (z, dz) = zeta_em_with_derivative(Complex64::new(sigma, t), terms)?;
            let norm = z.norm();
            if norm < 1e-12 {
                return Err(Error::PathThroughZero { t, distance: norm });
            }
            Ok((dz / z).im)
        },
        sigma0,
        2.0,
        1e-9,
        "Im zeta'/zeta branch tracking",
    )?;
    Ok(Complex64::new(re, anchor - integral))
}

/// log ζ(ρ + z) for ρ = 1/2 + iγ and an admissible shift z = u + iv:
/// log|ζ(ρ+z)| + i·arg ζ(ρ+z), the argument by continuous variation from
/// σ = 2 (see [`log_zeta_at`]).
pub fn log_zeta_shifted(gamma: f64, shift: &Shift) -> Result<Complex64> {
    log_zeta_at(0.5 + shift.u(), gamma + shift.v())
}

/// Riemann–Siegel correction coefficient C_j(z), j ≤ 3, with
/// z = 1 − 2(τ − ⌊τ⌋):
///
/// C₀ = Ψ, C₁ = Ψ⁽³⁾/(12π²), C₂ = Ψ″/(16π²) + Ψ⁽⁶⁾/(288π⁴),
/// C₃ = Ψ′/(32π²) + Ψ⁽⁵⁾/(120π⁴) + Ψ⁽⁹⁾/(10368π⁶),
///
/// where Ψ(z) = cos(π(z²/2 + 3/8))/cos(πz) is entire (every zero of the
/// denominator is cancelled), evaluated through its Taylor series so that
/// high-order derivatives are exact series manipulations rather than
/// numerical differentiation.
pub(crate) fn rs_coefficient(j: usize, z: f64) -> f64 {
    let pi2 = PI * PI;
    match j {
        0 => psi_derivative(z, 0),
        1 => psi_derivative(z, 3) / (12.0 * pi2),
        2 => psi_derivative(z, 2) / (16.0 * pi2) + psi_derivative(z, 6) / (288.0 * pi2 * pi2),
        3 => {
            psi_derivative(z, 1) / (32.0 * pi2)
                + psi_derivative(z, 5) / (120.0 * pi2 * pi2)
                + psi_derivative(z, 9) / (10_368.0 * pi2 * pi2 * pi2)
        }
        _ => unreachable!("only C_0..C_3 are implemented"),
    }
}

/// Taylor order for Ψ; coefficients beyond this are < 10⁻³⁰ and contribute
/// nothing to ninth derivatives on |z| ≤ 1.
const PSI_ORDER: usize = 72;

fn psi_taylor() -> &'static [f64; PSI_ORDER] {
    static COEFFS: OnceLock<[f64; PSI_ORDER]> = OnceLock::new();
    COEFFS.get_or_init(|| {
        // Cauchy coefficient extraction: ψ_n = (1/2πi) ∮_{|w|=R} Ψ(w) w^{−n−1} dw,
        // evaluated by the M-point trapezoid rule, which is spectrally accurate
        // on a circle. Dividing the num/den power series term by term is NOT
        // an option here: that recurrence is unstable (roundoff excites a
        // homogeneous solution growing like 2ⁿ, seeded by the cos(πw) zeros at
        // ±1/2), while the contour values are O(1)-conditioned everywhere on
        // |w| = 2 — the circle keeps a distance 1/2 from every zero of cos(πw),
        // all of which the numerator cancels anyway.
        const M: usize = 512;
        const R: f64 = 2.0;
        let samples: Vec<Complex64> = (0..M)
            .map(|j| {
                let w = Complex64::from_polar(R, 2.0 * PI * j as f64 / M as f64);
                (PI * (0.5 * w * w + 0.375)).cos() / (PI * w).cos()
            })
            .collect();
        let mut psi = [0.0f64; PSI_ORDER];
        let mut r_pow = 1.0;
        for (n, coeff) in psi.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, s) in samples.iter().enumerate() {
                // Reduce the angle index mod M so large n·j never degrades
                // the trigonometric argument.
                let idx = (n * j) % M;
                acc += s * Complex64::from_polar(1.0, -2.0 * PI * idx as f64 / M as f64);
            }
            *coeff = acc.re / (M as f64 * r_pow);
            r_pow *= R;
        }
        // Ψ is even, so the odd coefficients are exactly zero; clearing the
        // ~10⁻¹⁷ contour noise there keeps high odd derivatives at the origin
        // exact instead of noise × n!.
        for (n, coeff) in psi.iter_mut().enumerate() {
            if n % 2 == 1 {
                *coeff = 0.0;
            }
        }
        psi
    })
}

/// k-th derivative of Ψ at z, |z| ≤ ~1.1, by exact differentiation of the
/// Taylor series.
fn psi_derivative(z: f64, k: usize) -> f64 {
    let coeffs = psi_taylor();
    // Ψ^{(k)}(z) = Σ_{n≥k} ψ_n · n!/(n−k)! · z^{n−k}, evaluated by Horner.
    let mut acc = 0.0f64;
    for n in (k..PSI_ORDER).rev() {
        let mut falling = 1.0f64;
        for i in 0..k {
            falling *= (n - i) as f64;
        }
        acc = acc * z + coeffs[n] * falling;
    }
    acc
}
