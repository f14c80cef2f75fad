//! Numerical toolkit for the value distribution of the Riemann zeta function
//! near its nontrivial zeros.
//!
//! The crate is organized bottom-up:
//!
//! * [`primes`] — sieves, Λ, truncation weights, prime-power helpers;
//! * [`zeta`] — Riemann–Siegel and Euler–Maclaurin evaluation of ζ, Z(t), θ(t),
//!   derivatives at zeros, and branch-tracked log ζ near the critical line;
//! * [`zeros`] — locating and ingesting zero ordinates, counting functions,
//!   gaps, and pair-correlation statistics;
//! * [`dirichlet`] — the prime Dirichlet polynomial P_X that approximates
//!   log ζ near a zero, with fully explicit remainder budgets;
//! * [`landau_gonek`] — discrete explicit-formula sums Σ x^{iγ} and the
//!   bilinear/combinatorial identities they satisfy;
//! * [`moments`] — empirical discrete moments of Re P_X against Gaussian
//!   moment predictions;
//! * [`random_model`] — the random Euler-product model with exact moments,
//!   Bessel-product characteristic functions, and Monte Carlo sampling;
//! * [`smoothing`] — the band-limited two-sided approximation to sgn and
//!   interval indicators used to convert moments into distribution statements;
//! * [`stats`] — normal-law reports: CDF, KS distances, interval masses,
//!   and the argument function S(t).
//!
//! All fallible operations return [`error::Result`]; numerical preconditions
//! are enforced, not assumed.

pub mod dirichlet;
pub mod error;
pub mod landau_gonek;
pub mod moments;
pub mod random_model;
pub mod smoothing;
pub mod stats;
pub(crate) mod kahan;
pub mod primes;
pub(crate) mod quad;
pub mod zeros;
pub mod zeta;

pub use error::{Error, Result};

/// Shared lazily-computed zero sets so the test suite pays for each zero
/// scan once per binary rather than once per test.
#[cfg(test)]
pub(crate) mod test_support {
    use crate::zeros::{find_zeros, ZeroSet};
    use std::sync::OnceLock;

    macro_rules! shared_zero_set {
        ($name:ident, $height:expr) => {
            pub(crate) fn $name() -> &'static ZeroSet {
                static SET: OnceLock<ZeroSet> = OnceLock::new();
                SET.get_or_init(|| find_zeros($height).expect("zero scan"))
            }
        };
    }

    shared_zero_set!(zeros_100, 100.0);
    shared_zero_set!(zeros_1000, 1000.0);
    shared_zero_set!(zeros_5000, 5000.0);
    shared_zero_set!(zeros_10000, 10000.0);
}
