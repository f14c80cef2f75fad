//! Error type shared by every module in the crate.
//!
//! Numerical routines here have real mathematical preconditions (sieve limits,
//! convergence domains, data completeness), and violating them silently is far
//! worse than refusing loudly. Every fallible public function returns
//! [`Result`], and each variant carries enough context to diagnose the call
//! site without a debugger.

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside its documented domain.
    #[error("parameter out of domain: {0}")]
    Domain(String),

    /// An argument lies outside the support a routine can evaluate.
    #[error("argument out of support: {0}")]
    OutOfSupport(String),

    /// A `PrimeTable` is too small for the requested computation.
    #[error("sieve limit {limit} too small: computation needs primes up to {needed}")]
    InsufficientSieve { limit: u64, needed: u64 },

    /// A zero set does not extend far enough for the requested height.
    #[error("zero set certified up to t_max = {t_max} but the computation needs T = {requested}")]
    InsufficientZeros { t_max: f64, requested: f64 },

    /// The zero set is empty where at least one zero is required.
    #[error("zero set is empty")]
    EmptyZeroSet,

    /// An ordinate passed as a zero does not match any zero in the set.
    #[error("ordinate {0} does not match any zero in the set")]
    UnknownZero(f64),

    /// Grid refinement could not reconcile the zero count on an interval.
    #[error("zero count on ({lo}, {hi}] could not be completed: expected {expected}, found {found}")]
    IncompleteZeroSet {
        lo: f64,
        hi: f64,
        expected: i64,
        found: i64,
    },

    /// A text file of zero ordinates failed to parse.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// An integration path passed too close to a zero of zeta.
    #[error("integration path at height t = {t} passes within {distance:.3e} of a zeta zero")]
    PathThroughZero { t: f64, distance: f64 },

    /// A quadrature or series failed to reach its accuracy target.
    #[error("accuracy target {requested:.3e} not reached (achieved {achieved:.3e}) in {context}")]
    Accuracy {
        context: String,
        requested: f64,
        achieved: f64,
    },

    /// A requested computation is structurally infeasible (e.g. bound violated).
    #[error("infeasible request: {0}")]
    Infeasible(String),

    /// Underlying I/O failure while reading or writing data files.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
