//! Adaptive Simpson quadrature over fallible integrands.
//!
//! One tested integrator serves every quadrature in the crate: the branch
//! tracking of Im log ζ along horizontal segments, the σ-integral in the
//! Dirichlet remainder budget, and the band-limited smoothing integrals.
//! Integrands return `Result` so that a pathology discovered mid-panel (a
//! zero of ζ on the path, say) aborts the whole integral with context instead
//! of being averaged away.

use crate::error::{Error, Result};

/// Adaptive Simpson integration of `f` over `[a, b]` to absolute tolerance
/// `tol`. Limits may be given in either order; `context` labels any accuracy
/// error raised when the recursion depth is exhausted.
pub(crate) fn adaptive_simpson<F>(mut f: F, a: f64, b: f64, tol: f64, context: &str) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain(format!(
            "adaptive_simpson needs finite limits, got [{a}, {b}]"
        )));
    }
    if a == b {
        return Ok(0.0);
    }
    if a > b {
        return adaptive_simpson(f, b, a, tol, context).map(|v| -v);
    }
    let m = 0.5 * (a + b);
    let fa = f(a)?;
    let fm = f(m)?;
    let fb = f(b)?;
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_rec(
        &mut f,
        Panel {
            a,
            b,
            fa,
            fm,
            fb,
            estimate: whole,
        },
        tol.max(1e-15),
        48,
        context,
    )
}

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    estimate: f64,
}

fn simpson_rec<F>(f: &mut F, panel: Panel, tol: f64, depth: u32, context: &str) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let Panel {
        a,
        b,
        fa,
        fm,
        fb,
        estimate,
    } = panel;
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm)?;
    let frm = f(rm)?;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - estimate;
    if delta.abs() <= 15.0 * tol {
        // Richardson correction: the two-panel rule plus δ/15 is O(h⁶).
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::Accuracy {
            context: format!("adaptive Simpson on [{a}, {b}] ({context})"),
            requested: tol,
            achieved: delta.abs(),
        });
    }
    let l = simpson_rec(
        f,
        Panel {
            a,
            b: m,
            fa,
            fm: flm,
            fb: fm,
            estimate: left,
        },
        0.5 * tol,
        depth - 1,
        context,
    )?;
    let r = simpson_rec(
        f,
        Panel {
            a: m,
            b,
            fa: fm,
            fm: frm,
            fb,
            estimate: right,
        },
        0.5 * tol,
        depth - 1,
        context,
    )?;
    Ok(l + r)
}
