//! Adaptive composite Simpson quadrature.

use crate::error::{Error, Result};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const MAX_DEPTH: u32 = 24;

/// Integral estimate together with the accumulated Richardson error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<Quadrature> {
    composite_simpson(f, &[a, b], tol)
}

/// Adaptive Simpson applied independently on each panel between consecutive
/// `breakpoints`. The tolerance is split across panels in proportion to
/// their width. Put breakpoints at known kinks or discontinuities of `f`.
pub fn composite_simpson(f: impl Fn(f64) -> f64, breakpoints: &[f64], tol: f64) -> Result<Quadrature> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
    }
    if breakpoints.len() < 2 {
        return Err(Error::InvalidInput("need at least two breakpoints".into()));
    }
    let span = breakpoints.last().unwrap() - breakpoints[0];
    let mut total = Quadrature { value: 0.0, error: 0.0 };
    let mut converged = true;
    for w in breakpoints.windows(2) {
        let (a, b) = (w[0], w[1]);
        if a == b {
            continue;
        }
        let share = if span != 0.0 { tol * ((b - a) / span).abs() } else { tol };
        // One-sided endpoint values, so a jump sitting exactly on a
        // breakpoint does not leak into the neighbouring panel.
        let nudge = 1e-14 * (b - a);
        let fa = f(a + nudge);
        let fb = f(b - nudge);
        let m = 0.5 * (a + b);
        let fm = f(m);
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        let mut ok = true;
        let q = refine(&f, a, b, fa, fm, fb, whole, share, MAX_DEPTH, &mut ok);
        converged &= ok;
        total.value += q.value;
        total.error += q.error;
    }
    if !converged {
        return Err(Error::QuadratureNonConvergence {
            estimate: total.value,
            error_bound: total.error,
        });
    }
    Ok(total)
}

#[allow(clippy::too_many_arguments)]
fn refine(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    converged: &mut bool,
) -> Quadrature {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    // Always take at least a few levels so that an oscillatory integrand
    // cannot fool the first comparison.
    let forced = depth > MAX_DEPTH - 4;
    if !forced && delta.abs() <= 15.0 * tol {
        return Quadrature {
            value: left + right + delta / 15.0,
            error: delta.abs() / 15.0,
        };
    }
    if depth == 0 {
        *converged = false;
        return Quadrature {
            value: left + right + delta / 15.0,
            error: delta.abs() / 15.0,
        };
    }
    let l = refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, converged);
    let r = refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, converged);
    Quadrature {
        value: l.value + r.value,
        error: l.error + r.error,
    }
}
