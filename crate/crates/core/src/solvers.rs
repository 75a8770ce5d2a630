//! Bracketing root finders for the transition points: Mandel-Q zero
//! crossings, the RC88 threshold and the critical coherent amplitude.
//!
//! Objectives are scanned on a uniform grid, every strict sign change is
//! bracketed, and each bracket is refined by bisection. Results are
//! deterministic.

use crate::closed_form::{g2, g2_asymptote, photon_stats};
use crate::criteria::rc88_gap;
use crate::error::{Error, Result};
use crate::params::GaussianParams;

pub const MAX_ITERATIONS: usize = 200;

/// Default number of scan intervals on [0, tau_max].
pub const DEFAULT_SCAN_GRID: usize = 2000;

/// Default upper end of the Ωτ scan.
pub const DEFAULT_TAU_MAX: f64 = 20.0;

/// Tolerance used to refine delay crossings.
pub const CROSSING_TOL: f64 = 1e-6;

/// Bracket used for the critical amplitude search.
pub const CRITICAL_ALPHA_BRACKET: (f64, f64) = (1e-6, 10.0);
pub const CRITICAL_ALPHA_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootResult {
    pub location: f64,
    /// Objective evaluated at `location`.
    pub residual: f64,
    pub iterations: usize,
    /// Final bracket; both ends coincide when a grid point hit the root exactly.
    pub bracket: (f64, f64),
}

/// Bisection on [lo, hi] until the bracket is narrower than `tol`.
pub fn find_root<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<RootResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(tol > 0.0) {
        return Err(Error::domain("tol", format!("must be > 0, got {tol}")));
    }
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::domain(
            "bracket",
            format!("need finite lo < hi, got [{lo}, {hi}]"),
        ));
    }
    let (mut lo, mut hi) = (lo, hi);
    let mut f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if f_lo == 0.0 {
        return Ok(RootResult {
            location: lo,
            residual: 0.0,
            iterations: 0,
            bracket: (lo, lo),
        });
    }
    if f_hi == 0.0 {
        return Ok(RootResult {
            location: hi,
            residual: 0.0,
            iterations: 0,
            bracket: (hi, hi),
        });
    }
    if !(f_lo * f_hi < 0.0) {
        return Err(Error::NoSignChange { lo, hi, f_lo, f_hi });
    }
    for iteration in 1..=MAX_ITERATIONS {
        let mid = lo + 0.5 * (hi - lo);
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok(RootResult {
                location: mid,
                residual: 0.0,
                iterations: iteration,
                bracket: (mid, mid),
            });
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
        if hi - lo < tol {
            let location = lo + 0.5 * (hi - lo);
            return Ok(RootResult {
                location,
                residual: f(location)?,
                iterations: iteration,
                bracket: (lo, hi),
            });
        }
    }
    Err(Error::MaxIterations {
        iterations: MAX_ITERATIONS,
        lo,
        hi,
    })
}

/// Every root of `f` in (lo, hi] visible as a strict sign change (or an exact
/// zero) on a uniform grid of `grid` intervals, in increasing order.
pub fn scan_roots<F>(mut f: F, lo: f64, hi: f64, grid: usize, tol: f64) -> Result<Vec<RootResult>>
where
    F: FnMut(f64) -> Result<f64>,
{
    if grid == 0 || !(lo < hi) {
        return Err(Error::domain(
            "grid",
            format!("need grid >= 1 and lo < hi, got {grid} on [{lo}, {hi}]"),
        ));
    }
    let at = |k: usize| {
        if k == grid {
            hi
        } else {
            lo + (hi - lo) * k as f64 / grid as f64
        }
    };
    let mut roots = Vec::new();
    let mut prev = f(lo)?;
    for k in 1..=grid {
        let x = at(k);
        let value = f(x)?;
        if value == 0.0 {
            roots.push(RootResult {
                location: x,
                residual: 0.0,
                iterations: 0,
                bracket: (x, x),
            });
        } else if prev != 0.0 && (prev < 0.0) != (value < 0.0) {
            roots.push(find_root(&mut f, at(k - 1), x, tol)?);
        }
        prev = value;
    }
    Ok(roots)
}

/// Zero crossings of Q_M(τ) on (0, tau_max].
pub fn qm_zero_crossings(
    params: &GaussianParams,
    tau_max: f64,
    grid: usize,
) -> Result<Vec<RootResult>> {
    let p = params.validate()?;
    if grid < 100 {
        return Err(Error::domain(
            "grid",
            format!("need at least 100 scan intervals, got {grid}"),
        ));
    }
    check_tau_max(tau_max)?;
    scan_roots(
        |x| Ok(photon_stats(&p, x)?.mandel_q),
        0.0,
        tau_max,
        grid,
        CROSSING_TOL,
    )
}

/// Sign changes of |g²(0) − 1| − |g²(τ) − 1| on (0, tau_max]. The gap
/// vanishes identically at τ = 0, which is never reported.
pub fn rc88_crossings(
    params: &GaussianParams,
    tau_max: f64,
    grid: usize,
) -> Result<Vec<RootResult>> {
    let p = params.validate()?;
    if grid < 100 {
        return Err(Error::domain(
            "grid",
            format!("need at least 100 scan intervals, got {grid}"),
        ));
    }
    check_tau_max(tau_max)?;
    scan_roots(|x| rc88_gap(&p, x), 0.0, tau_max, grid, CROSSING_TOL)
}

/// [`rc88_crossings`] on the default grid.
pub fn rc88_threshold(params: &GaussianParams, tau_max: f64) -> Result<Vec<RootResult>> {
    rc88_crossings(params, tau_max, DEFAULT_SCAN_GRID)
}

fn check_tau_max(tau_max: f64) -> Result<()> {
    if !(tau_max > 0.0) || !tau_max.is_finite() {
        return Err(Error::domain(
            "tau_max",
            format!("must be finite and > 0, got {tau_max}"),
        ));
    }
    Ok(())
}

/// The |α| at which lim_{τ→∞} g²(τ) = g²(0).
pub fn critical_alpha(nbar: f64, r: f64, theta: f64, phi: f64) -> Result<RootResult> {
    let base = GaussianParams::new(nbar, r, theta, 1.0, phi, 1.0)?;
    let objective = |alpha: f64| {
        let p = base.with_alpha_abs(alpha);
        Ok(g2_asymptote(&p)? - g2(&p, 0.0)?)
    };
    let (lo, hi) = CRITICAL_ALPHA_BRACKET;
    find_root(objective, lo, hi, CRITICAL_ALPHA_TOL)
}
