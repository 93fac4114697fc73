//! Real-analysis kernels: adaptive quadrature and guarded monotone inversion.
//!
//! These two routines back the real-line construction (integral definition of
//! the amplitude and its inverse). Both are deterministic: identical inputs
//! produce bit-identical outputs.

use crate::error::{Error, Result};

/// Accuracy targets and work caps for the kernels in this module.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceSpec {
    /// Absolute error target.
    pub abs_tol: f64,
    /// Cap on adaptive-quadrature interval splits.
    pub max_subdivisions: u32,
    /// Cap on root-finding iterations.
    pub max_iterations: u32,
}

impl ToleranceSpec {
    pub fn new(abs_tol: f64, max_subdivisions: u32, max_iterations: u32) -> Result<Self> {
        if abs_tol.is_nan() || abs_tol <= 0.0 {
            return Err(Error::InvalidConfig {
                reason: "abs_tol must be positive",
            });
        }
        if max_subdivisions == 0 || max_iterations == 0 {
            return Err(Error::InvalidConfig {
                reason: "subdivision and iteration caps must be positive",
            });
        }
        Ok(Self {
            abs_tol,
            max_subdivisions,
            max_iterations,
        })
    }
}

impl Default for ToleranceSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-13,
            max_subdivisions: 1 << 16,
            max_iterations: 200,
        }
    }
}

/// Integrates `f` over `[a, b]` by adaptive Simpson quadrature with a
/// Richardson error estimate, to absolute accuracy `tol.abs_tol`.
///
/// Returns `SubdivisionLimit` if the refinement cap is reached first.
pub fn integrate_adaptive<F>(f: F, a: f64, b: f64, tol: &ToleranceSpec) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if a.is_nan() || b.is_nan() || a > b {
        return Err(Error::Domain {
            value: a,
            domain: "integration interval requires a <= b",
        });
    }
    if a == b {
        return Ok(0.0);
    }
    let mid = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(mid), f(b));
    let whole = (b - a) * (fa + 4.0 * fm + fb) / 6.0;
    let mut budget = tol.max_subdivisions;
    simpson_refine(
        &f,
        a,
        b,
        fa,
        fm,
        fb,
        whole,
        tol.abs_tol,
        &mut budget,
        tol.max_subdivisions,
    )
}

#[allow(clippy::too_many_arguments)]
fn simpson_refine<F>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    budget: &mut u32,
    limit: u32,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let mid = 0.5 * (a + b);
    let lm = 0.5 * (a + mid);
    let rm = 0.5 * (mid + b);
    let (flm, frm) = (f(lm), f(rm));
    let left = (mid - a) * (fa + 4.0 * flm + fm) / 6.0;
    let right = (b - mid) * (fm + 4.0 * frm + fb) / 6.0;
    let delta = left + right - whole;
    // Richardson: Simpson halving gains a factor 16, so delta/15 estimates
    // the error of the refined value.
    if delta.abs() <= 15.0 * eps {
        return Ok(left + right + delta / 15.0);
    }
    if *budget == 0 {
        return Err(Error::SubdivisionLimit { limit });
    }
    *budget -= 1;
    let half_eps = 0.5 * eps;
    let l = simpson_refine(f, a, mid, fa, flm, fm, left, half_eps, budget, limit)?;
    let r = simpson_refine(f, mid, b, fm, frm, fb, right, half_eps, budget, limit)?;
    Ok(l + r)
}

/// Solves `g(x) = target` for strictly increasing `g` on the given bracket.
///
/// Newton steps use the analytic derivative `dg`; any step that would leave
/// the current bracket is replaced by a bisection step, so convergence is
/// guaranteed for monotone `g`. Success means `|g(x) - target| <= abs_tol`.
pub fn invert_monotone<G, D>(
    g: G,
    dg: D,
    target: f64,
    bracket: (f64, f64),
    tol: &ToleranceSpec,
) -> Result<f64>
where
    G: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let (mut lo, mut hi) = bracket;
    if lo > hi {
        std::mem::swap(&mut lo, &mut hi);
    }
    let g_lo = g(lo);
    let g_hi = g(hi);
    // Allow the target to sit on the bracket image boundary up to tolerance.
    if target < g_lo - tol.abs_tol || target > g_hi + tol.abs_tol {
        return Err(Error::Bracket { target, g_lo, g_hi });
    }
    if (g_lo - target).abs() <= tol.abs_tol {
        return Ok(lo);
    }
    if (g_hi - target).abs() <= tol.abs_tol {
        return Ok(hi);
    }

    let mut x = 0.5 * (lo + hi);
    for _ in 0..tol.max_iterations {
        let gx = g(x);
        let residual = gx - target;
        if residual.abs() <= tol.abs_tol {
            return Ok(x);
        }
        if residual > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let slope = dg(x);
        let newton = x - residual / slope;
        x = if slope > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    Err(Error::IterationLimit {
        limit: tol.max_iterations,
    })
}
