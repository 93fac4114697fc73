//! Gauss hypergeometric evaluations for the two parameter sets (1/4, 3/4; 1/2)
//! and (1/4, 3/4; 1), plus the complete integral K built from them.
//!
//! The c = 1/2 function has an exact closed form,
//! F(1/4, 3/4; 1/2; z^2) = [(1 + z)^{-1/2} + (1 - z)^{-1/2}] / 2,
//! which is the production path; the termwise series is kept as an
//! independent certification path. The c = 1 function is series-only and
//! feeds every period formula.

use crate::error::{Error, Result};
use crate::numerics::{integrate_adaptive, ToleranceSpec};
use std::f64::consts::FRAC_PI_2;

/// Relative series cutoff: stop once |term| < SERIES_EPS * |partial sum|.
const SERIES_EPS: f64 = 1e-17;
/// Hard cap on series terms.
const SERIES_MAX_TERMS: usize = 1_000_000;
/// Arguments of `f_one` beyond this are rejected: c - a - b = 0 means a
/// logarithmic divergence at 1, and the series loses accuracy before it.
const F_ONE_MAX_X: f64 = 0.999;

/// The modulus kappa with its complementary modulus and modular angle.
///
/// Single parameter of the whole function family: lambda = sqrt(1 - kappa^2)
/// and alpha = arcsin(kappa).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Modulus {
    kappa: f64,
    lambda: f64,
    alpha: f64,
}

impl Modulus {
    /// Builds the modulus triple; `kappa` must lie strictly inside (0, 1).
    pub fn new(kappa: f64) -> Result<Self> {
        if !(kappa > 0.0 && kappa < 1.0) {
            return Err(Error::Domain {
                value: kappa,
                domain: "kappa must lie in (0, 1)",
            });
        }
        Ok(Self {
            kappa,
            lambda: (1.0 - kappa * kappa).sqrt(),
            alpha: kappa.asin(),
        })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Complementary modulus, lambda = sqrt(1 - kappa^2).
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Modular angle alpha = arcsin(kappa), in (0, pi/2).
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

fn check_unit_interval(x: f64) -> Result<()> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::Domain {
            value: x,
            domain: "hypergeometric argument must lie in [0, 1)",
        });
    }
    Ok(())
}

/// F(1/4, 3/4; 1/2; x) via the exact closed form with z = sqrt(x).
pub fn f_half(x: f64) -> Result<f64> {
    check_unit_interval(x)?;
    let z = x.sqrt();
    Ok(0.5 * ((1.0 + z).powf(-0.5) + (1.0 - z).powf(-0.5)))
}

/// F(1/4, 3/4; 1/2; x) by direct termwise summation with the ratio
/// recurrence. Retained as the independent path against the closed form.
pub fn f_half_series(x: f64) -> Result<f64> {
    check_unit_interval(x)?;
    sum_2f1(0.25, 0.75, 0.5, x)
}

/// F(1/4, 3/4; 1; x) by termwise summation.
///
/// Strictly increasing from 1; rejects x > 0.999 as `SlowConvergence`.
pub fn f_one(x: f64) -> Result<f64> {
    check_unit_interval(x)?;
    if x > F_ONE_MAX_X {
        return Err(Error::SlowConvergence { x });
    }
    sum_2f1(0.25, 0.75, 1.0, x)
}

fn sum_2f1(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    for n in 0..SERIES_MAX_TERMS {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * x;
        sum += term;
        if term.abs() < SERIES_EPS * sum.abs() {
            return Ok(sum);
        }
    }
    Err(Error::SlowConvergence { x })
}

/// The complete integral K = (pi/2) F(1/4, 3/4; 1; kappa^2), the quarter
/// period of rn on the real line.
///
/// Equal by termwise integration to the integral of F(1/4, 3/4; 1/2;
/// kappa^2 sin^2 t) over [0, pi/2]; `complete_k_quadrature` takes that route.
pub fn complete_k(m: &Modulus) -> Result<f64> {
    Ok(FRAC_PI_2 * f_one(m.kappa * m.kappa)?)
}

/// K by adaptive quadrature of its defining integral. Cross-check path for
/// `complete_k`; also exercised by the certifier.
pub fn complete_k_quadrature(m: &Modulus, tol: &ToleranceSpec) -> Result<f64> {
    let k2 = m.kappa * m.kappa;
    integrate_adaptive(
        |t| {
            let s = t.sin();
            // Closed form of the integrand; s^2 k^2 < 1 on the whole range.
            f_half(k2 * s * s).expect("integrand argument stays in [0, 1)")
        },
        0.0,
        FRAC_PI_2,
        tol,
    )
}
