//! The defining real-line construction: the amplitude phi obtained by
//! inverting the hypergeometric arc-length integral, the bounded auxiliary
//! angle psi, and the four signature-four function values they induce.
//!
//! Everything here stays on the real line. The complex extensions live in
//! [`crate::sig4`]; this module is the independent oracle those extensions
//! are certified against.

use crate::error::Result;
use crate::hypergeom::{complete_k, f_half, Modulus};
use crate::numerics::{integrate_adaptive, invert_monotone, ToleranceSpec};
use std::f64::consts::{FRAC_PI_2, PI};

/// Values of the four signature-four functions at one real point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sig4Values {
    pub sn2: f64,
    pub cn2: f64,
    pub dn2: f64,
    pub rn: f64,
}

/// The inverse of u = integral_0^phi F(1/4, 3/4; 1/2; kappa^2 sin^2 t) dt:
/// an odd, strictly increasing bijection of the real line.
///
/// The argument is first reduced by the quasi-period law
/// phi(u + 2K) = phi(u) + pi to land in [-K, K], where Newton iteration with
/// the analytic derivative (the integrand itself) is well conditioned.
pub fn phi(u: f64, m: &Modulus) -> Result<f64> {
    let tol = ToleranceSpec::default();
    let big_k = complete_k(m)?;
    let cycles = (u / (2.0 * big_k)).round();
    let u_red = u - 2.0 * cycles * big_k;
    let core = if u_red >= 0.0 {
        phi_core(u_red, m, big_k, &tol)?
    } else {
        -phi_core(-u_red, m, big_k, &tol)?
    };
    Ok(core + cycles * PI)
}

/// Inversion on the fundamental branch: u in [0, K] maps to phi in [0, pi/2].
fn phi_core(u: f64, m: &Modulus, big_k: f64, tol: &ToleranceSpec) -> Result<f64> {
    if u == 0.0 {
        return Ok(0.0);
    }
    let k2 = m.kappa() * m.kappa();
    let integrand = move |t: f64| {
        let s = t.sin();
        f_half(k2 * s * s).expect("integrand argument stays in [0, 1)")
    };
    if u >= big_k {
        return Ok(FRAC_PI_2);
    }
    // 1 <= F(1/4,3/4;1/2; k^2 sin^2 t) <= F(1/4,3/4;1/2; k^2) brackets phi
    // between u / F(k^2) and u.
    let upper_slope = f_half(k2)?;
    let lo = u / upper_slope;
    let hi = u.min(FRAC_PI_2);
    invert_monotone(
        |p| integrate_adaptive(integrand, 0.0, p, tol).expect("smooth integrand"),
        integrand,
        u,
        (lo, hi),
        tol,
    )
}

/// The auxiliary angle psi = arcsin(kappa sin phi), odd and confined to
/// [-alpha, alpha].
pub fn psi(u: f64, m: &Modulus) -> Result<f64> {
    Ok((m.kappa() * phi(u, m)?.sin()).asin())
}

/// Evaluates sn2 = sin phi, cn2 = cos phi, dn2 = cos psi and rn = sin(psi/2)
/// consistently from a single inversion of the defining integral.
pub fn sig4_real(u: f64, m: &Modulus) -> Result<Sig4Values> {
    let phi_u = phi(u, m)?;
    let psi_u = (m.kappa() * phi_u.sin()).asin();
    Ok(Sig4Values {
        sn2: phi_u.sin(),
        cn2: phi_u.cos(),
        dn2: psi_u.cos(),
        rn: (0.5 * psi_u).sin(),
    })
}
