//! The signature-four elliptic functions on the complex plane: the odd
//! order-two function rn, its square, its derivative, and the companions
//! sn2^2, cn2, dn2, all expressed through the two Weierstrass contexts.
//!
//! rn is the quotient (kappa/4) P' / ((kappa/4)^2 - (1/12 + P)^2). It has
//! simple zeros at 0 and omega, simple poles at omega' and omega + omega',
//! and satisfies (rn')^2 = rn^4 - rn^2 + kappa^2/4 with rn(0) = 0 and
//! rn'(0) = kappa/2 (the square root -kappa/2 in the solution formula is
//! fixed by rn being positive just right of the origin).

use crate::error::{Error, Result};
use crate::hypergeom::Modulus;
use crate::weierstrass::{WeierstrassContext, POLE_GUARD};
use num_complex::Complex64;

/// Relative threshold below which a quotient denominator is treated as a
/// pole hit rather than evaluated into noise.
const DENOMINATOR_GUARD: f64 = 1e-12;

/// Lattice-congruence tolerance used by [`Sig4Context::classify`].
const CLASSIFY_TOL: f64 = 1e-9;

/// Which closed form evaluates dn2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dn2Path {
    /// dn2 = 1 - 2 rn^2 through the rn context (default path).
    ViaRn,
    /// dn2 = 1 - (kappa^2/2) / (1/3 + p) through its own context.
    ViaP,
}

/// Half-period shifts with closed evaluation formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfPeriodShift {
    Omega,
    OmegaPrime,
    OmegaPlusOmegaPrime,
}

/// The four distinguished points of rn inside a period cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecialPoint {
    Origin,
    Omega,
    OmegaPrime,
    OmegaPlusOmegaPrime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointKind {
    Zero,
    Pole,
    Regular,
}

/// Classification of a point modulo the rn lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PointClass {
    pub kind: PointKind,
    /// 1 for zeros and poles (all are simple), 0 for regular points.
    pub order: u32,
    pub representative: Option<SpecialPoint>,
}

/// Immutable evaluation state: the modulus and the two Weierstrass contexts
/// (the rn one on the lattice (2 Omega, 2 Omega'), the dn2 one on
/// (Omega, 2 Omega')).
#[derive(Debug, Clone)]
pub struct Sig4Context {
    modulus: Modulus,
    wp_rn: WeierstrassContext,
    wp_dn2: WeierstrassContext,
}

impl Sig4Context {
    pub fn new(modulus: Modulus) -> Result<Self> {
        let wp_rn = WeierstrassContext::for_rn(&modulus)?;
        let wp_dn2 = WeierstrassContext::for_dn2(&modulus)?;
        debug_assert!(
            (wp_rn.half_periods().omega() - 2.0 * wp_dn2.half_periods().omega()).abs() <= 1e-13
        );
        debug_assert!(
            (wp_rn.half_periods().omega_prime_mag() - wp_dn2.half_periods().omega_prime_mag())
                .abs()
                <= 1e-13
        );
        Ok(Self {
            modulus,
            wp_rn,
            wp_dn2,
        })
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    /// The Weierstrass context coperiodic with rn.
    pub fn wp_rn(&self) -> &WeierstrassContext {
        &self.wp_rn
    }

    /// The Weierstrass context coperiodic with dn2.
    pub fn wp_dn2(&self) -> &WeierstrassContext {
        &self.wp_dn2
    }

    /// Real half-period Omega of the rn lattice.
    pub fn omega(&self) -> f64 {
        self.wp_rn.half_periods().omega()
    }

    /// Magnitude of the imaginary half-period Omega'.
    pub fn omega_prime_mag(&self) -> f64 {
        self.wp_rn.half_periods().omega_prime_mag()
    }

    fn special_location(&self, which: SpecialPoint) -> Complex64 {
        let om = self.omega();
        let omp = self.omega_prime_mag();
        match which {
            SpecialPoint::Origin => Complex64::new(0.0, 0.0),
            SpecialPoint::Omega => Complex64::new(om, 0.0),
            SpecialPoint::OmegaPrime => Complex64::new(0.0, omp),
            SpecialPoint::OmegaPlusOmegaPrime => Complex64::new(om, omp),
        }
    }

    /// Nearest zero/pole representative of rn: which one, its distance from
    /// z (measured modulo the lattice), and its actual location near z.
    fn nearest_special(&self, z: Complex64) -> (SpecialPoint, f64, Complex64) {
        let mut best = (SpecialPoint::Origin, f64::INFINITY, z);
        for which in [
            SpecialPoint::Origin,
            SpecialPoint::Omega,
            SpecialPoint::OmegaPrime,
            SpecialPoint::OmegaPlusOmegaPrime,
        ] {
            let offset = self.wp_rn.reduce(z - self.special_location(which));
            let dist = offset.norm();
            if dist < best.1 {
                best = (which, dist, z - offset);
            }
        }
        best
    }

    /// rn(z). Returns the limit value 0 at lattice points (where the
    /// defining quotient is formally indeterminate) and `Pole` at points
    /// congruent to omega' or omega + omega'.
    pub fn rn(&self, z: Complex64) -> Result<Complex64> {
        let (which, dist, location) = self.nearest_special(z);
        if dist < POLE_GUARD {
            match which {
                SpecialPoint::Origin => return Ok(Complex64::new(0.0, 0.0)),
                SpecialPoint::OmegaPrime | SpecialPoint::OmegaPlusOmegaPrime => {
                    return Err(Error::Pole { nearest: location })
                }
                SpecialPoint::Omega => {}
            }
        }
        let (p, dp) = self.wp_rn.wp_and_prime(z)?;
        let quarter_kappa = 0.25 * self.modulus.kappa();
        let shifted = p + 1.0 / 12.0;
        let numerator = quarter_kappa * dp;
        let denominator = quarter_kappa * quarter_kappa - shifted * shifted;
        self.checked_quotient(numerator, denominator, location)
    }

    /// rn'(z) by analytic differentiation of the defining quotient, using
    /// P'' = 6 P^2 - g2/2. Accurate to the same order as rn itself; finite
    /// differences would cap downstream identities near 1e-6.
    pub fn rn_prime(&self, z: Complex64) -> Result<Complex64> {
        let kappa = self.modulus.kappa();
        let (which, dist, location) = self.nearest_special(z);
        if dist < POLE_GUARD {
            match which {
                SpecialPoint::Origin => return Ok(Complex64::new(0.5 * kappa, 0.0)),
                SpecialPoint::OmegaPrime | SpecialPoint::OmegaPlusOmegaPrime => {
                    return Err(Error::Pole { nearest: location })
                }
                SpecialPoint::Omega => {}
            }
        }
        let (p, dp) = self.wp_rn.wp_and_prime(z)?;
        let g2 = self.wp_rn.invariants().g2;
        let quarter_kappa = 0.25 * kappa;
        let shifted = p + 1.0 / 12.0;
        let numerator = quarter_kappa * dp;
        let denominator = quarter_kappa * quarter_kappa - shifted * shifted;
        let ddp = 6.0 * p * p - 0.5 * g2;
        let d_numerator = quarter_kappa * ddp;
        let d_denominator = -2.0 * shifted * dp;
        let square = denominator * denominator;
        if square.norm() < DENOMINATOR_GUARD * (1.0 + numerator.norm()) {
            return Err(Error::Pole { nearest: location });
        }
        Ok((d_numerator * denominator - numerator * d_denominator) / square)
    }

    /// rn(z)^2 by its own closed form,
    /// (kappa^2/4)(P - 1/6) / ((P + 1/12)^2 - (kappa/4)^2).
    pub fn rn_squared(&self, z: Complex64) -> Result<Complex64> {
        let (which, dist, location) = self.nearest_special(z);
        if dist < POLE_GUARD {
            match which {
                SpecialPoint::Origin => return Ok(Complex64::new(0.0, 0.0)),
                SpecialPoint::OmegaPrime | SpecialPoint::OmegaPlusOmegaPrime => {
                    return Err(Error::Pole { nearest: location })
                }
                SpecialPoint::Omega => {}
            }
        }
        let p = self.wp_rn.wp(z)?;
        let kappa = self.modulus.kappa();
        let quarter_kappa = 0.25 * kappa;
        let shifted = p + 1.0 / 12.0;
        let numerator = 0.25 * kappa * kappa * (p - 1.0 / 6.0);
        let denominator = shifted * shifted - quarter_kappa * quarter_kappa;
        self.checked_quotient(numerator, denominator, location)
    }

    /// dn2(z) along the requested path. Both paths share the pole set
    /// (points congruent to omega' modulo the dn2 lattice) and agree to
    /// evaluation accuracy everywhere else.
    pub fn dn2(&self, z: Complex64, path: Dn2Path) -> Result<Complex64> {
        match path {
            Dn2Path::ViaRn => Ok(1.0 - 2.0 * self.rn_squared(z)?),
            Dn2Path::ViaP => {
                let at_lattice = self.wp_dn2.reduce(z);
                if at_lattice.norm() < POLE_GUARD {
                    // Poles of p are regular points of dn2 with value 1.
                    return Ok(Complex64::new(1.0, 0.0));
                }
                let omega_prime = self.wp_dn2.half_periods().omega_prime();
                let from_pole = self.wp_dn2.reduce(z - omega_prime);
                if from_pole.norm() < POLE_GUARD {
                    return Err(Error::Pole {
                        nearest: z - from_pole,
                    });
                }
                let p = self.wp_dn2.wp(z)?;
                let kappa = self.modulus.kappa();
                let numerator = Complex64::new(0.5 * kappa * kappa, 0.0);
                let denominator = p + 1.0 / 3.0;
                if denominator.norm() < DENOMINATOR_GUARD * (1.0 + numerator.norm()) {
                    return Err(Error::Pole {
                        nearest: z - from_pole,
                    });
                }
                Ok(1.0 - numerator / denominator)
            }
        }
    }

    /// cn2(z) = (2/kappa) rn'(z).
    pub fn cn2(&self, z: Complex64) -> Result<Complex64> {
        Ok(2.0 / self.modulus.kappa() * self.rn_prime(z)?)
    }

    /// sn2(z)^2 = (4/kappa^2) rn^2 (1 - rn^2); elliptic even though sn2
    /// itself has no meromorphic extension.
    pub fn sn2_squared(&self, z: Complex64) -> Result<Complex64> {
        let s = self.rn_squared(z)?;
        let kappa = self.modulus.kappa();
        Ok(4.0 / (kappa * kappa) * s * (1.0 - s))
    }

    /// rn(z + shift) by the closed shift formulas, evaluated from P and P'
    /// at z itself rather than by shifting the argument:
    /// rn(z + Omega) = -rn(z),
    /// rn(z + Omega') = (P'/2) / (1/6 - P),
    /// rn(z + Omega + Omega') = (P'/2) / (P - 1/6).
    pub fn shift_value(&self, z: Complex64, shift: HalfPeriodShift) -> Result<Complex64> {
        if shift == HalfPeriodShift::Omega {
            return Ok(-self.rn(z)?);
        }
        let (which, dist, location) = self.nearest_special(z);
        if dist < POLE_GUARD {
            match which {
                // The shifted point is a pole of rn in both remaining cases.
                SpecialPoint::Origin | SpecialPoint::Omega => {
                    return Err(Error::Pole { nearest: location })
                }
                SpecialPoint::OmegaPrime | SpecialPoint::OmegaPlusOmegaPrime => {}
            }
        }
        let (p, dp) = self.wp_rn.wp_and_prime(z)?;
        let numerator = 0.5 * dp;
        let denominator = match shift {
            HalfPeriodShift::OmegaPrime => 1.0 / 6.0 - p,
            HalfPeriodShift::OmegaPlusOmegaPrime => p - 1.0 / 6.0,
            HalfPeriodShift::Omega => unreachable!(),
        };
        self.checked_quotient(numerator, denominator, location)
    }

    /// Locates z relative to the zeros and poles of rn, modulo the lattice
    /// (2 Omega, 2 Omega'), with congruence tolerance 1e-9.
    pub fn classify(&self, z: Complex64) -> PointClass {
        let (which, dist, _) = self.nearest_special(z);
        if dist <= CLASSIFY_TOL {
            let kind = match which {
                SpecialPoint::Origin | SpecialPoint::Omega => PointKind::Zero,
                SpecialPoint::OmegaPrime | SpecialPoint::OmegaPlusOmegaPrime => PointKind::Pole,
            };
            PointClass {
                kind,
                order: 1,
                representative: Some(which),
            }
        } else {
            PointClass {
                kind: PointKind::Regular,
                order: 0,
                representative: None,
            }
        }
    }

    /// Residual of the rescaled Chebyshev differential equation: with
    /// y(z) = rn(sqrt8 z), returns |(y')^2 - (8 y^4 - 8 y^2 + 2 kappa^2)|,
    /// the degree-four Chebyshev form T4(y) - (1 - 2 kappa^2) of the rn
    /// quartic.
    pub fn chebyshev_residual(&self, z: Complex64) -> Result<f64> {
        let root8 = f64::sqrt(8.0);
        let w = root8 * z;
        let y = self.rn(w)?;
        let dy = root8 * self.rn_prime(w)?;
        let kappa = self.modulus.kappa();
        let y2 = y * y;
        let rhs = 8.0 * y2 * y2 - 8.0 * y2 + 2.0 * kappa * kappa;
        Ok((dy * dy - rhs).norm())
    }

    fn checked_quotient(
        &self,
        numerator: Complex64,
        denominator: Complex64,
        location: Complex64,
    ) -> Result<Complex64> {
        if denominator.norm() < DENOMINATOR_GUARD * (1.0 + numerator.norm()) {
            return Err(Error::Pole { nearest: location });
        }
        Ok(numerator / denominator)
    }
}
