//! Signature-four elliptic functions built on the root function rn.
//!
//! The library constructs the family two independent ways and ships the
//! machinery to prove to itself that they agree:
//!
//! - [`realline`]: the defining construction on the real line — invert the
//!   hypergeometric arc-length integral, form the bounded angle, read off
//!   sn2, cn2, dn2 and rn = sin(psi/2).
//! - [`sig4`]: the complex extension through Weierstrass closed forms, with
//!   invariants and half-periods given exactly by hypergeometric values
//!   (module [`weierstrass`], periods from [`hypergeom`]).
//! - [`certify`]: an identity-by-identity numerical certifier that samples the
//!   period cell and reports per-identity residuals, including the
//!   real-line-versus-complex cross check.
//!
//! Everything is pure and deterministic; contexts are immutable and safe to
//! share across threads.

pub mod certify;
pub mod error;
pub mod hypergeom;
pub mod numerics;
pub mod realline;
pub mod sig4;
pub mod weierstrass;

pub use error::{Error, Result};
pub use hypergeom::Modulus;
pub use num_complex::Complex64;
pub use numerics::ToleranceSpec;
pub use realline::Sig4Values;
pub use sig4::{Dn2Path, HalfPeriodShift, PointClass, PointKind, Sig4Context, SpecialPoint};
pub use weierstrass::{
    HalfPeriods, Invariants, QuarticCoefficients, WeierstrassContext, POLE_GUARD,
};
