use num_complex::Complex64;
use thiserror::Error;

/// Error type shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument fell outside the documented domain of an operation.
    #[error("argument {value} outside domain {domain}")]
    Domain { value: f64, domain: &'static str },

    /// A hypergeometric series argument is too close to the logarithmic
    /// singularity at 1 for the series to converge at full accuracy.
    #[error("series convergence too slow at x = {x} (argument too close to 1)")]
    SlowConvergence { x: f64 },

    /// Adaptive quadrature hit its subdivision cap before reaching tolerance.
    #[error("quadrature subdivision limit {limit} reached before tolerance met")]
    SubdivisionLimit { limit: u32 },

    /// Root finding hit its iteration cap before reaching tolerance.
    #[error("iteration limit {limit} reached without convergence")]
    IterationLimit { limit: u32 },

    /// The inversion target lies outside the image of the supplied bracket.
    #[error("target {target} outside bracket image [{g_lo}, {g_hi}]")]
    Bracket { target: f64, g_lo: f64, g_hi: f64 },

    /// Evaluation was requested within the pole guard of a pole; `nearest`
    /// is the offending pole (or lattice point).
    #[error("evaluation point within pole guard of {nearest}")]
    Pole { nearest: Complex64 },

    /// The supplied square root A does not satisfy A^2 = f(a).
    #[error("A^2 = {a_squared} does not match f(a) = {f_at_a}")]
    InvalidSquareRoot { a_squared: f64, f_at_a: f64 },

    /// The quartic has a repeated zero, so the elliptic solution formula
    /// does not apply.
    #[error("quartic has repeated zeros (g2^3 - 27 g3^2 = {discriminant:e})")]
    DegenerateQuartic { discriminant: f64 },

    /// A tolerance or sampling parameter failed validation.
    #[error("invalid configuration: {reason}")]
    InvalidConfig { reason: &'static str },
}

pub type Result<T> = std::result::Result<T, Error>;
