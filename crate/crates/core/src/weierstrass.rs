//! The Weierstrass engine: invariants, hypergeometric half-periods, complex
//! evaluation of the p-function and its derivative, the generic
//! quartic-initial-value solution formula, and a lattice-sum oracle.
//!
//! Evaluation strategy: snap the argument to the nearest half-lattice point
//! a*omega + b*omega' (the grid of midpoints and lattice points), evaluate
//! the Laurent series at the small remainder (coefficients from the standard
//! quadratic recurrence), and undo the snap with the exact half-period
//! addition formula p(omega_j + d) = e_j + (e_j - e_k)(e_j - e_l)/(p(d) -
//! e_j). The remainder never exceeds half the cell diagonal, which for the
//! lattices used here sits comfortably inside the series disk; arguments
//! beyond it fall back to argument halving with the rational duplication
//! formulas for the pair (p, p').

use crate::error::{Error, Result};
use crate::hypergeom::{f_one, Modulus};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Evaluation requests closer than this to a pole are rejected: the 1/z^2
/// amplification makes fixed-precision values meaningless there.
pub const POLE_GUARD: f64 = 1e-8;

/// Number of Laurent coefficients c_2..c_{41} carried by each context.
const LAURENT_TERMS: usize = 40;

/// Series arguments are kept inside this fraction of the shortest lattice
/// vector, where the 40-term tail is far below machine precision; larger
/// remainders (possible only for extreme period ratios) are halved first.
const SERIES_RADIUS_FRACTION: f64 = 0.46;

/// Quadrinvariant / cubinvariant pair defining a Weierstrass function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Invariants {
    pub g2: f64,
    pub g3: f64,
}

impl Invariants {
    /// g2^3 - 27 g3^2; positive exactly when the cubic has three distinct
    /// real roots (every context constructed in this crate).
    pub fn discriminant(&self) -> f64 {
        self.g2.powi(3) - 27.0 * self.g3 * self.g3
    }
}

/// Half-periods (omega, omega') with omega real positive and omega' purely
/// imaginary with positive imaginary part; the lattice is (2 omega, 2 omega').
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPeriods {
    omega: f64,
    omega_prime_mag: f64,
}

impl HalfPeriods {
    pub fn new(omega: f64, omega_prime_mag: f64) -> Result<Self> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::InvalidConfig {
                reason: "omega must be positive and finite",
            });
        }
        if !(omega_prime_mag > 0.0 && omega_prime_mag.is_finite()) {
            return Err(Error::InvalidConfig {
                reason: "omega_prime magnitude must be positive and finite",
            });
        }
        Ok(Self {
            omega,
            omega_prime_mag,
        })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Magnitude of the purely imaginary half-period.
    pub fn omega_prime_mag(&self) -> f64 {
        self.omega_prime_mag
    }

    /// The imaginary half-period as a complex number, i * omega_prime_mag.
    pub fn omega_prime(&self) -> Complex64 {
        Complex64::new(0.0, self.omega_prime_mag)
    }
}

/// Immutable evaluation state for one Weierstrass function: modulus,
/// invariants, half-periods, the three real midpoint roots (decreasing), and
/// the cached Laurent coefficients.
#[derive(Debug, Clone)]
pub struct WeierstrassContext {
    modulus: Modulus,
    invariants: Invariants,
    half_periods: HalfPeriods,
    roots: [f64; 3],
    laurent: Vec<f64>,
}

impl WeierstrassContext {
    /// The Weierstrass function coperiodic with rn: invariants
    /// (1 + 3 kappa^2)/12 and (1 - 9 kappa^2)/216, half-periods
    /// pi F(1/4,3/4;1;kappa^2) and (pi/sqrt 2) F(1/4,3/4;1;1-kappa^2) i,
    /// midpoint values 1/6 and -1/12 +- kappa/4.
    pub fn for_rn(modulus: &Modulus) -> Result<Self> {
        let kappa = modulus.kappa();
        let k2 = kappa * kappa;
        let invariants = Invariants {
            g2: (1.0 + 3.0 * k2) / 12.0,
            g3: (1.0 - 9.0 * k2) / 216.0,
        };
        let half_periods =
            HalfPeriods::new(PI * f_one(k2)?, PI / f64::sqrt(2.0) * f_one(1.0 - k2)?)?;
        let roots = [
            1.0 / 6.0,
            -1.0 / 12.0 + 0.25 * kappa,
            -1.0 / 12.0 - 0.25 * kappa,
        ];
        Ok(Self::assemble(*modulus, invariants, half_periods, roots))
    }

    /// The Weierstrass function coperiodic with dn2: invariants
    /// (3 lambda^2 + 1)/3 and (9 lambda^2 - 1)/27, half-periods
    /// (pi/2) F(1/4,3/4;1;kappa^2) and (pi/sqrt 2) F(1/4,3/4;1;1-kappa^2) i,
    /// midpoint values 1/6 +- lambda/2 and -1/3.
    pub fn for_dn2(modulus: &Modulus) -> Result<Self> {
        let lambda = modulus.lambda();
        let l2 = lambda * lambda;
        let k2 = modulus.kappa() * modulus.kappa();
        let invariants = Invariants {
            g2: (3.0 * l2 + 1.0) / 3.0,
            g3: (9.0 * l2 - 1.0) / 27.0,
        };
        let half_periods = HalfPeriods::new(
            0.5 * (PI * f_one(k2)?),
            PI / f64::sqrt(2.0) * f_one(1.0 - k2)?,
        )?;
        let roots = [
            1.0 / 6.0 + 0.5 * lambda,
            1.0 / 6.0 - 0.5 * lambda,
            -1.0 / 3.0,
        ];
        Ok(Self::assemble(*modulus, invariants, half_periods, roots))
    }

    fn assemble(
        modulus: Modulus,
        invariants: Invariants,
        half_periods: HalfPeriods,
        roots: [f64; 3],
    ) -> Self {
        debug_assert!(roots[0] > roots[1] && roots[1] > roots[2]);
        debug_assert!((roots[0] + roots[1] + roots[2]).abs() < 1e-14);
        Self {
            modulus,
            invariants,
            half_periods,
            roots,
            laurent: laurent_coefficients(&invariants),
        }
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn invariants(&self) -> Invariants {
        self.invariants
    }

    pub fn half_periods(&self) -> HalfPeriods {
        self.half_periods
    }

    /// Midpoint values (e1, e2, e3) in decreasing order: p at omega,
    /// omega + omega', omega'.
    pub fn roots(&self) -> [f64; 3] {
        self.roots
    }

    /// Reduces z modulo the lattice (2 omega, 2 omega') to the cell centered
    /// at the origin.
    pub fn reduce(&self, z: Complex64) -> Complex64 {
        let w1 = 2.0 * self.half_periods.omega;
        let w2 = 2.0 * self.half_periods.omega_prime_mag;
        Complex64::new(
            z.re - (z.re / w1).round() * w1,
            z.im - (z.im / w2).round() * w2,
        )
    }

    fn shortest_lattice_vector(&self) -> f64 {
        (2.0 * self.half_periods.omega).min(2.0 * self.half_periods.omega_prime_mag)
    }

    /// p(z).
    pub fn wp(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.wp_and_prime(z)?.0)
    }

    /// p'(z).
    pub fn wp_prime(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.wp_and_prime(z)?.1)
    }

    /// Evaluates (p(z), p'(z)) in one pass.
    pub fn wp_and_prime(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        let omega = self.half_periods.omega;
        let omega_prime = self.half_periods.omega_prime_mag;
        let a = (z.re / omega).round();
        let b = (z.im / omega_prime).round();
        let delta = Complex64::new(z.re - a * omega, z.im - b * omega_prime);
        let a_odd = (a as i64) & 1 == 1;
        let b_odd = (b as i64) & 1 == 1;
        if !a_odd && !b_odd {
            // Snapped to a lattice point: delta is the reduced argument.
            if delta.norm() < POLE_GUARD {
                return Err(Error::Pole { nearest: z - delta });
            }
            return self.series_with_halving(delta);
        }
        // Snapped to a midpoint omega_j; index into the decreasing roots.
        let root_index = match (a_odd, b_odd) {
            (true, false) => 0,
            (true, true) => 1,
            (false, true) => 2,
            (false, false) => unreachable!(),
        };
        let ej = self.roots[root_index];
        if delta.norm() < POLE_GUARD {
            // Exact midpoint values: p = e_j, p' = 0.
            return Ok((Complex64::new(ej, 0.0), Complex64::new(0.0, 0.0)));
        }
        let (p, dp) = self.series_with_halving(delta)?;
        let [e1, e2, e3] = self.roots;
        let (ek, el) = match root_index {
            0 => (e2, e3),
            1 => (e1, e3),
            _ => (e1, e2),
        };
        let c = (ej - ek) * (ej - el);
        let shifted = p - ej;
        // p(d) = e_j only at d congruent to a midpoint, which the snap rules
        // out; guard anyway so a degenerate lattice fails loudly.
        if shifted.norm() < 1e-14 * (1.0 + p.norm()) {
            return Err(Error::Pole { nearest: z - delta });
        }
        Ok((ej + c / shifted, -c * dp / (shifted * shifted)))
    }

    /// Series evaluation with argument halving for remainders beyond the
    /// series disk (never triggered by the lattices this crate constructs).
    fn series_with_halving(&self, delta: Complex64) -> Result<(Complex64, Complex64)> {
        let radius = SERIES_RADIUS_FRACTION * self.shortest_lattice_vector();
        let mut zs = delta;
        let mut doublings = 0u32;
        while zs.norm() > radius {
            zs *= 0.5;
            doublings += 1;
        }
        let (mut p, mut dp) = laurent_eval(&self.laurent, zs);
        for _ in 0..doublings {
            (p, dp) = duplicate(self.invariants.g2, p, dp);
        }
        Ok((p, dp))
    }
}

/// Laurent coefficients c_2..c_{41} of p(z) = z^{-2} + sum c_k z^{2k-2}:
/// c_2 = g2/20, c_3 = g3/28, then the quadratic recurrence
/// c_k = 3 (sum_{m=2}^{k-2} c_m c_{k-m}) / ((2k+1)(k-3)).
fn laurent_coefficients(invariants: &Invariants) -> Vec<f64> {
    let mut c = vec![0.0_f64; LAURENT_TERMS + 2]; // index k holds c_k, k = 2..=41
    c[2] = invariants.g2 / 20.0;
    c[3] = invariants.g3 / 28.0;
    for k in 4..=(LAURENT_TERMS + 1) {
        let mut acc = 0.0;
        for m in 2..=(k - 2) {
            acc += c[m] * c[k - m];
        }
        c[k] = 3.0 * acc / ((2 * k + 1) as f64 * (k - 3) as f64);
    }
    c.drain(..2);
    c
}

/// Series evaluation of (p, p') inside the convergence disk.
fn laurent_eval(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let w = z * z;
    let top = coeffs.len() - 1; // coeffs[i] = c_{i+2}
    let mut sum = Complex64::new(coeffs[top], 0.0);
    let mut dsum = Complex64::new((2 * (top + 2) - 2) as f64 * coeffs[top], 0.0);
    for i in (0..top).rev() {
        sum = w * sum + coeffs[i];
        dsum = w * dsum + (2 * (i + 2) - 2) as f64 * coeffs[i];
    }
    let p = 1.0 / w + w * sum;
    let dp = -2.0 / (w * z) + z * dsum;
    (p, dp)
}

/// Rational duplication of the pair (p, p') using p'' = 6 p^2 - g2/2 and
/// p''' = 12 p p'.
fn duplicate(g2: f64, p: Complex64, dp: Complex64) -> (Complex64, Complex64) {
    let ddp = 6.0 * p * p - 0.5 * g2;
    let half_ratio = ddp / (2.0 * dp);
    let p2 = -2.0 * p + half_ratio * half_ratio;
    let dp2 = -dp + ddp * (12.0 * p * dp * dp - ddp * ddp) / (4.0 * dp * dp * dp);
    (p2, dp2)
}

/// Coefficients of a quartic written Weierstrass-style:
/// f(z) = a0 z^4 + 4 a1 z^3 + 6 a2 z^2 + 4 a3 z + a4.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuarticCoefficients {
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
}

impl QuarticCoefficients {
    pub fn eval(&self, z: f64) -> f64 {
        (((self.a0 * z + 4.0 * self.a1) * z + 6.0 * self.a2) * z + 4.0 * self.a3) * z + self.a4
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        (((self.a0 * z + 4.0 * self.a1) * z + 6.0 * self.a2) * z + 4.0 * self.a3) * z + self.a4
    }

    /// Derivatives (f, f', f'', f''', f'''') at a real point.
    pub fn derivatives_at(&self, a: f64) -> [f64; 5] {
        [
            self.eval(a),
            ((4.0 * self.a0 * a + 12.0 * self.a1) * a + 12.0 * self.a2) * a + 4.0 * self.a3,
            (12.0 * self.a0 * a + 24.0 * self.a1) * a + 12.0 * self.a2,
            24.0 * self.a0 * a + 24.0 * self.a1,
            24.0 * self.a0,
        ]
    }

    /// Coefficients of z -> f(z + t), re-expanded in the same convention.
    pub fn translate(&self, t: f64) -> Self {
        Self {
            a0: self.a0,
            a1: self.a0 * t + self.a1,
            a2: (self.a0 * t + 2.0 * self.a1) * t + self.a2,
            a3: ((self.a0 * t + 3.0 * self.a1) * t + 3.0 * self.a2) * t + self.a3,
            a4: self.eval(t),
        }
    }
}

/// Quadrinvariant and cubinvariant of a quartic:
/// g2 = a0 a4 - 4 a1 a3 + 3 a2^2,
/// g3 = a0 a2 a4 + 2 a1 a2 a3 - a2^3 - a0 a3^2 - a1^2 a4.
pub fn quartic_invariants(q: &QuarticCoefficients) -> Invariants {
    let QuarticCoefficients { a0, a1, a2, a3, a4 } = *q;
    Invariants {
        g2: a0 * a4 - 4.0 * a1 * a3 + 3.0 * a2 * a2,
        g3: a0 * a2 * a4 + 2.0 * a1 * a2 * a3 - a2.powi(3) - a0 * a3 * a3 - a1 * a1 * a4,
    }
}

/// Solution of the initial value problem (w')^2 = f(w), w(0) = a, where f is
/// a quartic with simple zeros and A is the chosen square root of f(a):
///
/// w = a + [A p' + f'(a)/2 (p - f''(a)/24) + f(a) f'''(a)/24]
///       / [2 (p - f''(a)/24)^2 - f(a) f''''(a)/48]
///
/// with p = p(.; g2, g3) built from the invariants of f. The sign convention
/// is w'(0) = -A, so the branch with A = -kappa/2 applied to the quartic
/// z^4 - z^2 + kappa^2/4 reproduces rn. The evaluation is period-free: the
/// argument is halved until the Laurent tail is negligible and the
/// duplication formula restores it.
pub fn quartic_ivp_solution(
    q: &QuarticCoefficients,
    a: f64,
    big_a: f64,
    z: Complex64,
) -> Result<Complex64> {
    let inv = quartic_invariants(q);
    let disc = inv.discriminant();
    let scale = inv.g2.abs().powi(3).max(27.0 * inv.g3 * inv.g3).max(1e-30);
    if disc.abs() <= 1e-12 * scale {
        return Err(Error::DegenerateQuartic { discriminant: disc });
    }
    let d = q.derivatives_at(a);
    if (big_a * big_a - d[0]).abs() > 1e-12 * (1.0 + d[0].abs()) {
        return Err(Error::InvalidSquareRoot {
            a_squared: big_a * big_a,
            f_at_a: d[0],
        });
    }
    // w(0) = a is the limit as p blows up at the lattice.
    if z.norm() < POLE_GUARD {
        return Ok(Complex64::new(a, 0.0));
    }
    let (p, dp) = free_wp(&inv, z)?;
    let shifted = p - d[2] / 24.0;
    let numerator = big_a * dp + 0.5 * d[1] * shifted + d[0] * d[3] / 24.0;
    let denominator = 2.0 * shifted * shifted - d[0] * d[4] / 48.0;
    if denominator.norm() < 1e-12 * (1.0 + numerator.norm()) {
        return Err(Error::Pole { nearest: z });
    }
    Ok(a + numerator / denominator)
}

/// Period-free evaluation of (p, p') from invariants alone: halve until the
/// last retained Laurent terms are below 1e-17 in relative size, then double
/// back. Works for any z once the halving count is found; here the lattices
/// involved keep it small.
fn free_wp(invariants: &Invariants, z: Complex64) -> Result<(Complex64, Complex64)> {
    let coeffs = laurent_coefficients(invariants);
    let top = coeffs.len() - 1;
    let c_last = coeffs[top].abs();
    let c_prev = coeffs[top - 1].abs();
    let mut zs = z;
    let mut doublings = 0u32;
    loop {
        let w_mag = zs.norm_sqr();
        let tail = (c_last * w_mag.powi(top as i32 + 2)).max(c_prev * w_mag.powi(top as i32 + 1));
        if tail <= 1e-17 {
            break;
        }
        if doublings >= 60 {
            return Err(Error::Domain {
                value: z.norm(),
                domain: "argument too large for series halving",
            });
        }
        zs *= 0.5;
        doublings += 1;
    }
    let (mut p, mut dp) = laurent_eval(&coeffs, zs);
    for _ in 0..doublings {
        (p, dp) = duplicate(invariants.g2, p, dp);
    }
    Ok((p, dp))
}

/// Truncated Eisenstein sums over a general lattice (2 omega, 2 omega'):
/// sum' w^{-4} and sum' w^{-6} over |m|, |n| <= cutoff, origin excluded.
pub fn eisenstein_sums(
    omega: Complex64,
    omega_prime: Complex64,
    cutoff: u32,
) -> (Complex64, Complex64) {
    let w1 = 2.0 * omega;
    let w2 = 2.0 * omega_prime;
    let c = cutoff as i64;
    let mut s4 = Complex64::new(0.0, 0.0);
    let mut s6 = Complex64::new(0.0, 0.0);
    for m in -c..=c {
        for n in -c..=c {
            if m == 0 && n == 0 {
                continue;
            }
            let w = (m as f64) * w1 + (n as f64) * w2;
            let w2_ = w * w;
            let w4 = w2_ * w2_;
            let w6 = w4 * w2_;
            s4 += 1.0 / w4;
            s6 += 1.0 / w6;
        }
    }
    (s4, s6)
}

/// Invariants recovered from the half-periods by direct lattice summation:
/// g2 = 60 sum' w^{-4}, g3 = 140 sum' w^{-6}. Independent cross-check tying
/// the hypergeometric period formulas to the closed-form invariants; the
/// truncation error decays with the cutoff.
pub fn lattice_invariants_oracle(hp: &HalfPeriods, cutoff: u32) -> Result<Invariants> {
    if cutoff < 50 {
        return Err(Error::Domain {
            value: cutoff as f64,
            domain: "lattice sum cutoff must be at least 50",
        });
    }
    let (s4, s6) = eisenstein_sums(Complex64::new(hp.omega, 0.0), hp.omega_prime(), cutoff);
    // Rectangular lattice: conjugation symmetry cancels the imaginary parts.
    Ok(Invariants {
        g2: 60.0 * s4.re,
        g3: 140.0 * s6.re,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergeom::complete_k;
    use crate::realline;

    fn ctx_rn(kappa: f64) -> WeierstrassContext {
        WeierstrassContext::for_rn(&Modulus::new(kappa).unwrap()).unwrap()
    }

    fn ctx_dn2(kappa: f64) -> WeierstrassContext {
        WeierstrassContext::for_dn2(&Modulus::new(kappa).unwrap()).unwrap()
    }

    #[test]
    fn rn_context_invariants_at_half() {
        let ctx = ctx_rn(0.5);
        let inv = ctx.invariants();
        assert!((inv.g2 - 7.0 / 48.0).abs() < 1e-16);
        assert!((inv.g3 + 5.0 / 864.0).abs() < 1e-16);
        assert!(inv.discriminant() > 0.0);
    }

    #[test]
    fn dn2_context_invariants() {
        // kappa = 0.6 gives lambda = 0.8: g2 = 2.92/3, g3 = 4.76/27.
        let ctx = ctx_dn2(0.6);
        let inv = ctx.invariants();
        assert!((inv.g2 - 2.92 / 3.0).abs() < 1e-15);
        assert!((inv.g3 - 4.76 / 27.0).abs() < 1e-15);
    }

    #[test]
    fn roots_sum_to_zero_and_factorize() {
        for kappa in [0.3, 0.5, 0.8] {
            for ctx in [ctx_rn(kappa), ctx_dn2(kappa)] {
                let [e1, e2, e3] = ctx.roots();
                let inv = ctx.invariants();
                assert!((e1 + e2 + e3).abs() < 1e-14);
                // 4t^3 - g2 t - g3 = 4(t-e1)(t-e2)(t-e3) coefficientwise.
                assert!((e1 * e2 + e1 * e3 + e2 * e3 + inv.g2 / 4.0).abs() < 1e-13);
                assert!((e1 * e2 * e3 - inv.g3 / 4.0).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn real_half_period_is_twice_k() {
        for kappa in [0.3, 0.5, 0.8] {
            let m = Modulus::new(kappa).unwrap();
            let ctx = WeierstrassContext::for_rn(&m).unwrap();
            let big_k = complete_k(&m).unwrap();
            assert!((ctx.half_periods().omega() - 2.0 * big_k).abs() <= 1e-12);
        }
    }

    #[test]
    fn dn2_half_periods_are_half_the_rn_ones() {
        for kappa in [0.3, 0.5, 0.8] {
            let big = ctx_rn(kappa).half_periods();
            let small = ctx_dn2(kappa).half_periods();
            assert!((big.omega() - 2.0 * small.omega()).abs() <= 1e-13);
            assert!((big.omega_prime_mag() - small.omega_prime_mag()).abs() <= 1e-13);
        }
    }

    #[test]
    fn half_period_oracle_values() {
        // Independent 40-digit values for kappa = 0.5.
        let hp = ctx_rn(0.5).half_periods();
        assert!((hp.omega() - 3.313276340473188332896936745866121980008).abs() <= 1e-14);
        assert!((hp.omega_prime_mag() - 2.831474416851912397784331930847227064945).abs() <= 1e-14);
    }

    #[test]
    fn midpoint_values_match_roots() {
        for kappa in [0.3, 0.5, 0.8] {
            for ctx in [ctx_rn(kappa), ctx_dn2(kappa)] {
                let hp = ctx.half_periods();
                let [e1, e2, e3] = ctx.roots();
                let at = |z: Complex64| ctx.wp(z).unwrap();
                let om = Complex64::new(hp.omega(), 0.0);
                let omp = hp.omega_prime();
                assert!((at(om).re - e1).abs() <= 1e-10, "kappa={kappa} e1");
                assert!((at(om + omp).re - e2).abs() <= 1e-10, "kappa={kappa} e2");
                assert!((at(omp).re - e3).abs() <= 1e-10, "kappa={kappa} e3");
                assert!(at(om).im.abs() <= 1e-10);
                // p' vanishes at all three midpoints.
                assert!(ctx.wp_prime(om).unwrap().norm() <= 1e-9);
                assert!(ctx.wp_prime(om + omp).unwrap().norm() <= 1e-9);
                assert!(ctx.wp_prime(omp).unwrap().norm() <= 1e-9);
            }
        }
    }

    #[test]
    fn laurent_leading_term() {
        let ctx = ctx_rn(0.5);
        let z = Complex64::new(1e-3, 0.0);
        let p = ctx.wp(z).unwrap();
        assert!((z * z * p - 1.0).norm() <= 1e-5);
    }

    #[test]
    fn pole_guard_rejects_lattice_points() {
        let ctx = ctx_rn(0.5);
        let err = ctx.wp(Complex64::new(1e-9, 0.0)).unwrap_err();
        assert!(matches!(err, Error::Pole { .. }));
        // Near a nonzero lattice point the nearest point is reported.
        let w1 = 2.0 * ctx.half_periods().omega();
        let err = ctx.wp(Complex64::new(w1 + 1e-10, 0.0)).unwrap_err();
        match err {
            Error::Pole { nearest } => assert!((nearest.re - w1).abs() < 1e-9),
            other => panic!("expected pole, got {other:?}"),
        }
    }

    #[test]
    fn duplication_consistent_with_series() {
        // Both z and 2z inside the series disk: doubling must match the
        // direct series evaluation.
        let ctx = ctx_rn(0.5);
        let z = Complex64::new(0.31, 0.17);
        let (p, dp) = laurent_eval(&ctx.laurent, z);
        let (p_dir, dp_dir) = laurent_eval(&ctx.laurent, 2.0 * z);
        let (p_dup, dp_dup) = duplicate(ctx.invariants().g2, p, dp);
        assert!((p_dup - p_dir).norm() <= 1e-12 * p_dir.norm().max(1.0));
        assert!((dp_dup - dp_dir).norm() <= 1e-12 * dp_dir.norm().max(1.0));
    }

    #[test]
    fn wp_matches_truncated_lattice_sum() {
        // Direct summation of 1/z^2 + sum' [1/(z-w)^2 - 1/w^2].
        let ctx = ctx_rn(0.5);
        let z = Complex64::new(0.3, 0.2);
        let hp = ctx.half_periods();
        let w1 = Complex64::new(2.0 * hp.omega(), 0.0);
        let w2 = Complex64::new(0.0, 2.0 * hp.omega_prime_mag());
        let mut sum = 1.0 / (z * z);
        let cutoff = 200i64;
        for m in -cutoff..=cutoff {
            for n in -cutoff..=cutoff {
                if m == 0 && n == 0 {
                    continue;
                }
                let w = (m as f64) * w1 + (n as f64) * w2;
                let d = z - w;
                sum += 1.0 / (d * d) - 1.0 / (w * w);
            }
        }
        let p = ctx.wp(z).unwrap();
        assert!((p - sum).norm() <= 1e-6, "engine {p} vs lattice sum {sum}");
    }

    #[test]
    fn parity_and_periodicity() {
        let ctx = ctx_rn(0.8);
        let hp = ctx.half_periods();
        let z = Complex64::new(0.4, 0.27);
        let p = ctx.wp(z).unwrap();
        let dp = ctx.wp_prime(z).unwrap();
        assert!((ctx.wp(-z).unwrap() - p).norm() <= 1e-10 * p.norm().max(1.0));
        assert!((ctx.wp_prime(-z).unwrap() + dp).norm() <= 1e-10 * dp.norm().max(1.0));
        let real_period = Complex64::new(2.0 * hp.omega(), 0.0);
        let imag_period = Complex64::new(0.0, 2.0 * hp.omega_prime_mag());
        assert!((ctx.wp(z + real_period).unwrap() - p).norm() <= 1e-9);
        assert!((ctx.wp(z + imag_period).unwrap() - p).norm() <= 1e-9);
        assert!((ctx.wp(z + real_period + imag_period).unwrap() - p).norm() <= 1e-9);
    }

    #[test]
    fn cubic_differential_equation() {
        for kappa in [0.3, 0.5, 0.8] {
            for ctx in [ctx_rn(kappa), ctx_dn2(kappa)] {
                let inv = ctx.invariants();
                for z in [
                    Complex64::new(0.3, 0.2),
                    Complex64::new(-1.1, 0.9),
                    Complex64::new(2.7, -1.4),
                ] {
                    let (p, dp) = ctx.wp_and_prime(z).unwrap();
                    let residual = dp * dp - (4.0 * p * p * p - inv.g2 * p - inv.g3);
                    assert!(
                        residual.norm() <= 1e-9 * (1.0 + p.norm().powi(3)),
                        "kappa={kappa} z={z}: residual {}",
                        residual.norm()
                    );
                }
            }
        }
    }

    #[test]
    fn wp_prime_matches_finite_difference() {
        let ctx = ctx_rn(0.5);
        let z = Complex64::new(0.3, 0.2);
        let h = 1e-5;
        let fd = (ctx.wp(z + h).unwrap() - ctx.wp(z - h).unwrap()) / (2.0 * h);
        assert!((ctx.wp_prime(z).unwrap() - fd).norm() <= 1e-5);
    }

    #[test]
    fn homogeneity_links_the_two_families() {
        // p_lambda(z) = -2 P_kappa(i sqrt2 z).
        for kappa in [0.3, 0.5, 0.8] {
            let m = Modulus::new(kappa).unwrap();
            let lambda_modulus = Modulus::new(m.lambda()).unwrap();
            let big = WeierstrassContext::for_rn(&m).unwrap();
            let small = WeierstrassContext::for_dn2(&lambda_modulus).unwrap();
            let gamma = Complex64::new(0.0, f64::sqrt(2.0));
            for z in [Complex64::new(0.35, 0.1), Complex64::new(-0.2, 0.4)] {
                let lhs = small.wp(z).unwrap();
                let rhs = -2.0 * big.wp(gamma * z).unwrap();
                assert!(
                    (lhs - rhs).norm() <= 1e-9,
                    "kappa={kappa} z={z}: {lhs} vs {rhs}"
                );
            }
            // Period correspondence: Omega_k = sqrt2 |omega'_l|, |Omega'_k| = sqrt2 omega_l.
            let bp = big.half_periods();
            let sp = small.half_periods();
            assert!((bp.omega() - f64::sqrt(2.0) * sp.omega_prime_mag()).abs() <= 1e-12);
            assert!((bp.omega_prime_mag() - f64::sqrt(2.0) * sp.omega()).abs() <= 1e-12);
        }
    }

    #[test]
    fn quartic_invariants_of_the_rn_quartic() {
        for kappa in [0.3, 0.5, 0.8_f64] {
            let k2 = kappa * kappa;
            let q = QuarticCoefficients {
                a0: 1.0,
                a1: 0.0,
                a2: -1.0 / 6.0,
                a3: 0.0,
                a4: 0.25 * k2,
            };
            let inv = quartic_invariants(&q);
            assert!((inv.g2 - (1.0 + 3.0 * k2) / 12.0).abs() <= 1e-15);
            assert!((inv.g3 - (1.0 - 9.0 * k2) / 216.0).abs() <= 1e-15);
        }
    }

    #[test]
    fn quartic_invariants_degenerate_and_translated() {
        let zero_quartic = QuarticCoefficients {
            a0: 1.0,
            a1: 0.0,
            a2: 0.0,
            a3: 0.0,
            a4: 0.0,
        };
        let inv = quartic_invariants(&zero_quartic);
        assert_eq!((inv.g2, inv.g3), (0.0, 0.0));

        // Invariants are unchanged under z -> z + t.
        let q = QuarticCoefficients {
            a0: 1.0,
            a1: 0.25,
            a2: -1.0 / 6.0,
            a3: -0.75,
            a4: 0.3,
        };
        let base = quartic_invariants(&q);
        let shifted = quartic_invariants(&q.translate(0.3));
        assert!((base.g2 - shifted.g2).abs() <= 1e-13);
        assert!((base.g3 - shifted.g3).abs() <= 1e-13);
    }

    #[test]
    fn translate_matches_direct_evaluation() {
        let q = QuarticCoefficients {
            a0: 2.0,
            a1: -0.5,
            a2: 0.125,
            a3: 1.5,
            a4: -3.0,
        };
        let t = 0.7;
        let shifted = q.translate(t);
        for z in [-1.3, 0.0, 0.4, 2.2] {
            assert!(
                (shifted.eval(z) - q.eval(z + t)).abs() <= 1e-12 * q.eval(z + t).abs().max(1.0)
            );
        }
    }

    fn rn_quartic(kappa: f64) -> QuarticCoefficients {
        QuarticCoefficients {
            a0: 1.0,
            a1: 0.0,
            a2: -1.0 / 6.0,
            a3: 0.0,
            a4: 0.25 * kappa * kappa,
        }
    }

    #[test]
    fn ivp_solution_matches_real_line_rn() {
        let kappa = 0.5;
        let m = Modulus::new(kappa).unwrap();
        let q = rn_quartic(kappa);
        for u in [0.2, 0.4, 1.0, -0.7] {
            let w = quartic_ivp_solution(&q, 0.0, -0.5 * kappa, Complex64::new(u, 0.0)).unwrap();
            let expected = realline::sig4_real(u, &m).unwrap().rn;
            assert!((w - expected).norm() <= 1e-10, "u={u}: {w} vs {expected}");
        }
    }

    #[test]
    fn ivp_solution_initial_value_limit() {
        let q = rn_quartic(0.8);
        let w = quartic_ivp_solution(&q, 0.0, -0.4, Complex64::new(1e-6, 0.0)).unwrap();
        assert!(w.norm() <= 1e-5);
        // Inside the pole guard the limit value is returned outright.
        let w0 = quartic_ivp_solution(&q, 0.0, -0.4, Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(w0, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn ivp_solution_satisfies_its_ode() {
        let kappa = 0.8;
        let q = rn_quartic(kappa);
        let h = 1e-5;
        for z in [
            Complex64::new(0.9, 0.4),
            Complex64::new(1.7, 1.1),
            Complex64::new(0.25, -0.6),
        ] {
            let w = quartic_ivp_solution(&q, 0.0, -0.5 * kappa, z).unwrap();
            let plus = quartic_ivp_solution(&q, 0.0, -0.5 * kappa, z + h).unwrap();
            let minus = quartic_ivp_solution(&q, 0.0, -0.5 * kappa, z - h).unwrap();
            let dw = (plus - minus) / (2.0 * h);
            let residual = dw * dw - q.eval_complex(w);
            assert!(
                residual.norm() <= 1e-8,
                "z={z}: residual {}",
                residual.norm()
            );
        }
    }

    #[test]
    fn ivp_solution_rejects_bad_inputs() {
        let q = rn_quartic(0.5);
        assert!(matches!(
            quartic_ivp_solution(&q, 0.0, 0.3, Complex64::new(0.5, 0.0)),
            Err(Error::InvalidSquareRoot { .. })
        ));
        let degenerate = QuarticCoefficients {
            a0: 1.0,
            a1: 0.0,
            a2: 0.0,
            a3: 0.0,
            a4: 0.0,
        };
        assert!(matches!(
            quartic_ivp_solution(&degenerate, 0.0, 0.0, Complex64::new(0.5, 0.0)),
            Err(Error::DegenerateQuartic { .. })
        ));
    }

    #[test]
    fn eisenstein_sum_symmetries() {
        // Square lattice: the w^{-6} sum cancels under the quarter turn.
        let (_, s6) = eisenstein_sums(Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), 120);
        assert!((140.0 * s6).norm() <= 1e-6);

        // Hexagonal lattice: the w^{-4} sum cancels under the sixth turn.
        let (s4, _) = eisenstein_sums(
            Complex64::new(1.0, 0.0),
            Complex64::from_polar(1.0, PI / 3.0),
            150,
        );
        assert!((60.0 * s4).norm() <= 1e-4);
    }

    #[test]
    fn lattice_oracle_recovers_closed_form_invariants() {
        let ctx = ctx_rn(0.5);
        let inv = ctx.invariants();
        let est = lattice_invariants_oracle(&ctx.half_periods(), 300).unwrap();
        assert!(
            (est.g2 - inv.g2).abs() <= 1e-4,
            "g2 {} vs {}",
            est.g2,
            inv.g2
        );
        assert!(
            (est.g3 - inv.g3).abs() <= 1e-4,
            "g3 {} vs {}",
            est.g3,
            inv.g3
        );
    }

    #[test]
    fn lattice_oracle_enforces_minimum_cutoff() {
        let hp = HalfPeriods::new(1.0, 1.0).unwrap();
        assert!(matches!(
            lattice_invariants_oracle(&hp, 10),
            Err(Error::Domain { .. })
        ));
    }
}
