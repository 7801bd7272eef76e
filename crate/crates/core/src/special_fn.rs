//! The reciprocal Gamma function `Δ = 1/Γ` and the Euler–Mascheroni constant.
//!
//! `Δ(z) = z e^{cz} Π (1 + z/n) e^{-z/n}` is evaluated two ways: the default
//! route lifts the argument with `Δ(z) = z Δ(z+1)` and finishes with the
//! Stirling series, while [`delta_product`] truncates the product itself and
//! adds an Euler–Maclaurin estimate of the tail.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeltaSettings {
    /// Factors kept in the truncated product.
    pub product_terms: usize,
    /// The Stirling route raises `Re z` at least this far first.
    pub recursion_floor: f64,
}

impl Default for DeltaSettings {
    fn default() -> Self {
        Self { product_terms: 1000, recursion_floor: 10.0 }
    }
}

impl DeltaSettings {
    pub fn validate(&self) -> Result<()> {
        if self.product_terms < 1 {
            return Err(Error::InvalidParameter("product_terms must be >= 1".into()));
        }
        if !(self.recursion_floor >= 1.0 && self.recursion_floor.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "recursion_floor must be >= 1, got {}",
                self.recursion_floor
            )));
        }
        Ok(())
    }
}

/// `B_{2k} / (2k(2k-1))` for k = 1..8.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
];

/// `B_{2k} / (2k)!` for k = 1..4.
const EM_WEIGHTS: [f64; 4] = [1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0, -1.0 / 1209600.0];

/// `H_n − log(n+1)`, the sequence whose limit defines the constant.
pub fn euler_mascheroni_partial(n: u64) -> f64 {
    harmonic(n) - (n as f64).ln_1p()
}

fn harmonic(n: u64) -> f64 {
    // smallest terms first
    (1..=n).rev().map(|k| 1.0 / k as f64).sum()
}

/// Limit sequence at `n = 1000` plus its asymptotic tail.
fn euler_mascheroni_tail_corrected() -> f64 {
    let n = 1000u64;
    let x = n as f64;
    let inv2 = 1.0 / (x * x);
    let tail = 1.0 / (2.0 * x)
        - inv2 / 12.0
        + inv2 * inv2 / 120.0
        - inv2 * inv2 * inv2 / 252.0
        + inv2 * inv2 * inv2 * inv2 / 240.0;
    euler_mascheroni_partial(n) + (1.0 / x).ln_1p() - tail
}

/// Richardson extrapolation of the raw limit sequence along `n = 16·2^k`.
fn euler_mascheroni_richardson() -> f64 {
    const LEVELS: usize = 9;
    let mut table: Vec<f64> = (0..LEVELS).map(|k| euler_mascheroni_partial(16u64 << k)).collect();
    for j in 1..LEVELS {
        let p = (1u64 << j) as f64;
        for k in (j..LEVELS).rev() {
            table[k] = (p * table[k] - table[k - 1]) / (p - 1.0);
        }
    }
    table[LEVELS - 1]
}

/// Both routes, for cross-checking.
pub fn euler_mascheroni_routes() -> (f64, f64) {
    (euler_mascheroni_tail_corrected(), euler_mascheroni_richardson())
}

pub fn euler_mascheroni() -> f64 {
    euler_mascheroni_tail_corrected()
}

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

fn finish(log_value: Complex64) -> Result<Complex64> {
    if log_value.re > 709.0 {
        return Err(Error::Overflow(format!("|Δ| = e^{:.1}", log_value.re)));
    }
    Ok(log_value.exp())
}

/// `log Γ(w)` by the Stirling series; accurate for `Re w ≥ 10`.
fn ln_gamma_stirling(w: Complex64) -> Complex64 {
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut p = inv;
    for c in STIRLING {
        series += c * p;
        p *= inv2;
    }
    (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln() + series
}

/// `Δ(z) = 1/Γ(z)`: lift with `Δ(z) = z Δ(z+1)` until `Re z ≥ floor`, then Stirling.
pub fn delta_eval(z: Complex64, settings: &DeltaSettings) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::InvalidParameter(format!("Δ argument must be finite, got {z}")));
    }
    if is_nonpositive_integer(z) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let mut w = z;
    let mut log_prefix = Complex64::new(0.0, 0.0);
    while w.re < settings.recursion_floor {
        log_prefix += w.ln();
        w += 1.0;
    }
    finish(log_prefix - ln_gamma_stirling(w))
}

/// `Δ(z)` from the product truncated at `product_terms` factors, with the
/// Euler–Maclaurin tail `Σ_{n>N} [log(1+z/n) − z/n]` added back.
pub fn delta_product(z: Complex64, settings: &DeltaSettings) -> Result<Complex64> {
    let big_n = settings.product_terms;
    let nf = big_n as f64;
    if !(z.norm() <= nf / 4.0) {
        return Err(Error::InvalidParameter(format!(
            "product route needs |z| <= N/4 = {}, got |z| = {}",
            nf / 4.0,
            z.norm()
        )));
    }
    if is_nonpositive_integer(z) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let c = euler_mascheroni();
    let mut acc = z.ln() + c * z;
    for n in (1..=big_n).rev() {
        let t = z / n as f64;
        acc += (1.0 + t).ln() - t;
    }
    finish(acc + product_tail(z, nf))
}

fn product_tail(z: Complex64, n: f64) -> Complex64 {
    let g = |t: f64| (1.0 + z / t).ln() - z / t;
    // k-th derivative of g at t
    let dg = |k: i32, t: f64| {
        let fact_km1: f64 = (1..k).map(|i| i as f64).product();
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        sign * fact_km1 * ((t + z).powi(-k) - Complex64::new(t.powi(-k), 0.0))
            + sign * fact_km1 * k as f64 * z * t.powi(-k - 1)
    };
    let integral = z - (n + z) * (1.0 + z / n).ln();
    let mut tail = integral - 0.5 * g(n);
    for (j, w) in EM_WEIGHTS.iter().enumerate() {
        tail -= *w * dg(2 * j as i32 + 1, n);
    }
    tail
}

/// `|Δ(z) − zΔ(z+1)| / (|Δ(z)| + |zΔ(z+1)| + 1e−300)`.
pub fn delta_recursion_residual(z: Complex64, settings: &DeltaSettings) -> Result<f64> {
    let lhs = delta_eval(z, settings)?;
    let rhs = z * delta_eval(z + 1.0, settings)?;
    Ok((lhs - rhs).norm() / (lhs.norm() + rhs.norm() + 1e-300))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const C: f64 = 0.577_215_664_901_532_9;

    fn s() -> DeltaSettings {
        DeltaSettings::default()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn partial_sum_at_ten() {
        assert!((euler_mascheroni_partial(10) - 0.531_072_981_2).abs() < 1e-10);
    }

    #[test]
    fn partial_sums_increase_to_the_limit() {
        // a_{n+1} − a_n = 1/(n+1) − log(1 + 1/(n+1)) > 0
        let mut prev = euler_mascheroni_partial(1);
        for n in 2..=10_000 {
            let v = euler_mascheroni_partial(n);
            assert!(v > prev, "not increasing at n={n}");
            assert!(v < C);
            prev = v;
        }
    }

    #[test]
    fn constant_routes_agree() {
        let (a, b) = euler_mascheroni_routes();
        assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        assert!((a - C).abs() < 1e-12 && (b - C).abs() < 1e-12);
    }

    #[test]
    fn classical_values() {
        assert!((delta_eval(c(1.0, 0.0), &s()).unwrap() - 1.0).norm() < 1e-12);
        assert!((delta_eval(c(2.0, 0.0), &s()).unwrap() - 1.0).norm() < 1e-12);
        let half = delta_eval(c(0.5, 0.0), &s()).unwrap();
        assert!((half - 1.0 / PI.sqrt()).norm() < 1e-10);
        assert!((half.re - 0.564_189_583_5).abs() < 1e-10);
        // Γ(5) = 24
        assert!((delta_eval(c(5.0, 0.0), &s()).unwrap() - 1.0 / 24.0).norm() < 1e-15);
    }

    #[test]
    fn exact_zeros() {
        for z in [0.0, -1.0, -3.0, -17.0] {
            assert_eq!(delta_eval(c(z, 0.0), &s()).unwrap(), c(0.0, 0.0));
            assert_eq!(delta_product(c(z, 0.0), &s()).unwrap(), c(0.0, 0.0));
        }
    }

    #[test]
    fn recursion_examples() {
        assert!(delta_recursion_residual(c(1.0, 0.0), &s()).unwrap() < 1e-12);
        assert!(delta_recursion_residual(c(2.5, -1.3), &s()).unwrap() < 1e-10);
        assert_eq!(delta_recursion_residual(c(-2.0, 0.0), &s()).unwrap(), 0.0);
    }

    #[test]
    fn product_route_matches_known_values() {
        assert!(rel(delta_product(c(0.5, 0.0), &s()).unwrap(), c(1.0 / PI.sqrt(), 0.0)) < 1e-12);
        assert!(rel(delta_product(c(4.0, 0.0), &s()).unwrap(), c(1.0 / 6.0, 0.0)) < 1e-12);
        assert!(delta_product(c(300.0, 0.0), &s()).is_err());
    }

    #[test]
    fn imaginary_axis_modulus() {
        // |Γ(iy)|² = π / (y sinh πy)
        let y = 1.7f64;
        let d = delta_eval(c(0.0, y), &s()).unwrap();
        assert!((d.norm_sqr() - y * (PI * y).sinh() / PI).abs() < 1e-12 * d.norm_sqr());
    }

    #[test]
    fn overflow_reported() {
        assert!(matches!(delta_eval(c(-400.5, 0.0), &s()), Err(Error::Overflow(_))));
        assert!(delta_eval(c(f64::NAN, 0.0), &s()).is_err());
    }

    proptest! {
        #[test]
        fn routes_agree(re in -10.0f64..10.0, im in -10.0f64..10.0) {
            let z = c(re, im);
            prop_assume!(z.norm() <= 10.0);
            let a = delta_eval(z, &s()).unwrap();
            let b = delta_product(z, &s()).unwrap();
            prop_assert!((a - b).norm() <= 1e-10 * a.norm().max(1e-300), "{} vs {}", a, b);
        }

        #[test]
        fn conjugate_symmetry(re in -12.0f64..12.0, im in -12.0f64..12.0) {
            let z = c(re, im);
            let a = delta_eval(z.conj(), &s()).unwrap();
            let b = delta_eval(z, &s()).unwrap().conj();
            prop_assert!((a - b).norm() <= 1e-12 * b.norm());
        }

        #[test]
        fn functional_equation(re in -20.0f64..20.0, im in -20.0f64..20.0) {
            let z = c(re, im);
            prop_assume!(z.norm() <= 20.0 && z.norm() > 1e-3);
            prop_assert!(delta_recursion_residual(z, &s()).unwrap() < 1e-10);
        }
    }
}
