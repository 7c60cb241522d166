use super::{ensure_finite, ComplexValue};
use crate::error::{Error, Result};

/// B_{2k} / (2k (2k-1)) for k = 1..10.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43_867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;

/// Smallest |z| at which the Stirling series is used directly.
const STIRLING_RADIUS: f64 = 10.0;

/// Principal branch of log Γ(z).
///
/// The argument is shifted right by the recurrence Γ(z+1) = zΓ(z) until
/// Re z ≥ 0 and |z| ≥ 10, then the Stirling series with ten Bernoulli terms
/// is summed. The branch is the one continuous from the positive real axis
/// with a cut along the negative real axis, so
/// `log Γ(z+1) = log Γ(z) + log z` holds with the principal `log z`.
pub fn complex_log_gamma(z: ComplexValue) -> Result<ComplexValue> {
    ensure_finite(z, "z")?;
    if z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0 {
        return Err(Error::GammaPole(z.re));
    }

    let mut w = z;
    let mut shift = ComplexValue::new(0.0, 0.0);
    while w.re < 0.0 || w.norm() < STIRLING_RADIUS {
        shift += w.ln();
        w += 1.0;
    }

    let inv = w.inv();
    let inv_sq = inv * inv;
    let mut series = ComplexValue::new(0.0, 0.0);
    let mut power = inv;
    for c in STIRLING {
        series += power * c;
        power *= inv_sq;
    }
    let value = (w - 0.5) * w.ln() - w + HALF_LN_TWO_PI + series - shift;
    ensure_finite(value, "log gamma")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> ComplexValue {
        ComplexValue::new(re, im)
    }

    #[test]
    fn integer_and_half_integer_values() {
        assert!(complex_log_gamma(c(1.0, 0.0)).unwrap().norm() < 1e-15);
        let g5 = complex_log_gamma(c(5.0, 0.0)).unwrap();
        assert!((g5.re - 24f64.ln()).abs() < 1e-14 && g5.im.abs() < 1e-15);
        let half = complex_log_gamma(c(0.5, 0.0)).unwrap();
        assert!((half.re - 0.5 * PI.ln()).abs() < 1e-14 && half.im.abs() < 1e-15);
    }

    #[test]
    fn factorials_up_to_100() {
        let mut log_fact = 0.0f64;
        for n in 1..=100u32 {
            // log Γ(n) = log (n-1)!
            let g = complex_log_gamma(c(n as f64, 0.0)).unwrap();
            assert!((g.re - log_fact).abs() <= 1e-12 * log_fact.max(1.0), "n = {n}");
            log_fact += (n as f64).ln();
        }
    }

    #[test]
    fn modulus_identities_on_vertical_lines() {
        // |Γ(1/2 + it)|^2 = π / cosh(πt),  |Γ(it)|^2 = π / (t sinh(πt))
        for &t in &[0.3, 1.0, 2.5, 7.0, 20.0, 60.0] {
            let g = complex_log_gamma(c(0.5, t)).unwrap();
            let expect = 0.5 * (PI.ln() - (PI * t).cosh().ln());
            assert!((g.re - expect).abs() < 1e-12, "t = {t}");
            let g = complex_log_gamma(c(0.0, t)).unwrap();
            let expect = 0.5 * (PI.ln() - t.ln() - (PI * t).sinh().ln());
            assert!((g.re - expect).abs() < 1e-12, "t = {t}");
        }
    }

    #[test]
    fn reflection_formula() {
        // Γ(z)Γ(1-z) = π / sin(πz), compared after exponentiation.
        for &(x, y) in &[(0.3, 0.7), (-2.4, 1.5), (0.8, -3.0), (-6.5, 0.25)] {
            let z = c(x, y);
            let lhs = (complex_log_gamma(z).unwrap() + complex_log_gamma(1.0 - z).unwrap()).exp();
            let rhs = PI / (z * PI).sin();
            assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm(), "z = {z}");
        }
    }

    #[test]
    fn recurrence_keeps_principal_branch() {
        for &(x, y) in &[(3.0, 40.0), (-4.5, 2.0), (0.25, -80.0)] {
            let z = c(x, y);
            let lhs = complex_log_gamma(z + 1.0).unwrap();
            let rhs = complex_log_gamma(z).unwrap() + z.ln();
            assert!((lhs - rhs).norm() < 1e-11, "z = {z}");
        }
    }

    #[test]
    fn poles_rejected() {
        for x in [0.0, -1.0, -7.0] {
            assert_eq!(complex_log_gamma(c(x, 0.0)), Err(Error::GammaPole(x)));
        }
        assert!(complex_log_gamma(c(f64::NAN, 0.0)).is_err());
    }
}
