use std::f64::consts::PI;
use std::sync::OnceLock;

use super::{zeta_reference, ComplexValue};
use crate::calibration::calibration;
use crate::error::{Error, Result};

/// Truncated Laurent series Σ_{j=−order}^{K} c_j (s − center)^j.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentExpansion {
    pub center: ComplexValue,
    pub order: usize,
    /// c_{−order}, …, c_K in ascending power.
    pub coeffs: Vec<ComplexValue>,
}

impl LaurentExpansion {
    /// c_j, or zero outside the stored range.
    pub fn coeff(&self, j: i64) -> ComplexValue {
        let idx = j + self.order as i64;
        if idx < 0 {
            return ComplexValue::new(0.0, 0.0);
        }
        self.coeffs.get(idx as usize).copied().unwrap_or_default()
    }

    /// Highest stored power K.
    pub fn max_power(&self) -> i64 {
        self.coeffs.len() as i64 - self.order as i64 - 1
    }

    pub fn evaluate(&self, s: ComplexValue) -> ComplexValue {
        let w = s - self.center;
        let mut acc = ComplexValue::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * w + c;
        }
        acc * w.powi(-(self.order as i32))
    }
}

/// Laurent coefficients of `f` at `center` with the calibrated circle radius
/// and node count.
pub fn laurent_at_pole<F>(
    f: F,
    center: ComplexValue,
    order: usize,
    radius: f64,
    max_power: usize,
) -> Result<LaurentExpansion>
where
    F: Fn(ComplexValue) -> Result<ComplexValue>,
{
    laurent_at_pole_with_nodes(f, center, order, radius, max_power, calibration().laurent_nodes)
}

/// c_j = (1/2πi) ∮ f(s) (s − center)^{−j−1} ds over |s − center| = radius,
/// by the trapezoidal rule on `nodes` equally spaced points.
///
/// `order` is an upper bound for the pole order; leading coefficients that
/// vanish to rounding level are dropped so that `c_{−order} ≠ 0`.
pub fn laurent_at_pole_with_nodes<F>(
    f: F,
    center: ComplexValue,
    order: usize,
    radius: f64,
    max_power: usize,
    nodes: usize,
) -> Result<LaurentExpansion>
where
    F: Fn(ComplexValue) -> Result<ComplexValue>,
{
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::InvalidConfig(format!("radius {radius} must be positive")));
    }
    let len = order + max_power + 1;
    if nodes < 2 * len {
        return Err(Error::InvalidConfig(format!(
            "{nodes} nodes cannot resolve {len} coefficients"
        )));
    }

    let mut samples = Vec::with_capacity(nodes);
    for k in 0..nodes {
        let unit = ComplexValue::from_polar(1.0, 2.0 * PI * k as f64 / nodes as f64);
        let s = center + radius * unit;
        let v = f(s).map_err(|_| Error::ContourSingularity { re: s.re, im: s.im })?;
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::ContourSingularity { re: s.re, im: s.im });
        }
        samples.push((unit, v));
    }

    // c_j ρ^j = mean of f(s_k) ω_k^{-j}
    let mut scaled: Vec<ComplexValue> = (0..len)
        .map(|idx| {
            let j = idx as i32 - order as i32;
            let sum: ComplexValue = samples.iter().map(|(u, v)| v * u.powi(-j)).sum();
            sum / nodes as f64
        })
        .collect();

    let scale = scaled.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut order = order;
    while order > 0 && scaled[0].norm() <= 1e-11 * scale {
        scaled.remove(0);
        order -= 1;
    }

    let coeffs = scaled
        .into_iter()
        .enumerate()
        .map(|(idx, c)| c * radius.powi(-(idx as i32 - order as i32)))
        .collect();
    Ok(LaurentExpansion { center, order, coeffs })
}

/// Euler's constant γ, read off as the constant term of ζ at s = 1.
pub fn euler_gamma() -> f64 {
    static GAMMA: OnceLock<f64> = OnceLock::new();
    *GAMMA.get_or_init(|| {
        let cal = calibration();
        let exp = laurent_at_pole(zeta_reference, ComplexValue::new(1.0, 0.0), 1, cal.laurent_radius, 0)
            .expect("zeta is analytic on the circle around 1");
        exp.coeff(0).re
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> ComplexValue {
        ComplexValue::new(re, im)
    }

    #[test]
    fn zeta_at_one() {
        let exp = laurent_at_pole(zeta_reference, c(1.0, 0.0), 1, 0.25, 6).unwrap();
        assert_eq!(exp.order, 1);
        assert!((exp.coeff(-1) - 1.0).norm() < 1e-13);
        assert!((exp.coeff(0).re - 0.577_215_664_901_532_9).abs() < 1e-12);
        // Stieltjes constant γ₁ ≈ −0.0728158454836767, entering with sign −γ₁.
        assert!((exp.coeff(1).re - 0.072_815_845_483_676_7).abs() < 1e-11);
        assert!((euler_gamma() - 0.577_215_664_901_532_9).abs() < 1e-12);
    }

    #[test]
    fn reciprocal_has_only_residue() {
        let exp = laurent_at_pole(|s: ComplexValue| Ok(s.inv()), c(0.0, 0.0), 1, 0.25, 4).unwrap();
        assert!((exp.coeff(-1) - 1.0).norm() < 1e-14);
        for j in 0..=4 {
            assert!(exp.coeff(j).norm() < 1e-12, "c_{j} = {}", exp.coeff(j));
        }
    }

    #[test]
    fn overstated_order_is_trimmed() {
        let exp = laurent_at_pole(|s: ComplexValue| Ok(s.inv()), c(0.0, 0.0), 3, 0.25, 2).unwrap();
        assert_eq!(exp.order, 1);
        assert!((exp.coeff(-1) - 1.0).norm() < 1e-14);
    }

    fn round_trip(f: impl Fn(ComplexValue) -> Result<ComplexValue> + Copy, s0: ComplexValue, order: usize) {
        let exp = laurent_at_pole(f, s0, order, 0.25, 40).unwrap();
        for k in 0..16 {
            let s = s0 + ComplexValue::from_polar(0.125, 0.3 + k as f64 * PI / 8.0);
            let want = f(s).unwrap();
            let got = exp.evaluate(s);
            assert!((want - got).norm() <= 1e-6 * want.norm(), "s = {s}");
        }
    }

    #[test]
    fn reconstruction_on_half_radius_circle() {
        round_trip(zeta_reference, c(1.0, 0.0), 1);
        round_trip(
            |s: ComplexValue| {
                let z = zeta_reference(s + 1.0)?;
                Ok(z.powi(4) / zeta_reference(2.0 * s + 2.0)?)
            },
            c(0.0, 0.0),
            4,
        );
    }

    #[test]
    fn singular_circle_rejected() {
        let err = laurent_at_pole(|s: ComplexValue| Ok(1.0 / (s - 0.25)), c(0.0, 0.0), 1, 0.25, 2);
        assert!(matches!(err, Err(Error::ContourSingularity { .. })));
        let err = laurent_at_pole(zeta_reference, c(0.75, 0.0), 1, 0.25, 2);
        assert!(matches!(err, Err(Error::ContourSingularity { .. })));
    }
}
