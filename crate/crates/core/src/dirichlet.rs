//! Dirichlet polynomials, their exact mean squares on [0, T], and the
//! approximate functional equations for ζ and ζ² on the critical line.

use std::f64::consts::PI;
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::arith::ArithTable;
use crate::error::{Error, Result};
use crate::special::{chi_exact, ln_n, power_sum, weighted_power_sum, ComplexValue};

/// P(s) = Σ_{n=1}^{N} a_n n^{-s}.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletPolynomial {
    coeffs: Vec<ComplexValue>,
}

impl DirichletPolynomial {
    /// Coefficients a_1, …, a_N.
    pub fn new(coeffs: Vec<ComplexValue>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::domain("a Dirichlet polynomial needs at least one coefficient"));
        }
        if let Some(bad) = coeffs.iter().position(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::NonFinite(format!("coefficient a_{}", bad + 1)));
        }
        Ok(DirichletPolynomial { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| ComplexValue::new(c, 0.0)).collect())
    }

    /// a_n = n^{-1/2}, n ≤ N.
    pub fn inverse_sqrt(n: usize) -> Result<Self> {
        Self::new((1..=n).map(|m| ComplexValue::new((m as f64).sqrt().recip(), 0.0)).collect())
    }

    /// a_n = f(n)/√n for the first `n` entries of a table.
    pub fn from_table_over_sqrt(table: &ArithTable, n: usize) -> Result<Self> {
        if n > table.len() {
            return Err(Error::LengthMismatch(n, table.len()));
        }
        Self::new(
            table.values()[..n]
                .iter()
                .enumerate()
                .map(|(i, &v)| ComplexValue::new(v as f64 / ((i + 1) as f64).sqrt(), 0.0))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[ComplexValue] {
        &self.coeffs
    }

    /// P(s) by direct summation.
    pub fn eval(&self, s: ComplexValue) -> ComplexValue {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| a * (-s * ln_n(i + 1)).exp())
            .sum()
    }

    /// The size Σ n|a_n|² of the off-diagonal term in the mean-value theorem.
    pub fn mv_envelope(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| (i + 1) as f64 * a.norm_sqr())
            .sum()
    }

    /// ∫_0^T |P(it)|² dt in closed form, split into diagonal and off-diagonal parts.
    ///
    /// Rows of the (n, m) double sum are evaluated in parallel and added in
    /// row order.
    pub fn second_moment_exact(&self, t: f64) -> Result<SecondMomentBreakdown> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::domain(format!("T = {t} must be positive")));
        }
        let n = self.len();
        let logs: Vec<f64> = (1..=n).map(ln_n).collect();
        let main = t * self.coeffs.iter().map(|a| a.norm_sqr()).sum::<f64>();

        let rows: Vec<f64> = (0..n)
            .into_par_iter()
            .map(|i| {
                let a = self.coeffs[i];
                if a == ComplexValue::new(0.0, 0.0) {
                    return 0.0;
                }
                let mut acc = 0.0;
                for j in i + 1..n {
                    let w = a * self.coeffs[j].conj();
                    let k = mean_phase_kernel(t * (logs[j] - logs[i]));
                    acc += w.re * k.re - w.im * k.im;
                }
                acc
            })
            .collect();
        let cross = 2.0 * t * rows.iter().sum::<f64>();
        Ok(SecondMomentBreakdown { main, cross, total: main + cross, t, n })
    }
}

/// (e^{iθ} − 1)/(iθ), the mean of e^{iu} over u ∈ [0, θ].
pub fn mean_phase_kernel(theta: f64) -> ComplexValue {
    if theta.abs() < 1e-4 {
        let t2 = theta * theta;
        return ComplexValue::new(1.0 - t2 / 6.0 + t2 * t2 / 120.0, theta / 2.0 - theta * t2 / 24.0);
    }
    let (sin, cos) = theta.sin_cos();
    // 1 - cos θ without cancellation near θ = 0 mod 2π
    let one_minus_cos = if cos > 0.0 { sin * sin / (1.0 + cos) } else { 1.0 - cos };
    ComplexValue::new(sin / theta, one_minus_cos / theta)
}

/// Diagonal and off-diagonal parts of ∫_0^T |P(it)|² dt.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondMomentBreakdown {
    /// T Σ |a_n|²
    pub main: f64,
    /// Σ_{n≠m} a_n ā_m ((m/n)^{iT} − 1)/(i log(m/n))
    pub cross: f64,
    pub total: f64,
    pub t: f64,
    pub n: usize,
}

fn check_critical_line(s: ComplexValue) -> Result<()> {
    if (s.re - 0.5).abs() > 1e-12 {
        return Err(Error::domain(format!("approximate functional equation needs sigma = 1/2, got {}", s.re)));
    }
    if s.im.abs() < 50.0 {
        return Err(Error::domain(format!("approximate functional equation needs |t| >= 50, got {}", s.im)));
    }
    Ok(())
}

/// ζ(1/2+it) ≈ Σ_{n≤N} n^{-s} + χ(s) Σ_{n≤N} n^{-(1−s)}, N = ⌊√(t/2π)⌋.
pub fn zeta_afe(s: ComplexValue) -> Result<ComplexValue> {
    check_critical_line(s)?;
    if s.im < 0.0 {
        return Ok(zeta_afe(s.conj())?.conj());
    }
    let n = (s.im / (2.0 * PI)).sqrt().floor() as usize;
    Ok(power_sum(s, n) + chi_exact(s)? * power_sum(1.0 - s, n))
}

const DIVISOR_TABLE_LEN: usize = 160_000;

fn divisor_counts() -> &'static ArithTable {
    static TABLE: OnceLock<ArithTable> = OnceLock::new();
    TABLE.get_or_init(|| ArithTable::sieve_dk(2, DIVISOR_TABLE_LEN).expect("fixed-size divisor table"))
}

/// ζ(1/2+it)² ≈ Σ_{n≤x} d(n) n^{-s} + χ(s)² Σ_{n≤x} d(n) n^{-(1−s)}, x = ⌊t/2π⌋.
pub fn zeta_squared_afe(s: ComplexValue) -> Result<ComplexValue> {
    check_critical_line(s)?;
    if s.im < 0.0 {
        return Ok(zeta_squared_afe(s.conj())?.conj());
    }
    let x = (s.im / (2.0 * PI)).floor() as usize;
    if x > DIVISOR_TABLE_LEN {
        return Err(Error::AccuracyDomain(format!("t = {} beyond the divisor table", s.im)));
    }
    let d = divisor_counts();
    let weight = |n: usize| d.get(n) as f64;
    let chi = chi_exact(s)?;
    Ok(weighted_power_sum(s, x, weight) + chi * chi * weighted_power_sum(1.0 - s, x, weight))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calibration::calibration;
    use crate::quad::{integrate, QuadRule, QuadratureConfig};
    use crate::special::zeta_reference;

    fn c(re: f64, im: f64) -> ComplexValue {
        ComplexValue::new(re, im)
    }

    fn quad_second_moment(p: &DirichletPolynomial, t: f64) -> f64 {
        let cfg = QuadratureConfig::new(QuadRule::GaussLegendrePanels, 0.25, 1e-13 * t, 50_000_000);
        integrate(|x| c(p.eval(c(0.0, x)).norm_sqr(), 0.0), 0.0, t, &cfg).unwrap().value.re
    }

    #[test]
    fn eval_examples() {
        let one = DirichletPolynomial::from_real(&[1.0]).unwrap();
        assert_eq!(one.eval(c(0.3, 7.0)), c(1.0, 0.0));
        let two = DirichletPolynomial::from_real(&[1.0, 1.0]).unwrap();
        assert!((two.eval(c(0.0, 0.0)) - 2.0).norm() < 1e-15);
    }

    #[test]
    fn eval_reconciles_with_truncated_zeta() {
        let n = 200;
        let p = DirichletPolynomial::inverse_sqrt(n).unwrap();
        let s = c(0.5, 37.0);
        let t = 37.0;
        let truncated = crate::special::zeta_truncated_sum(s, n as f64).unwrap();
        let rebuilt = truncated + ((1.0 - s) * (n as f64).ln()).exp() / (1.0 - s);
        assert!((p.eval(c(0.0, t)) - rebuilt).norm() < 1e-12);
    }

    #[test]
    fn envelope_examples() {
        assert_eq!(DirichletPolynomial::from_real(&[1.0]).unwrap().mv_envelope(), 1.0);
        assert_eq!(DirichletPolynomial::from_real(&[1.0, 1.0]).unwrap().mv_envelope(), 3.0);
        let env = DirichletPolynomial::inverse_sqrt(100).unwrap().mv_envelope();
        assert!((env - 100.0).abs() < 1e-12);
    }

    #[test]
    fn constant_polynomial() {
        let p = DirichletPolynomial::from_real(&[1.0]).unwrap();
        for t in [0.5, 10.0, 1234.5] {
            let b = p.second_moment_exact(t).unwrap();
            assert_eq!(b.total, t);
            assert_eq!(b.cross, 0.0);
        }
    }

    #[test]
    fn two_term_closed_form_and_quadrature() {
        let p = DirichletPolynomial::from_real(&[1.0, 1.0]).unwrap();
        let t = 10.0;
        let b = p.second_moment_exact(t).unwrap();
        let ln2 = 2f64.ln();
        let expected = 2.0 * t + 2.0 * ((ComplexValue::from_polar(1.0, t * ln2) - 1.0) / (c(0.0, ln2))).re;
        assert!((b.total - expected).abs() < 1e-12);
        let q = quad_second_moment(&p, t);
        assert!((b.total - q).abs() <= 1e-8 * q, "{} vs {q}", b.total);
    }

    #[test]
    fn inverse_sqrt_diagonal_dominance() {
        let p = DirichletPolynomial::inverse_sqrt(100).unwrap();
        let b = p.second_moment_exact(1000.0).unwrap();
        let cal = calibration();
        assert!(b.cross.abs() <= cal.mv_constant() * p.mv_envelope());
        assert!((b.total - (b.main + b.cross)).abs() <= 1e-9 * b.total);
        let harmonic: f64 = (1..=100).map(|n| 1.0 / n as f64).sum();
        assert!((b.main - 1000.0 * harmonic).abs() < 1e-9);
    }

    #[test]
    fn kernel_continuity_across_series_switch() {
        for &theta in &[9.9e-5, -9.9e-5] {
            let series = mean_phase_kernel(theta);
            let (sin, cos) = theta.sin_cos();
            let direct = c(sin / theta, (1.0 - cos) / theta);
            assert!((series - direct).norm() < 1e-12);
        }
        assert_eq!(mean_phase_kernel(0.0), c(1.0, 0.0));
        let k = mean_phase_kernel(2.0 * PI);
        assert!(k.norm() < 1e-15);
    }

    #[test]
    fn afe_accuracy() {
        let slack = calibration().afe_slack;
        for &t in &[1000.0, 1e4, 777.7] {
            let s = c(0.5, t);
            let err = (zeta_afe(s).unwrap() - zeta_reference(s).unwrap()).norm();
            assert!(err <= slack * (t / (2.0 * PI)).powf(-0.25), "t = {t}: {err}");
        }
        let s = c(0.5, 321.0);
        assert!((zeta_afe(s.conj()).unwrap() - zeta_afe(s).unwrap().conj()).norm() < 1e-14);
    }

    #[test]
    fn afe_domain() {
        assert!(zeta_afe(c(0.6, 100.0)).is_err());
        assert!(zeta_afe(c(0.5, 49.0)).is_err());
        assert!(zeta_squared_afe(c(0.5, 10.0)).is_err());
    }

    #[test]
    fn squared_afe_accuracy() {
        let s = c(0.5, 1000.0);
        let z = zeta_reference(s).unwrap();
        let err = (zeta_squared_afe(s).unwrap() - z * z).norm();
        assert!(err <= calibration().afe_squared_abs_t1000, "{err}");
    }

    fn median(mut v: Vec<f64>) -> f64 {
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v[v.len() / 2]
    }

    #[test]
    fn squared_afe_error_shrinks() {
        let scan = |t0: f64| {
            median(
                (0..20)
                    .map(|i| {
                        let s = c(0.5, t0 + 0.37 * i as f64);
                        let z = zeta_reference(s).unwrap();
                        (zeta_squared_afe(s).unwrap() - z * z).norm()
                    })
                    .collect(),
            )
        };
        assert!(scan(1e4) < scan(1e3));
    }

    #[test]
    fn squared_afe_matches_squared_afe_of_zeta() {
        let t = 5000.0;
        let s = c(0.5, t);
        let single = zeta_afe(s).unwrap();
        let z = zeta_reference(s).unwrap();
        let budget_single = calibration().afe_slack * (t / (2.0 * PI)).powf(-0.25);
        let budget_squared = (zeta_squared_afe(s).unwrap() - z * z).norm().max(calibration().afe_squared_abs_t1000);
        let budget = 2.0 * z.norm() * budget_single + budget_single * budget_single + budget_squared;
        assert!((single * single - zeta_squared_afe(s).unwrap()).norm() <= budget);
    }
}
