use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use super::{complex_log_gamma, ensure_finite, ComplexValue};
use crate::error::{Error, Result};

const MAX_ABS_T: f64 = 1e6;

/// log sin(z), on some branch, without overflowing for large |Im z|.
fn log_sin(z: ComplexValue) -> ComplexValue {
    if z.im.abs() < 1.0 {
        return z.sin().ln();
    }
    if z.im < 0.0 {
        return log_sin(z.conj()).conj();
    }
    // sin z = e^{-iz} (1 - e^{2iz}) i/2, with |e^{2iz}| < e^{-2}
    let i = ComplexValue::i();
    let small = (2.0 * i * z).exp();
    -i * z + (0.5 * i).ln() + (1.0 - small).ln()
}

/// log χ(s) for χ(s) = 2^s π^{s−1} sin(πs/2) Γ(1−s), on an unspecified branch.
pub fn log_chi(s: ComplexValue) -> Result<ComplexValue> {
    ensure_finite(s, "s")?;
    if s.im.abs() > MAX_ABS_T {
        return Err(Error::AccuracyDomain(format!("|t| = {} exceeds {MAX_ABS_T}", s.im.abs())));
    }
    let log_gamma = complex_log_gamma(1.0 - s)?;
    let value = s * 2f64.ln() + (s - 1.0) * PI.ln() + log_sin(s * FRAC_PI_2) + log_gamma;
    ensure_finite(value, "log chi")
}

/// The factor in ζ(s) = χ(s) ζ(1−s), evaluated exactly through log Γ.
pub fn chi_exact(s: ComplexValue) -> Result<ComplexValue> {
    ensure_finite(log_chi(s)?.exp(), "chi")
}

/// The large-t form (t/2π)^{1/2−s} e^{i(t + π/4)}, valid for t ≥ 5.
pub fn chi_asymptotic(s: ComplexValue) -> Result<ComplexValue> {
    ensure_finite(s, "s")?;
    let t = s.im;
    if t < 5.0 {
        return Err(Error::domain(format!("asymptotic chi needs t >= 5, got {t}")));
    }
    let log_scale = (t / (2.0 * PI)).ln();
    let value = ((0.5 - s) * log_scale).exp() * ComplexValue::from_polar(1.0, t + FRAC_PI_4);
    ensure_finite(value, "asymptotic chi")
}
