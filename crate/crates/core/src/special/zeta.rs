use std::cell::RefCell;
use std::sync::OnceLock;

use super::{ensure_finite, ComplexValue};
use crate::error::{Error, Result};

/// B_{2k} / (2k)! for k = 1..12.
const EM_COEFFS: [f64; 12] = [
    8.333_333_333_333_333e-2,
    -1.388_888_888_888_889e-3,
    3.306_878_306_878_307e-5,
    -8.267_195_767_195_767e-7,
    2.087_675_698_786_81e-8,
    -5.284_190_138_687_493e-10,
    1.338_253_653_068_468e-11,
    -3.389_680_296_322_583e-13,
    8.586_062_056_277_845e-15,
    -2.174_868_698_558_062e-16,
    5.509_002_828_360_23e-18,
    -1.395_446_468_581_252e-19,
];

const LN_TABLE_LEN: usize = 1 << 17;

fn ln_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| (0..LN_TABLE_LEN).map(|n| (n.max(1) as f64).ln()).collect())
}

#[inline]
pub(crate) fn ln_n(n: usize) -> f64 {
    if n < LN_TABLE_LEN {
        ln_table()[n]
    } else {
        (n as f64).ln()
    }
}

thread_local! {
    // n^{-σ} for the most recently used σ on this thread.
    static MAGNITUDES: RefCell<(u64, Vec<f64>)> = const { RefCell::new((0, Vec::new())) };
}

/// Σ_{n=1}^{n_max} n^{-s}, summed in increasing n.
pub fn power_sum(s: ComplexValue, n_max: usize) -> ComplexValue {
    weighted_power_sum(s, n_max, |_| 1.0)
}

/// Σ_{n=1}^{n_max} w(n) n^{-s}.
pub(crate) fn weighted_power_sum(s: ComplexValue, n_max: usize, weight: impl Fn(usize) -> f64) -> ComplexValue {
    MAGNITUDES.with(|cell| {
        let mut cache = cell.borrow_mut();
        let key = s.re.to_bits();
        if cache.0 != key || cache.1.is_empty() {
            cache.0 = key;
            cache.1.clear();
            cache.1.push(0.0);
        }
        let have = cache.1.len();
        if have <= n_max {
            cache.1.extend((have..=n_max).map(|n| (-s.re * ln_n(n)).exp()));
        }
        let mags = &cache.1;
        let (mut re, mut im) = (0.0, 0.0);
        for (n, &mag) in mags.iter().enumerate().take(n_max + 1).skip(1) {
            let (sin, cos) = (s.im * ln_n(n)).sin_cos();
            let w = mag * weight(n);
            re += w * cos;
            im -= w * sin;
        }
        ComplexValue::new(re, im)
    })
}

/// Truncation parameters of the Euler–Maclaurin evaluator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaConfig {
    /// Number of Bernoulli correction terms (at most 12).
    pub bernoulli_terms: usize,
    /// The head sum runs to `⌈|t|/2 + extra_terms⌉`.
    pub extra_terms: f64,
    /// Largest |t| accepted.
    pub max_abs_t: f64,
    /// Smallest σ accepted.
    pub min_sigma: f64,
}

impl Default for ZetaConfig {
    fn default() -> Self {
        ZetaConfig {
            bernoulli_terms: 12,
            extra_terms: 30.0,
            max_abs_t: 1e6,
            min_sigma: -5.0,
        }
    }
}

/// ζ(s) by Euler–Maclaurin summation with the default [`ZetaConfig`].
pub fn zeta_reference(s: ComplexValue) -> Result<ComplexValue> {
    zeta_reference_with(s, &ZetaConfig::default())
}

pub fn zeta_reference_with(s: ComplexValue, cfg: &ZetaConfig) -> Result<ComplexValue> {
    ensure_finite(s, "s")?;
    if s.re == 1.0 && s.im == 0.0 {
        return Err(Error::Pole { re: 1.0, im: 0.0 });
    }
    if s.im.abs() > cfg.max_abs_t || s.re < cfg.min_sigma {
        return Err(Error::AccuracyDomain(format!(
            "s = {s} outside |t| <= {}, sigma >= {}",
            cfg.max_abs_t, cfg.min_sigma
        )));
    }
    if cfg.bernoulli_terms > EM_COEFFS.len() {
        return Err(Error::InvalidConfig(format!(
            "at most {} Bernoulli terms are tabulated",
            EM_COEFFS.len()
        )));
    }

    let cutoff = (s.im.abs() / 2.0 + cfg.extra_terms).ceil() as usize;
    let n = cutoff as f64;
    let head = power_sum(s, cutoff - 1);

    let n_pow = (-s * n.ln()).exp(); // N^{-s}
    let mut tail = n_pow * n / (s - 1.0) + 0.5 * n_pow;
    // s(s+1)...(s+2k-2) N^{-s-2k+1}
    let mut rising = s * n_pow / n;
    let inv_n2 = 1.0 / (n * n);
    for (k, &coeff) in EM_COEFFS.iter().enumerate().take(cfg.bernoulli_terms) {
        tail += rising * coeff;
        let j = 2.0 * (k as f64 + 1.0);
        rising *= (s + (j - 1.0)) * (s + j) * inv_n2;
    }
    ensure_finite(head + tail, "zeta")
}

/// Σ_{n≤T} n^{-s} − T^{1−s}/(1−s), returned as is.
///
/// The caller owns the O(T^{-σ}) error budget; this function only checks
/// the region |t| ≤ T, T ≥ 2, σ > 0 in which that budget is meaningful.
pub fn zeta_truncated_sum(s: ComplexValue, t_cut: f64) -> Result<ComplexValue> {
    ensure_finite(s, "s")?;
    if !(t_cut >= 2.0) || !t_cut.is_finite() {
        return Err(Error::domain(format!("truncation T = {t_cut} must be >= 2")));
    }
    if s.im.abs() > t_cut {
        return Err(Error::domain(format!("|t| = {} exceeds T = {t_cut}", s.im.abs())));
    }
    if !(s.re > 0.0) {
        return Err(Error::domain(format!("sigma = {} must be positive", s.re)));
    }
    if s.re == 1.0 && s.im == 0.0 {
        return Err(Error::Pole { re: 1.0, im: 0.0 });
    }
    let head = power_sum(s, t_cut.floor() as usize);
    let one_minus_s = 1.0 - s;
    let correction = (one_minus_s * t_cut.ln()).exp() / one_minus_s;
    ensure_finite(head - correction, "truncated zeta")
}
