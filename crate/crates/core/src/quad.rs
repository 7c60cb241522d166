//! Panelized quadrature on a real interval for complex-valued integrands.
//!
//! The interval is cut into panels no wider than `panel_width`; each panel is
//! integrated adaptively to its share of `abs_tol`. Panels run in parallel
//! and are summed in index order, so results do not depend on scheduling.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::special::ComplexValue;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadRule {
    /// Recursive Simpson with Richardson correction.
    AdaptiveSimpson,
    /// 7-point Gauss–Legendre panels; the 15-point Kronrod extension gives
    /// both the returned value and the error estimate.
    GaussLegendrePanels,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub rule: QuadRule,
    pub panel_width: f64,
    pub abs_tol: f64,
    pub max_evals: usize,
}

impl QuadratureConfig {
    pub fn new(rule: QuadRule, panel_width: f64, abs_tol: f64, max_evals: usize) -> Self {
        QuadratureConfig { rule, panel_width, abs_tol, max_evals }
    }

    /// Gauss–Legendre panels of width π/(2 log T) for integrands up to height T.
    pub fn for_height(t_max: f64, abs_tol: f64) -> Self {
        QuadratureConfig {
            rule: QuadRule::GaussLegendrePanels,
            panel_width: std::f64::consts::PI / (2.0 * t_max.max(std::f64::consts::E).ln()),
            abs_tol,
            max_evals: 50_000_000,
        }
    }

    pub fn with_panel_width(self, panel_width: f64) -> Self {
        QuadratureConfig { panel_width, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.panel_width > 0.0) || !self.panel_width.is_finite() {
            return Err(Error::InvalidConfig(format!("panel width {} must be positive", self.panel_width)));
        }
        if !(self.abs_tol > 0.0) {
            return Err(Error::InvalidConfig(format!("abs_tol {} must be positive", self.abs_tol)));
        }
        if self.max_evals == 0 {
            return Err(Error::InvalidConfig("max_evals must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: ComplexValue,
    pub error: f64,
    pub evals: usize,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights at XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_DEPTH: u32 = 40;

struct Budget<'a> {
    used: &'a AtomicUsize,
    max: usize,
}

impl Budget<'_> {
    fn spend(&self, n: usize) -> Result<()> {
        let before = self.used.fetch_add(n, Ordering::Relaxed);
        if before + n > self.max {
            Err(Error::BudgetExceeded { max_evals: self.max })
        } else {
            Ok(())
        }
    }
}

fn gk15<F: Fn(f64) -> ComplexValue>(f: &F, a: f64, b: f64) -> (ComplexValue, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for i in 0..7 {
        let dx = half * XGK[i];
        let pair = f(center - dx) + f(center + dx);
        kronrod += pair * WGK[i];
        if i % 2 == 1 {
            gauss += pair * WG[i / 2];
        }
    }
    let kronrod = kronrod * half;
    let gauss = gauss * half;
    (kronrod, (kronrod - gauss).norm())
}

fn adaptive_gk<F: Fn(f64) -> ComplexValue>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    depth: u32,
    budget: &Budget,
) -> Result<(ComplexValue, f64, usize)> {
    budget.spend(15)?;
    let (value, err) = gk15(f, a, b);
    if err <= tol || depth >= MAX_DEPTH {
        return Ok((value, err, 15));
    }
    let mid = 0.5 * (a + b);
    let (lv, le, ln) = adaptive_gk(f, a, mid, 0.5 * tol, depth + 1, budget)?;
    let (rv, re, rn) = adaptive_gk(f, mid, b, 0.5 * tol, depth + 1, budget)?;
    Ok((lv + rv, le + re, 15 + ln + rn))
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> ComplexValue>(
    f: &F,
    a: f64,
    b: f64,
    fa: ComplexValue,
    fm: ComplexValue,
    fb: ComplexValue,
    whole: ComplexValue,
    tol: f64,
    depth: u32,
    budget: &Budget,
) -> Result<(ComplexValue, f64, usize)> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    budget.spend(2)?;
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.norm() <= 15.0 * tol || depth >= MAX_DEPTH {
        return Ok((left + right + delta / 15.0, delta.norm() / 15.0, 2));
    }
    let (lv, le, ln) = simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, budget)?;
    let (rv, re, rn) = simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, budget)?;
    Ok((lv + rv, le + re, 2 + ln + rn))
}

fn adaptive_simpson<F: Fn(f64) -> ComplexValue>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    budget: &Budget,
) -> Result<(ComplexValue, f64, usize)> {
    budget.spend(3)?;
    let fa = f(a);
    let fm = f(0.5 * (a + b));
    let fb = f(b);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let (v, e, n) = simpson_step(f, a, b, fa, fm, fb, whole, tol, 0, budget)?;
    Ok((v, e, n + 3))
}

/// ∫_a^b f(x) dx.
pub fn integrate<F>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<QuadResult>
where
    F: Fn(f64) -> ComplexValue + Sync,
{
    cfg.validate()?;
    if !(a.is_finite() && b.is_finite()) || b < a {
        return Err(Error::domain(format!("bad interval [{a}, {b}]")));
    }
    if a == b {
        return Ok(QuadResult { value: ComplexValue::new(0.0, 0.0), error: 0.0, evals: 0 });
    }
    let panels = ((b - a) / cfg.panel_width).ceil().max(1.0) as usize;
    let width = (b - a) / panels as f64;
    let tol = cfg.abs_tol / panels as f64;
    let used = AtomicUsize::new(0);
    let budget = Budget { used: &used, max: cfg.max_evals };

    let pieces: Vec<Result<(ComplexValue, f64, usize)>> = (0..panels)
        .into_par_iter()
        .map(|i| {
            let lo = a + width * i as f64;
            let hi = if i + 1 == panels { b } else { a + width * (i + 1) as f64 };
            match cfg.rule {
                QuadRule::GaussLegendrePanels => adaptive_gk(&f, lo, hi, tol, 0, &budget),
                QuadRule::AdaptiveSimpson => adaptive_simpson(&f, lo, hi, tol, &budget),
            }
        })
        .collect();

    let mut value = ComplexValue::new(0.0, 0.0);
    let mut error = 0.0;
    let mut evals = 0;
    for piece in pieces {
        let (v, e, n) = piece?;
        value += v;
        error += e;
        evals += n;
    }
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::NonFinite("quadrature result".into()));
    }
    Ok(QuadResult { value, error, evals })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(rule: QuadRule) -> QuadratureConfig {
        QuadratureConfig::new(rule, 0.5, 1e-12, 10_000_000)
    }

    #[test]
    fn polynomials_and_oscillations() {
        for rule in [QuadRule::GaussLegendrePanels, QuadRule::AdaptiveSimpson] {
            let r = integrate(|x| ComplexValue::new(x * x, 0.0), 0.0, 3.0, &cfg(rule)).unwrap();
            assert!((r.value.re - 9.0).abs() < 1e-11);
            // ∫_0^{10} e^{ix} dx = (e^{10i} - 1)/i
            let r = integrate(|x| ComplexValue::from_polar(1.0, x), 0.0, 10.0, &cfg(rule)).unwrap();
            let exact = (ComplexValue::from_polar(1.0, 10.0) - 1.0) / ComplexValue::i();
            assert!((r.value - exact).norm() < 1e-10, "{rule:?}");
        }
    }

    #[test]
    fn additivity() {
        let c = cfg(QuadRule::GaussLegendrePanels);
        let f = |x: f64| ComplexValue::new((3.0 * x).sin() / (1.0 + x), 0.0);
        let whole = integrate(f, 0.0, 20.0, &c).unwrap().value;
        let parts = integrate(f, 0.0, 7.3, &c).unwrap().value + integrate(f, 7.3, 20.0, &c).unwrap().value;
        assert!((whole - parts).norm() < 2e-12);
    }

    #[test]
    fn budget_and_config_errors() {
        let tight = QuadratureConfig::new(QuadRule::GaussLegendrePanels, 0.1, 1e-12, 100);
        let r = integrate(|x| ComplexValue::new(x, 0.0), 0.0, 10.0, &tight);
        assert_eq!(r, Err(Error::BudgetExceeded { max_evals: 100 }));
        let bad = QuadratureConfig::new(QuadRule::AdaptiveSimpson, 0.0, 1e-9, 100);
        assert!(matches!(integrate(|_| ComplexValue::new(1.0, 0.0), 0.0, 1.0, &bad), Err(Error::InvalidConfig(_))));
        assert!(integrate(|_| ComplexValue::new(1.0, 0.0), 1.0, 0.0, &cfg(QuadRule::AdaptiveSimpson)).is_err());
    }
}
