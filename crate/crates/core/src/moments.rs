//! Moment integrals of ζ along vertical segments and the main terms they are
//! compared against.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use crate::dirichlet::{zeta_afe, zeta_squared_afe};
use crate::error::{Error, Result};
use crate::quad::{integrate, QuadResult, QuadratureConfig};
use crate::special::{euler_gamma, zeta_reference, ComplexValue};

/// How ζ(1/2+it) is evaluated inside a moment integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Evaluator {
    /// Euler–Maclaurin reference.
    Reference,
    /// Two-sided approximate functional equation for ζ.
    Afe,
    /// Approximate functional equation for ζ², raised to the power k.
    AfeSquared,
}

impl Evaluator {
    pub fn name(self) -> &'static str {
        match self {
            Evaluator::Reference => "reference",
            Evaluator::Afe => "afe",
            Evaluator::AfeSquared => "afe-squared",
        }
    }
}

impl std::str::FromStr for Evaluator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "reference" => Ok(Evaluator::Reference),
            "afe" => Ok(Evaluator::Afe),
            "afe-squared" => Ok(Evaluator::AfeSquared),
            other => Err(Error::InvalidConfig(format!("unknown evaluator {other:?}"))),
        }
    }
}

fn check_segment(t0: f64, t1: f64, twok: u32, cfg: &QuadratureConfig) -> Result<()> {
    cfg.validate()?;
    if !(t0 >= 0.0 && t1 > t0 && t1.is_finite()) {
        return Err(Error::domain(format!("need 0 <= T0 < T1, got [{t0}, {t1}]")));
    }
    if twok == 0 || !twok.is_multiple_of(2) {
        return Err(Error::domain(format!("moment exponent {twok} must be a positive even integer")));
    }
    let limit = PI / t1.max(std::f64::consts::E).ln();
    if cfg.panel_width > limit {
        return Err(Error::InvalidConfig(format!(
            "panel width {} exceeds pi/log(T1) = {limit:.4}",
            cfg.panel_width
        )));
    }
    Ok(())
}

fn nan_on_error(v: Result<ComplexValue>) -> ComplexValue {
    v.unwrap_or(ComplexValue::new(f64::NAN, f64::NAN))
}

/// ∫_{T0}^{T1} |ζ(1/2+it)|^{2k} dt.
pub fn integrate_moment(
    t0: f64,
    t1: f64,
    twok: u32,
    evaluator: Evaluator,
    cfg: &QuadratureConfig,
) -> Result<QuadResult> {
    check_segment(t0, t1, twok, cfg)?;
    if evaluator != Evaluator::Reference && t0 < 50.0 {
        return Err(Error::domain(format!("{} evaluator needs T0 >= 50", evaluator.name())));
    }
    let k = (twok / 2) as i32;
    let integrand = |t: f64| {
        let s = ComplexValue::new(0.5, t);
        let v = match evaluator {
            Evaluator::Reference => nan_on_error(zeta_reference(s)).norm_sqr().powi(k),
            Evaluator::Afe => nan_on_error(zeta_afe(s)).norm_sqr().powi(k),
            Evaluator::AfeSquared => nan_on_error(zeta_squared_afe(s)).norm().powi(k),
        };
        ComplexValue::new(v, 0.0)
    };
    integrate(integrand, t0, t1, cfg)
}

/// ∫_{T0}^{T1} |ζ(σ+it)|^{2k} dt with the reference evaluator.
pub fn integrate_moment_on_line(
    sigma: f64,
    t0: f64,
    t1: f64,
    twok: u32,
    cfg: &QuadratureConfig,
) -> Result<QuadResult> {
    check_segment(t0, t1, twok, cfg)?;
    if sigma == 1.0 && t0 == 0.0 {
        return Err(Error::Pole { re: 1.0, im: 0.0 });
    }
    let k = (twok / 2) as i32;
    let integrand = |t: f64| {
        let v = nan_on_error(zeta_reference(ComplexValue::new(sigma, t)));
        ComplexValue::new(v.norm_sqr().powi(k), 0.0)
    };
    integrate(integrand, t0, t1, cfg)
}

/// ∫_0^T ζ(1/2+it) dt, complex valued.
pub fn signed_first_moment(t: f64, cfg: &QuadratureConfig) -> Result<QuadResult> {
    if !(t >= 10.0) {
        return Err(Error::domain(format!("first moment needs T >= 10, got {t}")));
    }
    check_segment(0.0, t, 2, cfg)?;
    integrate(|x| nan_on_error(zeta_reference(ComplexValue::new(0.5, x))), 0.0, t, cfg)
}

/// Main-term formulas for the moment integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MainTermKind {
    /// T log T + (2γ − 1)T
    RefinedSecond,
    /// T log(T/2π) + (2γ − 1)T
    RefinedSecondScaled,
    /// T log T
    Second,
    /// T (ζ(2σ) − T^{1−2σ}/(2σ − 1)), for 1/2 < σ < 1
    OffLineSecond,
    /// T log⁴T / (2π²)
    Fourth,
    /// T
    First,
}

impl MainTermKind {
    pub fn name(self) -> &'static str {
        match self {
            MainTermKind::RefinedSecond => "second-refined",
            MainTermKind::RefinedSecondScaled => "second-refined-scaled",
            MainTermKind::Second => "second",
            MainTermKind::OffLineSecond => "second-off-line",
            MainTermKind::Fourth => "fourth",
            MainTermKind::First => "first",
        }
    }
}

impl std::str::FromStr for MainTermKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            MainTermKind::RefinedSecond,
            MainTermKind::RefinedSecondScaled,
            MainTermKind::Second,
            MainTermKind::OffLineSecond,
            MainTermKind::Fourth,
            MainTermKind::First,
        ]
        .into_iter()
        .find(|k| k.name() == s)
        .ok_or_else(|| Error::InvalidConfig(format!("unknown main-term kind {s:?}")))
    }
}

pub fn predicted_main_term(kind: MainTermKind, t: f64, sigma: f64) -> Result<f64> {
    if !(t >= 10.0) || !t.is_finite() {
        return Err(Error::domain(format!("main terms need T >= 10, got {t}")));
    }
    let log_t = t.ln();
    let gamma = euler_gamma();
    Ok(match kind {
        MainTermKind::RefinedSecond => t * log_t + (2.0 * gamma - 1.0) * t,
        MainTermKind::RefinedSecondScaled => t * (t / (2.0 * PI)).ln() + (2.0 * gamma - 1.0) * t,
        MainTermKind::Second => t * log_t,
        MainTermKind::OffLineSecond => {
            if !(sigma > 0.5 && sigma < 1.0) {
                return Err(Error::domain(format!("off-line main term needs 1/2 < sigma < 1, got {sigma}")));
            }
            let zeta_2s = zeta_reference(ComplexValue::new(2.0 * sigma, 0.0))?.re;
            t * (zeta_2s - t.powf(1.0 - 2.0 * sigma) / (2.0 * sigma - 1.0))
        }
        MainTermKind::Fourth => t * log_t.powi(4) / (2.0 * PI * PI),
        MainTermKind::First => t,
    })
}

/// A computed moment, real or (for the signed first moment) complex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Computed {
    Real(f64),
    Complex(ComplexValue),
}

impl Computed {
    pub fn real_part(self) -> f64 {
        match self {
            Computed::Real(v) => v,
            Computed::Complex(z) => z.re,
        }
    }
}

/// One computed-versus-predicted comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentReport {
    pub kind: MainTermKind,
    /// 2k, or 1 for the signed first moment.
    pub twok: u32,
    pub sigma: f64,
    pub t: f64,
    pub computed: Computed,
    pub predicted: f64,
    /// Re(computed)/predicted.
    pub ratio: f64,
    pub evals: usize,
    pub runtime: Duration,
}

impl MomentReport {
    #[allow(clippy::too_many_arguments)]
    pub fn new(kind: MainTermKind, twok: u32, sigma: f64, t: f64, computed: Computed, predicted: f64, evals: usize, runtime: Duration) -> Self {
        let ratio = if predicted != 0.0 { computed.real_part() / predicted } else { f64::NAN };
        MomentReport { kind, twok, sigma, t, computed, predicted, ratio, evals, runtime }
    }
}

/// A named moment comparison run by the command line tool.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentPreset {
    pub name: &'static str,
    pub kind: MainTermKind,
    pub sigma: f64,
    pub t: f64,
    pub twok: u32,
    pub evaluator: Evaluator,
}

pub const PRESETS: &[MomentPreset] = &[
    MomentPreset { name: "first", kind: MainTermKind::First, sigma: 0.5, t: 1000.0, twok: 1, evaluator: Evaluator::Reference },
    MomentPreset { name: "second", kind: MainTermKind::RefinedSecond, sigma: 0.5, t: 2000.0, twok: 2, evaluator: Evaluator::Reference },
    MomentPreset { name: "second-afe", kind: MainTermKind::RefinedSecond, sigma: 0.5, t: 2000.0, twok: 2, evaluator: Evaluator::Afe },
    MomentPreset { name: "second-off-line", kind: MainTermKind::OffLineSecond, sigma: 0.75, t: 2000.0, twok: 2, evaluator: Evaluator::Reference },
    MomentPreset { name: "fourth", kind: MainTermKind::Fourth, sigma: 0.5, t: 2000.0, twok: 4, evaluator: Evaluator::Reference },
    MomentPreset { name: "fourth-afe", kind: MainTermKind::Fourth, sigma: 0.5, t: 2000.0, twok: 4, evaluator: Evaluator::AfeSquared },
];

pub fn preset(name: &str) -> Result<MomentPreset> {
    PRESETS
        .iter()
        .find(|p| p.name == name)
        .copied()
        .ok_or_else(|| Error::InvalidConfig(format!("unknown moment preset {name:?}")))
}

/// Integrates a preset over [0, T] at height `t` and compares with its main term.
///
/// AFE evaluators cover [50, T]; the piece [0, 50] is always taken from the
/// reference evaluator.
pub fn run_moment(p: &MomentPreset, t: f64, cfg: &QuadratureConfig) -> Result<MomentReport> {
    let start = Instant::now();
    let predicted = predicted_main_term(p.kind, t, p.sigma)?;
    let (computed, evals) = if p.twok == 1 {
        let r = signed_first_moment(t, cfg)?;
        (Computed::Complex(r.value), r.evals)
    } else if p.sigma != 0.5 {
        let r = integrate_moment_on_line(p.sigma, 0.0, t, p.twok, cfg)?;
        (Computed::Real(r.value.re), r.evals)
    } else if p.evaluator == Evaluator::Reference {
        let r = integrate_moment(0.0, t, p.twok, p.evaluator, cfg)?;
        (Computed::Real(r.value.re), r.evals)
    } else {
        let head = integrate_moment(0.0, 50.0, p.twok, Evaluator::Reference, cfg)?;
        let body = integrate_moment(50.0, t, p.twok, p.evaluator, cfg)?;
        (Computed::Real(head.value.re + body.value.re), head.evals + body.evals)
    };
    Ok(MomentReport::new(p.kind, p.twok, p.sigma, t, computed, predicted, evals, start.elapsed()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(t: f64) -> QuadratureConfig {
        QuadratureConfig::for_height(t, 1e-6)
    }

    #[test]
    fn second_moment_panel_refinement() {
        let c = cfg(200.0);
        let coarse = integrate_moment(0.0, 200.0, 2, Evaluator::Reference, &c).unwrap().value.re;
        let fine = integrate_moment(0.0, 200.0, 2, Evaluator::Reference, &c.with_panel_width(c.panel_width / 2.0))
            .unwrap()
            .value
            .re;
        assert!((coarse - fine).abs() <= 1e-4 * fine);
    }

    #[test]
    fn afe_against_reference() {
        let c = cfg(2000.0);
        let reference = integrate_moment(50.0, 2000.0, 2, Evaluator::Reference, &c).unwrap().value.re;
        let afe = integrate_moment(50.0, 2000.0, 2, Evaluator::Afe, &c).unwrap().value.re;
        assert!((afe - reference).abs() <= 0.01 * reference, "{afe} vs {reference}");
    }

    #[test]
    fn additivity() {
        let c = cfg(1000.0);
        let whole = integrate_moment(0.0, 1000.0, 2, Evaluator::Reference, &c).unwrap().value.re;
        let a = integrate_moment(0.0, 500.0, 2, Evaluator::Reference, &c).unwrap().value.re;
        let b = integrate_moment(500.0, 1000.0, 2, Evaluator::Reference, &c).unwrap().value.re;
        assert!((whole - a - b).abs() <= 2.0 * c.abs_tol);
    }

    #[test]
    fn preconditions() {
        let c = cfg(1000.0);
        assert!(integrate_moment(10.0, 100.0, 2, Evaluator::Afe, &c).is_err());
        assert!(integrate_moment(0.0, 100.0, 3, Evaluator::Reference, &c).is_err());
        assert!(integrate_moment(100.0, 10.0, 2, Evaluator::Reference, &c).is_err());
        let wide = c.with_panel_width(1.0);
        assert!(matches!(integrate_moment(0.0, 1000.0, 2, Evaluator::Reference, &wide), Err(Error::InvalidConfig(_))));
        let starved = QuadratureConfig { max_evals: 1000, ..c };
        assert!(matches!(
            integrate_moment(0.0, 1000.0, 2, Evaluator::Reference, &starved),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn main_term_plug_ins() {
        let t = 10f64.exp();
        let v = predicted_main_term(MainTermKind::Second, t, 0.5).unwrap();
        assert!((v - 10.0 * t).abs() <= 1e-12 * v);
        let v = predicted_main_term(MainTermKind::Fourth, 2000.0, 0.5).unwrap();
        assert!((v - 2000.0 * 2000f64.ln().powi(4) / (2.0 * PI * PI)).abs() < 1e-9);
        let v = predicted_main_term(MainTermKind::RefinedSecond, 1000.0, 0.5).unwrap();
        let gamma = 0.577_215_664_901_532_9;
        assert!((v - (1000.0 * 1000f64.ln() + (2.0 * gamma - 1.0) * 1000.0)).abs() < 1e-8);
        assert!(predicted_main_term(MainTermKind::OffLineSecond, 1000.0, 0.5).is_err());
        assert!(predicted_main_term(MainTermKind::OffLineSecond, 1000.0, 1.0).is_err());
        assert!(predicted_main_term(MainTermKind::Second, 5.0, 0.5).is_err());
    }

    #[test]
    fn off_line_limit_near_critical_line() {
        // σ = 1/2 + 1/log T sits on the transition scale; the off-line main
        // term there stays within a factor 2 of T log T.
        for &t in &[500.0, 1000.0] {
            let sigma = 0.5 + 1.0 / f64::ln(t);
            let v = predicted_main_term(MainTermKind::OffLineSecond, t, sigma).unwrap();
            let r = v / (t * t.ln());
            assert!((0.5..=2.0).contains(&r), "T = {t}: ratio {r}");
        }
    }

    #[test]
    fn first_moment_is_about_t() {
        let c = cfg(1000.0).with_panel_width(PI / 1000f64.ln());
        let v = signed_first_moment(1000.0, &c).unwrap().value;
        assert!((v - 1000.0).norm() / 1000.0 <= 0.25, "{v}");
        assert!(v.im.abs() > 0.0);
        assert!(signed_first_moment(5.0, &c).is_err());
    }

    #[test]
    fn presets_resolve() {
        for p in PRESETS {
            assert_eq!(preset(p.name).unwrap(), *p);
        }
        assert!(preset("nope").is_err());
        assert_eq!("fourth".parse::<MainTermKind>().unwrap(), MainTermKind::Fourth);
        assert_eq!("afe".parse::<Evaluator>().unwrap(), Evaluator::Afe);
    }
}
