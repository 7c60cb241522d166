//! Runnable acceptance checks at desk scale, shared by the acceptance test
//! target and the command line tool.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::ArithTable;
use crate::calibration::calibration;
use crate::conjecture::{
    a_k, conjectured_moment, dirichlet_poly_moment_prediction, estermann_factorize, g_k, local_polynomial,
    pole_order_from_local, remainder_is_one, LocalFactorSeries, DEFAULT_PRIME_CUTOFF,
};
use crate::dirichlet::{zeta_afe, DirichletPolynomial};
use crate::error::Result;
use crate::moments::{
    integrate_moment, integrate_moment_on_line, predicted_main_term, signed_first_moment, Evaluator, MainTermKind,
};
use crate::perron::{
    compare_sum_asymptotic, main_term_from_pole, main_terms, partial_sum_inverse_power, perron_kernel,
    perron_sum_estimate, series_catalog, SumWeight,
};
use crate::quad::{integrate, QuadRule, QuadratureConfig};
use crate::special::{zeta_reference, ComplexValue};

/// One assertion inside a criterion.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub label: String,
    pub passed: bool,
    pub detail: String,
    /// Reported for context; does not decide the criterion.
    pub informational: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub id: u32,
    pub name: &'static str,
    pub checks: Vec<Check>,
    pub runtime: Duration,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().filter(|c| !c.informational).all(|c| c.passed)
    }

    /// `PASS [id] name` or `FAIL [id] name`, then one indented line per check.
    pub fn render(&self) -> String {
        let mut out = format!(
            "{} [{:2}] {} ({:.1} s)\n",
            if self.passed() { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.runtime.as_secs_f64()
        );
        for c in &self.checks {
            let tag = match (c.informational, c.passed) {
                (true, _) => "info",
                (false, true) => "ok",
                (false, false) => "FAIL",
            };
            out.push_str(&format!("       {tag:>4}  {}: {}\n", c.label, c.detail));
        }
        out
    }
}

#[derive(Default)]
struct Checks(Vec<Check>);

impl Checks {
    fn add(&mut self, label: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.0.push(Check { label: label.into(), passed, detail: detail.into(), informational: false });
    }

    fn info(&mut self, label: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.0.push(Check { label: label.into(), passed, detail: detail.into(), informational: true });
    }

    fn within(&mut self, label: impl Into<String>, value: f64, target: f64, tol: f64) {
        let err = (value - target).abs();
        self.add(label, err <= tol, format!("{value:.10} vs {target:.10}, |diff| = {err:.3e} (tol {tol:.0e})"));
    }
}

pub const CRITERIA: &[(u32, &str)] = &[
    (1, "AFE accuracy"),
    (2, "refined second moment"),
    (3, "off-line second moment"),
    (4, "first moment"),
    (5, "Dirichlet-polynomial mean values"),
    (6, "Perron kernel"),
    (7, "Perron sum recovery"),
    (8, "residue main terms"),
    (9, "sums versus asymptotics"),
    (10, "inverse-power tail formula"),
    (11, "conjecture constants"),
    (12, "Estermann factorization"),
    (13, "Dirichlet-polynomial moments versus prediction"),
];

/// Runs criterion `id` with the desk profile and the given seed.
pub fn run_criterion(id: u32, seed: u64) -> Result<Outcome> {
    let name = CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .map(|c| c.1)
        .ok_or_else(|| crate::Error::InvalidConfig(format!("no acceptance criterion {id}")))?;
    let start = Instant::now();
    let mut checks = Checks::default();
    match id {
        1 => afe_accuracy(&mut checks, seed)?,
        2 => refined_second_moment(&mut checks)?,
        3 => off_line_second_moment(&mut checks)?,
        4 => first_moment(&mut checks)?,
        5 => polynomial_mean_values(&mut checks, seed)?,
        6 => kernel(&mut checks)?,
        7 => sum_recovery(&mut checks)?,
        8 => residues(&mut checks)?,
        9 => sums_vs_asymptotics(&mut checks)?,
        10 => inverse_power(&mut checks)?,
        11 => constants(&mut checks)?,
        12 => estermann(&mut checks, seed)?,
        _ => polynomial_moments(&mut checks)?,
    }
    Ok(Outcome { id, name, checks: checks.0, runtime: start.elapsed() })
}

pub const DEFAULT_SEED: u64 = 20_240_601;

fn runtime_check(c: &mut Checks, start: Instant, limit_s: f64) {
    let secs = start.elapsed().as_secs_f64();
    c.add("runtime", secs < limit_s, format!("{secs:.1} s (limit {limit_s} s)"));
}

fn afe_accuracy(c: &mut Checks, seed: u64) -> Result<()> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let slack = calibration().afe_slack;
    let (mut worst, mut worst_t, mut failures) = (0.0f64, 0.0, 0);
    for _ in 0..100 {
        let t: f64 = rng.gen_range(100.0..1e5);
        let s = ComplexValue::new(0.5, t);
        let err = (zeta_afe(s)? - zeta_reference(s)?).norm();
        let bound = slack * (t / (2.0 * PI)).powf(-0.25);
        if err > bound {
            failures += 1;
        }
        if err / bound > worst {
            worst = err / bound;
            worst_t = t;
        }
    }
    c.add(
        "100 random heights in [1e2, 1e5]",
        failures == 0,
        format!("{failures} above {slack}(t/2pi)^(-1/4); worst error/bound {worst:.3} at t = {worst_t:.1}"),
    );
    runtime_check(c, start, 10.0);
    Ok(())
}

fn second_moment_ratios() -> Result<Vec<(f64, f64)>> {
    let cfg = QuadratureConfig::for_height(4000.0, 1e-4);
    let mut acc = 0.0;
    let mut lo = 0.0;
    let mut out = Vec::new();
    for t in [500.0, 1000.0, 2000.0, 4000.0] {
        acc += integrate_moment(lo, t, 2, Evaluator::Reference, &cfg)?.value.re;
        out.push((t, acc));
        lo = t;
    }
    Ok(out)
}

fn steps_nonincreasing(devs: &[f64]) -> (usize, usize) {
    let steps = devs.len().saturating_sub(1);
    (devs.windows(2).filter(|w| w[1] <= w[0]).count(), steps)
}

fn refined_second_moment(c: &mut Checks) -> Result<()> {
    let start = Instant::now();
    let values = second_moment_ratios()?;
    let mut devs = Vec::new();
    let mut scaled = Vec::new();
    for &(t, m) in &values {
        let r = m / predicted_main_term(MainTermKind::RefinedSecond, t, 0.5)?;
        let rs = m / predicted_main_term(MainTermKind::RefinedSecondScaled, t, 0.5)?;
        devs.push((r - 1.0).abs());
        scaled.push(rs);
        let label = format!("T = {t}: ratio to T log T + (2g-1)T");
        if t == 2000.0 {
            c.add(label, (0.95..=1.05).contains(&r), format!("{r:.5} (band [0.95, 1.05]); integral {m:.3}"));
        } else {
            c.info(label, (0.95..=1.05).contains(&r), format!("{r:.5}; integral {m:.3}"));
        }
    }
    let (good, steps) = steps_nonincreasing(&devs);
    c.add("|ratio - 1| trend", good >= steps.min(3), format!("nonincreasing in {good} of {steps} steps"));
    for (&(t, _), rs) in values.iter().zip(&scaled) {
        c.info(format!("T = {t}: ratio to T log(T/2pi) + (2g-1)T"), (rs - 1.0).abs() <= 0.05, format!("{rs:.5}"));
    }
    runtime_check(c, start, 120.0);
    Ok(())
}

fn off_line_second_moment(c: &mut Checks) -> Result<()> {
    let sigma = 0.75;
    let cfg = QuadratureConfig::for_height(2000.0, 1e-4);
    let mut acc = 0.0;
    let mut lo = 0.0;
    let mut bounded = true;
    let mut detail = String::new();
    for t in [500.0, 1000.0, 2000.0] {
        acc += integrate_moment_on_line(sigma, lo, t, 2, &cfg)?.value.re;
        lo = t;
        let predicted = predicted_main_term(MainTermKind::OffLineSecond, t, sigma)? / t;
        let r = acc / t / predicted;
        bounded &= (0.8..=1.2).contains(&r);
        detail.push_str(&format!("T = {t}: {:.4}/{predicted:.4} = {r:.4}; ", acc / t));
        if t == 2000.0 {
            c.add(
                "sigma = 0.75, T = 2000: M/T against zeta(1.5) - T^(-1/2)/0.5",
                (r - 1.0).abs() <= 0.2,
                format!("{:.5} vs {predicted:.5}, ratio {r:.4}", acc / t),
            );
        }
    }
    c.add("sigma = 0.75: M/T bounded near the prediction", bounded, detail.trim_end_matches("; ").to_string());

    let on_line = second_moment_ratios()?;
    let per_t: Vec<f64> = on_line.iter().map(|&(t, m)| m / t).collect();
    let grows = per_t.windows(2).all(|w| w[1] > w[0]);
    let per_log: Vec<f64> = on_line.iter().map(|&(t, m)| m / (t * t.ln())).collect();
    let like_log = per_log.iter().all(|r| (0.5..=1.5).contains(r));
    c.add(
        "sigma = 0.5: M/T grows like log T",
        grows && like_log,
        format!(
            "M/T = {}; M/(T log T) = {}",
            per_t.iter().map(|v| format!("{v:.3}")).collect::<Vec<_>>().join(", "),
            per_log.iter().map(|v| format!("{v:.3}")).collect::<Vec<_>>().join(", ")
        ),
    );
    Ok(())
}

fn first_moment(c: &mut Checks) -> Result<()> {
    let mut devs = Vec::new();
    for t in [1000.0, 10_000.0] {
        let cfg = QuadratureConfig::for_height(t, 1e-4).with_panel_width(PI / f64::ln(t));
        let v = signed_first_moment(t, &cfg)?.value;
        let dev = (v - t).norm() / t;
        devs.push(dev);
        if t == 1000.0 {
            c.add("T = 1000: |I - T|/T", dev <= 0.25, format!("I = {:.4}{:+.4}i, deviation {dev:.5}", v.re, v.im));
        } else {
            c.info(format!("T = {t}"), true, format!("I = {:.4}{:+.4}i, deviation {dev:.5}", v.re, v.im));
        }
    }
    c.add("deviation smaller at T = 1e4", devs[1] < devs[0], format!("{:.5} -> {:.5}", devs[0], devs[1]));
    Ok(())
}

fn random_polynomial(rng: &mut ChaCha8Rng, n: usize) -> Result<DirichletPolynomial> {
    let coeffs = (0..n).map(|_| ComplexValue::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    DirichletPolynomial::new(coeffs)
}

/// ∫_0^T |P(it)|² dt by quadrature, resolving every frequency log(N).
pub fn second_moment_by_quadrature(p: &DirichletPolynomial, t: f64) -> Result<f64> {
    let scale: f64 = p.coeffs().iter().map(|a| a.norm()).sum::<f64>().powi(2) * t;
    let width = (PI / (2.0 * (p.len() as f64).ln().max(1.0))).min(t);
    let cfg = QuadratureConfig::new(QuadRule::GaussLegendrePanels, width, 1e-12 * scale, 50_000_000);
    let r = integrate(|x| ComplexValue::new(p.eval(ComplexValue::new(0.0, x)).norm_sqr(), 0.0), 0.0, t, &cfg)?;
    Ok(r.value.re)
}

fn polynomial_mean_values(c: &mut Checks, seed: u64) -> Result<()> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let n = rng.gen_range(1..=20);
        let t = rng.gen_range(1.0..=100.0);
        let p = random_polynomial(&mut rng, n)?;
        let exact = p.second_moment_exact(t)?.total;
        let quad = second_moment_by_quadrature(&p, t)?;
        worst = worst.max((exact - quad).abs() / quad.abs());
    }
    c.add("50 small cases: closed form vs quadrature", worst <= 1e-8, format!("worst relative gap {worst:.2e}"));
    let mut worst_env = 0.0f64;
    for _ in 0..500 {
        let n = rng.gen_range(1..=500);
        let t = rng.gen_range(1.0..1e4);
        let p = random_polynomial(&mut rng, n)?;
        let b = p.second_moment_exact(t)?;
        worst_env = worst_env.max(b.cross.abs() / (calibration().mv_constant() * p.mv_envelope()));
    }
    c.add(
        "500 random polynomials: |cross| <= 4 pi sum n|a_n|^2",
        worst_env <= 1.0,
        format!("largest |cross|/envelope {worst_env:.4}"),
    );
    runtime_check(c, start, 30.0);
    Ok(())
}

fn kernel(c: &mut Checks) -> Result<()> {
    for a in [0.5f64, 2.0, 3.0] {
        for n in [2u32, 3] {
            let limit = if a > 1.0 { a.ln().powi(n as i32 - 1) / (1..n).map(f64::from).product::<f64>() } else { 0.0 };
            let v = perron_kernel(a, 1e4, n)?;
            c.within(format!("A = {a}, N = {n}"), v.re, limit, 1e-3);
        }
    }
    Ok(())
}

fn sum_recovery(c: &mut Checks) -> Result<()> {
    let zeta = series_catalog("zeta")?;
    let v = perron_sum_estimate(&zeta, 10.5, 1.5, 5000.0)?;
    c.within("a_n = 1, X = 10.5", v.re, 10.0, 0.05);
    let d = ArithTable::sieve_dk(2, 20)?;
    let target: i64 = (1..=20).map(|n| d.get(n)).sum();
    let v = perron_sum_estimate(&series_catalog("dk_pow(2)")?, 20.5, 1.5, 5000.0)?;
    c.within("a_n = d(n), X = 20.5", v.re, target as f64, 0.5);
    Ok(())
}

fn residues(c: &mut Checks) -> Result<()> {
    let f = series_catalog("d2_over_n")?;
    let p = main_term_from_pole(&f, f.poles[0])?;
    c.within("sum d(n)^2/n: coefficient of log^4 X", p.leading(), 1.0 / (4.0 * PI * PI), 1e-6);
    let mut fact = 1.0;
    for k in 1..=4u32 {
        let prev = fact;
        fact *= k as f64;
        let f = series_catalog(&format!("dk_pow({k})"))?;
        let p = main_term_from_pole(&f, f.poles[0])?;
        c.within(format!("sum d_{k}(n): leading coefficient against 1/{k}!"), p.leading(), 1.0 / fact, 1e-8);
        let ok = (p.leading() - 1.0 / prev).abs() <= 1e-8;
        c.info(
            format!("sum d_{k}(n): coefficient of X log^{} X against 1/{}!", k - 1, k - 1),
            ok,
            format!("{:.10} vs {:.10}", p.leading(), 1.0 / prev),
        );
        let g = series_catalog(&format!("dk_over_n({k})"))?;
        let q = main_term_from_pole(&g, g.poles[0])?;
        let ok = (q.leading() - 1.0 / fact).abs() <= 1e-8;
        c.info(
            format!("sum d_{k}(n)/n: coefficient of log^{k} X against 1/{k}!"),
            ok,
            format!("{:.10} vs {:.10}", q.leading(), 1.0 / fact),
        );
    }
    let f = series_catalog("phi")?;
    let p = main_term_from_pole(&f, f.poles[0])?;
    c.within("sum phi(n): coefficient of X^2", p.leading(), 3.0 / (PI * PI), 1e-8);
    Ok(())
}

fn sums_vs_asymptotics(c: &mut Checks) -> Result<()> {
    let start = Instant::now();
    let x = 1e6;
    let n = x as usize;
    let d = ArithTable::sieve_dk(2, n)?;
    let d2 = d.squared()?;
    let row = compare_sum_asymptotic(&d2, SumWeight::InverseN, &main_terms(&series_catalog("d2_over_n")?)?, &[x])?[0];
    c.add(
        "sum d(n)^2/n, X = 1e6",
        row.residual.abs() <= 0.01,
        format!("S = {:.6}, P = {:.6}, residual {:.3e}", row.sum, row.predicted, row.residual),
    );
    let phi = ArithTable::sieve_phi(n)?;
    let leading = main_term_from_pole(&series_catalog("phi")?, series_catalog("phi")?.poles[0])?;
    let row = compare_sum_asymptotic(&phi, SumWeight::One, &[leading], &[x])?[0];
    c.add(
        "sum phi(n) vs (3/pi^2) X^2, X = 1e6",
        row.residual.abs() <= 1e-3,
        format!("S = {:.0}, P = {:.0}, residual {:.3e}", row.sum, row.predicted, row.residual),
    );
    let d3 = ArithTable::sieve_dk(3, n)?;
    let row = compare_sum_asymptotic(&d3, SumWeight::One, &main_terms(&series_catalog("dk_pow(3)")?)?, &[x])?[0];
    c.add(
        "sum d_3(n), X = 1e6",
        row.residual.abs() <= 0.01,
        format!("S = {:.0}, P = {:.1}, residual {:.3e}", row.sum, row.predicted, row.residual),
    );
    runtime_check(c, start, 60.0);
    Ok(())
}

fn inverse_power(c: &mut Checks) -> Result<()> {
    let (sum, predicted) = partial_sum_inverse_power(1e4, 2.0)?;
    c.within("A = 2, T = 1e4", sum, predicted, 1e-7);
    Ok(())
}

fn constants(c: &mut Checks) -> Result<()> {
    let mut all_integral = true;
    for k in 0..=12 {
        all_integral &= g_k(k)?.is_integer();
    }
    c.add("g_k integral for k <= 12", all_integral, "checked by exact reduction");
    let first: Vec<String> = (1..=4).map(|k| g_k(k).map(|g| g.numer().to_string())).collect::<Result<_>>()?;
    c.add("g_1..g_4", first == ["1", "2", "42", "24024"], first.join(", "));
    c.add(
        "a_1 local factor",
        local_polynomial(1) == vec![BigInt::from(1)] && a_k(1, DEFAULT_PRIME_CUTOFF, None)?.value == 1.0,
        "every local factor is exactly 1",
    );
    let a2 = a_k(2, DEFAULT_PRIME_CUTOFF, None)?;
    c.within("a_2 at prime cutoff 1e6", a2.value, 6.0 / (PI * PI), 1e-5);
    let ratio = g_k(2)?.0 / BigRational::from_integer(BigInt::from(24));
    let exact = ratio == BigRational::new(BigInt::from(1), BigInt::from(12));
    let t = 2000.0;
    let rel = conjectured_moment(2, t)? / (t * t.ln().powi(4) / (2.0 * PI * PI)) - 1.0;
    c.add(
        "conjectured_moment(2, T) = T log^4 T/(2 pi^2)",
        exact && rel.abs() <= 1e-6,
        format!("g_2/4! = {ratio} exactly; relative gap at T = 2000 {rel:.2e}"),
    );
    Ok(())
}

fn estermann(c: &mut Checks, seed: u64) -> Result<()> {
    let z = estermann_factorize(&LocalFactorSeries::dk_squared(2, 8));
    let expect: Vec<BigInt> = [4, -1, 0, 0, 0, 0, 0].iter().map(|&v| BigInt::from(v)).collect();
    c.add(
        "d(n)^2 series, J = 8",
        z.exponents == expect && remainder_is_one(&z),
        format!("C = {:?}", z.exponents.iter().map(|v| v.to_string()).collect::<Vec<_>>()),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xe57e);
    let mut failures = 0;
    for _ in 0..100 {
        let mut coeffs = vec![1i64];
        coeffs.extend((1..10).map(|_| rng.gen_range(-50..=50)));
        let f = LocalFactorSeries::from_i64(&coeffs)?;
        if estermann_factorize(&f).reconstruct() != f.coeffs() {
            failures += 1;
        }
    }
    c.add("100 random round trips, J = 10", failures == 0, format!("{failures} mismatches"));
    let mut consistent = true;
    for k in 1..=6u32 {
        let f = LocalFactorSeries::dk_squared(k, 6);
        let order = pole_order_from_local(&f)?;
        consistent &= order == BigInt::from(k * k) && estermann_factorize(&f).exponents[0] == order;
    }
    c.add("pole order of d_k^2 is k^2, matching C(1)", consistent, "k = 1..6");
    Ok(())
}

fn polynomial_moments(c: &mut Checks) -> Result<()> {
    let start = Instant::now();
    let t = 1000.0;
    let total = DirichletPolynomial::inverse_sqrt(1000)?.second_moment_exact(t)?.total;
    let r = total / (t * t.ln());
    c.add("k = 1, N = T = 1000: total/(T log T)", (0.9..=1.1).contains(&r), format!("{r:.5}"));
    let d = ArithTable::sieve_dk(2, 8000)?;
    let mut ratios = Vec::new();
    for t in [2000.0, 8000.0] {
        let p = DirichletPolynomial::from_table_over_sqrt(&d, t as usize)?;
        let total = p.second_moment_exact(t)?.total;
        ratios.push(total / dirichlet_poly_moment_prediction(2, t)?);
    }
    c.add("k = 2, T = 2000: ratio to (a_2/24) T log^4 T", (0.5..=1.6).contains(&ratios[0]), format!("{:.5}", ratios[0]));
    c.add(
        "k = 2: closer to 1 at T = 8000",
        (ratios[1] - 1.0).abs() < (ratios[0] - 1.0).abs(),
        format!("{:.5} -> {:.5}", ratios[0], ratios[1]),
    );
    runtime_check(c, start, 300.0);
    Ok(())
}
