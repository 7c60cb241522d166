//! Perron's formula: the truncated kernel, line-integral sum estimates,
//! residue main terms and a catalog of Dirichlet series built from ζ.

use std::f64::consts::PI;

use crate::arith::ArithTable;
use crate::error::{Error, Result};
use crate::quad::{integrate, QuadRule, QuadratureConfig};
use crate::special::{laurent_at_pole, zeta_reference, ComplexValue};

/// One factor ζ(scale·s + shift)^power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaFactor {
    pub scale: f64,
    pub shift: f64,
    pub power: i32,
}

impl ZetaFactor {
    const fn new(scale: f64, shift: f64, power: i32) -> Self {
        ZetaFactor { scale, shift, power }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pole {
    pub location: f64,
    pub order: usize,
}

/// Convexity exponents for |F(σ+it)| ≪ |t|^{μ(σ)}, one entry per factor.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthHint {
    factors: Vec<ZetaFactor>,
}

/// Convexity bound exponent for ζ at real part `u`.
fn zeta_mu(u: f64) -> f64 {
    if u >= 1.0 {
        0.0
    } else if u >= 0.0 {
        (1.0 - u) / 2.0
    } else {
        0.5 - u
    }
}

impl GrowthHint {
    /// μ(σ). Reciprocal factors contribute nothing while their argument has
    /// real part above 1, where 1/ζ is bounded.
    pub fn exponent(&self, sigma: f64) -> f64 {
        self.factors
            .iter()
            .map(|f| {
                let u = f.scale * sigma + f.shift;
                if f.power > 0 {
                    f.power as f64 * zeta_mu(u)
                } else if u > 1.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            })
            .sum()
    }

    /// Exponent B in S(X) − (main terms) = O(X^{B+ε}) from moving the line of
    /// integration from σ₀ to σ₁ and balancing the truncation at height Y.
    pub fn error_exponent(&self, abscissa: f64, sigma_left: f64) -> f64 {
        let mu = self.exponent(sigma_left);
        if !mu.is_finite() {
            return abscissa;
        }
        abscissa - (abscissa - sigma_left) / (1.0 + mu)
    }
}

/// A Dirichlet series F(s) = Σ a_n n^{−s} given as a product of ζ factors.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletSeriesSpec {
    pub name: String,
    pub factors: Vec<ZetaFactor>,
    /// Abscissa of absolute convergence.
    pub abscissa: f64,
    /// Every pole of F with real part above `sigma_left`.
    pub poles: Vec<Pole>,
    pub sigma_left: f64,
    /// All a_n are real and nonnegative.
    pub nonnegative: bool,
}

impl DirichletSeriesSpec {
    pub fn evaluate(&self, s: ComplexValue) -> Result<ComplexValue> {
        let mut acc = ComplexValue::new(1.0, 0.0);
        for f in &self.factors {
            let z = zeta_reference(s * f.scale + f.shift)?;
            acc *= z.powi(f.power);
        }
        Ok(acc)
    }

    pub fn growth_hint(&self) -> GrowthHint {
        GrowthHint { factors: self.factors.clone() }
    }

    fn pole_at(&self, s: ComplexValue) -> Option<Pole> {
        self.poles.iter().copied().find(|p| (s - p.location).norm() < 1e-9)
    }
}

fn parse_call<'a>(name: &'a str, head: &str) -> Option<&'a str> {
    name.strip_prefix(head)?.strip_prefix('(')?.strip_suffix(')')
}

/// Looks up a catalog series: `one`, `zeta`, `dk_pow(k)`, `dk_over_n(k)`,
/// `d2`, `d2_over_n`, `phi`, `inv_power(A)`.
pub fn series_catalog(name: &str) -> Result<DirichletSeriesSpec> {
    let unknown = || Error::UnknownSeries(name.to_string());
    let build = |factors: Vec<ZetaFactor>, abscissa: f64, poles: Vec<Pole>, sigma_left: f64| DirichletSeriesSpec {
        name: name.to_string(),
        factors,
        abscissa,
        poles,
        sigma_left,
        nonnegative: true,
    };
    let pole = |location, order| Pole { location, order };
    if let Some(arg) = parse_call(name, "dk_pow") {
        let k: u32 = arg.trim().parse().map_err(|_| unknown())?;
        if k == 0 || k > 64 {
            return Err(unknown());
        }
        return Ok(build(vec![ZetaFactor::new(1.0, 0.0, k as i32)], 1.0, vec![pole(1.0, k as usize)], -0.5));
    }
    if let Some(arg) = parse_call(name, "dk_over_n") {
        let k: u32 = arg.trim().parse().map_err(|_| unknown())?;
        if k == 0 || k > 64 {
            return Err(unknown());
        }
        return Ok(build(vec![ZetaFactor::new(1.0, 1.0, k as i32)], 0.0, vec![pole(0.0, k as usize)], -1.5));
    }
    if let Some(arg) = parse_call(name, "inv_power") {
        let a: f64 = arg.trim().parse().map_err(|_| unknown())?;
        if !(a > 1.0 && a.is_finite()) {
            return Err(Error::domain(format!("inv_power needs A > 1, got {a}")));
        }
        return Ok(build(vec![ZetaFactor::new(1.0, a, 1)], 1.0 - a, vec![pole(1.0 - a, 1)], -a));
    }
    Ok(match name {
        "one" => build(vec![], f64::NEG_INFINITY, vec![], f64::NEG_INFINITY),
        "zeta" => build(vec![ZetaFactor::new(1.0, 0.0, 1)], 1.0, vec![pole(1.0, 1)], -0.5),
        "d2" => build(
            vec![ZetaFactor::new(1.0, 0.0, 4), ZetaFactor::new(2.0, 0.0, -1)],
            1.0,
            vec![pole(1.0, 4)],
            0.5,
        ),
        "d2_over_n" => build(
            vec![ZetaFactor::new(1.0, 1.0, 4), ZetaFactor::new(2.0, 2.0, -1)],
            0.0,
            vec![pole(0.0, 4)],
            -0.25,
        ),
        "phi" => build(
            vec![ZetaFactor::new(1.0, -1.0, 1), ZetaFactor::new(1.0, 0.0, -1)],
            2.0,
            vec![pole(2.0, 1)],
            1.0,
        ),
        _ => return Err(unknown()),
    })
}

/// (1/2πi) ∫_{1−iY}^{1+iY} A^s s^{−N} ds.
pub fn perron_kernel(a: f64, y: f64, n: u32) -> Result<ComplexValue> {
    if !(a > 0.0) || a == 1.0 || n == 0 || !(y > 0.0) || !a.is_finite() || !y.is_finite() {
        return Err(Error::domain(format!("perron kernel needs A > 0, A != 1, N >= 1, Y > 0; got A = {a}, N = {n}, Y = {y}")));
    }
    let log_a = a.ln();
    let width = (PI / (2.0 * log_a.abs())).min(1.0);
    let cfg = QuadratureConfig::new(QuadRule::GaussLegendrePanels, width, 1e-9, 50_000_000);
    // The integrand at −y is the conjugate of that at y.
    let r = integrate(
        |t| {
            let s = ComplexValue::new(1.0, t);
            (s * log_a).exp() / s.powi(n as i32)
        },
        0.0,
        y,
        &cfg,
    )?;
    Ok(ComplexValue::new(r.value.re / PI, 0.0))
}

/// Truncated Perron integral (1/2πi) ∫_{σ−iY}^{σ+iY} F(s) X^s ds/s.
pub fn perron_sum_estimate(f: &DirichletSeriesSpec, x: f64, sigma: f64, y: f64) -> Result<ComplexValue> {
    if !(x >= 1.0 && x.is_finite() && (x - x.floor() - 0.5).abs() < 1e-12) {
        return Err(Error::domain(format!("X = {x} must be a half-integer >= 1.5")));
    }
    if !(sigma > f.abscissa) {
        return Err(Error::domain(format!("sigma = {sigma} must exceed the abscissa {}", f.abscissa)));
    }
    if let Some(p) = f.poles.iter().find(|p| p.location == sigma) {
        return Err(Error::ContourSingularity { re: p.location, im: 0.0 });
    }
    if sigma == 0.0 {
        return Err(Error::ContourSingularity { re: 0.0, im: 0.0 });
    }
    if !(y > 0.0 && y <= 1e6) {
        return Err(Error::domain(format!("Y = {y} must lie in (0, 1e6]")));
    }
    let log_x = x.ln();
    let width = (PI / (2.0 * (log_x + 2.0))).min(0.5);
    let cfg = QuadratureConfig::new(QuadRule::GaussLegendrePanels, width, 1e-5, 200_000_000);
    let integrand = |t: f64| {
        let s = ComplexValue::new(sigma, t);
        match f.evaluate(s) {
            Ok(v) => v * (s * log_x).exp() / s,
            Err(_) => ComplexValue::new(f64::NAN, f64::NAN),
        }
    };
    let value = if f.nonnegative {
        // Real coefficients: the lower half of the line is the conjugate.
        ComplexValue::new(integrate(integrand, 0.0, y, &cfg)?.value.re / PI, 0.0)
    } else {
        integrate(integrand, -y, y, &cfg)?.value / (2.0 * PI)
    };
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::NonFinite(format!("Perron integral for {} at X = {x}", f.name)));
    }
    Ok(value)
}

/// Outcome of [`choose_truncation`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncation {
    pub y: f64,
    /// Bound on |S(X) − estimate| at this Y.
    pub bound: f64,
    /// Whether `bound` meets the requested tolerance.
    pub achieved: bool,
}

/// Smallest Y (up to `y_max`) whose truncated-Perron error bound
/// X^σ F(σ) / (πY · min_n |log(X/n)|) is below `tol`. For half-integer X the
/// nearest integer sits at distance 1/2.
pub fn choose_truncation(f: &DirichletSeriesSpec, x: f64, sigma: f64, tol: f64, y_max: f64) -> Result<Truncation> {
    if !f.nonnegative {
        return Err(Error::domain(format!("{} has signed coefficients; no truncation bound", f.name)));
    }
    if !(sigma > f.abscissa) || !(tol > 0.0) || !(y_max > 0.0) {
        return Err(Error::domain("choose_truncation needs sigma > abscissa, tol > 0, y_max > 0"));
    }
    let f_sigma = f.evaluate(ComplexValue::new(sigma, 0.0))?.re;
    let gap = ((x + 0.5) / x).ln().min((x / (x - 0.5)).ln());
    let scale = x.powf(sigma) * f_sigma / (PI * gap);
    let y = (scale / tol).max(1.0);
    Ok(if y <= y_max {
        Truncation { y, bound: tol, achieved: true }
    } else {
        Truncation { y: y_max, bound: scale / y_max, achieved: false }
    })
}

/// X^{x_power} Σ_j coeffs[j] (log X)^j.
#[derive(Debug, Clone, PartialEq)]
pub struct MainTermPolynomial {
    pub x_power: f64,
    pub coeffs: Vec<f64>,
    pub source_pole: Pole,
}

impl MainTermPolynomial {
    pub fn evaluate(&self, x: f64) -> f64 {
        let l = x.ln();
        let poly = self.coeffs.iter().rev().fold(0.0, |acc, c| acc * l + c);
        poly * x.powf(self.x_power)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> f64 {
        self.coeffs.last().copied().unwrap_or(0.0)
    }
}

/// Residue of F(s)X^s/s at `pole`, as a polynomial in log X.
pub fn main_term_from_pole(f: &DirichletSeriesSpec, pole: Pole) -> Result<MainTermPolynomial> {
    main_term_with_radius(f, pole, crate::calibration::calibration().laurent_radius)
}

pub fn main_term_with_radius(f: &DirichletSeriesSpec, pole: Pole, radius: f64) -> Result<MainTermPolynomial> {
    let center = ComplexValue::new(pole.location, 0.0);
    let listed = f.pole_at(center);
    let kernel_pole = pole.location == 0.0;
    if listed.is_none() && !kernel_pole {
        return Err(Error::domain(format!("{} has no listed pole at {}", f.name, pole.location)));
    }
    let order = listed.map_or(0, |p| p.order) + usize::from(kernel_pole);
    let g = |s: ComplexValue| Ok(f.evaluate(s)? / s);
    let laurent = laurent_at_pole(g, center, order, radius, 0)?;
    let mut coeffs = Vec::with_capacity(order);
    let mut factorial = 1.0;
    for j in 0..order {
        if j > 0 {
            factorial *= j as f64;
        }
        coeffs.push(laurent.coeff(-1 - j as i64).re / factorial);
    }
    while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
        coeffs.pop();
    }
    Ok(MainTermPolynomial { x_power: pole.location, coeffs, source_pole: Pole { location: pole.location, order } })
}

/// All residue terms right of `sigma_left`, including the kernel pole at 0.
pub fn main_terms(f: &DirichletSeriesSpec) -> Result<Vec<MainTermPolynomial>> {
    let mut out = Vec::new();
    for p in &f.poles {
        out.push(main_term_from_pole(f, *p)?);
    }
    if f.sigma_left < 0.0 && f.pole_at(ComplexValue::new(0.0, 0.0)).is_none() {
        out.push(main_term_from_pole(f, Pole { location: 0.0, order: 0 })?);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumWeight {
    One,
    InverseN,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticRow {
    pub x: f64,
    pub sum: f64,
    pub predicted: f64,
    /// (sum − predicted)/sum.
    pub residual: f64,
}

/// Compares Σ_{n≤X} w(n) a_n with the sum of the given main terms on a grid.
pub fn compare_sum_asymptotic(
    table: &ArithTable,
    weight: SumWeight,
    terms: &[MainTermPolynomial],
    grid: &[f64],
) -> Result<Vec<AsymptoticRow>> {
    let n_max = table.len();
    for &x in grid {
        if !(x >= 2.0 && x <= n_max as f64) {
            return Err(Error::GridOutOfRange { x, n: n_max });
        }
    }
    let mut order: Vec<usize> = (0..grid.len()).collect();
    order.sort_by(|&a, &b| grid[a].total_cmp(&grid[b]));
    let mut rows = vec![None; grid.len()];
    let mut exact: i128 = 0;
    // Neumaier-compensated running sum for the 1/n weight.
    let (mut acc, mut comp) = (0.0f64, 0.0f64);
    let mut n = 0usize;
    for idx in order {
        let x = grid[idx];
        let upto = x.floor() as usize;
        while n < upto {
            n += 1;
            let a = table.get(n);
            match weight {
                SumWeight::One => exact += a as i128,
                SumWeight::InverseN => {
                    let term = a as f64 / n as f64;
                    let t = acc + term;
                    comp += if acc.abs() >= term.abs() { (acc - t) + term } else { (term - t) + acc };
                    acc = t;
                }
            }
        }
        let sum = match weight {
            SumWeight::One => exact as f64,
            SumWeight::InverseN => acc + comp,
        };
        let predicted: f64 = terms.iter().map(|p| p.evaluate(x)).sum();
        rows[idx] = Some(AsymptoticRow { x, sum, predicted, residual: (sum - predicted) / sum });
    }
    Ok(rows.into_iter().map(|r| r.expect("every grid point visited")).collect())
}

/// Σ_{n≤T} n^{−A} and the prediction ζ(A) − T^{1−A}/(A − 1).
pub fn partial_sum_inverse_power(t: f64, a: f64) -> Result<(f64, f64)> {
    if !(a > 1.0) || !a.is_finite() {
        return Err(Error::domain(format!("A = {a} must exceed 1")));
    }
    if !(t >= 2.0) || t > 1e9 {
        return Err(Error::domain(format!("T = {t} must lie in [2, 1e9]")));
    }
    let n_max = t.floor() as u64;
    let sum: f64 = (1..=n_max).rev().map(|n| (n as f64).powf(-a)).sum();
    let zeta_a = zeta_reference(ComplexValue::new(a, 0.0))?.re;
    Ok((sum, zeta_a - t.powf(1.0 - a) / (a - 1.0)))
}
