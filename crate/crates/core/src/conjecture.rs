//! Moment-conjecture constants and the Estermann factorization of local
//! Euler factors.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::{dk_prime_power, primes_up_to};
use crate::error::{Error, Result};

/// Default prime cutoff for the a_k Euler product.
pub const DEFAULT_PRIME_CUTOFF: u64 = 1_000_000;

/// Reduced big rational with positive denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactRational(pub BigRational);

impl ExactRational {
    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

/// `numerator/denominator` in decimal.
impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// g_k = (k²)! ∏_{j<k} j!/(k+j)!.
pub fn g_k(k: u32) -> Result<ExactRational> {
    if k > 20 {
        return Err(Error::domain(format!("g_k is limited to k <= 20, got {k}")));
    }
    let k = k as u64;
    let mut num = factorial(k * k);
    let mut den = BigInt::one();
    for j in 0..k {
        num *= factorial(j);
        den *= factorial(k + j);
    }
    Ok(ExactRational(BigRational::new(num, den)))
}

fn binomial(n: u64, r: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..r {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// β(x) = (1 − x)^{k²} Σ_{m≥0} C(k+m−1, m)² x^m, a polynomial of degree
/// k(k − 1).
pub fn local_polynomial(k: u32) -> Vec<BigInt> {
    let k = k as u64;
    let len = (k * (k - 1) + 1) as usize;
    let series: Vec<BigInt> = (0..len as u64 + 1).map(|m| dk_prime_power(k as u32, m as u32).into()).map(|c: BigInt| &c * &c).collect();
    let kk = k * k;
    let mut out = vec![BigInt::zero(); len + 1];
    for (i, o) in out.iter_mut().enumerate() {
        for j in 0..=i {
            if j as u64 > kk {
                break;
            }
            let mut b = binomial(kk, j as u64);
            if j % 2 == 1 {
                b = -b;
            }
            *o += b * &series[i - j];
        }
    }
    assert!(out[len].is_zero(), "local polynomial degree exceeds k(k-1)");
    out.truncate(len);
    out
}

/// An Euler-product value with a rigorous multiplicative tail bound:
/// the full product lies in `value · [e^{−log_tail}, e^{log_tail}]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerProduct {
    pub value: f64,
    pub log_tail: f64,
    pub prime_cutoff: u64,
}

impl EulerProduct {
    /// Relative uncertainty e^{log_tail} − 1.
    pub fn relative_tail(&self) -> f64 {
        self.log_tail.exp_m1()
    }
}

fn primes_cached(p: u64) -> Vec<u64> {
    static CACHE: OnceLock<Vec<u64>> = OnceLock::new();
    if p <= DEFAULT_PRIME_CUTOFF {
        let all = CACHE.get_or_init(|| primes_up_to(DEFAULT_PRIME_CUTOFF as usize));
        let end = all.partition_point(|&q| q <= p);
        all[..end].to_vec()
    } else {
        primes_up_to(p as usize)
    }
}

fn neumaier(values: impl Iterator<Item = f64>) -> f64 {
    let (mut acc, mut comp) = (0.0f64, 0.0f64);
    for v in values {
        let t = acc + v;
        comp += if acc.abs() >= v.abs() { (acc - t) + v } else { (v - t) + acc };
        acc = t;
    }
    acc + comp
}

/// a_k = ∏_p (1 − 1/p)^{k²} Σ_m d_k(p^m)² p^{−m} over p ≤ `prime_cutoff`, with
/// each local sum taken in closed form through [`local_polynomial`].
///
/// The tail over p > P is bounded by 2 Σ_{j≥2} |β_j| P^{1−j}/(j − 1).
pub fn a_k(k: u32, prime_cutoff: u64, tol: Option<f64>) -> Result<EulerProduct> {
    if k == 0 || k > 12 {
        return Err(Error::domain(format!("a_k needs 1 <= k <= 12, got {k}")));
    }
    if !(100..=100_000_000).contains(&prime_cutoff) {
        return Err(Error::domain(format!("prime cutoff {prime_cutoff} must lie in [100, 1e8]")));
    }
    let beta: Vec<f64> = local_polynomial(k).iter().map(|b| b.to_f64().unwrap_or(f64::NAN)).collect();
    let primes = primes_cached(prime_cutoff);
    let chunk_logs: Vec<f64> = primes
        .par_chunks(4096)
        .map(|chunk| {
            neumaier(chunk.iter().map(|&p| {
                let x = 1.0 / p as f64;
                // β_0 = 1 and β_1 = 0, so log β(x) = log1p(Σ_{j≥2} β_j x^j).
                let u = beta.iter().skip(2).rev().fold(0.0, |acc, b| acc * x + b) * x * x;
                u.ln_1p()
            }))
        })
        .collect();
    let log_value = neumaier(chunk_logs.into_iter());
    let big_p = prime_cutoff as f64;
    let log_tail = 2.0
        * beta
            .iter()
            .enumerate()
            .skip(2)
            .map(|(j, b)| b.abs() * big_p.powi(1 - j as i32) / (j as f64 - 1.0))
            .fold(0.0, |acc, v| acc + v);
    if let Some(tol) = tol {
        if log_tail.exp_m1() > tol {
            return Err(Error::CutoffTooSmall { tail: log_tail.exp_m1(), tol });
        }
    }
    Ok(EulerProduct { value: log_value.exp(), log_tail, prime_cutoff })
}

/// The defining Euler product with the m-sum cut at `m_cutoff`, evaluated
/// term by term in floating point.
pub fn a_k_truncated(k: u32, prime_cutoff: u64, m_cutoff: u32) -> Result<f64> {
    if k == 0 || k > 12 || prime_cutoff < 100 || m_cutoff < 20 {
        return Err(Error::domain("a_k_truncated needs 1 <= k <= 12, prime cutoff >= 100, m cutoff >= 20"));
    }
    let coeffs: Vec<f64> = (0..=m_cutoff).map(|m| dk_prime_power(k, m).to_f64().unwrap_or(f64::NAN).powi(2)).collect();
    let kk = (k * k) as f64;
    let logs = primes_cached(prime_cutoff).into_iter().map(|p| {
        let x = 1.0 / p as f64;
        let sum = coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c);
        kk * (-x).ln_1p() + sum.ln()
    });
    Ok(neumaier(logs).exp())
}

/// g_k (a_k / (k²)!) T log^{k²} T.
pub fn conjectured_moment(k: u32, t: f64) -> Result<f64> {
    let g = g_k(k)?.to_f64();
    Ok(g * dirichlet_poly_moment_prediction(k, t)?)
}

/// (a_k / (k²)!) T log^{k²} T.
pub fn dirichlet_poly_moment_prediction(k: u32, t: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::domain("k must be at least 1"));
    }
    if !(t >= 10.0) || !t.is_finite() {
        return Err(Error::domain(format!("T = {t} must be at least 10")));
    }
    let a = a_k(k, DEFAULT_PRIME_CUTOFF, None)?.value;
    let kk = k * k;
    let fact: f64 = (1..=kk).map(f64::from).product();
    Ok(a / fact * t * t.ln().powi(kk as i32))
}

/// Coefficients c(p^0) = 1, c(p), …, c(p^{J−1}) of a prime-independent local
/// factor, as a power series in x = p^{−s}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalFactorSeries {
    coeffs: Vec<BigInt>,
}

impl LocalFactorSeries {
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.first() != Some(&BigInt::one()) {
            return Err(Error::domain("local factor series must start with c_0 = 1"));
        }
        Ok(LocalFactorSeries { coeffs })
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// d_k(p^j) = C(k+j−1, j).
    pub fn dk(k: u32, j_len: usize) -> Self {
        LocalFactorSeries { coeffs: (0..j_len as u32).map(|j| dk_prime_power(k, j).into()).collect() }
    }

    /// d_k(p^j)².
    pub fn dk_squared(k: u32, j_len: usize) -> Self {
        let base = Self::dk(k, j_len);
        LocalFactorSeries { coeffs: base.coeffs.iter().map(|c| c * c).collect() }
    }

    /// J, the number of stored coefficients.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }
}

/// f = ∏_{1≤j<J} (1 − x^j)^{−C(j)} · remainder, modulo x^J.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZetaFactorization {
    /// C(1), …, C(J−1).
    pub exponents: Vec<BigInt>,
    /// Equal to 1 + O(x^J) after a successful peel.
    pub remainder: Vec<BigInt>,
}

impl ZetaFactorization {
    /// Rebuilds the input series from the exponents and remainder.
    pub fn reconstruct(&self) -> Vec<BigInt> {
        let mut series = self.remainder.clone();
        for (i, c) in self.exponents.iter().enumerate() {
            series = mul_binomial_power(&series, i + 1, &-c);
        }
        series
    }
}

/// series · (1 − x^j)^e mod x^{len}, for any integer e.
fn mul_binomial_power(series: &[BigInt], j: usize, e: &BigInt) -> Vec<BigInt> {
    let len = series.len();
    // (1 − y)^e = Σ_i binom(e, i) (−y)^i with the generalized binomial.
    let mut factor = vec![BigInt::zero(); len];
    let mut coef = BigInt::one();
    let mut i = 0usize;
    while i * j < len {
        factor[i * j] = if i.is_multiple_of(2) { coef.clone() } else { -coef.clone() };
        coef = coef * (e - BigInt::from(i)) / BigInt::from(i + 1);
        i += 1;
    }
    let mut out = vec![BigInt::zero(); len];
    for (a, sa) in series.iter().enumerate() {
        if sa.is_zero() {
            continue;
        }
        for (b, fb) in factor.iter().enumerate().take(len - a) {
            if !fb.is_zero() {
                out[a + b] += sa * fb;
            }
        }
    }
    out
}

/// Peels ζ-factors off a local series: C(j) is the x^j coefficient once the
/// lower factors have been divided out.
pub fn estermann_factorize(f: &LocalFactorSeries) -> ZetaFactorization {
    let mut running = f.coeffs.clone();
    let mut exponents = Vec::with_capacity(running.len().saturating_sub(1));
    for j in 1..running.len() {
        let c = running[j].clone();
        if !c.is_zero() {
            running = mul_binomial_power(&running, j, &c);
        }
        debug_assert!(running[j].is_zero());
        exponents.push(c);
    }
    ZetaFactorization { exponents, remainder: running }
}

/// c(p), the order of the pole at s = 1 of the completed series.
pub fn pole_order_from_local(f: &LocalFactorSeries) -> Result<BigInt> {
    if f.len() < 2 {
        return Err(Error::domain("pole order needs at least two coefficients"));
    }
    Ok(f.coeffs[1].clone())
}

/// True when the remainder is exactly 1 through the stored order.
pub fn remainder_is_one(z: &ZetaFactorization) -> bool {
    z.remainder.first().is_some_and(|c| c.is_one()) && z.remainder.iter().skip(1).all(|c| c.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn g_values() {
        let expect = [1i64, 1, 2, 42, 24024];
        for (k, e) in expect.iter().enumerate() {
            let g = g_k(k as u32).unwrap();
            assert!(g.is_integer());
            assert_eq!(g.numer(), &BigInt::from(*e));
        }
        assert_eq!(g_k(2).unwrap().to_string(), "2/1");
        assert!(g_k(21).is_err());
    }

    #[test]
    fn local_polynomials() {
        assert_eq!(local_polynomial(1), ints(&[1]));
        assert_eq!(local_polynomial(2), ints(&[1, 0, -1]));
        let b3 = local_polynomial(3);
        assert_eq!(b3.len(), 7);
        assert_eq!(b3[1], BigInt::zero());
        assert_eq!(b3[2], BigInt::from(-9));
    }

    #[test]
    fn a1_is_one() {
        let a = a_k(1, 1000, None).unwrap();
        assert_eq!(a.value, 1.0);
        assert_eq!(a.log_tail, 0.0);
    }

    #[test]
    fn a2_is_inverse_zeta2() {
        let a = a_k(2, DEFAULT_PRIME_CUTOFF, Some(1e-5)).unwrap();
        assert!((a.value - 6.0 / (PI * PI)).abs() < 1e-5);
        // The exact limit lies inside the reported band.
        let ratio = (6.0 / (PI * PI) / a.value).ln().abs();
        assert!(ratio <= a.log_tail);
    }

    #[test]
    fn a3_converges() {
        let a = a_k(3, 100_000, None).unwrap();
        let b = a_k(3, 1_000_000, None).unwrap();
        assert!((a.value - b.value).abs() < 1e-5);
        assert!(b.value <= a.value);
        assert!((a.value / b.value).ln() <= a.log_tail);
    }

    #[test]
    fn literal_route_agrees() {
        for k in 1..=4 {
            let closed = a_k(k, 10_000, None).unwrap().value;
            let literal = a_k_truncated(k, 10_000, 60).unwrap();
            assert!((closed - literal).abs() <= 1e-10 * closed, "k = {k}: {closed} vs {literal}");
        }
        assert!(a_k_truncated(2, 10_000, 10).is_err());
    }

    #[test]
    fn tolerance_errors() {
        assert!(matches!(a_k(4, 100, Some(1e-8)), Err(Error::CutoffTooSmall { .. })));
        assert!(a_k(2, 50, None).is_err());
        assert!(a_k(0, 1000, None).is_err());
    }

    #[test]
    fn fourth_moment_identity() {
        for t in [100.0, 2000.0, 1e6] {
            let c = conjectured_moment(2, t).unwrap();
            let d = t * t.ln().powi(4) / (2.0 * PI * PI);
            assert!((c / d - 1.0).abs() < 1e-6);
        }
        let c = conjectured_moment(1, 500.0).unwrap();
        assert!((c - 500.0 * 500f64.ln()).abs() < 1e-9 * c);
        assert!(conjectured_moment(3, 1000.0).unwrap() > 0.0);
        assert!(dirichlet_poly_moment_prediction(2, 5.0).is_err());
    }

    #[test]
    fn estermann_examples() {
        let z = estermann_factorize(&LocalFactorSeries::dk_squared(2, 8));
        assert_eq!(z.exponents, ints(&[4, -1, 0, 0, 0, 0, 0]));
        assert!(remainder_is_one(&z));
        let z = estermann_factorize(&LocalFactorSeries::dk(3, 6));
        assert_eq!(z.exponents, ints(&[3, 0, 0, 0, 0]));
        assert!(remainder_is_one(&z));
        let f = LocalFactorSeries::from_i64(&[1, 1, 0, 0, 0, 0]).unwrap();
        let z = estermann_factorize(&f);
        assert_eq!(z.exponents[..2], ints(&[1, -1])[..]);
        assert_eq!(z.reconstruct(), f.coeffs());
        assert!(LocalFactorSeries::from_i64(&[2, 1]).is_err());
    }

    #[test]
    fn pole_orders() {
        for k in 1..=5 {
            assert_eq!(pole_order_from_local(&LocalFactorSeries::dk(k, 4)).unwrap(), BigInt::from(k));
            assert_eq!(pole_order_from_local(&LocalFactorSeries::dk_squared(k, 4)).unwrap(), BigInt::from(k * k));
        }
        let d2 = LocalFactorSeries::dk_squared(2, 8);
        assert_eq!(estermann_factorize(&d2).exponents[0], pole_order_from_local(&d2).unwrap());
        assert!(pole_order_from_local(&LocalFactorSeries::from_i64(&[1]).unwrap()).is_err());
    }
}
