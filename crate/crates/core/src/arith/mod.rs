//! Sieved tables of the multiplicative functions d_k(n), φ(n), μ(n) and exact
//! Dirichlet convolution.

mod cache;

pub use cache::{load_or_build, read_table, write_table};

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};

/// Largest table length accepted by the sieves.
pub const TABLE_CAPACITY: usize = 100_000_000;

/// Values f(1), …, f(N) of an integer-valued arithmetic function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArithTable {
    label: String,
    param: u32,
    multiplicative: bool,
    // values[0] is a placeholder so that values[n] = f(n)
    values: Vec<i64>,
}

fn check_capacity(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("table length must be at least 1"));
    }
    if n > TABLE_CAPACITY {
        return Err(Error::Capacity { requested: n, limit: TABLE_CAPACITY });
    }
    Ok(())
}

impl ArithTable {
    /// Builds a table from values f(1), …, f(N).
    pub fn from_values(label: impl Into<String>, multiplicative: bool, values: Vec<i64>) -> Result<Self> {
        check_capacity(values.len())?;
        let mut stored = Vec::with_capacity(values.len() + 1);
        stored.push(0);
        stored.extend(values);
        Ok(ArithTable { label: label.into(), param: 0, multiplicative, values: stored })
    }

    pub fn from_fn(
        label: impl Into<String>,
        n: usize,
        multiplicative: bool,
        f: impl Fn(u64) -> i64,
    ) -> Result<Self> {
        check_capacity(n)?;
        let values = std::iter::once(0).chain((1..=n as u64).map(f)).collect();
        Ok(ArithTable { label: label.into(), param: 0, multiplicative, values })
    }

    /// The constant function 1.
    pub fn ones(n: usize) -> Result<Self> {
        Self::from_fn("one", n, true, |_| 1)
    }

    /// The identity n ↦ n.
    pub fn identity(n: usize) -> Result<Self> {
        Self::from_fn("id", n, true, |m| m as i64)
    }

    /// d_k(n), the number of ordered factorizations n = n₁⋯n_k.
    ///
    /// Built from d_1 = 1 by k − 1 passes of d_j = d_{j−1} * 1.
    pub fn sieve_dk(k: u32, n: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::domain("d_k needs k >= 1"));
        }
        check_capacity(n)?;
        let mut current = vec![1i64; n + 1];
        current[0] = 0;
        for _ in 1..k {
            let mut next = vec![0i64; n + 1];
            for (d, &v) in current.iter().enumerate().skip(1) {
                for m in (d..=n).step_by(d) {
                    next[m] = next[m]
                        .checked_add(v)
                        .ok_or_else(|| Error::Overflow(format!("d_{k} at n = {m}")))?;
                }
            }
            current = next;
        }
        Ok(ArithTable { label: format!("d{k}"), param: k, multiplicative: true, values: current })
    }

    /// Euler's totient by a linear sieve.
    pub fn sieve_phi(n: usize) -> Result<Self> {
        check_capacity(n)?;
        let (phi, _) = linear_sieve(n);
        Ok(ArithTable { label: "phi".into(), param: 0, multiplicative: true, values: phi })
    }

    /// The Möbius function by a linear sieve.
    pub fn sieve_mobius(n: usize) -> Result<Self> {
        check_capacity(n)?;
        let (_, mu) = linear_sieve(n);
        Ok(ArithTable { label: "mu".into(), param: 0, multiplicative: true, values: mu })
    }

    /// Table length N.
    pub fn len(&self) -> usize {
        self.values.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// The k of a d_k table, 0 for other tables.
    pub fn param(&self) -> u32 {
        self.param
    }

    pub fn is_multiplicative(&self) -> bool {
        self.multiplicative
    }

    /// f(n) for 1 ≤ n ≤ N.
    pub fn get(&self, n: usize) -> i64 {
        assert!(n >= 1 && n <= self.len(), "index {n} outside 1..={}", self.len());
        self.values[n]
    }

    /// f(1), …, f(N).
    pub fn values(&self) -> &[i64] {
        &self.values[1..]
    }

    /// (f * g)(n) = Σ_{d | n} f(d) g(n/d), exact with overflow detection.
    pub fn dirichlet_convolve(&self, other: &ArithTable) -> Result<ArithTable> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch(self.len(), other.len()));
        }
        let n = self.len();
        let label = format!("({})*({})", self.label, other.label);
        let mut out = vec![0i64; n + 1];
        for d in 1..=n {
            let fd = self.values[d];
            if fd == 0 {
                continue;
            }
            for (q, m) in (d..=n).step_by(d).enumerate() {
                let term = fd
                    .checked_mul(other.values[q + 1])
                    .and_then(|t| out[m].checked_add(t))
                    .ok_or_else(|| Error::Overflow(format!("{label} at n = {m}")))?;
                out[m] = term;
            }
        }
        Ok(ArithTable {
            label,
            param: 0,
            multiplicative: self.multiplicative && other.multiplicative,
            values: out,
        })
    }

    /// Pointwise product f(n)·g(n).
    pub fn pointwise_mul(&self, other: &ArithTable) -> Result<ArithTable> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch(self.len(), other.len()));
        }
        let label = format!("{}.{}", self.label, other.label);
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.checked_mul(*b))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Overflow(label.clone()))?;
        Ok(ArithTable {
            label,
            param: 0,
            multiplicative: self.multiplicative && other.multiplicative,
            values,
        })
    }

    /// f(n)².
    pub fn squared(&self) -> Result<ArithTable> {
        let mut sq = self.pointwise_mul(self)?;
        sq.label = format!("{}^2", self.label);
        Ok(sq)
    }

    /// Checks f(mn) = f(m) f(n) on the given pairs, skipping pairs that are
    /// not coprime or fall outside the table.
    pub fn multiplicative_on(&self, pairs: &[(u64, u64)]) -> bool {
        pairs.iter().all(|&(m, n)| {
            let mn = m * n;
            if num_integer::gcd(m, n) != 1 || mn as usize > self.len() || m == 0 || n == 0 {
                return true;
            }
            Some(self.values[mn as usize]) == self.values[m as usize].checked_mul(self.values[n as usize])
        })
    }
}

/// φ and μ on 0..=n by the linear (Euler) sieve.
fn linear_sieve(n: usize) -> (Vec<i64>, Vec<i64>) {
    let mut phi = vec![0i64; n + 1];
    let mut mu = vec![0i64; n + 1];
    let mut primes: Vec<usize> = Vec::new();
    let mut composite = vec![false; n + 1];
    phi[1] = 1;
    mu[1] = 1;
    for i in 2..=n {
        if !composite[i] {
            primes.push(i);
            phi[i] = i as i64 - 1;
            mu[i] = -1;
        }
        for &p in &primes {
            let ip = i * p;
            if ip > n {
                break;
            }
            composite[ip] = true;
            if i % p == 0 {
                phi[ip] = phi[i] * p as i64;
                mu[ip] = 0;
                break;
            }
            phi[ip] = phi[i] * (p as i64 - 1);
            mu[ip] = -mu[i];
        }
    }
    (phi, mu)
}

/// All primes p ≤ n.
pub fn primes_up_to(n: usize) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let mut is_composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !is_composite[i] {
            primes.push(i as u64);
            let mut m = i.saturating_mul(i);
            while m <= n {
                is_composite[m] = true;
                m += i;
            }
        }
    }
    primes
}

/// d_k(p^m) = C(k+m−1, m), the number of ways to write m as an ordered sum
/// of k nonnegative exponents.
pub fn dk_prime_power(k: u32, m: u32) -> BigUint {
    assert!(k >= 1, "d_k needs k >= 1");
    let mut acc = BigUint::one();
    // C(k+m-1, m) = Π_{i=1}^{m} (k-1+i)/i, exact at every step
    for i in 1..=m as u64 {
        acc *= k as u64 - 1 + i;
        acc /= i;
    }
    acc
}
