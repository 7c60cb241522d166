use std::sync::OnceLock;

use proptest::prelude::*;
use zetamoments::arith::{dk_prime_power, primes_up_to, ArithTable};

fn table(values: Vec<i64>) -> ArithTable {
    let mut v = vec![0];
    v.extend(values);
    ArithTable::from_values("random", false, v).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn convolution_is_associative(
        f in prop::collection::vec(-5i64..=5, 200),
        g in prop::collection::vec(-5i64..=5, 200),
        h in prop::collection::vec(-5i64..=5, 200),
    ) {
        let (f, g, h) = (table(f), table(g), table(h));
        let left = f.dirichlet_convolve(&g).unwrap().dirichlet_convolve(&h).unwrap();
        let right = f.dirichlet_convolve(&g.dirichlet_convolve(&h).unwrap()).unwrap();
        prop_assert_eq!(left.values(), right.values());
    }
}

fn tables() -> &'static (ArithTable, ArithTable, ArithTable) {
    static T: OnceLock<(ArithTable, ArithTable, ArithTable)> = OnceLock::new();
    T.get_or_init(|| {
        let n = 100_000;
        (ArithTable::sieve_dk(3, n).unwrap(), ArithTable::sieve_dk(2, n).unwrap(), ArithTable::sieve_phi(n).unwrap())
    })
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn coprime_multiplicativity(m in 1u64..=316, n in 1u64..=316) {
        prop_assume!(gcd(m, n) == 1);
        let (d3, d2, phi) = tables();
        prop_assert!(d3.multiplicative_on(&[(m, n)]));
        prop_assert!(d2.multiplicative_on(&[(m, n)]));
        prop_assert!(phi.multiplicative_on(&[(m, n)]));
    }
}

#[test]
fn dk_is_iterated_convolution_of_ones() {
    let n = 3000;
    let ones = ArithTable::ones(n).unwrap();
    let mut acc = ones.clone();
    for k in 1..=5u32 {
        if k > 1 {
            acc = acc.dirichlet_convolve(&ones).unwrap();
        }
        assert_eq!(acc.values()[1..], ArithTable::sieve_dk(k, n).unwrap().values()[1..], "k = {k}");
    }
}

#[test]
fn prime_power_values() {
    let n = 4096;
    for k in 1..=5u32 {
        let t = ArithTable::sieve_dk(k, n).unwrap();
        for p in primes_up_to(n) {
            let mut q = p;
            let mut m = 1;
            while q as usize <= n {
                assert_eq!(num_bigint::BigUint::from(t.get(q as usize) as u64), dk_prime_power(k, m));
                q *= p;
                m += 1;
            }
        }
    }
}
