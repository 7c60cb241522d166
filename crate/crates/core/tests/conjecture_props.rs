use num_bigint::BigInt;
use num_traits::One;
use proptest::prelude::*;
use zetamoments::conjecture::{a_k, estermann_factorize, g_k, remainder_is_one, LocalFactorSeries};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn estermann_round_trip(tail in prop::collection::vec(-50i64..=50, 9)) {
        let mut coeffs = vec![1i64];
        coeffs.extend(tail);
        let f = LocalFactorSeries::from_i64(&coeffs).unwrap();
        let z = estermann_factorize(&f);
        prop_assert!(remainder_is_one(&z));
        prop_assert_eq!(z.reconstruct(), f.coeffs().to_vec());
    }
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

#[test]
fn g_k_integral_and_product_identity() {
    for k in 0..=12u64 {
        let g = g_k(k as u32).unwrap();
        assert!(g.is_integer(), "k = {k}");
        let lhs: BigInt = (0..k).fold(g.numer().clone(), |acc, j| acc * factorial(k + j));
        let rhs: BigInt = (0..k).fold(factorial(k * k), |acc, j| acc * factorial(j));
        assert_eq!(lhs, rhs, "k = {k}");
    }
}

#[test]
fn a_k_nonincreasing_in_cutoff() {
    for k in 2..=4u32 {
        let cutoffs = [200u64, 1_000, 10_000, 100_000];
        let values: Vec<_> = cutoffs.iter().map(|&p| a_k(k, p, None).unwrap()).collect();
        for w in values.windows(2) {
            assert!(w[1].value <= w[0].value, "k = {k}");
            assert!((w[0].value / w[1].value).ln() <= w[0].log_tail, "k = {k}: delta beyond tail bound");
        }
    }
}
