use proptest::prelude::*;
use zetamoments::dirichlet::DirichletPolynomial;
use zetamoments::verify::second_moment_by_quadrature;
use zetamoments::ComplexValue;

fn polynomial(max_len: usize) -> impl Strategy<Value = DirichletPolynomial> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..=max_len).prop_map(|c| {
        DirichletPolynomial::new(c.into_iter().map(|(re, im)| ComplexValue::new(re, im)).collect()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn total_nonnegative_and_envelope(p in polynomial(500), t in 1.0f64..=1e4) {
        let b = p.second_moment_exact(t).unwrap();
        prop_assert!(b.total >= -1e-9 * b.main, "total {} main {}", b.total, b.main);
        prop_assert!(b.cross.abs() <= 4.0 * std::f64::consts::PI * p.mv_envelope());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn closed_form_matches_quadrature(p in polynomial(20), t in 1.0f64..=100.0) {
        let exact = p.second_moment_exact(t).unwrap().total;
        let quad = second_moment_by_quadrature(&p, t).unwrap();
        prop_assert!((exact - quad).abs() <= 1e-8 * quad.abs(), "{} vs {}", exact, quad);
    }
}

#[test]
fn diagonal_dominates_for_short_polynomials() {
    for n in [10usize, 50, 100, 250] {
        let p = DirichletPolynomial::inverse_sqrt(n).unwrap();
        for t in [4.0 * n as f64, 10.0 * n as f64, 100.0 * n as f64] {
            let b = p.second_moment_exact(t).unwrap();
            assert!(b.cross.abs() <= 0.5 * b.main, "N = {n}, T = {t}: {} vs {}", b.cross, b.main);
        }
    }
}
