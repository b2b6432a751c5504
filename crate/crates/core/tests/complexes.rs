mod common;

use common::{rng, tol};
use mpinv_core::complexes::*;
use mpinv_core::graded::minimal_characteristic;
use proptest::prelude::*;

fn sizes() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(1usize..=4, 1..=4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_complexes_invert_componentwise(sizes in sizes(), seed in any::<u64>()) {
        let mut g = rng(seed);
        let ranks = random_ranks(&mut g, &sizes);
        let t = random_complex(&mut g, &sizes, &ranks, &tol()).unwrap();
        let cert = certify_complex(&t, &tol());
        prop_assert!(cert.is_complex);
        prop_assert_eq!(&cert.ranks, &ranks);
        for (i, w) in cert.ranks.windows(2).enumerate() {
            prop_assert!(w[0] + w[1] <= sizes[i + 1]);
        }
        let p = complex_pinv(&t, &tol()).unwrap();
        prop_assert!(certify_complex(&p, &tol()).is_complex);
        let chk = graded_check(&t, &p, &tol()).unwrap();
        prop_assert!(chk.passed, "{:?}", chk.triple.residuals);
        prop_assert!(chk.triple.relative_residual() <= 1e-8);

        let back = complex_pinv(&p, &tol()).unwrap();
        for (a, b) in back.maps().iter().zip(t.maps()) {
            prop_assert!((a - b).frobenius_norm() <= 1e-8 * (1.0 + b.frobenius_norm()));
        }

        let alg = t.algebra().unwrap();
        let e = t.assemble(&alg);
        if alg.max_degree() >= 1 {
            let mc = minimal_characteristic(&alg, &e, 1, &tol()).unwrap();
            let f = p.assemble_reversed(&alg);
            prop_assert!((mc.f() - &f).frobenius_norm() <= 1e-8 * (1.0 + f.frobenius_norm()));
        }
    }
}

#[test]
fn unrealizable_ranks_are_rejected() {
    let mut g = rng(1);
    assert!(random_complex(&mut g, &[2, 1, 2], &[1, 1], &tol()).is_err());
    assert!(random_complex(&mut g, &[2, 2], &[3], &tol()).is_err());
}
