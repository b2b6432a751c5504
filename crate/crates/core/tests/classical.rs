mod common;

use common::{rng, tol};
use mpinv_core::classical::*;
use mpinv_core::numcore::{ComplexMatrix, RealMatrix};
use mpinv_core::sample;
use proptest::prelude::*;

fn shape_and_rank() -> impl Strategy<Value = (usize, usize, usize, u64)> {
    (1usize..=8, 1usize..=8).prop_flat_map(|(m, n)| (Just(m), Just(n), 0..=m.min(n), any::<u64>()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn penrose_conditions_hold((m, n, r, seed) in shape_and_rank()) {
        let a = sample::matrix_of_rank(&mut rng(seed), m, n, r);
        let p = pinv(&a, &tol());
        let rep = verify_penrose(&a, &p, &tol()).unwrap();
        prop_assert!(rep.passed, "{rep:?}");
        prop_assert!(rep.relative() <= 1e-9);
    }

    #[test]
    fn two_routes_agree((m, n, r, seed) in shape_and_rank()) {
        let a = sample::matrix_of_rank(&mut rng(seed), m, n, r);
        let p = pinv(&a, &tol());
        let q = pinv_factorization(&a, &tol());
        prop_assert!((&p - &q).frobenius_norm() <= 1e-9 * (1.0 + p.frobenius_norm()));
    }

    #[test]
    fn pinv_is_an_involution((m, n, r, seed) in shape_and_rank()) {
        let a = sample::matrix_of_rank(&mut rng(seed), m, n, r);
        let back = pinv(&pinv(&a, &tol()), &tol());
        prop_assert!((&back - &a).frobenius_norm() <= 1e-8 * (1.0 + a.frobenius_norm()));
    }

    #[test]
    fn unitary_equivariance((m, n, r, seed) in shape_and_rank()) {
        let mut g = rng(seed);
        let a = sample::matrix_of_rank(&mut g, m, n, r);
        let u = sample::unitary(&mut g, m);
        let v = sample::unitary(&mut g, n);
        let lhs = pinv(&(&(&u * &a) * &v.adjoint()), &tol());
        let rhs = &(&v * &pinv(&a, &tol())) * &u.adjoint();
        prop_assert!((&lhs - &rhs).frobenius_norm() <= 1e-8 * (1.0 + rhs.frobenius_norm()));
    }

    #[test]
    fn real_inputs_give_real_inverses((m, n, r, seed) in shape_and_rank()) {
        let a = sample::real_matrix_of_rank(&mut rng(seed), m, n, r);
        let p = pinv_real(&a, &tol()).unwrap();
        prop_assert!(verify_penrose(&a.to_complex(), &p.to_complex(), &tol()).unwrap().passed);
    }

    #[test]
    fn quaternion_inverse_passes_native_check((m, n, r, seed) in (1usize..=4, 1usize..=4)
        .prop_flat_map(|(m, n)| (Just(m), Just(n), 0..=m.min(n), any::<u64>()))) {
        let a = sample::quaternion_matrix_of_rank(&mut rng(seed), m, n, r);
        let p = pinv_quaternion(&a, &tol()).unwrap();
        let rep = verify_penrose_quaternion(&a, &p, &tol()).unwrap();
        prop_assert!(rep.passed, "{rep:?}");
    }
}

#[test]
fn adjoint_is_not_the_inverse_of_a_nonuniform_matrix() {
    let a = ComplexMatrix::real_diag(&[2.0, 1.0]);
    assert!(!verify_penrose(&a, &a.adjoint(), &tol()).unwrap().passed);
}

#[test]
fn real_projector_is_its_own_inverse() {
    let a = RealMatrix::from_rows(&[&[1.0, 0.0], &[0.0, 0.0]]);
    assert_eq!(pinv_real(&a, &tol()).unwrap(), a);
}

#[test]
fn imaginary_mass_is_rejected_on_real_conversion() {
    let z = ComplexMatrix::from_rows(&[&[mpinv_core::numcore::c(1.0, 0.5)]]);
    assert!(RealMatrix::from_complex(&z, 1e-9).is_err());
}
