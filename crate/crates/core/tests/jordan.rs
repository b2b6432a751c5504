mod common;

use common::{rng, tol};
use mpinv_core::graded::{characteristic_space, complete_triple, GradedAlgebra};
use mpinv_core::jordan::*;
use mpinv_core::numcore::{inverse, ComplexMatrix};
use mpinv_core::sample;
use proptest::prelude::*;
use rand::Rng;

fn pairs() -> Vec<JordanPair> {
    let mut out = Vec::new();
    for n in 1..=3 {
        for m in 1..=3 {
            out.push(JordanPair::matrix(n, m).unwrap());
        }
    }
    for n in 1..=3 {
        out.push(JordanPair::symmetric(n).unwrap());
    }
    for n in 3..=6 {
        out.push(JordanPair::new(GradedAlgebra::so(&[1, n - 2, 1]).unwrap()).unwrap());
        if n % 2 == 0 {
            out.push(JordanPair::new(GradedAlgebra::so(&[n / 2, n / 2]).unwrap()).unwrap());
        }
    }
    out
}

fn random_in<R: Rng>(g: &mut R, p: &JordanPair, side: Side) -> ComplexMatrix {
    sample::graded_element(g, p.algebra(), side.degree())
}

fn twisted<R: Rng>(g: &mut R, p: &JordanPair) -> CartanInvolution {
    let y = sample::graded_element(g, p.algebra(), 0).scale_re(0.4);
    CartanInvolution::twisted(p, &y, &tol()).unwrap()
}

#[test]
fn killing_pairing_is_proportional() {
    for p in pairs() {
        let k = compare_killing(&p, &tol()).unwrap();
        assert!(k.c > 0.0 && k.imaginary < 1e-12, "{k:?}");
        assert!(k.deviation <= 1e-9, "{k:?}");
        let plus = pairing_matrix(&p, Side::Plus).matrix;
        let minus = pairing_matrix(&p, Side::Minus).matrix;
        assert!((&plus - &minus.transpose()).frobenius_norm() <= 1e-9 * plus.frobenius_norm());
        assert_eq!(mpinv_core::numcore::rank_decomposition(&plus, &tol()).rank, plus.rows());
    }
}

#[test]
fn triple_products_close() {
    for p in pairs() {
        assert!(p.closure_defect() <= 1e-12);
    }
}

#[test]
fn cartan_involutions_are_valid_and_distinct() {
    let mut g = rng(2);
    for p in pairs() {
        let std = CartanInvolution::standard(&p);
        let rep = check_cartan(&p, &std, &tol());
        assert!(rep.passed, "{rep:?}");
        assert!(reconstruction_residual(&p, &std) <= 1e-8);
        let tw = twisted(&mut g, &p);
        let rep = check_cartan(&p, &tw, &tol());
        assert!(rep.passed, "{rep:?}");
        assert!(rep.min_eigen_ratio > 1e-6);
        assert!(reconstruction_residual(&p, &tw) <= 1e-8);
        let diff = (&std.omega_plus - &tw.omega_plus).frobenius_norm();
        assert!(diff > 1e-3, "twisted involution coincides with the standard one");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn jordan_equations_match_sl2_route(idx in 0usize..20, side_plus in any::<bool>(), tw in any::<bool>(), seed in any::<u64>()) {
        let ps = pairs();
        let p = &ps[idx % ps.len()];
        let mut g = rng(seed);
        let inv = if tw { twisted(&mut g, p) } else { CartanInvolution::standard(p) };
        let side = if side_plus { Side::Plus } else { Side::Minus };
        let a = random_in(&mut g, p, side);
        let x = mp_inverse_jordan(p, &inv, &a, &tol()).unwrap();
        let rep = verify_jordan_mp(p, &inv, &a, &x, &tol()).unwrap();
        prop_assert!(rep.passed, "{rep:?}");
        let it = jordan_equation_inverse(p, &inv, &a, None, &tol()).unwrap();
        prop_assert!(it.converged);
        prop_assert!((&it.x - &x).frobenius_norm() <= 1e-8 * (1.0 + x.frobenius_norm()));
        let back = mp_inverse_jordan(p, &inv, &x, &tol()).unwrap();
        prop_assert!((&back - &a).frobenius_norm() <= 1e-8 * (1.0 + a.frobenius_norm()));
    }

    #[test]
    fn iteration_converges_to_one_point(idx in 0usize..20, seed in any::<u64>()) {
        let ps = pairs();
        let p = &ps[idx % ps.len()];
        let mut g = rng(seed);
        let inv = CartanInvolution::standard(p);
        let a = random_in(&mut g, p, Side::Plus);
        let base = default_start(p, &inv, &a, Side::Plus);
        let wa = inv.apply(p, Side::Plus, &a);
        let cube = inv.apply(p, Side::Plus, &triple_product(p, &a, &wa, &a, &tol()).unwrap());
        let reference = jordan_equation_inverse(p, &inv, &a, None, &tol()).unwrap().x;
        let rho_inv = base.frobenius_norm() / wa.frobenius_norm().max(f64::MIN_POSITIVE);
        for _ in 0..3 {
            let alpha = g.random_range(0.2..1.0);
            let beta = g.random_range(0.0..0.5);
            let x0 = &base.scale_re(alpha) + &cube.scale_re(beta * rho_inv.powi(2));
            let it = jordan_equation_inverse(p, &inv, &a, Some(&x0), &tol()).unwrap();
            prop_assert!(it.converged);
            prop_assert!((&it.x - &reference).frobenius_norm() <= 1e-8 * (1.0 + reference.frobenius_norm()));
        }
    }

    #[test]
    fn one_hermitian_operator_implies_the_other(idx in 0usize..20, seed in any::<u64>()) {
        let ps = pairs();
        let p = &ps[idx % ps.len()];
        let mut g = rng(seed);
        let inv = CartanInvolution::standard(p);
        let alg = p.algebra();
        // Rank-deficient A.
        let a0 = random_in(&mut g, p, Side::Plus);
        let x0 = mp_inverse_jordan(p, &inv, &a0, &tol()).unwrap();
        let a = &(&a0 * &x0) * &a0;
        let a = &a + &(&(&a0 * &x0).scale_re(-1.0) * &a0);
        let a = if a.frobenius_norm() < 1e-6 { a0 } else { alg.project_degree(&a, 1) };
        if a.frobenius_norm() < 1e-9 {
            return Ok(());
        }
        let space = characteristic_space(alg, &a, 1, &tol()).unwrap();
        let t = tol();
        for step in 0..3 {
            let h = if step == 0 || space.directions.is_empty() {
                space.minimal.clone()
            } else {
                let c = sample::complex_vector(&mut g, space.directions.len());
                &space.minimal + &GradedAlgebra::combine(&space.directions, &c, alg.ambient_dim())
            };
            let triple = complete_triple(alg, &a, &h, 1, &t).unwrap();
            let rep = verify_jordan_mp(p, &inv, &a, &triple.f, &t).unwrap();
            prop_assert!(rep.equations_hold(&t));
            let h1 = rep.herm_ax <= 1e-8 * rep.scale;
            let h2 = rep.herm_xa <= 1e-8 * rep.scale;
            prop_assert_eq!(h1, h2, "{:?}", rep);
        }
    }

    #[test]
    fn involution_is_equivariant_on_random_triples(idx in 0usize..20, seed in any::<u64>()) {
        let ps = pairs();
        let p = &ps[idx % ps.len()];
        let mut g = rng(seed);
        let inv = twisted(&mut g, p);
        let x = random_in(&mut g, p, Side::Plus);
        let y = random_in(&mut g, p, Side::Minus);
        let z = random_in(&mut g, p, Side::Plus);
        let lhs = inv.apply(p, Side::Plus, &triple_product(p, &x, &y, &z, &tol()).unwrap());
        let rhs = triple_product(
            p,
            &inv.apply(p, Side::Plus, &x),
            &inv.apply(p, Side::Minus, &y),
            &inv.apply(p, Side::Plus, &z),
            &tol(),
        )
        .unwrap();
        prop_assert!((&lhs - &rhs).frobenius_norm() <= 1e-9 * (1.0 + lhs.frobenius_norm()));
    }
}

#[test]
fn matrix_pair_product_formula() {
    let mut g = rng(9);
    let p = JordanPair::matrix(2, 3).unwrap();
    let alg = p.algebra();
    let a = sample::complex_matrix(&mut g, 2, 3);
    let b = sample::complex_matrix(&mut g, 3, 2);
    let c = sample::complex_matrix(&mut g, 2, 3);
    let t = triple_product(
        &p,
        &alg.embed_block(&a, 0, 1),
        &alg.embed_block(&b, 1, 0),
        &alg.embed_block(&c, 0, 1),
        &tol(),
    )
    .unwrap();
    let want = (&(&(&a * &b) * &c) + &(&(&c * &b) * &a)).scale_re(0.5);
    assert!(alg.block(&t, 0, 1).approx_eq(&want, 1e-12));
}

#[test]
fn invertible_symmetric_element_has_its_inverse() {
    let mut g = rng(13);
    let p = JordanPair::symmetric(3).unwrap();
    let inv = CartanInvolution::standard(&p);
    let b = sample::complex_matrix(&mut g, 3, 3);
    let s = &b + &b.transpose();
    let a = p.algebra().embed_block(&s, 0, 1);
    let x = mp_inverse_jordan(&p, &inv, &a, &tol()).unwrap();
    let want = inverse(&s).unwrap();
    assert!((&p.algebra().block(&x, 1, 0) - &want).frobenius_norm() <= 1e-8 * want.frobenius_norm());
}
