mod common;

use common::{rng, tol};
use mpinv_core::classical::pinv;
use mpinv_core::forms::*;
use mpinv_core::graded::{minimal_characteristic, GradedAlgebra};
use mpinv_core::numcore::{c, vec_norm, ComplexMatrix, RealMatrix, C64};
use mpinv_core::sample;
use proptest::prelude::*;
use rand::Rng;

fn anisotropic(seed: u64, n: usize) -> Vec<C64> {
    sample::complex_vector(&mut rng(seed), n)
}

/// u + i·w with u ⊥ w and ‖u‖ = ‖w‖.
fn isotropic(seed: u64, n: usize) -> Vec<C64> {
    let mut g = rng(seed);
    let u: Vec<f64> = (0..n).map(|_| g.random::<f64>() - 0.5).collect();
    let w0: Vec<f64> = (0..n).map(|_| g.random::<f64>() - 0.5).collect();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let k = dot(&w0, &u) / dot(&u, &u);
    let w: Vec<f64> = w0.iter().zip(&u).map(|(x, y)| x - k * y).collect();
    let s = (dot(&u, &u) / dot(&w, &w)).sqrt();
    u.iter().zip(&w).map(|(&a, &b)| c(a, s * b)).collect()
}

fn close(a: &[C64], b: &[C64], t: f64) -> bool {
    let d: Vec<C64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    vec_norm(&d) <= t * (1.0 + vec_norm(b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn form_pinv_matches_classical_and_is_involutive(n in 1usize..=6, r in 0usize..=6, skew in any::<bool>(), seed in any::<u64>()) {
        let (sym, sign, rank) = if skew { (Symmetry::Skew, -1.0, (r.min(n)) / 2 * 2) } else { (Symmetry::Symmetric, 1.0, r.min(n)) };
        let gram = sample::form_of_rank(&mut rng(seed), n, rank, sign);
        let w = BilinearForm::new(sym, gram.clone(), &tol()).unwrap();
        let p = form_pinv(&w, &tol()).unwrap();
        prop_assert_eq!(p.symmetry(), sym);
        let q = pinv(&gram, &tol());
        prop_assert!((p.gram() - &q).frobenius_norm() <= 1e-9 * (1.0 + q.frobenius_norm()));
        let back = form_pinv(&p, &tol()).unwrap();
        prop_assert!((back.gram() - &gram).frobenius_norm() <= 1e-8 * (1.0 + gram.frobenius_norm()));
    }

    #[test]
    fn short_grading_completion_recovers_form_pinv(n in 1usize..=3, skew in any::<bool>(), seed in any::<u64>()) {
        let (alg, sym, sign) = if skew {
            (GradedAlgebra::so(&[n, n]).unwrap(), Symmetry::Skew, -1.0)
        } else {
            (GradedAlgebra::sp(&[n, n]).unwrap(), Symmetry::Symmetric, 1.0)
        };
        let rank = if skew { n / 2 * 2 } else { n };
        let gram = sample::form_of_rank(&mut rng(seed), n, rank, sign);
        let e = alg.embed_block(&gram, 0, 1);
        let r = minimal_characteristic(&alg, &e, 1, &tol()).unwrap();
        prop_assert!(r.is_hermitian);
        let p = form_pinv(&BilinearForm::new(sym, gram, &tol()).unwrap(), &tol()).unwrap();
        prop_assert!((&alg.block(r.f(), 1, 0) - p.gram()).frobenius_norm() <= 1e-8 * (1.0 + p.gram().frobenius_norm()));
    }

    #[test]
    fn vector_formula_embeds_as_hermitian_triple(n in 2usize..=6, iso in any::<bool>(), seed in any::<u64>()) {
        let v = if iso { isotropic(seed, n) } else { anisotropic(seed, n) };
        let want = if iso { VectorCase::Isotropic } else { VectorCase::Anisotropic };
        prop_assert_eq!(vector_case(&v, &tol()), want);
        let w = vector_pinv(&v, &tol());
        let chk = vector_triple(&v, &w).unwrap();
        prop_assert!(chk.passes(&tol()), "{:?} defect {}", chk.triple.residuals, chk.hermitian_defect);
        prop_assert!(close(&vector_pinv(&w, &tol()), &v, 1e-9));
    }

    #[test]
    fn vector_formula_scales_inversely(n in 1usize..=6, seed in any::<u64>()) {
        let mut g = rng(seed);
        let v = sample::complex_vector(&mut g, n);
        let s = sample::complex_normal(&mut g) + c(0.5, 0.0);
        let sv: Vec<C64> = v.iter().map(|z| z * s).collect();
        let lhs = vector_pinv(&sv, &tol());
        let rhs: Vec<C64> = vector_pinv(&v, &tol()).iter().map(|z| z / s).collect();
        prop_assert!(close(&lhs, &rhs, 1e-9));
    }

    #[test]
    fn pseudo_euclidean_formula_gives_real_symmetric_characteristic(n in 1usize..=3, m in 1usize..=3, iso in any::<bool>(), seed in any::<u64>()) {
        let space = PseudoEuclideanSpace::new(n, m);
        let mut g = rng(seed);
        let mut v: Vec<f64> = (0..n + m).map(|_| g.random::<f64>() - 0.5).collect();
        if iso {
            let pos: f64 = v[..n].iter().map(|x| x * x).sum::<f64>().sqrt();
            let neg: f64 = v[n..].iter().map(|x| x * x).sum::<f64>().sqrt();
            for x in v[n..].iter_mut() {
                *x *= pos / neg;
            }
        }
        let want = if iso { VectorCase::Isotropic } else { VectorCase::Anisotropic };
        prop_assert_eq!(pseudo_euclidean_case(&space, &v, &tol()), want);
        let w = pseudo_euclidean_pinv(&space, &v, &tol()).unwrap();
        let chk = pseudo_euclidean_triple(&space, &v, &w).unwrap();
        prop_assert!(chk.passes(&tol()));
        prop_assert!(chk.triple.h.imag_norm() == 0.0);
        let back = pseudo_euclidean_pinv(&space, &w, &tol()).unwrap();
        let err: f64 = back.iter().zip(&v).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        prop_assert!(err <= 1e-9 * (1.0 + v.iter().map(|x| x * x).sum::<f64>().sqrt()));
    }

    #[test]
    fn hermitian_inverse_commutes(n in 1usize..=6, r in 0usize..=6, skew in any::<bool>(), seed in any::<u64>()) {
        let mut g = rng(seed);
        let b = sample::matrix_of_rank(&mut g, n, n, r.min(n));
        let mut a = &b + &b.adjoint();
        let class = if skew {
            a = &b - &b.adjoint();
            HermitianClass::SkewHermitian
        } else {
            HermitianClass::Hermitian
        };
        let x = hermitian_pinv(&a, class, &tol()).unwrap();
        let rep = verify_star(&a, &x, class, &tol()).unwrap();
        prop_assert!(rep.passed, "{rep:?}");
        prop_assert!(rep.commutator <= 1e-9 * (1.0 + a.frobenius_norm() * x.frobenius_norm()));
    }

    #[test]
    fn real_and_quaternion_hermitian_inverses(n in 1usize..=4, seed in any::<u64>()) {
        let mut g = rng(seed);
        let b = sample::real_matrix(&mut g, n, n).to_complex();
        let sym = RealMatrix::from_complex(&(&b + &b.transpose()), 0.0).unwrap();
        let x = hermitian_pinv_real(&sym, HermitianClass::Hermitian, &tol()).unwrap();
        prop_assert!(verify_star(&sym.to_complex(), &x.to_complex(), HermitianClass::Hermitian, &tol()).unwrap().passed);
        let q = sample::quaternion_matrix(&mut g, n, n);
        let h = q.matmul(&q.adjoint()).unwrap();
        let xq = hermitian_pinv_quaternion(&h, HermitianClass::Hermitian, &tol()).unwrap();
        prop_assert!(verify_star(&h.embed(), &xq.embed(), HermitianClass::Hermitian, &tol()).unwrap().passed);
    }
}

#[test]
fn vector_case_split_on_constructed_inputs() {
    let zero = vec![c(0.0, 0.0); 3];
    assert_eq!(vector_case(&zero, &tol()), VectorCase::Zero);
    assert_eq!(vector_pinv(&zero, &tol()), zero);
    let iso = vec![c(1.0, 0.0), c(0.0, 1.0)];
    assert_eq!(vector_case(&iso, &tol()), VectorCase::Isotropic);
    assert!(close(&vector_pinv(&iso, &tol()), &[c(0.5, 0.0), c(0.0, -0.5)], 1e-15));
    let an = vec![c(3.0, 0.0), c(4.0, 0.0)];
    assert_eq!(vector_case(&an, &tol()), VectorCase::Anisotropic);
    assert!(close(&vector_pinv(&an, &tol()), &[c(0.24, 0.0), c(0.32, 0.0)], 1e-15));
}

#[test]
fn wrong_candidate_breaks_the_vector_triple() {
    let v = vec![c(3.0, 0.0), c(4.0, 0.0)];
    let w: Vec<C64> = v.iter().map(|z| z / 25.0).collect();
    assert!(!vector_triple(&v, &w).unwrap().passes(&tol()));
    assert!(vector_triple(&v, &[c(1.0, 0.0)]).is_err());
}

#[test]
fn symmetry_violation_is_reported() {
    let g = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[2.0, 0.0]]);
    assert!(BilinearForm::new(Symmetry::Symmetric, g, &tol()).is_err());
}
