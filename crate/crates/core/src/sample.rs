//! Random test data: Gaussian matrices of prescribed rank, unitaries, graded elements.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::graded::GradedAlgebra;
use crate::numcore::{pivoted_qr, ComplexMatrix, Quaternion, QuaternionMatrix, RealMatrix, C64};

pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn complex_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

pub fn real_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> RealMatrix {
    let data = (0..rows * cols).map(|_| rng.sample(StandardNormal)).collect();
    RealMatrix::from_vec(rows, cols, data).expect("finite samples")
}

pub fn complex_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<C64> {
    (0..n).map(|_| complex_normal(rng)).collect()
}

/// Product of random rows×rank and rank×cols factors.
pub fn matrix_of_rank<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, rank: usize) -> ComplexMatrix {
    assert!(rank <= rows.min(cols));
    &complex_matrix(rng, rows, rank) * &complex_matrix(rng, rank, cols)
}

pub fn real_matrix_of_rank<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, rank: usize) -> RealMatrix {
    let a = real_matrix(rng, rows, rank).to_complex();
    let b = real_matrix(rng, rank, cols).to_complex();
    RealMatrix::from_complex(&(&a * &b), 0.0).expect("real product")
}

/// Haar-like unitary from the QR factor of a Gaussian matrix.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    pivoted_qr(&complex_matrix(rng, n, n)).q
}

pub fn real_orthogonal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    pivoted_qr(&real_matrix(rng, n, n).to_complex())
        .q
        .map(|z| C64::new(z.re, 0.0))
}

pub fn quaternion<R: Rng + ?Sized>(rng: &mut R) -> Quaternion {
    Quaternion::new(
        rng.sample(StandardNormal),
        rng.sample(StandardNormal),
        rng.sample(StandardNormal),
        rng.sample(StandardNormal),
    )
}

pub fn quaternion_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> QuaternionMatrix {
    let data = (0..rows * cols).map(|_| quaternion(rng)).collect();
    QuaternionMatrix::from_vec(rows, cols, data).expect("finite samples")
}

pub fn quaternion_matrix_of_rank<R: Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    rank: usize,
) -> QuaternionMatrix {
    let a = quaternion_matrix(rng, rows, rank);
    let b = quaternion_matrix(rng, rank, cols);
    a.matmul(&b).expect("compatible factors")
}

/// Random element of g_m with Gaussian coordinates.
pub fn graded_element<R: Rng + ?Sized>(rng: &mut R, alg: &GradedAlgebra, m: i32) -> ComplexMatrix {
    let basis = alg.component(m);
    let coeffs = complex_vector(rng, basis.len());
    GradedAlgebra::combine(basis, &coeffs, alg.ambient_dim())
}

/// Random complex symmetric (sign = 1) or skew (sign = −1) matrix of the given rank.
pub fn form_of_rank<R: Rng + ?Sized>(rng: &mut R, n: usize, rank: usize, sign: f64) -> ComplexMatrix {
    if sign > 0.0 {
        let b = complex_matrix(rng, n, rank);
        &b * &b.transpose()
    } else {
        assert!(rank.is_multiple_of(2), "skew forms have even rank");
        let b = complex_matrix(rng, n, rank);
        let mut j = ComplexMatrix::zeros(rank, rank);
        for p in 0..rank / 2 {
            j[(2 * p, 2 * p + 1)] = C64::new(1.0, 0.0);
            j[(2 * p + 1, 2 * p)] = C64::new(-1.0, 0.0);
        }
        &(&b * &j) * &b.transpose()
    }
}
