use super::matrix::{ComplexMatrix, C64, ZERO};

const MAX_SWEEPS: usize = 100;

/// Eigendecomposition A = V·diag(values)·V* of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Unitary, eigenvectors as columns in the order of `values`.
    pub vectors: ComplexMatrix,
}

/// Cyclic complex Jacobi eigensolver. Only the Hermitian part of `a` is used.
pub fn hermitian_eigen(a: &ComplexMatrix) -> HermitianEigen {
    assert!(a.is_square(), "eigen requires a square matrix");
    let n = a.rows();
    let mut m = (a + &a.adjoint()).scale_re(0.5);
    let mut v = ComplexMatrix::identity(n);
    let scale = m.frobenius_norm().max(f64::MIN_POSITIVE);

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-16 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                let g = apq.norm();
                if g <= 1e-18 * scale {
                    continue;
                }
                let phase = apq / g;
                let theta = (m[(q, q)].re - m[(p, p)].re) / (2.0 * g);
                let t = if theta == 0.0 {
                    1.0
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let ph = phase.conj();
                // Columns: A <- A·G
                for r in 0..n {
                    let x = m[(r, p)];
                    let y = m[(r, q)] * ph;
                    m[(r, p)] = x * c - y * s;
                    m[(r, q)] = x * s + y * c;
                    let x = v[(r, p)];
                    let y = v[(r, q)] * ph;
                    v[(r, p)] = x * c - y * s;
                    v[(r, q)] = x * s + y * c;
                }
                // Rows: A <- G*·A
                let phc = phase;
                for col in 0..n {
                    let x = m[(p, col)];
                    let y = m[(q, col)] * phc;
                    m[(p, col)] = x * c - y * s;
                    m[(q, col)] = x * s + y * c;
                }
                m[(p, q)] = ZERO;
                m[(q, p)] = ZERO;
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]).then(i.cmp(&j)));
    HermitianEigen {
        values: order.iter().map(|&i| diag[i]).collect(),
        vectors: v.select_columns(&order),
    }
}

/// Rebuilds V·diag(f(λ))·V* from an eigendecomposition.
pub fn spectral_map(e: &HermitianEigen, f: impl Fn(f64) -> C64) -> ComplexMatrix {
    let n = e.values.len();
    let mut d = ComplexMatrix::zeros(n, n);
    for (i, &l) in e.values.iter().enumerate() {
        d[(i, i)] = f(l);
    }
    &(&e.vectors * &d) * &e.vectors.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::matrix::c;

    #[test]
    fn diagonalizes_complex_hermitian() {
        let a = ComplexMatrix::from_rows(&[
            &[c(2.0, 0.0), c(1.0, -1.0), c(0.0, 0.5)],
            &[c(1.0, 1.0), c(-1.0, 0.0), c(3.0, 0.0)],
            &[c(0.0, -0.5), c(3.0, 0.0), c(0.5, 0.0)],
        ]);
        let e = hermitian_eigen(&a);
        let rec = spectral_map(&e, |l| c(l, 0.0));
        assert!(rec.approx_eq(&a, 1e-12), "{rec:?}");
        let g = &e.vectors.adjoint() * &e.vectors;
        assert!(g.approx_eq(&ComplexMatrix::identity(3), 1e-12));
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        let tr: f64 = e.values.iter().sum();
        assert!((tr - 1.5).abs() < 1e-12);
    }

    #[test]
    fn empty_and_scalar() {
        let e = hermitian_eigen(&ComplexMatrix::zeros(0, 0));
        assert!(e.values.is_empty());
        let e = hermitian_eigen(&ComplexMatrix::real_diag(&[-3.0]));
        assert_eq!(e.values, vec![-3.0]);
    }
}
