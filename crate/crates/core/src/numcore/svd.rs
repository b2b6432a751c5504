use super::matrix::{vec_norm, ComplexMatrix, C64, ZERO};
use super::tolerance::Tolerance;

const MAX_SWEEPS: usize = 100;

/// Thin singular value decomposition A = W · V*, where W = U·Σ has orthogonal
/// columns. Columns are sorted by decreasing singular value.
#[derive(Debug, Clone)]
pub struct Svd {
    /// A·V, columns mutually orthogonal with norms `sigma`.
    pub w: ComplexMatrix,
    pub sigma: Vec<f64>,
    /// Square unitary, cols × cols.
    pub v: ComplexMatrix,
}

/// One-sided Hestenes–Jacobi SVD. Deterministic, cyclic pair ordering.
pub fn svd(a: &ComplexMatrix) -> Svd {
    let (m, n) = a.shape();
    // Column-major working copies for cache-friendly column rotations.
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| a.column(j)).collect();
    let mut vcols: Vec<Vec<C64>> = (0..n)
        .map(|j| {
            let mut e = vec![ZERO; n];
            e[j] = C64::new(1.0, 0.0);
            e
        })
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                if alpha <= f64::MIN_POSITIVE || beta <= f64::MIN_POSITIVE {
                    continue;
                }
                let gamma: C64 = cols[p].iter().zip(&cols[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut cols, p, q, c, s, phase);
                rotate(&mut vcols, p, q, c, s, phase);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = cols.iter().map(|c| vec_norm(c)).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]).then(i.cmp(&j)));

    let mut w = ComplexMatrix::zeros(m, n);
    let mut v = ComplexMatrix::zeros(n, n);
    let mut sigma = Vec::with_capacity(n);
    for (k, &j) in order.iter().enumerate() {
        w.set_column(k, &cols[j]);
        v.set_column(k, &vcols[j]);
        sigma.push(norms[j]);
    }
    Svd { w, sigma, v }
}

// col_p <- c·col_p − s·conj(phase)·col_q, col_q <- s·col_p + c·conj(phase)·col_q
fn rotate(cols: &mut [Vec<C64>], p: usize, q: usize, c: f64, s: f64, phase: C64) {
    let ph = phase.conj();
    let (lo, hi) = cols.split_at_mut(q);
    let (cp, cq) = (&mut lo[p], &mut hi[0]);
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let yq = *y * ph;
        let xp = *x;
        *x = xp * c - yq * s;
        *y = xp * s + yq * c;
    }
}

/// Numerical rank decomposition of a matrix.
#[derive(Debug, Clone)]
pub struct RankDecomposition {
    pub rank: usize,
    pub singular_values: Vec<f64>,
    /// Orthonormal basis of the numerical kernel (cols × (cols − rank)).
    pub kernel_basis: ComplexMatrix,
    /// Orthonormal basis of the image (rows × rank).
    pub image_basis: ComplexMatrix,
    /// Orthonormal basis of the Hermitian orthocomplement of the kernel (cols × rank).
    pub coimage_basis: ComplexMatrix,
}

pub fn rank_decomposition(a: &ComplexMatrix, tol: &Tolerance) -> RankDecomposition {
    let (m, n) = a.shape();
    let d = svd(a);
    let smax = d.sigma.first().copied().unwrap_or(0.0);
    let cutoff = tol.rank_rtol * smax;
    let rank = d.sigma.iter().take_while(|&&s| s > cutoff && s > 0.0).count();

    let kernel_idx: Vec<usize> = (rank..n).collect();
    let coimage_idx: Vec<usize> = (0..rank).collect();
    let kernel_basis = d.v.select_columns(&kernel_idx);
    let coimage_basis = d.v.select_columns(&coimage_idx);

    let mut image: Vec<Vec<C64>> = (0..rank)
        .map(|k| d.w.column(k).iter().map(|z| z / d.sigma[k]).collect())
        .collect();
    reorthonormalize(&mut image);
    let image_basis = ComplexMatrix::from_columns(m, &image);

    RankDecomposition {
        rank,
        singular_values: d.sigma,
        kernel_basis,
        image_basis,
        coimage_basis,
    }
}

/// One modified Gram–Schmidt pass; inputs are already nearly orthonormal.
fn reorthonormalize(vs: &mut [Vec<C64>]) {
    for k in 0..vs.len() {
        for j in 0..k {
            let proj: C64 = vs[j].iter().zip(&vs[k]).map(|(a, b)| a.conj() * b).sum();
            let (done, rest) = vs.split_at_mut(k);
            for (x, y) in rest[0].iter_mut().zip(&done[j]) {
                *x -= proj * y;
            }
        }
        let nrm = vec_norm(&vs[k]);
        if nrm > 0.0 {
            vs[k].iter_mut().for_each(|x| *x /= nrm);
        }
    }
}

/// Conjugate transpose; free-function form of [`ComplexMatrix::adjoint`].
pub fn adjoint(a: &ComplexMatrix) -> ComplexMatrix {
    a.adjoint()
}

/// Spectral norm (largest singular value).
pub fn spectral_norm(a: &ComplexMatrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    svd(a).sigma.first().copied().unwrap_or(0.0)
}

/// Pseudoinverse from the SVD, V_r Σ_r⁻¹ U_r*.
pub fn pinv_svd(a: &ComplexMatrix, tol: &Tolerance) -> ComplexMatrix {
    let (m, n) = a.shape();
    let d = svd(a);
    let smax = d.sigma.first().copied().unwrap_or(0.0);
    let cutoff = tol.rank_rtol * smax;
    let mut out = ComplexMatrix::zeros(n, m);
    for (k, &s) in d.sigma.iter().enumerate() {
        if s <= cutoff || s == 0.0 {
            break;
        }
        let s2 = s * s;
        for i in 0..n {
            let vik = d.v[(i, k)];
            if vik == ZERO {
                continue;
            }
            for j in 0..m {
                out[(i, j)] += vik * d.w[(j, k)].conj() / s2;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::matrix::c;

    #[test]
    fn svd_reconstructs() {
        let a = ComplexMatrix::from_rows(&[
            &[c(1.0, 2.0), c(0.0, -1.0), c(3.0, 0.5)],
            &[c(-2.0, 0.0), c(1.0, 1.0), c(0.0, 0.0)],
        ]);
        let d = svd(&a);
        let rec = &d.w * &d.v.adjoint();
        assert!(rec.approx_eq(&a, 1e-12));
        let vv = &d.v.adjoint() * &d.v;
        assert!(vv.approx_eq(&ComplexMatrix::identity(3), 1e-12));
        assert!(d.sigma.windows(2).all(|w| w[0] >= w[1]));
        assert!(d.sigma[2] < 1e-12);
    }

    #[test]
    fn zero_matrix_has_full_kernel() {
        let r = rank_decomposition(&ComplexMatrix::zeros(2, 3), &Tolerance::default());
        assert_eq!(r.rank, 0);
        assert_eq!(r.kernel_basis.shape(), (3, 3));
        assert_eq!(r.image_basis.shape(), (2, 0));
        let g = &r.kernel_basis.adjoint() * &r.kernel_basis;
        assert!(g.approx_eq(&ComplexMatrix::identity(3), 1e-14));
    }

    #[test]
    fn identity_has_empty_kernel() {
        let r = rank_decomposition(&ComplexMatrix::identity(2), &Tolerance::default());
        assert_eq!(r.rank, 2);
        assert_eq!(r.kernel_basis.shape(), (2, 0));
    }

    #[test]
    fn ones_matrix_kernel() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]);
        let r = rank_decomposition(&a, &Tolerance::default());
        assert_eq!(r.rank, 1);
        let k = r.kernel_basis.column(0);
        // Orthonormal kernel vector is a unit-modulus multiple of (1,-1)/sqrt 2.
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let overlap = (k[0] * h - k[1] * h).norm();
        assert!((overlap - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pinv_svd_of_row() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0]]);
        let p = pinv_svd(&a, &Tolerance::default());
        let want = ComplexMatrix::from_real_rows(&[&[0.2], &[0.4]]);
        assert!(p.approx_eq(&want, 1e-14));
    }
}
