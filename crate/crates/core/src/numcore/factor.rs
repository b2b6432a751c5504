use super::matrix::{ComplexMatrix, C64, ONE, ZERO};
use crate::error::{Error, Result};

/// LU factorization with partial pivoting, PA = LU, stored packed.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: ComplexMatrix,
    perm: Vec<usize>,
}

impl Lu {
    pub fn new(a: &ComplexMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::ShapeMismatch(format!(
                "LU of non-square {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        let n = a.rows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = a.max_abs();
        for k in 0..n {
            let (piv, pval) = (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if pval <= f64::EPSILON * scale * n as f64 || pval == 0.0 {
                return Err(Error::Singular);
            }
            if piv != k {
                perm.swap(piv, k);
                for j in 0..n {
                    let t = lu[(k, j)];
                    lu[(k, j)] = lu[(piv, j)];
                    lu[(piv, j)] = t;
                }
            }
            let d = lu[(k, k)];
            for i in (k + 1)..n {
                let f = lu[(i, k)] / d;
                lu[(i, k)] = f;
                if f == ZERO {
                    continue;
                }
                for j in (k + 1)..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= f * u;
                }
            }
        }
        Ok(Self { lu, perm })
    }

    /// Solves A X = B column by column.
    pub fn solve(&self, b: &ComplexMatrix) -> ComplexMatrix {
        let n = self.lu.rows();
        assert_eq!(b.rows(), n);
        let mut x = ComplexMatrix::zeros(n, b.cols());
        for col in 0..b.cols() {
            let mut y: Vec<C64> = self.perm.iter().map(|&p| b[(p, col)]).collect();
            for i in 0..n {
                for j in 0..i {
                    let l = self.lu[(i, j)];
                    let yj = y[j];
                    y[i] -= l * yj;
                }
            }
            for i in (0..n).rev() {
                for j in (i + 1)..n {
                    let u = self.lu[(i, j)];
                    let yj = y[j];
                    y[i] -= u * yj;
                }
                y[i] /= self.lu[(i, i)];
            }
            x.set_column(col, &y);
        }
        x
    }
}

pub fn inverse(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let lu = Lu::new(a)?;
    Ok(lu.solve(&ComplexMatrix::identity(a.rows())))
}

/// Householder QR with column pivoting: A·P = Q·R.
#[derive(Debug, Clone)]
pub struct PivotedQr {
    /// rows × rows unitary.
    pub q: ComplexMatrix,
    /// rows × cols upper trapezoidal.
    pub r: ComplexMatrix,
    /// Column j of A·P is column perm[j] of A.
    pub perm: Vec<usize>,
}

pub fn pivoted_qr(a: &ComplexMatrix) -> PivotedQr {
    let (m, n) = a.shape();
    let mut r = a.clone();
    let mut q = ComplexMatrix::identity(m);
    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..m.min(n) {
        // Pivot: trailing column of largest remaining norm.
        let norms: Vec<f64> = (k..n)
            .map(|j| (k..m).map(|i| r[(i, j)].norm_sqr()).sum::<f64>())
            .collect();
        let (off, _) = norms
            .iter()
            .enumerate()
            .fold((0, -1.0), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
        let p = k + off;
        if p != k {
            perm.swap(p, k);
            for i in 0..m {
                let t = r[(i, k)];
                r[(i, k)] = r[(i, p)];
                r[(i, p)] = t;
            }
        }
        let x: Vec<C64> = (k..m).map(|i| r[(i, k)]).collect();
        let xn = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if xn == 0.0 {
            continue;
        }
        let phase = if x[0].norm() > 0.0 { x[0] / x[0].norm() } else { ONE };
        let alpha = -phase * xn;
        let mut v = x;
        v[0] -= alpha;
        let vn2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vn2 == 0.0 {
            continue;
        }
        // R <- H R on rows k.., H = I − 2 v v*/(v*v)
        for j in k..n {
            let dot: C64 = (k..m).map(|i| v[i - k].conj() * r[(i, j)]).sum();
            let f = dot * (2.0 / vn2);
            for i in k..m {
                let vi = v[i - k];
                r[(i, j)] -= f * vi;
            }
        }
        // Q <- Q H on columns k..
        for i in 0..m {
            let dot: C64 = (k..m).map(|l| q[(i, l)] * v[l - k]).sum();
            let f = dot * (2.0 / vn2);
            for l in k..m {
                let vl = v[l - k].conj();
                q[(i, l)] -= f * vl;
            }
        }
        for i in (k + 1)..m {
            r[(i, k)] = ZERO;
        }
    }
    PivotedQr { q, r, perm }
}

/// Matrix exponential by scaling and squaring with a Taylor kernel.
pub fn expm(a: &ComplexMatrix) -> ComplexMatrix {
    assert!(a.is_square());
    let n = a.rows();
    let norm = a.frobenius_norm();
    let mut s = 0u32;
    while norm / f64::from(1u32 << s.min(30)) > 0.25 && s < 60 {
        s += 1;
    }
    let scaled = a.scale_re(0.5f64.powi(s as i32));
    let mut term = ComplexMatrix::identity(n);
    let mut sum = ComplexMatrix::identity(n);
    for k in 1..=24 {
        term = (&term * &scaled).scale_re(1.0 / k as f64);
        sum = &sum + &term;
        if term.frobenius_norm() <= 1e-18 * sum.frobenius_norm() {
            break;
        }
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

/// Exact finite exponential series for a nilpotent matrix.
pub fn expm_nilpotent(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.rows();
    let mut term = ComplexMatrix::identity(n);
    let mut sum = ComplexMatrix::identity(n);
    for k in 1..=n {
        term = (&term * a).scale_re(1.0 / k as f64);
        sum = &sum + &term;
    }
    sum
}
