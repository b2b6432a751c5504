//! Classical Moore–Penrose inverse over ℂ, ℝ and ℍ.

use crate::error::{Error, Result};
use crate::numcore::{
    inverse, pinv_svd, pivoted_qr, rank_decomposition, ComplexMatrix, Quaternion, QuaternionMatrix, RealMatrix,
    Tolerance,
};

/// Residuals of the four Penrose conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenroseReport {
    /// ‖AXA − A‖
    pub r1: f64,
    /// ‖XAX − X‖
    pub r2: f64,
    /// ‖AX − (AX)*‖
    pub r3: f64,
    /// ‖XA − (XA)*‖
    pub r4: f64,
    /// 1 + ‖A‖ + ‖X‖; residuals pass when at most residual_tol times this.
    pub scale: f64,
    pub passed: bool,
}

impl PenroseReport {
    pub fn max_residual(&self) -> f64 {
        self.r1.max(self.r2).max(self.r3).max(self.r4)
    }

    pub fn relative(&self) -> f64 {
        self.max_residual() / self.scale
    }

    fn new(r: [f64; 4], scale: f64, tol: &Tolerance) -> Self {
        let passed = r.iter().all(|&x| x <= tol.residual_tol * scale);
        Self {
            r1: r[0],
            r2: r[1],
            r3: r[2],
            r4: r[3],
            scale,
            passed,
        }
    }
}

/// Pseudoinverse built on the kernel complement and the image:
/// A⁺ = R (Q* A R)⁻¹ Q*, with R, Q orthonormal bases of (Ker A)^⊥ and Im A.
pub fn pinv(a: &ComplexMatrix, tol: &Tolerance) -> ComplexMatrix {
    let d = rank_decomposition(a, tol);
    if d.rank == 0 {
        return ComplexMatrix::zeros(a.cols(), a.rows());
    }
    let r = &d.coimage_basis;
    let q = &d.image_basis;
    let restricted = &(&q.adjoint() * a) * r;
    match inverse(&restricted) {
        Ok(inv) => &(r * &inv) * &q.adjoint(),
        Err(_) => pinv_svd(a, tol),
    }
}

/// Pseudoinverse from a pivoted-QR full-rank factorization A = B·C:
/// A⁺ = C*(CC*)⁻¹(B*B)⁻¹B*, with B orthonormal.
pub fn pinv_factorization(a: &ComplexMatrix, tol: &Tolerance) -> ComplexMatrix {
    let (m, n) = a.shape();
    let qr = pivoted_qr(a);
    let r00 = if m.min(n) > 0 { qr.r[(0, 0)].norm() } else { 0.0 };
    let rank = (0..m.min(n))
        .take_while(|&k| {
            let v = qr.r[(k, k)].norm();
            v > 0.0 && v > tol.rank_rtol * r00
        })
        .count();
    if rank == 0 {
        return ComplexMatrix::zeros(n, m);
    }
    let b = qr.q.submatrix(0, 0, m, rank);
    let mut c = ComplexMatrix::zeros(rank, n);
    for (j, &pj) in qr.perm.iter().enumerate() {
        for i in 0..rank {
            c[(i, pj)] = qr.r[(i, j)];
        }
    }
    let cc = &c * &c.adjoint();
    match inverse(&cc) {
        Ok(inv) => &(&c.adjoint() * &inv) * &b.adjoint(),
        Err(_) => pinv_svd(a, tol),
    }
}

pub fn verify_penrose(a: &ComplexMatrix, x: &ComplexMatrix, tol: &Tolerance) -> Result<PenroseReport> {
    if x.shape() != (a.cols(), a.rows()) {
        return Err(Error::ShapeMismatch(format!(
            "candidate is {}x{}, expected {}x{}",
            x.rows(),
            x.cols(),
            a.cols(),
            a.rows()
        )));
    }
    let ax = a * x;
    let xa = x * a;
    let r = [
        (&(&ax * a) - a).frobenius_norm(),
        (&(&xa * x) - x).frobenius_norm(),
        ax.hermitian_defect(),
        xa.hermitian_defect(),
    ];
    Ok(PenroseReport::new(
        r,
        1.0 + a.frobenius_norm() + x.frobenius_norm(),
        tol,
    ))
}

/// Real pseudoinverse through the complex engine; the discarded imaginary mass is checked.
pub fn pinv_real(a: &RealMatrix, tol: &Tolerance) -> Result<RealMatrix> {
    let p = pinv(&a.to_complex(), tol);
    RealMatrix::from_complex(&p, tol.residual_tol * (1.0 + p.frobenius_norm()))
}

/// Quaternionic pseudoinverse through the complex embedding.
pub fn pinv_quaternion(a: &QuaternionMatrix, tol: &Tolerance) -> Result<QuaternionMatrix> {
    let p = pinv(&a.embed(), tol);
    QuaternionMatrix::from_embedding(&p, tol.residual_tol * (1.0 + p.frobenius_norm()))
}

/// Penrose conditions evaluated with quaternionic arithmetic and adjoint.
pub fn verify_penrose_quaternion(a: &QuaternionMatrix, x: &QuaternionMatrix, tol: &Tolerance) -> Result<PenroseReport> {
    if (x.rows(), x.cols()) != (a.cols(), a.rows()) {
        return Err(Error::ShapeMismatch(format!(
            "candidate is {}x{}, expected {}x{}",
            x.rows(),
            x.cols(),
            a.cols(),
            a.rows()
        )));
    }
    let ax = a.matmul(x)?;
    let xa = x.matmul(a)?;
    let diff = |p: &QuaternionMatrix, q: &QuaternionMatrix| -> f64 {
        p.as_slice()
            .iter()
            .zip(q.as_slice())
            .map(|(u, v): (&Quaternion, &Quaternion)| (*u - *v).norm_sqr())
            .sum::<f64>()
            .sqrt()
    };
    let r = [
        diff(&ax.matmul(a)?, a),
        diff(&xa.matmul(x)?, x),
        diff(&ax, &ax.adjoint()),
        diff(&xa, &xa.adjoint()),
    ];
    Ok(PenroseReport::new(
        r,
        1.0 + a.frobenius_norm() + x.frobenius_norm(),
        tol,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::c;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn basic_examples() {
        let i2 = ComplexMatrix::identity(2);
        assert!(pinv(&i2, &tol()).approx_eq(&i2, 1e-14));
        assert_eq!(pinv(&ComplexMatrix::zeros(2, 3), &tol()), ComplexMatrix::zeros(3, 2));
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0]]);
        let want = ComplexMatrix::from_real_rows(&[&[0.2], &[0.4]]);
        assert!(pinv(&a, &tol()).approx_eq(&want, 1e-14));
        assert!(pinv_factorization(&a, &tol()).approx_eq(&want, 1e-14));
    }

    #[test]
    fn verify_examples() {
        let i2 = ComplexMatrix::identity(2);
        assert!(verify_penrose(&i2, &i2, &tol()).unwrap().passed);
        let a = ComplexMatrix::from_real_rows(&[&[2.0]]);
        let r = verify_penrose(&a, &a.adjoint(), &tol()).unwrap();
        assert!(!r.passed);
        assert!((r.r1 - 6.0).abs() < 1e-14);
        assert!(verify_penrose(&a, &ComplexMatrix::zeros(2, 1), &tol()).is_err());
    }

    #[test]
    fn real_examples() {
        let a = RealMatrix::from_rows(&[&[3.0, 4.0]]);
        let p = pinv_real(&a, &tol()).unwrap();
        assert!((p[(0, 0)] - 3.0 / 25.0).abs() < 1e-15);
        assert!((p[(1, 0)] - 4.0 / 25.0).abs() < 1e-15);
        let d = RealMatrix::from_rows(&[&[1.0, 0.0], &[0.0, 0.0]]);
        assert_eq!(pinv_real(&d, &tol()).unwrap(), d);
        let z = RealMatrix::from_rows(&[&[0.0]]);
        assert_eq!(pinv_real(&z, &tol()).unwrap(), z);
    }

    #[test]
    fn quaternion_examples() {
        let q = Quaternion::new(0.0, 1.0, 1.0, 0.0);
        let a = QuaternionMatrix::from_vec(1, 1, vec![q]).unwrap();
        let p = pinv_quaternion(&a, &tol()).unwrap();
        let want = Quaternion::new(0.0, -0.5, -0.5, 0.0);
        assert!((p.get(0, 0) - want).norm_sqr().sqrt() < 1e-14);
        assert!(verify_penrose_quaternion(&a, &p, &tol()).unwrap().passed);
        let i = QuaternionMatrix::identity(2);
        assert_eq!(pinv_quaternion(&i, &tol()).unwrap().frobenius_norm(), 2f64.sqrt());
        let z = QuaternionMatrix::zeros(1, 2);
        let pz = pinv_quaternion(&z, &tol()).unwrap();
        assert_eq!((pz.rows(), pz.cols()), (2, 1));
        assert_eq!(pz.frobenius_norm(), 0.0);
    }

    #[test]
    fn complex_rank_one() {
        let a = ComplexMatrix::from_rows(&[&[c(1.0, 1.0), c(2.0, 0.0)], &[c(2.0, 2.0), c(4.0, 0.0)]]);
        let p = pinv(&a, &tol());
        assert!(verify_penrose(&a, &p, &tol()).unwrap().passed);
        assert!(p.approx_eq(&pinv_factorization(&a, &tol()), 1e-13));
    }
}
