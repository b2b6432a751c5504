//! Closed-form MP-inverses: bilinear forms, vectors with a bilinear scalar
//! product, pseudo-Euclidean vectors, Hermitian and skew-Hermitian matrices.

use crate::error::{Error, Result};
use crate::graded::{bracket, GradedAlgebra, Kind, Sl2Triple};
use crate::numcore::{
    hermitian_eigen, inverse, rank_decomposition, spectral_map, vec_norm, ComplexMatrix, QuaternionMatrix, RealMatrix,
    Tolerance, C64, I, ZERO,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    Symmetric,
    Skew,
}

impl Symmetry {
    pub fn sign(self) -> f64 {
        match self {
            Symmetry::Symmetric => 1.0,
            Symmetry::Skew => -1.0,
        }
    }
}

/// A bilinear form ω(x, y) = xᵀ·gram·y with gramᵀ = ±gram.
#[derive(Debug, Clone, PartialEq)]
pub struct BilinearForm {
    symmetry: Symmetry,
    gram: ComplexMatrix,
}

impl BilinearForm {
    pub fn new(symmetry: Symmetry, gram: ComplexMatrix, tol: &Tolerance) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::ShapeMismatch(format!(
                "gram matrix is {}x{}",
                gram.rows(),
                gram.cols()
            )));
        }
        if !gram.is_finite() {
            return Err(Error::NonFinite);
        }
        let defect = (&gram.transpose() - &gram.scale_re(symmetry.sign())).frobenius_norm();
        if defect > tol.residual_tol * (1.0 + gram.frobenius_norm()) {
            return Err(Error::SymmetryViolation { defect });
        }
        Ok(Self { symmetry, gram })
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn gram(&self) -> &ComplexMatrix {
        &self.gram
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    /// ω(x, y)
    pub fn eval(&self, x: &[C64], y: &[C64]) -> C64 {
        x.iter().zip(self.gram.mul_vec(y)).map(|(a, b)| a * b).sum()
    }
}

/// MP-inverse of a form, built on the annihilator of its kernel.
///
/// With R an orthonormal basis of the Hermitian complement of Ker ω, the induced
/// form Rᵀ·gram·R is nondegenerate; its inverse is carried back by R and
/// extended by zero.
pub fn form_pinv(w: &BilinearForm, tol: &Tolerance) -> Result<BilinearForm> {
    let d = rank_decomposition(&w.gram, tol);
    let n = w.dim();
    if d.rank == 0 {
        return Ok(BilinearForm {
            symmetry: w.symmetry,
            gram: ComplexMatrix::zeros(n, n),
        });
    }
    let r = &d.coimage_basis;
    let induced = &(&r.transpose() * &w.gram) * r;
    let inv = inverse(&induced).map_err(|_| Error::DegenerateForm)?;
    let mut g = &(r * &inv) * &r.transpose();
    // Restore exact (skew-)symmetry lost to rounding.
    g = (&g + &g.transpose().scale_re(w.symmetry.sign())).scale_re(0.5);
    Ok(BilinearForm {
        symmetry: w.symmetry,
        gram: g,
    })
}

/// Which branch of the three-case vector formula applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VectorCase {
    Zero,
    Isotropic,
    Anisotropic,
}

fn bilinear(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// Branch of the vector formula: (v,v) compared against residual_tol·(v̄,v).
pub fn vector_case(v: &[C64], tol: &Tolerance) -> VectorCase {
    let herm = vec_norm(v).powi(2);
    if herm == 0.0 {
        VectorCase::Zero
    } else if bilinear(v, v).norm() <= tol.residual_tol * herm {
        VectorCase::Isotropic
    } else {
        VectorCase::Anisotropic
    }
}

/// 2v/(v,v) if (v,v) ≠ 0; v̄/(v̄,v) if v is isotropic and nonzero; 0 at 0.
pub fn vector_pinv(v: &[C64], tol: &Tolerance) -> Vec<C64> {
    match vector_case(v, tol) {
        VectorCase::Zero => vec![ZERO; v.len()],
        VectorCase::Isotropic => {
            let herm = vec_norm(v).powi(2);
            v.iter().map(|z| z.conj() / herm).collect()
        }
        VectorCase::Anisotropic => {
            let q = bilinear(v, v);
            v.iter().map(|z| z * 2.0 / q).collect()
        }
    }
}

/// ℝ^{n+m} with {u, v} = (u, I v), I = diag(Id_n, −Id_m).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PseudoEuclideanSpace {
    pub n: usize,
    pub m: usize,
}

impl PseudoEuclideanSpace {
    pub fn new(n: usize, m: usize) -> Self {
        Self { n, m }
    }

    pub fn dim(&self) -> usize {
        self.n + self.m
    }

    pub fn apply_i(&self, v: &[f64]) -> Vec<f64> {
        v.iter()
            .enumerate()
            .map(|(k, &x)| if k < self.n { x } else { -x })
            .collect()
    }

    pub fn i_matrix(&self) -> ComplexMatrix {
        let d: Vec<f64> = (0..self.dim()).map(|k| if k < self.n { 1.0 } else { -1.0 }).collect();
        ComplexMatrix::real_diag(&d)
    }

    /// {u, v}
    pub fn product(&self, u: &[f64], v: &[f64]) -> f64 {
        u.iter().zip(self.apply_i(v)).map(|(a, b)| a * b).sum()
    }
}

pub fn pseudo_euclidean_case(space: &PseudoEuclideanSpace, v: &[f64], tol: &Tolerance) -> VectorCase {
    let euclid: f64 = v.iter().map(|x| x * x).sum();
    if euclid == 0.0 {
        VectorCase::Zero
    } else if space.product(v, v).abs() <= tol.residual_tol * euclid {
        VectorCase::Isotropic
    } else {
        VectorCase::Anisotropic
    }
}

/// −v/{v,v} if {v,v} ≠ 0; −Iv/(2(v,v)) if isotropic and nonzero; 0 at 0.
pub fn pseudo_euclidean_pinv(space: &PseudoEuclideanSpace, v: &[f64], tol: &Tolerance) -> Result<Vec<f64>> {
    if v.len() != space.dim() {
        return Err(Error::ShapeMismatch(format!(
            "vector of length {} in a space of dimension {}",
            v.len(),
            space.dim()
        )));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(match pseudo_euclidean_case(space, v, tol) {
        VectorCase::Zero => vec![0.0; v.len()],
        VectorCase::Isotropic => {
            let euclid: f64 = v.iter().map(|x| x * x).sum();
            space.apply_i(v).iter().map(|x| -x / (2.0 * euclid)).collect()
        }
        VectorCase::Anisotropic => {
            let q = space.product(v, v);
            v.iter().map(|x| -x / q).collect()
        }
    })
}

/// An sl2-triple built from a closed-form inverse, with the Hermitian defect of its h.
#[derive(Debug, Clone)]
pub struct EmbeddedCheck {
    pub triple: Sl2Triple,
    pub hermitian_defect: f64,
}

impl EmbeddedCheck {
    pub fn passes(&self, tol: &Tolerance) -> bool {
        self.triple.passes(tol) && self.hermitian_defect <= tol.residual_tol * (1.0 + self.triple.h.frobenius_norm())
    }
}

/// so_{n+2} graded by blocks (1, n, 1) with form [[0,0,1],[0,mid,0],[1,0,0]];
/// e has X₂₃ = v, X₁₂ = −vᵀ·mid and f has Y₂₁ = p, Y₃₂ = q.
fn vector_embedding(mid: &ComplexMatrix, v: &[C64], p: &[C64], q: &[C64]) -> Result<EmbeddedCheck> {
    let n = mid.rows();
    if v.len() != n || p.len() != n || q.len() != n {
        return Err(Error::ShapeMismatch(format!("vectors must have length {n}")));
    }
    let mut form = ComplexMatrix::zeros(n + 2, n + 2);
    form[(0, n + 1)] = C64::new(1.0, 0.0);
    form[(n + 1, 0)] = C64::new(1.0, 0.0);
    form.set_submatrix(1, 1, mid);
    let alg = GradedAlgebra::with_form(Kind::So, &[1, n, 1], form, &Tolerance::default())?;
    let col = ComplexMatrix::column_vector(v);
    let mut e = alg.embed_block(&col, 1, 2);
    e = &e + &alg.embed_block(&(&col.transpose() * mid).scale_re(-1.0), 0, 1);
    let mut f = alg.embed_block(&ComplexMatrix::column_vector(p), 1, 0);
    f = &f + &alg.embed_block(&ComplexMatrix::column_vector(q).transpose(), 2, 1);
    let h = bracket(&e, &f)?;
    let hermitian_defect = h.hermitian_defect();
    Ok(EmbeddedCheck {
        triple: Sl2Triple::new(e, h, f),
        hermitian_defect,
    })
}

/// Embeds v and a candidate w = v⁺ into g_{±1} of so_{n+2} and forms the triple.
pub fn vector_triple(v: &[C64], w: &[C64]) -> Result<EmbeddedCheck> {
    let neg: Vec<C64> = w.iter().map(|z| -z).collect();
    vector_embedding(&ComplexMatrix::identity(v.len()), v, &neg, w)
}

/// As [`vector_triple`] for the pseudo-Euclidean form; f carries 2w and −2wᵀI.
pub fn pseudo_euclidean_triple(space: &PseudoEuclideanSpace, v: &[f64], w: &[f64]) -> Result<EmbeddedCheck> {
    let cv: Vec<C64> = v.iter().map(|&x| C64::new(x, 0.0)).collect();
    let p: Vec<C64> = w.iter().map(|&x| C64::new(2.0 * x, 0.0)).collect();
    let q: Vec<C64> = space.apply_i(w).iter().map(|&x| C64::new(-2.0 * x, 0.0)).collect();
    vector_embedding(&space.i_matrix(), &cv, &p, &q)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HermitianClass {
    Hermitian,
    SkewHermitian,
}

impl HermitianClass {
    fn sign(self) -> f64 {
        match self {
            HermitianClass::Hermitian => 1.0,
            HermitianClass::SkewHermitian => -1.0,
        }
    }
}

/// Residuals of AXA = A, XAX = X, [A, X] = 0 and of the symmetry class of X.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarReport {
    pub r1: f64,
    pub r2: f64,
    pub commutator: f64,
    pub class_defect: f64,
    pub scale: f64,
    pub passed: bool,
}

pub fn verify_star(a: &ComplexMatrix, x: &ComplexMatrix, class: HermitianClass, tol: &Tolerance) -> Result<StarReport> {
    if !a.is_square() || x.shape() != a.shape() {
        return Err(Error::ShapeMismatch(format!(
            "need square matrices of equal size, got {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            x.rows(),
            x.cols()
        )));
    }
    let r1 = (&(&(a * x) * a) - a).frobenius_norm();
    let r2 = (&(&(x * a) * x) - x).frobenius_norm();
    let commutator = a.commutator(x).frobenius_norm();
    let class_defect = (x - &x.adjoint().scale_re(class.sign())).frobenius_norm();
    let scale = 1.0 + a.frobenius_norm() + x.frobenius_norm();
    let passed = [r1, r2, commutator, class_defect]
        .iter()
        .all(|&r| r <= tol.residual_tol * scale);
    Ok(StarReport {
        r1,
        r2,
        commutator,
        class_defect,
        scale,
        passed,
    })
}

/// MP-inverse of a Hermitian or skew-Hermitian matrix by spectral inversion.
pub fn hermitian_pinv(a: &ComplexMatrix, class: HermitianClass, tol: &Tolerance) -> Result<ComplexMatrix> {
    if !a.is_square() {
        return Err(Error::ShapeMismatch(format!("{}x{} is not square", a.rows(), a.cols())));
    }
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let defect = (a - &a.adjoint().scale_re(class.sign())).frobenius_norm();
    if defect > tol.residual_tol * (1.0 + a.frobenius_norm()) {
        return Err(Error::SymmetryViolation { defect });
    }
    let b = match class {
        HermitianClass::Hermitian => a.clone(),
        HermitianClass::SkewHermitian => a.scale(I),
    };
    let eig = hermitian_eigen(&b);
    let lmax = eig.values.iter().fold(0.0f64, |m, l| m.max(l.abs()));
    let cutoff = tol.rank_rtol * lmax;
    let bp = spectral_map(&eig, |l| {
        if l.abs() > cutoff && l != 0.0 {
            C64::new(1.0 / l, 0.0)
        } else {
            ZERO
        }
    });
    let x = match class {
        HermitianClass::Hermitian => bp,
        HermitianClass::SkewHermitian => bp.scale(I),
    };
    Ok((&x + &x.adjoint().scale_re(class.sign())).scale_re(0.5))
}

/// Real symmetric (Hermitian class) or skew-symmetric input.
pub fn hermitian_pinv_real(a: &RealMatrix, class: HermitianClass, tol: &Tolerance) -> Result<RealMatrix> {
    let x = hermitian_pinv(&a.to_complex(), class, tol)?;
    RealMatrix::from_complex(&x, tol.residual_tol * (1.0 + x.frobenius_norm()))
}

/// Quaternionic input, through the complex embedding.
pub fn hermitian_pinv_quaternion(
    a: &QuaternionMatrix,
    class: HermitianClass,
    tol: &Tolerance,
) -> Result<QuaternionMatrix> {
    let x = hermitian_pinv(&a.embed(), class, tol)?;
    QuaternionMatrix::from_embedding(&x, tol.residual_tol * (1.0 + x.frobenius_norm()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::c;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn cv(v: &[(f64, f64)]) -> Vec<C64> {
        v.iter().map(|&(a, b)| c(a, b)).collect()
    }

    #[test]
    fn form_examples() {
        let w = BilinearForm::new(Symmetry::Symmetric, ComplexMatrix::real_diag(&[2.0, 0.0]), &tol()).unwrap();
        let p = form_pinv(&w, &tol()).unwrap();
        assert!(p.gram().approx_eq(&ComplexMatrix::real_diag(&[0.5, 0.0]), 1e-14));

        let j = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[-1.0, 0.0]]);
        let w = BilinearForm::new(Symmetry::Skew, j.clone(), &tol()).unwrap();
        let p = form_pinv(&w, &tol()).unwrap();
        assert!(p.gram().approx_eq(&(-&j), 1e-14));
        assert_eq!(p.symmetry(), Symmetry::Skew);

        let z = BilinearForm::new(Symmetry::Skew, ComplexMatrix::zeros(3, 3), &tol()).unwrap();
        assert_eq!(form_pinv(&z, &tol()).unwrap().gram(), &ComplexMatrix::zeros(3, 3));

        assert!(matches!(
            BilinearForm::new(Symmetry::Symmetric, j, &tol()),
            Err(Error::SymmetryViolation { .. })
        ));
    }

    #[test]
    fn vector_examples() {
        assert_eq!(
            vector_pinv(&cv(&[(0.0, 0.0), (0.0, 0.0)]), &tol()),
            cv(&[(0.0, 0.0), (0.0, 0.0)])
        );
        let p = vector_pinv(&cv(&[(3.0, 0.0), (4.0, 0.0)]), &tol());
        assert!(vec_norm(&[p[0] - c(6.0 / 25.0, 0.0), p[1] - c(8.0 / 25.0, 0.0)]) < 1e-15);
        let v = cv(&[(1.0, 0.0), (0.0, 1.0)]);
        assert_eq!(vector_case(&v, &tol()), VectorCase::Isotropic);
        let p = vector_pinv(&v, &tol());
        assert!(vec_norm(&[p[0] - c(0.5, 0.0), p[1] - c(0.0, -0.5)]) < 1e-15);
    }

    #[test]
    fn pseudo_euclidean_examples() {
        let s = PseudoEuclideanSpace::new(1, 1);
        assert_eq!(pseudo_euclidean_pinv(&s, &[0.0, 0.0], &tol()).unwrap(), vec![0.0, 0.0]);
        assert_eq!(pseudo_euclidean_pinv(&s, &[1.0, 0.0], &tol()).unwrap(), vec![-1.0, 0.0]);
        assert_eq!(
            pseudo_euclidean_pinv(&s, &[1.0, 1.0], &tol()).unwrap(),
            vec![-0.25, 0.25]
        );
        assert!(pseudo_euclidean_pinv(&s, &[1.0], &tol()).is_err());
    }

    #[test]
    fn hermitian_examples() {
        let a = ComplexMatrix::real_diag(&[1.0, -1.0]);
        let x = hermitian_pinv(&a, HermitianClass::Hermitian, &tol()).unwrap();
        assert!(x.approx_eq(&a, 1e-14));
        let a = ComplexMatrix::real_diag(&[2.0, 0.0]);
        let x = hermitian_pinv(&a, HermitianClass::Hermitian, &tol()).unwrap();
        assert!(x.approx_eq(&ComplexMatrix::real_diag(&[0.5, 0.0]), 1e-14));
        assert!(verify_star(&a, &x, HermitianClass::Hermitian, &tol()).unwrap().passed);
        let s = RealMatrix::from_rows(&[&[0.0, 1.0], &[-1.0, 0.0]]);
        let x = hermitian_pinv_real(&s, HermitianClass::SkewHermitian, &tol()).unwrap();
        let want = RealMatrix::from_rows(&[&[0.0, -1.0], &[1.0, 0.0]]);
        assert!(x.to_complex().approx_eq(&want.to_complex(), 1e-14));
        assert!(matches!(
            hermitian_pinv(&ComplexMatrix::unit(2, 2, 0, 1), HermitianClass::Hermitian, &tol()),
            Err(Error::SymmetryViolation { .. })
        ));
    }
}
