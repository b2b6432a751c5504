//! Maps F ∈ Hom(U, V) into a space V with a symmetric or symplectic form:
//! orbit labels (a, b), the constructive inverse for b = 0 and b = a, and a
//! certified refusal otherwise.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::classical::pinv;
use crate::error::{Error, Result};
use crate::forms::{BilinearForm, Symmetry};
use crate::graded::{minimal_characteristic, GradedAlgebra, Kind};
use crate::numcore::{inverse, rank_decomposition, svd, ComplexMatrix, Tolerance, C64, I, ONE};
use crate::sample;

/// a = rank F, b = dim of the radical of ω restricted to Im F.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrbitLabel {
    pub a: usize,
    pub b: usize,
}

impl OrbitLabel {
    /// Labels with an inverse: b = 0 or b = a.
    pub fn is_moore_penrose(&self) -> bool {
        self.b == 0 || self.b == self.a
    }
}

/// Residuals of the Hermitian conditions (*) and the equations (**).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormAdjointReport {
    /// ‖GF − (GF)*‖
    pub residual_gf_hermitian: f64,
    /// ‖D − D*‖, D = FG − (FG)^#
    pub residual_fg_diff_hermitian: f64,
    /// ‖F − 2FGF + (FG)^#F‖
    pub residual_star1: f64,
    /// ‖G − 2GFG + G(FG)^#‖
    pub residual_star2: f64,
    pub scale: f64,
    pub passed: bool,
}

impl FormAdjointReport {
    pub fn max_residual(&self) -> f64 {
        self.residual_gf_hermitian
            .max(self.residual_fg_diff_hermitian)
            .max(self.residual_star1)
            .max(self.residual_star2)
    }

    pub fn relative(&self) -> f64 {
        self.max_residual() / self.scale
    }
}

/// ω-adjoint A^# = gram⁻¹·Aᵀ·gram.
pub fn sharp(w: &BilinearForm, a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = w.dim();
    if a.shape() != (n, n) {
        return Err(Error::ShapeMismatch(format!(
            "operator is {}x{}, form has dimension {n}",
            a.rows(),
            a.cols()
        )));
    }
    let inv = inverse(w.gram()).map_err(|_| Error::DegenerateForm)?;
    Ok(&(&inv * &a.transpose()) * w.gram())
}

fn check_nondegenerate(w: &BilinearForm, tol: &Tolerance) -> Result<()> {
    let d = rank_decomposition(w.gram(), tol);
    if d.rank < w.dim() {
        return Err(Error::DegenerateForm);
    }
    Ok(())
}

pub fn classify_orbit(w: &BilinearForm, f: &ComplexMatrix, tol: &Tolerance) -> Result<OrbitLabel> {
    check_nondegenerate(w, tol)?;
    if f.rows() != w.dim() {
        return Err(Error::ShapeMismatch(format!(
            "map has {} rows, form has dimension {}",
            f.rows(),
            w.dim()
        )));
    }
    let d = rank_decomposition(f, tol);
    let a = d.rank;
    if a == 0 {
        return Ok(OrbitLabel { a: 0, b: 0 });
    }
    let q = &d.image_basis;
    let restricted = &(&q.transpose() * w.gram()) * q;
    let scale = svd(w.gram()).sigma[0];
    let sigma = svd(&restricted).sigma;
    let rank = sigma.iter().filter(|&&s| s > tol.rank_rtol * scale).count();
    Ok(OrbitLabel { a, b: a - rank })
}

/// MP-inverse of F for labels with b = 0 or b = a.
pub fn mp_inverse_homform(w: &BilinearForm, f: &ComplexMatrix, tol: &Tolerance) -> Result<ComplexMatrix> {
    let label = classify_orbit(w, f, tol)?;
    let (a, b) = (label.a, label.b);
    if a == 0 {
        return Ok(ComplexMatrix::zeros(f.cols(), f.rows()));
    }
    let fp = pinv(f, tol);
    if b == 0 {
        // Projector onto Im F along its ω-orthogonal complement.
        let q = rank_decomposition(f, tol).image_basis;
        let qt_s = &q.transpose() * w.gram();
        let m = &qt_s * &q;
        let minv = inverse(&m).map_err(|_| Error::DegenerateForm)?;
        let p = &(&q * &minv) * &qt_s;
        Ok(&fp * &p)
    } else if b == a {
        Ok(fp.scale_re(0.5))
    } else {
        let mut hermitian_defect = certificate(w, f, tol)?;
        if hermitian_defect <= WITNESS_THRESHOLD {
            hermitian_defect = hermitian_defect.max(orbit_certificate(w.symmetry(), w.dim(), f.cols(), label, tol)?);
        }
        Err(Error::NotMoorePenroseOrbit { a, b, hermitian_defect })
    }
}

/// Defects above this count as a witness that the orbit has no MP element.
pub const WITNESS_THRESHOLD: f64 = 1e-3;

/// Certificate computed on a fixed generic representative of the label in the
/// standard form; special elements of a non-MP orbit can have defect zero.
pub fn orbit_certificate(
    symmetry: Symmetry,
    dim_v: usize,
    dim_u: usize,
    label: OrbitLabel,
    tol: &Tolerance,
) -> Result<f64> {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let w = standard_form(symmetry, dim_v)?;
    let f = orbit_representative(&mut rng, symmetry, dim_v, dim_u, label)?;
    certificate(&w, &f, tol)
}

/// Hermitian defect of the minimal characteristic of F embedded in g_1.
pub fn certificate(w: &BilinearForm, f: &ComplexMatrix, tol: &Tolerance) -> Result<f64> {
    let (alg, e) = embed_element(w, f, tol)?;
    Ok(minimal_characteristic(&alg, &e, 1, tol)?.hermitian_defect)
}

pub fn verify_homform(
    w: &BilinearForm,
    f: &ComplexMatrix,
    g: &ComplexMatrix,
    tol: &Tolerance,
) -> Result<FormAdjointReport> {
    if f.rows() != w.dim() || g.shape() != (f.cols(), f.rows()) {
        return Err(Error::ShapeMismatch(format!(
            "F is {}x{}, G is {}x{}, form has dimension {}",
            f.rows(),
            f.cols(),
            g.rows(),
            g.cols(),
            w.dim()
        )));
    }
    let gf = g * f;
    let fg = f * g;
    let fg_sharp = sharp(w, &fg)?;
    let d = &fg - &fg_sharp;
    let star1 = &(f - &(&fg * f).scale_re(2.0)) + &(&fg_sharp * f);
    let star2 = &(g - &(&gf * g).scale_re(2.0)) + &(g * &fg_sharp);
    let scale = 1.0 + f.frobenius_norm() + g.frobenius_norm();
    let r = [
        gf.hermitian_defect(),
        d.hermitian_defect(),
        star1.frobenius_norm(),
        star2.frobenius_norm(),
    ];
    let passed = r.iter().all(|&x| x <= tol.residual_tol * scale);
    Ok(FormAdjointReport {
        residual_gf_hermitian: r[0],
        residual_fg_diff_hermitian: r[1],
        residual_star1: r[2],
        residual_star2: r[3],
        scale,
        passed,
    })
}

/// Graded algebra on U ⊕ V ⊕ U* with blocks (dim U, dim V, dim U) whose degree-one
/// part is Hom(U, V). Requires a real orthogonal gram matrix.
pub fn embedding_algebra(w: &BilinearForm, dim_u: usize, tol: &Tolerance) -> Result<GradedAlgebra> {
    let n = w.dim();
    let k = dim_u;
    let eps = w.symmetry().sign();
    let total = 2 * k + n;
    let mut s = ComplexMatrix::zeros(total, total);
    for p in 0..k {
        s[(p, k + n + p)] = ONE;
        s[(k + n + p, p)] = ONE.scale(eps);
    }
    s.set_submatrix(k, k, w.gram());
    let kind = match w.symmetry() {
        Symmetry::Symmetric => Kind::So,
        Symmetry::Skew => Kind::Sp,
    };
    GradedAlgebra::with_form(kind, &[k, n, k], s, tol)
}

/// e with blocks X₂₃ = F and X₁₂ = −ε·Fᵀ·S.
pub fn embed_element(w: &BilinearForm, f: &ComplexMatrix, tol: &Tolerance) -> Result<(GradedAlgebra, ComplexMatrix)> {
    let alg = embedding_algebra(w, f.cols(), tol)?;
    let eps = w.symmetry().sign();
    let mut e = alg.embed_block(f, 1, 2);
    e = &e + &alg.embed_block(&(&f.transpose() * w.gram()).scale_re(-eps), 0, 1);
    Ok((alg, e))
}

/// f with blocks Y₃₂ = 2G and Y₂₁ = −ε·S⁻¹·(2G)ᵀ.
pub fn embed_inverse(alg: &GradedAlgebra, w: &BilinearForm, g: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eps = w.symmetry().sign();
    let g2 = g.scale_re(2.0);
    let sinv = inverse(w.gram()).map_err(|_| Error::DegenerateForm)?;
    let mut y = alg.embed_block(&g2, 2, 1);
    y = &y + &alg.embed_block(&(&sinv * &g2.transpose()).scale_re(-eps), 1, 0);
    Ok(y)
}

/// Reads G back from the Y₃₂ block of an embedded inverse.
pub fn extract_inverse(alg: &GradedAlgebra, y: &ComplexMatrix) -> ComplexMatrix {
    alg.block(y, 2, 1).scale_re(0.5)
}

/// Standard form on ℂⁿ: identity (symmetric) or J = [[0, E], [−E, 0]] (skew, n even).
pub fn standard_form(symmetry: Symmetry, n: usize) -> Result<BilinearForm> {
    let gram = match symmetry {
        Symmetry::Symmetric => ComplexMatrix::identity(n),
        Symmetry::Skew => {
            if !n.is_multiple_of(2) {
                return Err(Error::DegenerateForm);
            }
            let h = n / 2;
            let mut j = ComplexMatrix::zeros(n, n);
            for p in 0..h {
                j[(p, h + p)] = ONE;
                j[(h + p, p)] = -ONE;
            }
            j
        }
    };
    BilinearForm::new(symmetry, gram, &Tolerance::default())
}

/// Labels (a, b) realized by some F: ℂ^dim_u → V for the standard form.
pub fn reachable_labels(symmetry: Symmetry, dim_v: usize, dim_u: usize) -> Vec<OrbitLabel> {
    let mut out = Vec::new();
    for a in 0..=dim_u.min(dim_v) {
        for b in 0..=a {
            let ok = a + b <= dim_v && (symmetry == Symmetry::Symmetric || (a - b) % 2 == 0);
            if ok {
                out.push(OrbitLabel { a, b });
            }
        }
    }
    out
}

/// Columns spanning a subspace with label (a, b) for the standard form, with the
/// anisotropic part sheared by random multiples of the radical.
pub fn label_subspace<R: Rng + ?Sized>(
    rng: &mut R,
    symmetry: Symmetry,
    dim_v: usize,
    label: OrbitLabel,
) -> Result<ComplexMatrix> {
    let OrbitLabel { a, b } = label;
    if !reachable_labels(symmetry, dim_v, a).contains(&label) {
        return Err(Error::InvalidGrading(format!(
            "label ({a},{b}) is not reachable in dimension {dim_v}"
        )));
    }
    let mut radical: Vec<Vec<C64>> = Vec::new();
    let mut rest: Vec<Vec<C64>> = Vec::new();
    let unit = |i: usize| {
        let mut v = vec![C64::new(0.0, 0.0); dim_v];
        v[i] = ONE;
        v
    };
    match symmetry {
        Symmetry::Symmetric => {
            for j in 0..b {
                let mut v = unit(2 * j);
                v[2 * j + 1] = I;
                radical.push(v);
            }
            for j in 0..(a - b) {
                rest.push(unit(2 * b + j));
            }
        }
        Symmetry::Skew => {
            let h = dim_v / 2;
            for j in 0..b {
                radical.push(unit(j));
            }
            for p in 0..(a - b) / 2 {
                rest.push(unit(b + p));
                rest.push(unit(h + b + p));
            }
        }
    }
    for v in rest.iter_mut() {
        for r in &radical {
            let c = sample::complex_normal(rng);
            for (x, y) in v.iter_mut().zip(r) {
                *x += c * y;
            }
        }
    }
    radical.extend(rest);
    Ok(ComplexMatrix::from_columns(dim_v, &radical))
}

/// Random F: ℂ^dim_u → V of the given label, F = L·M with M a random a × dim_u map of rank a.
pub fn orbit_representative<R: Rng + ?Sized>(
    rng: &mut R,
    symmetry: Symmetry,
    dim_v: usize,
    dim_u: usize,
    label: OrbitLabel,
) -> Result<ComplexMatrix> {
    if label.a > dim_u {
        return Err(Error::InvalidGrading(format!(
            "rank {} exceeds dim U = {dim_u}",
            label.a
        )));
    }
    let l = label_subspace(rng, symmetry, dim_v, label)?;
    Ok(&l * &sample::complex_matrix(rng, label.a, dim_u))
}

/// One row of the maximal-parabolic table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParabolicRow {
    pub group: &'static str,
    pub roots: &'static str,
    pub aura: bool,
    pub moore_penrose: bool,
}

/// Maximal parabolic subgroups of SO and Sp by simple root (Bourbaki numbering).
pub const MAXIMAL_PARABOLICS: &[ParabolicRow] = &[
    ParabolicRow {
        group: "SO(2n+1)",
        roots: "a1, an",
        aura: true,
        moore_penrose: true,
    },
    ParabolicRow {
        group: "SO(2n+1)",
        roots: "ak, 1<k<n",
        aura: false,
        moore_penrose: false,
    },
    ParabolicRow {
        group: "Sp(2n)",
        roots: "an",
        aura: true,
        moore_penrose: true,
    },
    ParabolicRow {
        group: "Sp(2n)",
        roots: "a1, a2, a(n-1)",
        aura: false,
        moore_penrose: true,
    },
    ParabolicRow {
        group: "Sp(2n)",
        roots: "ak, 2<k<n-1",
        aura: false,
        moore_penrose: false,
    },
    ParabolicRow {
        group: "SO(2n)",
        roots: "a1, a(n-1), an",
        aura: true,
        moore_penrose: true,
    },
    ParabolicRow {
        group: "SO(2n)",
        roots: "ak, 1<k<n-1",
        aura: false,
        moore_penrose: false,
    },
];

/// The table above as aligned plain text.
pub fn parabolic_table_text() -> String {
    let yes = |b: bool| if b { "yes" } else { "no" };
    let mut s = format!(
        "{:<10} {:<16} {:<5} {}\n",
        "group", "simple roots", "aura", "moore-penrose"
    );
    for r in MAXIMAL_PARABOLICS {
        s.push_str(&format!(
            "{:<10} {:<16} {:<5} {}\n",
            r.group,
            r.roots,
            yes(r.aura),
            yes(r.moore_penrose)
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::c;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn col(v: &[C64]) -> ComplexMatrix {
        ComplexMatrix::column_vector(v)
    }

    #[test]
    fn sharp_examples() {
        let j = standard_form(Symmetry::Skew, 2).unwrap();
        let a = ComplexMatrix::real_diag(&[0.5, 0.0]);
        assert!(sharp(&j, &a)
            .unwrap()
            .approx_eq(&ComplexMatrix::real_diag(&[0.0, 0.5]), 1e-15));
        let o = standard_form(Symmetry::Symmetric, 3).unwrap();
        let b = ComplexMatrix::from_real_rows(&[&[1.0, 2.0, 0.0], &[0.0, 1.0, 3.0], &[4.0, 0.0, 1.0]]);
        assert!(sharp(&o, &b).unwrap().approx_eq(&b.transpose(), 1e-15));
        assert_eq!(
            sharp(&o, &ComplexMatrix::identity(3)).unwrap(),
            ComplexMatrix::identity(3)
        );
        let z = BilinearForm::new(Symmetry::Symmetric, ComplexMatrix::zeros(2, 2), &tol()).unwrap();
        assert_eq!(sharp(&z, &ComplexMatrix::identity(2)), Err(Error::DegenerateForm));
    }

    #[test]
    fn classify_examples() {
        let j = standard_form(Symmetry::Skew, 2).unwrap();
        let e1 = col(&[ONE, c(0.0, 0.0)]);
        assert_eq!(classify_orbit(&j, &e1, &tol()).unwrap(), OrbitLabel { a: 1, b: 1 });
        let o = standard_form(Symmetry::Symmetric, 3).unwrap();
        let e1 = col(&[ONE, c(0.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(classify_orbit(&o, &e1, &tol()).unwrap(), OrbitLabel { a: 1, b: 0 });
        assert_eq!(
            classify_orbit(&o, &ComplexMatrix::zeros(3, 2), &tol()).unwrap(),
            OrbitLabel { a: 0, b: 0 }
        );
    }

    #[test]
    fn symplectic_line() {
        let j = standard_form(Symmetry::Skew, 2).unwrap();
        let f = col(&[ONE, c(0.0, 0.0)]);
        let g = mp_inverse_homform(&j, &f, &tol()).unwrap();
        assert!(g.approx_eq(&ComplexMatrix::from_real_rows(&[&[0.5, 0.0]]), 1e-15));
        let fg = &f * &g;
        let d = &fg - &sharp(&j, &fg).unwrap();
        assert!(d.approx_eq(&ComplexMatrix::real_diag(&[0.5, -0.5]), 1e-15));
        let r = verify_homform(&j, &f, &g, &tol()).unwrap();
        assert!(r.passed && r.max_residual() < 1e-15);
    }

    #[test]
    fn orthogonal_line() {
        let o = standard_form(Symmetry::Symmetric, 3).unwrap();
        let f = col(&[ONE, c(0.0, 0.0), c(0.0, 0.0)]);
        let g = mp_inverse_homform(&o, &f, &tol()).unwrap();
        assert!(g.approx_eq(&f.transpose(), 1e-15));
    }

    #[test]
    fn mixed_label_is_refused() {
        let o = standard_form(Symmetry::Symmetric, 3).unwrap();
        let z = c(0.0, 0.0);
        let f = ComplexMatrix::from_rows(&[&[ONE, z], &[z, ONE], &[z, I]]);
        match mp_inverse_homform(&o, &f, &tol()) {
            Err(Error::NotMoorePenroseOrbit {
                a: 2,
                b: 1,
                hermitian_defect,
            }) => {
                assert!(certificate(&o, &f, &tol()).unwrap() < 1e-9);
                assert!(hermitian_defect > WITNESS_THRESHOLD);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn zero_pair_passes() {
        let o = standard_form(Symmetry::Symmetric, 3).unwrap();
        let r = verify_homform(&o, &ComplexMatrix::zeros(3, 2), &ComplexMatrix::zeros(2, 3), &tol()).unwrap();
        assert!(r.passed);
    }

    #[test]
    fn table_lists_every_family() {
        let t = parabolic_table_text();
        assert!(t.contains("Sp(2n)") && t.contains("SO(2n+1)") && t.contains("SO(2n)"));
        assert!(MAXIMAL_PARABOLICS
            .iter()
            .filter(|r| r.group.starts_with("SO"))
            .all(|r| r.moore_penrose == r.aura));
    }
}
