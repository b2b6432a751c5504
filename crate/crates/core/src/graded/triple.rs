use super::algebra::{ad_in_basis, bracket_unchecked, GradedAlgebra, Kind};
use crate::error::{Error, Result};
use crate::numcore::{pinv_svd, rank_decomposition, solve_least_squares_constrained, ComplexMatrix, Tolerance, C64};

/// An sl2-triple with its bracket residuals.
#[derive(Debug, Clone)]
pub struct Sl2Triple {
    pub e: ComplexMatrix,
    pub h: ComplexMatrix,
    pub f: ComplexMatrix,
    /// ‖[e,f] − h‖, ‖[h,e] − 2e‖, ‖[h,f] + 2f‖
    pub residuals: [f64; 3],
}

impl Sl2Triple {
    pub fn new(e: ComplexMatrix, h: ComplexMatrix, f: ComplexMatrix) -> Self {
        let r1 = (&bracket_unchecked(&e, &f) - &h).frobenius_norm();
        let r2 = (&bracket_unchecked(&h, &e) - &e.scale_re(2.0)).frobenius_norm();
        let r3 = (&bracket_unchecked(&h, &f) + &f.scale_re(2.0)).frobenius_norm();
        Self {
            e,
            h,
            f,
            residuals: [r1, r2, r3],
        }
    }

    pub fn zero(n: usize) -> Self {
        let z = ComplexMatrix::zeros(n, n);
        Self::new(z.clone(), z.clone(), z)
    }

    pub fn scale(&self) -> f64 {
        1.0 + self.e.frobenius_norm() + self.h.frobenius_norm() + self.f.frobenius_norm()
    }

    /// Largest residual divided by 1 + ‖e‖ + ‖h‖ + ‖f‖.
    pub fn relative_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max) / self.scale()
    }

    pub fn passes(&self, tol: &Tolerance) -> bool {
        self.relative_residual() <= tol.residual_tol
    }
}

/// The minimal-norm characteristic of a homogeneous element and its completed triple.
#[derive(Debug, Clone)]
pub struct CharacteristicResult {
    pub triple: Sl2Triple,
    pub is_hermitian: bool,
    /// ‖h0 − h0*‖
    pub hermitian_defect: f64,
}

impl CharacteristicResult {
    pub fn h0(&self) -> &ComplexMatrix {
        &self.triple.h
    }

    pub fn f(&self) -> &ComplexMatrix {
        &self.triple.f
    }

    fn from_triple(triple: Sl2Triple, tol: &Tolerance) -> Self {
        let hermitian_defect = triple.h.hermitian_defect();
        let is_hermitian = hermitian_defect <= tol.residual_tol * (1.0 + triple.h.frobenius_norm());
        Self {
            triple,
            is_hermitian,
            hermitian_defect,
        }
    }
}

/// The affine space of characteristics h = [e, y], y ∈ span(y_basis), [h, e] = 2e.
#[derive(Debug, Clone)]
pub struct CharacteristicSpace {
    /// Minimal-norm point.
    pub minimal: ComplexMatrix,
    /// Orthonormal (Frobenius) basis of the direction space.
    pub directions: Vec<ComplexMatrix>,
}

/// Minimal-norm characteristic of e ∈ g_k, completed to an sl2-triple with f ∈ g_{-k}.
///
/// For a trivial grading (k = 0) the search runs over the whole algebra.
pub fn minimal_characteristic(
    alg: &GradedAlgebra,
    e: &ComplexMatrix,
    k: i32,
    tol: &Tolerance,
) -> Result<CharacteristicResult> {
    alg.check_homogeneous(e, k, tol)?;
    characteristic_with_basis(alg, e, alg.component(-k), tol)
}

/// As [`minimal_characteristic`], with y and f restricted to the span of an
/// orthonormal `y_basis`.
pub fn characteristic_with_basis(
    alg: &GradedAlgebra,
    e: &ComplexMatrix,
    y_basis: &[ComplexMatrix],
    tol: &Tolerance,
) -> Result<CharacteristicResult> {
    let n = alg.ambient_dim();
    let enorm = e.frobenius_norm();
    if enorm == 0.0 {
        return Ok(CharacteristicResult::from_triple(Sl2Triple::zero(n), tol));
    }
    let space = space_for_unit(alg, &e.scale_re(1.0 / enorm), y_basis, tol)?;
    let h0 = space.minimal;
    let f = recover_f(&e.scale_re(1.0 / enorm), &h0, y_basis, n, tol).scale_re(1.0 / enorm);
    let triple = Sl2Triple::new(e.clone(), h0, f);
    if !triple.passes(tol) {
        return Err(Error::NoTriple(format!(
            "completed triple has relative residual {:.3e}",
            triple.relative_residual()
        )));
    }
    Ok(CharacteristicResult::from_triple(triple, tol))
}

/// Characteristic space of a nonzero e ∈ g_k over y ∈ g_{-k}.
pub fn characteristic_space(
    alg: &GradedAlgebra,
    e: &ComplexMatrix,
    k: i32,
    tol: &Tolerance,
) -> Result<CharacteristicSpace> {
    alg.check_homogeneous(e, k, tol)?;
    let enorm = e.frobenius_norm();
    if enorm == 0.0 {
        return Err(Error::ZeroElement);
    }
    space_for_unit(alg, &e.scale_re(1.0 / enorm), alg.component(-k), tol)
}

/// Completes (e, h) to a triple with f ∈ g_{-k}, for any characteristic h of e.
pub fn complete_triple(
    alg: &GradedAlgebra,
    e: &ComplexMatrix,
    h: &ComplexMatrix,
    k: i32,
    tol: &Tolerance,
) -> Result<Sl2Triple> {
    alg.check_homogeneous(e, k, tol)?;
    let n = alg.ambient_dim();
    let enorm = e.frobenius_norm();
    if enorm == 0.0 {
        return Err(Error::ZeroElement);
    }
    let f = recover_f(&e.scale_re(1.0 / enorm), h, alg.component(-k), n, tol).scale_re(1.0 / enorm);
    let triple = Sl2Triple::new(e.clone(), h.clone(), f);
    if !triple.passes(tol) {
        return Err(Error::NoTriple(format!(
            "completed triple has relative residual {:.3e}",
            triple.relative_residual()
        )));
    }
    Ok(triple)
}

fn space_for_unit(
    alg: &GradedAlgebra,
    e: &ComplexMatrix,
    y_basis: &[ComplexMatrix],
    tol: &Tolerance,
) -> Result<CharacteristicSpace> {
    let n = alg.ambient_dim();
    let p = y_basis.len();
    let hs: Vec<ComplexMatrix> = y_basis.iter().map(|y| bracket_unchecked(e, y)).collect();
    let objective = columns_of(&hs, n);
    let cons = columns_of(&hs.iter().map(|h| bracket_unchecked(h, e)).collect::<Vec<_>>(), n);
    let rhs: Vec<C64> = e.scale_re(2.0).into_vec();
    let target = vec![C64::new(0.0, 0.0); n * n];
    let sol = solve_least_squares_constrained(&objective, &target, &cons, &rhs, tol).map_err(|err| match err {
        Error::InconsistentConstraints { residual } => {
            Error::NoTriple(format!("[[e,y],e] = 2e is inconsistent (residual {residual:.3e})"))
        }
        other => other,
    })?;
    let minimal = ComplexMatrix::from_vec(n, n, objective.mul_vec(&sol.x))?;

    let directions = if p == 0 {
        Vec::new()
    } else {
        let ker = if cons.rows() == 0 {
            ComplexMatrix::identity(p)
        } else {
            rank_decomposition(&cons, tol).kernel_basis
        };
        let image = rank_decomposition(&(&objective * &ker), tol).image_basis;
        (0..image.cols())
            .map(|j| ComplexMatrix::from_vec(n, n, image.column(j)).expect("shape"))
            .collect()
    };
    Ok(CharacteristicSpace { minimal, directions })
}

fn recover_f(
    e: &ComplexMatrix,
    h: &ComplexMatrix,
    y_basis: &[ComplexMatrix],
    n: usize,
    tol: &Tolerance,
) -> ComplexMatrix {
    if y_basis.is_empty() {
        return ComplexMatrix::zeros(n, n);
    }
    let a1 = columns_of(&y_basis.iter().map(|y| bracket_unchecked(e, y)).collect::<Vec<_>>(), n);
    let a2 = columns_of(
        &y_basis
            .iter()
            .map(|y| &bracket_unchecked(h, y) + &y.scale_re(2.0))
            .collect::<Vec<_>>(),
        n,
    );
    let a = a1.vstack(&a2);
    let mut rhs = h.as_slice().to_vec();
    rhs.extend(std::iter::repeat_n(C64::new(0.0, 0.0), n * n));
    let coeffs = pinv_svd(&a, tol).mul_vec(&rhs);
    GradedAlgebra::combine(y_basis, &coeffs, n)
}

/// Matrix whose j-th column is the row-major flattening of `mats[j]`.
fn columns_of(mats: &[ComplexMatrix], n: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n * n, mats.len());
    for (j, x) in mats.iter().enumerate() {
        for (i, z) in x.as_slice().iter().enumerate() {
            m[(i, j)] = *z;
        }
    }
    m
}

/// MP-inverse of e ∈ g_1 in a short grading.
pub fn mp_inverse_short(alg: &GradedAlgebra, e: &ComplexMatrix, tol: &Tolerance) -> Result<ComplexMatrix> {
    if let Some(degree) = alg.short_violation() {
        return Err(Error::NotShortGrading { degree });
    }
    Ok(minimal_characteristic(alg, e, 1, tol)?.triple.f)
}

/// Whether the minimal characteristic of e ∈ g_k is Hermitian.
pub fn is_mp_element(alg: &GradedAlgebra, e: &ComplexMatrix, k: i32, tol: &Tolerance) -> Result<bool> {
    Ok(minimal_characteristic(alg, e, k, tol)?.is_hermitian)
}

/// Relative threshold for ‖[e, x]‖ in the positive-part criterion.
pub const CRITERION_THRESHOLD: f64 = 1e-6;

/// Outcome of the positive-part criterion for one characteristic.
#[derive(Debug, Clone)]
pub struct CriterionReport {
    /// dim of the positive part n₊ of g_0 under ad(h).
    pub positive_dim: usize,
    /// max ‖[e, x]‖ / ‖e‖ over an orthonormal basis x of n₊.
    pub residual: f64,
    pub holds: bool,
}

/// Checks ad(e) g_0^n = 0 for all n > 0, where g_0^n are the ad(h) eigenspaces in g_0.
pub fn positive_part_criterion(
    alg: &GradedAlgebra,
    e: &ComplexMatrix,
    h: &ComplexMatrix,
    tol: &Tolerance,
) -> CriterionReport {
    let g0 = alg.component(0);
    let n = alg.ambient_dim();
    let enorm = e.frobenius_norm();
    if enorm == 0.0 || g0.is_empty() {
        return CriterionReport {
            positive_dim: 0,
            residual: 0.0,
            holds: true,
        };
    }
    let ad = ad_in_basis(g0, g0, h);
    let d = g0.len();
    let max_eig = 2 * n as i32;
    let eig_tol = Tolerance {
        rank_rtol: tol.rank_rtol.max(1e-8),
        residual_tol: tol.residual_tol,
    };
    let mut positive: Vec<ComplexMatrix> = Vec::new();
    for ev in 1..=max_eig {
        let shifted = &ad - &ComplexMatrix::identity(d).scale_re(f64::from(ev));
        let ker = rank_decomposition(&shifted, &eig_tol).kernel_basis;
        for j in 0..ker.cols() {
            positive.push(GradedAlgebra::combine(g0, &ker.column(j), n));
        }
    }
    let residual = positive
        .iter()
        .map(|x| bracket_unchecked(e, x).frobenius_norm() / (enorm * x.frobenius_norm()))
        .fold(0.0, f64::max);
    CriterionReport {
        positive_dim: positive.len(),
        residual,
        holds: residual <= CRITERION_THRESHOLD,
    }
}

/// Element-level Hermitian test together with the positive-part criterion.
#[derive(Debug, Clone)]
pub struct MpElementReport {
    pub characteristic: CharacteristicResult,
    pub criterion: CriterionReport,
}

impl MpElementReport {
    pub fn agrees(&self) -> bool {
        self.characteristic.is_hermitian == self.criterion.holds
    }
}

pub fn mp_element_report(alg: &GradedAlgebra, e: &ComplexMatrix, k: i32, tol: &Tolerance) -> Result<MpElementReport> {
    let characteristic = minimal_characteristic(alg, e, k, tol)?;
    let criterion = positive_part_criterion(alg, e, characteristic.h0(), tol);
    Ok(MpElementReport {
        characteristic,
        criterion,
    })
}

/// [`is_mp_element`] that fails with `CriterionDisagreement` when the
/// positive-part criterion gives the opposite answer.
///
/// The criterion describes the whole orbit, so it can legitimately disagree on
/// special elements of a non-MP orbit; on generic elements the two coincide.
pub fn is_mp_element_checked(alg: &GradedAlgebra, e: &ComplexMatrix, k: i32, tol: &Tolerance) -> Result<bool> {
    let r = mp_element_report(alg, e, k, tol)?;
    if !r.agrees() {
        return Err(Error::CriterionDisagreement {
            defect: r.characteristic.hermitian_defect,
            criterion: r.criterion.residual,
        });
    }
    Ok(r.characteristic.is_hermitian)
}

/// Minimal characteristic for e supported on the single block (i, j) of an sl grading,
/// with y and f ranging over the transposed block (j, i).
pub fn multidegree_characteristic(
    alg: &GradedAlgebra,
    block: (usize, usize),
    e: &ComplexMatrix,
    tol: &Tolerance,
) -> Result<CharacteristicResult> {
    let (i, j) = block;
    let k = alg.block_sizes().len();
    if alg.kind() != Kind::Sl {
        return Err(Error::InvalidGrading("multidegree check is defined for sl".into()));
    }
    if i == j || i >= k || j >= k {
        return Err(Error::InvalidGrading(format!(
            "block ({i},{j}) is not an off-diagonal block"
        )));
    }
    let n = alg.ambient_dim();
    if e.shape() != (n, n) {
        return Err(Error::ShapeMismatch(format!(
            "element is {}x{}, expected {n}x{n}",
            e.rows(),
            e.cols()
        )));
    }
    let inside = alg.embed_block(&alg.block(e, i, j), i, j);
    let outside = (e - &inside).frobenius_norm();
    if outside > tol.residual_tol * (1.0 + e.frobenius_norm()) {
        return Err(Error::UnsupportedBlock { row: i, col: j });
    }
    let (ri, rj) = (alg.block_offset(j), alg.block_offset(i));
    let y_basis: Vec<ComplexMatrix> = (0..alg.block_sizes()[j])
        .flat_map(|a| (0..alg.block_sizes()[i]).map(move |b| (a, b)))
        .map(|(a, b)| ComplexMatrix::unit(n, n, ri + a, rj + b))
        .collect();
    characteristic_with_basis(alg, &inside, &y_basis, tol)
}

pub fn mp_check_multidegree(
    alg: &GradedAlgebra,
    block: (usize, usize),
    e: &ComplexMatrix,
    tol: &Tolerance,
) -> Result<bool> {
    Ok(multidegree_characteristic(alg, block, e, tol)?.is_hermitian)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::pinv;
    use crate::numcore::c;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn standard_sl2_triple() {
        let g = GradedAlgebra::sl(&[1, 1]).unwrap();
        let e = ComplexMatrix::unit(2, 2, 0, 1);
        let r = minimal_characteristic(&g, &e, 1, &tol()).unwrap();
        assert!(r.h0().approx_eq(&ComplexMatrix::real_diag(&[1.0, -1.0]), 1e-12));
        assert!(r.f().approx_eq(&ComplexMatrix::unit(2, 2, 1, 0), 1e-12));
        assert!(r.is_hermitian);
    }

    #[test]
    fn zero_element_gives_zero_triple() {
        let g = GradedAlgebra::sl(&[2, 1]).unwrap();
        let r = minimal_characteristic(&g, &ComplexMatrix::zeros(3, 3), 1, &tol()).unwrap();
        assert!(r.is_hermitian);
        assert_eq!(r.f(), &ComplexMatrix::zeros(3, 3));
    }

    #[test]
    fn sl3_block_vector_matches_classical_pinv() {
        let g = GradedAlgebra::sl(&[2, 1]).unwrap();
        let block = ComplexMatrix::from_real_rows(&[&[1.0], &[0.0]]);
        let e = g.embed_block(&block, 0, 1);
        let r = minimal_characteristic(&g, &e, 1, &tol()).unwrap();
        let want = g.embed_block(&pinv(&block, &tol()), 1, 0);
        assert!(r.f().approx_eq(&want, 1e-12));
        assert!(r.f().approx_eq(&e.transpose(), 1e-12));
        assert!(r.is_hermitian);
    }

    #[test]
    fn short_grading_examples() {
        let g = GradedAlgebra::sp(&[2, 2]).unwrap();
        let w = ComplexMatrix::real_diag(&[2.0, 0.0]);
        let f = mp_inverse_short(&g, &g.embed_block(&w, 0, 1), &tol()).unwrap();
        assert!(g
            .block(&f, 1, 0)
            .approx_eq(&ComplexMatrix::real_diag(&[0.5, 0.0]), 1e-12));

        let g = GradedAlgebra::so(&[2, 2]).unwrap();
        let w = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[-1.0, 0.0]]);
        let f = mp_inverse_short(&g, &g.embed_block(&w, 0, 1), &tol()).unwrap();
        assert!(g.block(&f, 1, 0).approx_eq(&(-&w), 1e-12));

        let g = GradedAlgebra::sl(&[1, 1, 1]).unwrap();
        assert_eq!(
            mp_inverse_short(&g, &ComplexMatrix::unit(3, 3, 0, 1), &tol()),
            Err(Error::NotShortGrading { degree: -2 })
        );
    }

    #[test]
    fn inhomogeneous_input_rejected() {
        let g = GradedAlgebra::sl(&[1, 1, 1]).unwrap();
        let x = &ComplexMatrix::unit(3, 3, 0, 1) + &ComplexMatrix::unit(3, 3, 0, 2);
        assert_eq!(
            minimal_characteristic(&g, &x, 1, &tol()).unwrap_err(),
            Error::NotHomogeneous
        );
    }

    #[test]
    fn regular_nilpotent_in_parabolic_grading() {
        let g = GradedAlgebra::sl(&[1, 1, 1]).unwrap();
        let e = &ComplexMatrix::unit(3, 3, 0, 1) + &ComplexMatrix::unit(3, 3, 1, 2);
        let r = mp_element_report(&g, &e, 1, &tol()).unwrap();
        assert!(r.characteristic.is_hermitian);
        assert!(r.criterion.holds);
        assert!(r
            .characteristic
            .h0()
            .approx_eq(&ComplexMatrix::real_diag(&[2.0, 0.0, -2.0]), 1e-12));
    }

    #[test]
    fn tall_orbit_conjugate_is_not_mp() {
        // Trivial grading; e' = exp(ξ) e exp(−ξ) with ξ = E12 outside the centralizer.
        let g = GradedAlgebra::sl(&[3]).unwrap();
        let e = &ComplexMatrix::unit(3, 3, 0, 1) + &ComplexMatrix::unit(3, 3, 1, 2);
        let u = crate::numcore::expm_nilpotent(&ComplexMatrix::unit(3, 3, 0, 1));
        let ui = crate::numcore::expm_nilpotent(&ComplexMatrix::unit(3, 3, 0, 1).scale(c(-1.0, 0.0)));
        let ep = &(&u * &e) * &ui;
        let r = minimal_characteristic(&g, &ep, 0, &tol()).unwrap();
        assert!(!r.is_hermitian);
        assert!(r.hermitian_defect > 1e-3);
        assert!(r.triple.passes(&tol()));
    }

    #[test]
    fn multidegree_examples() {
        let g = GradedAlgebra::sl(&[1, 1, 1]).unwrap();
        let e = ComplexMatrix::unit(3, 3, 0, 2);
        assert!(mp_check_multidegree(&g, (0, 2), &e, &tol()).unwrap());
        assert!(mp_check_multidegree(&g, (0, 2), &ComplexMatrix::zeros(3, 3), &tol()).unwrap());
        assert_eq!(
            mp_check_multidegree(&g, (0, 1), &e, &tol()),
            Err(Error::UnsupportedBlock { row: 0, col: 1 })
        );
    }
}
