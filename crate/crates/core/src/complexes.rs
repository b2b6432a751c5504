//! Varieties of complexes ℂ^{d_k} → … → ℂ^{d_1} inside the parabolic grading of
//! sl_n with blocks (d_1, …, d_k).

use rand::Rng;

use crate::classical::pinv;
use crate::error::{Error, Result};
use crate::graded::{bracket, GradedAlgebra, Sl2Triple};
use crate::numcore::{rank_decomposition, ComplexMatrix, Tolerance};
use crate::sample;

/// Maps f_1, …, f_{k−1} with f_i: ℂ^{d_{i+1}} → ℂ^{d_i}, stored as d_i × d_{i+1} matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainTuple {
    sizes: Vec<usize>,
    maps: Vec<ComplexMatrix>,
}

impl ChainTuple {
    pub fn new(sizes: Vec<usize>, maps: Vec<ComplexMatrix>) -> Result<Self> {
        if sizes.is_empty() || sizes.contains(&0) {
            return Err(Error::InvalidGrading("sizes must be positive and non-empty".into()));
        }
        if maps.len() + 1 != sizes.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} sizes need {} maps, got {}",
                sizes.len(),
                sizes.len() - 1,
                maps.len()
            )));
        }
        for (i, f) in maps.iter().enumerate() {
            if f.shape() != (sizes[i], sizes[i + 1]) {
                return Err(Error::ShapeMismatch(format!(
                    "map {} is {}x{}, expected {}x{}",
                    i + 1,
                    f.rows(),
                    f.cols(),
                    sizes[i],
                    sizes[i + 1]
                )));
            }
            if !f.is_finite() {
                return Err(Error::NonFinite);
            }
        }
        Ok(Self { sizes, maps })
    }

    pub fn zeros(sizes: Vec<usize>) -> Result<Self> {
        let maps = sizes.windows(2).map(|w| ComplexMatrix::zeros(w[0], w[1])).collect();
        Self::new(sizes, maps)
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn maps(&self) -> &[ComplexMatrix] {
        &self.maps
    }

    /// Parabolic grading of sl_n whose degree-one part holds the tuple.
    pub fn algebra(&self) -> Result<GradedAlgebra> {
        GradedAlgebra::sl(&self.sizes)
    }

    /// e = Σ f_i in the superdiagonal blocks.
    pub fn assemble(&self, alg: &GradedAlgebra) -> ComplexMatrix {
        let n = alg.ambient_dim();
        self.maps
            .iter()
            .enumerate()
            .fold(ComplexMatrix::zeros(n, n), |acc, (i, f)| {
                &acc + &alg.embed_block(f, i, i + 1)
            })
    }

    /// Places a tuple with reversed sizes in the subdiagonal blocks of `alg`.
    pub fn assemble_reversed(&self, alg: &GradedAlgebra) -> ComplexMatrix {
        let n = alg.ambient_dim();
        let k = self.sizes.len();
        self.maps
            .iter()
            .enumerate()
            .fold(ComplexMatrix::zeros(n, n), |acc, (j, g)| {
                let i = k - 2 - j;
                &acc + &alg.embed_block(g, i + 1, i)
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexCertificate {
    pub is_complex: bool,
    /// ‖f_i · f_{i+1}‖ for consecutive pairs.
    pub composition_residuals: Vec<f64>,
    pub ranks: Vec<usize>,
}

pub fn certify_complex(t: &ChainTuple, tol: &Tolerance) -> ComplexCertificate {
    let maps = t.maps();
    let mut is_complex = true;
    let composition_residuals = maps
        .windows(2)
        .map(|w| {
            let r = (&w[0] * &w[1]).frobenius_norm();
            if r > tol.residual_tol * w[0].frobenius_norm() * w[1].frobenius_norm() {
                is_complex = false;
            }
            r
        })
        .collect();
    let ranks = maps.iter().map(|f| rank_decomposition(f, tol).rank).collect();
    ComplexCertificate {
        is_complex,
        composition_residuals,
        ranks,
    }
}

/// Componentwise pseudoinverse (f_{k−1}⁺, …, f_1⁺) on the reversed sizes.
pub fn complex_pinv(t: &ChainTuple, tol: &Tolerance) -> Result<ChainTuple> {
    let cert = certify_complex(t, tol);
    if !cert.is_complex {
        let residual = cert.composition_residuals.iter().cloned().fold(0.0, f64::max);
        return Err(Error::NotAComplex { residual });
    }
    Ok(componentwise_pinv(t, tol))
}

/// Componentwise pseudoinverse without the complex gate.
pub fn componentwise_pinv(t: &ChainTuple, tol: &Tolerance) -> ChainTuple {
    let sizes = t.sizes().iter().rev().cloned().collect();
    let maps = t.maps().iter().rev().map(|f| pinv(f, tol)).collect();
    ChainTuple { sizes, maps }
}

/// The triple (e, [e, f], f) for a tuple and a candidate inverse tuple.
#[derive(Debug, Clone)]
pub struct GradedCheck {
    pub triple: Sl2Triple,
    pub hermitian_defect: f64,
    pub passed: bool,
}

pub fn graded_check(t: &ChainTuple, inverse: &ChainTuple, tol: &Tolerance) -> Result<GradedCheck> {
    let rev: Vec<usize> = t.sizes().iter().rev().cloned().collect();
    if inverse.sizes() != rev.as_slice() {
        return Err(Error::ShapeMismatch("inverse tuple must have reversed sizes".into()));
    }
    let alg = t.algebra()?;
    let e = t.assemble(&alg);
    let f = inverse.assemble_reversed(&alg);
    let h = bracket(&e, &f)?;
    let hermitian_defect = h.hermitian_defect();
    let triple = Sl2Triple::new(e, h, f);
    let passed = triple.passes(tol) && hermitian_defect <= tol.residual_tol * triple.scale();
    Ok(GradedCheck {
        triple,
        hermitian_defect,
        passed,
    })
}

/// Ranks m_i with m_i ≤ min(d_i, d_{i+1}) and m_{i−1} + m_i ≤ d_i.
pub fn random_ranks<R: Rng + ?Sized>(rng: &mut R, sizes: &[usize]) -> Vec<usize> {
    let mut ranks: Vec<usize> = Vec::with_capacity(sizes.len().saturating_sub(1));
    for i in 0..sizes.len().saturating_sub(1) {
        let prev = if i == 0 { 0 } else { ranks[i - 1] };
        let cap = sizes[i + 1].min(sizes[i] - prev);
        ranks.push(rng.random_range(0..=cap));
    }
    ranks
}

/// Random exact complex: each f_{i−1} is sampled and then composed with the
/// orthogonal projector onto the complement of Im f_i, working from the last map.
pub fn random_complex<R: Rng + ?Sized>(
    rng: &mut R,
    sizes: &[usize],
    ranks: &[usize],
    tol: &Tolerance,
) -> Result<ChainTuple> {
    if ranks.len() + 1 != sizes.len() {
        return Err(Error::ShapeMismatch("need one rank per map".into()));
    }
    for i in 0..ranks.len() {
        let prev = if i == 0 { 0 } else { ranks[i - 1] };
        if ranks[i] > sizes[i + 1] || prev + ranks[i] > sizes[i] {
            return Err(Error::InvalidGrading(format!(
                "rank {} at map {} is not realizable",
                ranks[i],
                i + 1
            )));
        }
    }
    let k = sizes.len();
    let mut maps = vec![ComplexMatrix::zeros(0, 0); k.saturating_sub(1)];
    for i in (0..k.saturating_sub(1)).rev() {
        let mut f = sample::matrix_of_rank(rng, sizes[i], sizes[i + 1], ranks[i]);
        if i + 1 < k - 1 {
            let q = rank_decomposition(&maps[i + 1], tol).image_basis;
            let proj = &ComplexMatrix::identity(sizes[i + 1]) - &(&q * &q.adjoint());
            f = &f * &proj;
        }
        maps[i] = f;
    }
    ChainTuple::new(sizes.to_vec(), maps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::C64;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn scalar(x: f64) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[x]])
    }

    #[test]
    fn certificate_examples() {
        let t = ChainTuple::new(vec![1, 1, 1], vec![scalar(1.0), scalar(0.0)]).unwrap();
        let c = certify_complex(&t, &tol());
        assert!(c.is_complex);
        assert_eq!(c.ranks, vec![1, 0]);
        let t = ChainTuple::new(vec![1, 1, 1], vec![scalar(1.0), scalar(1.0)]).unwrap();
        let c = certify_complex(&t, &tol());
        assert!(!c.is_complex);
        assert_eq!(c.composition_residuals, vec![1.0]);
        let t = ChainTuple::new(vec![2, 2], vec![ComplexMatrix::real_diag(&[1.0, 0.0])]).unwrap();
        let c = certify_complex(&t, &tol());
        assert!(c.is_complex && c.composition_residuals.is_empty());
        assert_eq!(c.ranks, vec![1]);
    }

    #[test]
    fn shapes_are_checked() {
        assert!(ChainTuple::new(vec![1, 2], vec![scalar(1.0)]).is_err());
        assert!(ChainTuple::new(vec![1, 1], vec![]).is_err());
        assert!(ChainTuple::new(vec![], vec![]).is_err());
    }

    #[test]
    fn pinv_examples() {
        let t = ChainTuple::new(vec![1, 1, 1], vec![scalar(1.0), scalar(0.0)]).unwrap();
        let p = complex_pinv(&t, &tol()).unwrap();
        assert_eq!(p.maps(), &[scalar(0.0), scalar(1.0)]);
        let g = graded_check(&t, &p, &tol()).unwrap();
        assert!(g.passed);
        assert!(g
            .triple
            .h
            .approx_eq(&ComplexMatrix::real_diag(&[1.0, -1.0, 0.0]), 1e-15));

        let z = ChainTuple::zeros(vec![2, 3, 1]).unwrap();
        let pz = complex_pinv(&z, &tol()).unwrap();
        assert_eq!(pz, ChainTuple::zeros(vec![1, 3, 2]).unwrap());

        let f1 = ComplexMatrix::from_real_rows(&[&[1.0], &[0.0]]);
        let t = ChainTuple::new(vec![2, 1, 1], vec![f1, scalar(0.0)]).unwrap();
        let p = complex_pinv(&t, &tol()).unwrap();
        assert_eq!(p.maps()[1], ComplexMatrix::from_real_rows(&[&[1.0, 0.0]]));
        assert_eq!(p.maps()[0], scalar(0.0));
        assert!(graded_check(&t, &p, &tol()).unwrap().passed);
    }

    #[test]
    fn non_complex_is_rejected_and_breaks_the_triple() {
        let t = ChainTuple::new(vec![1, 1, 1], vec![scalar(1.0), scalar(1.0)]).unwrap();
        assert!(matches!(complex_pinv(&t, &tol()), Err(Error::NotAComplex { .. })));
        let g = graded_check(&t, &componentwise_pinv(&t, &tol()), &tol()).unwrap();
        assert!(!g.passed);
        let e = &g.triple.e;
        let he = &(&g.triple.h * e) - &(e * &g.triple.h);
        assert!((&he - &e.scale(C64::new(2.0, 0.0))).frobenius_norm() >= 0.9 * e.frobenius_norm());
    }
}
