use rand::Rng;

use super::algebra::{bracket, GradedAlgebra};
use super::triple::minimal_characteristic;
use crate::error::{Error, Result};
use crate::homform::WITNESS_THRESHOLD;
use crate::numcore::{expm_nilpotent, spectral_norm, ComplexMatrix, Tolerance};
use crate::sample;

/// Largest k with ad(e)^k ≠ 0, thresholded relative to ‖ad(e)‖^k (spectral norms).
pub fn orbit_height(alg: &GradedAlgebra, e: &ComplexMatrix, tol: &Tolerance) -> Result<usize> {
    alg.check_member(e, tol)?;
    let ad = alg.ad_matrix(e);
    let dim = ad.rows();
    let base = spectral_norm(&ad);
    if base == 0.0 || e.frobenius_norm() == 0.0 {
        return Ok(0);
    }
    let mut powers = Vec::with_capacity(dim + 1);
    let mut p = ad.clone();
    powers.push(spectral_norm(&p));
    for _ in 1..dim {
        p = &p * &ad;
        powers.push(spectral_norm(&p));
    }
    let ratio = powers[dim - 1] / base.powi(dim as i32);
    if ratio > tol.residual_tol {
        return Err(Error::NotNilpotent { ratio });
    }
    let height = powers
        .iter()
        .enumerate()
        .filter(|(k, &nk)| nk > tol.residual_tol * base.powi(*k as i32 + 1))
        .map(|(k, _)| k + 1)
        .max()
        .unwrap_or(0);
    Ok(height)
}

/// Height-two test for a nonzero nilpotent element.
pub fn is_mp_orbit(alg: &GradedAlgebra, e: &ComplexMatrix, tol: &Tolerance) -> Result<bool> {
    if e.frobenius_norm() == 0.0 {
        return Err(Error::ZeroElement);
    }
    Ok(orbit_height(alg, e, tol)? == 2)
}

/// All partitions of n, parts in non-increasing order.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=rem.min(max)).rev() {
            cur.push(p);
            go(rem - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Nilpotent Jordan normal form with the given block sizes (ones on the superdiagonal).
pub fn jordan_nilpotent(parts: &[usize]) -> ComplexMatrix {
    let n: usize = parts.iter().sum();
    let mut e = ComplexMatrix::zeros(n, n);
    let mut o = 0;
    for &p in parts {
        for i in 0..p.saturating_sub(1) {
            e[(o + i, o + i + 1)] = crate::numcore::ONE;
        }
        o += p;
    }
    e
}

/// Standard characteristic of [`jordan_nilpotent`]: diag(λ−1, λ−3, …, 1−λ) per block.
pub fn jordan_characteristic(parts: &[usize]) -> Vec<f64> {
    parts
        .iter()
        .flat_map(|&p| (0..p).map(move |i| p as f64 - 1.0 - 2.0 * i as f64))
        .collect()
}

/// A conjugate of a Jordan normal form whose minimal characteristic is not Hermitian.
#[derive(Debug, Clone)]
pub struct OrbitWitness {
    pub element: ComplexMatrix,
    /// Degree of ξ under ad of the standard characteristic.
    pub degree: usize,
    pub hermitian_defect: f64,
}

/// Searches conjugates exp(ξ)·J·exp(−ξ) with ξ homogeneous of positive degree for
/// the standard characteristic of J and [ξ, J] ≠ 0. Returns `None` when
/// λ₁ ≤ 2 or when no sample has Hermitian defect above [`WITNESS_THRESHOLD`].
pub fn non_hermitian_conjugate<R: Rng + ?Sized>(
    rng: &mut R,
    parts: &[usize],
    tol: &Tolerance,
) -> Result<Option<OrbitWitness>> {
    if parts.iter().all(|&p| p <= 2) {
        return Ok(None);
    }
    let n: usize = parts.iter().sum();
    let alg = GradedAlgebra::sl(&[n])?;
    let j = jordan_nilpotent(parts);
    let h = jordan_characteristic(parts);
    let max_deg = 2 * (parts.iter().max().copied().unwrap_or(1) - 1);
    for degree in 1..=max_deg {
        for _ in 0..8 {
            let xi = ComplexMatrix::from_fn(n, n, |a, b| {
                if (h[a] - h[b] - degree as f64).abs() < 0.5 {
                    sample::complex_normal(rng)
                } else {
                    crate::numcore::ZERO
                }
            });
            if bracket(&xi, &j)?.frobenius_norm() <= tol.residual_tol * xi.frobenius_norm() {
                continue;
            }
            let g = expm_nilpotent(&xi);
            let gi = expm_nilpotent(&xi.scale_re(-1.0));
            let e = &(&g * &j) * &gi;
            let mc = minimal_characteristic(&alg, &e, 0, tol)?;
            if mc.hermitian_defect > WITNESS_THRESHOLD {
                return Ok(Some(OrbitWitness {
                    element: e,
                    degree,
                    hermitian_defect: mc.hermitian_defect,
                }));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn heights_of_small_orbits() {
        let sl2 = GradedAlgebra::sl(&[2]).unwrap();
        assert_eq!(orbit_height(&sl2, &ComplexMatrix::zeros(2, 2), &tol()).unwrap(), 0);
        assert_eq!(orbit_height(&sl2, &jordan_nilpotent(&[2]), &tol()).unwrap(), 2);
        let sl3 = GradedAlgebra::sl(&[3]).unwrap();
        assert_eq!(orbit_height(&sl3, &jordan_nilpotent(&[3]), &tol()).unwrap(), 4);
        assert!(!is_mp_orbit(&sl3, &jordan_nilpotent(&[3]), &tol()).unwrap());
        assert!(is_mp_orbit(&sl3, &jordan_nilpotent(&[2, 1]), &tol()).unwrap());
        let sl4 = GradedAlgebra::sl(&[4]).unwrap();
        assert!(is_mp_orbit(&sl4, &jordan_nilpotent(&[2, 2]), &tol()).unwrap());
        assert_eq!(
            is_mp_orbit(&sl4, &ComplexMatrix::zeros(4, 4), &tol()),
            Err(Error::ZeroElement)
        );
    }

    #[test]
    fn semisimple_element_is_not_nilpotent() {
        let sl2 = GradedAlgebra::sl(&[2]).unwrap();
        let h = ComplexMatrix::real_diag(&[1.0, -1.0]);
        assert!(matches!(
            orbit_height(&sl2, &h, &tol()),
            Err(Error::NotNilpotent { .. })
        ));
    }

    #[test]
    fn witnesses_exist_exactly_for_tall_orbits() {
        use rand::SeedableRng;
        let mut g = rand::rngs::StdRng::seed_from_u64(1);
        for n in 1..=5 {
            for parts in partitions(n) {
                let w = non_hermitian_conjugate(&mut g, &parts, &tol()).unwrap();
                assert_eq!(w.is_some(), parts[0] > 2, "{parts:?}");
            }
        }
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (1..=6).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11]);
        assert_eq!(jordan_characteristic(&[3, 1]), vec![2.0, 0.0, -2.0, 0.0]);
    }
}
