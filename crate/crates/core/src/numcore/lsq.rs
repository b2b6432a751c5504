use super::matrix::{vec_norm, ComplexMatrix, C64};
use super::svd::{pinv_svd, rank_decomposition, spectral_norm};
use super::tolerance::Tolerance;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct ConstrainedSolution {
    pub x: Vec<C64>,
    /// ‖C·x − d‖.
    pub constraint_residual: f64,
    /// Norm of the objective gradient projected onto ker C.
    pub kkt_residual: f64,
}

/// Minimizes ‖M·x − t‖ subject to C·x = d, returning the minimal-norm minimizer.
///
/// Nullspace method: particular solution C⁺d, then a minimal-norm
/// least-squares step inside ker C.
pub fn solve_least_squares_constrained(
    m: &ComplexMatrix,
    t: &[C64],
    c: &ComplexMatrix,
    d: &[C64],
    tol: &Tolerance,
) -> Result<ConstrainedSolution> {
    let n = m.cols();
    if m.rows() != t.len() || c.cols() != n || c.rows() != d.len() {
        return Err(Error::ShapeMismatch(format!(
            "objective {}x{} with target {}, constraints {}x{} with rhs {}",
            m.rows(),
            m.cols(),
            t.len(),
            c.rows(),
            c.cols(),
            d.len()
        )));
    }
    if t.iter().chain(d).any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }

    let xp = pinv_svd(c, tol).mul_vec(d);
    let cx = c.mul_vec(&xp);
    let cres = vec_norm(&sub(&cx, d));
    let cscale = 1.0 + vec_norm(d) + spectral_norm(c) * vec_norm(&xp);
    if cres > tol.residual_tol * cscale {
        return Err(Error::InconsistentConstraints { residual: cres });
    }

    let kernel = if c.rows() == 0 {
        ComplexMatrix::identity(n)
    } else {
        rank_decomposition(c, tol).kernel_basis
    };
    let x = if kernel.cols() == 0 {
        xp
    } else {
        let mn = m * &kernel;
        let rhs = sub(t, &m.mul_vec(&xp));
        let z = pinv_svd(&mn, tol).mul_vec(&rhs);
        add(&xp, &kernel.mul_vec(&z))
    };

    let grad = m.adjoint().mul_vec(&sub(&m.mul_vec(&x), t));
    let kkt_residual = vec_norm(&kernel.adjoint().mul_vec(&grad));
    let constraint_residual = vec_norm(&sub(&c.mul_vec(&x), d));
    Ok(ConstrainedSolution {
        x,
        constraint_residual,
        kkt_residual,
    })
}

fn sub(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn add(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}
