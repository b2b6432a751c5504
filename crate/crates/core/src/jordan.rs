//! Jordan pairs (V₊, V₋) = (g₁, g₋₁) of short gradings, with the triple product
//! {x, y, z} = ½[[x, y], z].

use crate::error::{Error, Result};
use crate::graded::{bracket, minimal_characteristic, mp_inverse_short, GradedAlgebra};
use crate::numcore::{expm, hermitian_eigen, inverse, spectral_norm, ComplexMatrix, Tolerance, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn degree(self) -> i32 {
        match self {
            Side::Plus => 1,
            Side::Minus => -1,
        }
    }

    pub fn opposite(self) -> Side {
        match self {
            Side::Plus => Side::Minus,
            Side::Minus => Side::Plus,
        }
    }
}

#[derive(Debug, Clone)]
pub struct JordanPair {
    alg: GradedAlgebra,
}

impl JordanPair {
    pub fn new(alg: GradedAlgebra) -> Result<Self> {
        if let Some(degree) = alg.short_violation() {
            return Err(Error::NotShortGrading { degree });
        }
        Ok(Self { alg })
    }

    /// Rectangular matrices: V₊ = n × m, V₋ = m × n, inside sl_{n+m}.
    pub fn matrix(n: usize, m: usize) -> Result<Self> {
        Self::new(GradedAlgebra::sl(&[n, m])?)
    }

    /// Symmetric n × n matrices inside sp_{2n}.
    pub fn symmetric(n: usize) -> Result<Self> {
        Self::new(GradedAlgebra::sp(&[n, n])?)
    }

    pub fn algebra(&self) -> &GradedAlgebra {
        &self.alg
    }

    pub fn basis(&self, side: Side) -> &[ComplexMatrix] {
        self.alg.component(side.degree())
    }

    pub fn dim(&self, side: Side) -> usize {
        self.basis(side).len()
    }

    pub fn contains(&self, side: Side, x: &ComplexMatrix, tol: &Tolerance) -> bool {
        x.shape() == (self.alg.ambient_dim(), self.alg.ambient_dim())
            && self.alg.check_homogeneous(x, side.degree(), tol).is_ok()
    }

    fn require(&self, side: Side, x: &ComplexMatrix, tol: &Tolerance) -> Result<()> {
        if self.contains(side, x, tol) {
            Ok(())
        } else {
            Err(Error::WrongComponent)
        }
    }

    /// Side of a nonzero element; `None` for zero.
    pub fn side_of(&self, x: &ComplexMatrix, tol: &Tolerance) -> Result<Option<Side>> {
        if x.shape() == (self.alg.ambient_dim(), self.alg.ambient_dim()) && x.max_abs() == 0.0 {
            return Ok(None);
        }
        for side in [Side::Plus, Side::Minus] {
            if self.contains(side, x, tol) {
                return Ok(Some(side));
            }
        }
        Err(Error::WrongComponent)
    }

    pub fn coordinates(&self, side: Side, x: &ComplexMatrix) -> Vec<C64> {
        GradedAlgebra::coordinates(self.basis(side), x)
    }

    pub fn element(&self, side: Side, coords: &[C64]) -> ComplexMatrix {
        GradedAlgebra::combine(self.basis(side), coords, self.alg.ambient_dim())
    }

    /// Matrix of a linear map on V_side in the fixed basis.
    pub fn operator_matrix(&self, side: Side, op: impl Fn(&ComplexMatrix) -> ComplexMatrix) -> ComplexMatrix {
        let basis = self.basis(side);
        let d = basis.len();
        let mut m = ComplexMatrix::zeros(d, d);
        for (j, b) in basis.iter().enumerate() {
            let img = self.coordinates(side, &op(b));
            for (i, z) in img.into_iter().enumerate() {
                m[(i, j)] = z;
            }
        }
        m
    }

    /// Largest component of {x, y, z} outside V± over all basis triples.
    pub fn closure_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for side in [Side::Plus, Side::Minus] {
            for x in self.basis(side) {
                for y in self.basis(side.opposite()) {
                    for z in self.basis(side) {
                        let t = product(x, y, z);
                        let off = &t - &self.alg.project_degree(&t, side.degree());
                        worst = worst.max(off.frobenius_norm());
                    }
                }
            }
        }
        worst
    }
}

fn product(x: &ComplexMatrix, y: &ComplexMatrix, z: &ComplexMatrix) -> ComplexMatrix {
    x.commutator(y).commutator(z).scale_re(0.5)
}

/// {x, y, z} = ½[[x, y], z] for x, z ∈ V± and y ∈ V∓.
pub fn triple_product(
    pair: &JordanPair,
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    z: &ComplexMatrix,
    tol: &Tolerance,
) -> Result<ComplexMatrix> {
    let side = match (pair.side_of(x, tol)?, pair.side_of(z, tol)?, pair.side_of(y, tol)?) {
        (Some(s), _, _) | (None, Some(s), _) => s,
        (None, None, Some(s)) => s.opposite(),
        (None, None, None) => return Ok(x.clone()),
    };
    pair.require(side, x, tol)?;
    pair.require(side.opposite(), y, tol)?;
    pair.require(side, z, tol)?;
    Ok(bracket(&bracket(x, y)?, z)?.scale_re(0.5))
}

/// B(x, y) = Tr{x, y, ·} on V₊ for x ∈ V₊, y ∈ V₋.
pub fn killing_pairing(pair: &JordanPair, x: &ComplexMatrix, y: &ComplexMatrix, tol: &Tolerance) -> Result<C64> {
    pair.require(Side::Plus, x, tol)?;
    pair.require(Side::Minus, y, tol)?;
    Ok(trace_pairing(pair, Side::Plus, x, y))
}

fn trace_pairing(pair: &JordanPair, side: Side, x: &ComplexMatrix, y: &ComplexMatrix) -> C64 {
    let xy = x.commutator(y);
    pair.basis(side)
        .iter()
        .map(|b| b.inner(&xy.commutator(b).scale_re(0.5)))
        .sum()
}

/// Matrix of the pairing: entry (i, j) is Tr{u_i, v_j, ·} on V_side, with u the
/// basis of V_side and v the basis of the opposite space.
#[derive(Debug, Clone)]
pub struct KillingPairing {
    pub side: Side,
    pub matrix: ComplexMatrix,
}

pub fn pairing_matrix(pair: &JordanPair, side: Side) -> KillingPairing {
    let u = pair.basis(side);
    let v = pair.basis(side.opposite());
    let matrix = ComplexMatrix::from_fn(u.len(), v.len(), |i, j| trace_pairing(pair, side, &u[i], &v[j]));
    KillingPairing { side, matrix }
}

/// Killing form of the ambient algebra restricted to V₊ × V₋.
pub fn restricted_killing(pair: &JordanPair, tol: &Tolerance) -> Result<ComplexMatrix> {
    let u = pair.basis(Side::Plus);
    let v = pair.basis(Side::Minus);
    let mut m = ComplexMatrix::zeros(u.len(), v.len());
    for (i, x) in u.iter().enumerate() {
        for (j, y) in v.iter().enumerate() {
            m[(i, j)] = pair.alg.killing_form(x, y, tol)?;
        }
    }
    Ok(m)
}

/// Best single factor c with pairing ≈ c · Killing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KillingComparison {
    pub c: f64,
    /// |Im c| relative to |c|.
    pub imaginary: f64,
    /// ‖P − c·K‖ / ‖P‖
    pub deviation: f64,
}

pub fn compare_killing(pair: &JordanPair, tol: &Tolerance) -> Result<KillingComparison> {
    let p = pairing_matrix(pair, Side::Plus).matrix;
    let k = restricted_killing(pair, tol)?;
    let kk = k.frobenius_norm().powi(2);
    if kk == 0.0 {
        return Ok(KillingComparison {
            c: 0.0,
            imaginary: 0.0,
            deviation: 0.0,
        });
    }
    let c = k.inner(&p) / kk;
    let deviation = (&p - &k.scale_re(c.re)).frobenius_norm() / p.frobenius_norm().max(f64::MIN_POSITIVE);
    Ok(KillingComparison {
        c: c.re,
        imaginary: c.im.abs() / c.norm(),
        deviation,
    })
}

/// Antilinear ω: V± → V∓ induced by the compact conjugation X ↦ −g g* X* (g g*)⁻¹
/// for g in the Levi group; ω(x) = P x* P⁻¹ with P = g g*.
#[derive(Debug, Clone)]
pub struct CartanInvolution {
    /// ω on V₊ in coordinates, applied to conjugated input coordinates.
    pub omega_plus: ComplexMatrix,
    pub omega_minus: ComplexMatrix,
    g: ComplexMatrix,
    p: ComplexMatrix,
    p_inv: ComplexMatrix,
}

impl CartanInvolution {
    pub fn standard(pair: &JordanPair) -> Self {
        Self::build(pair, ComplexMatrix::identity(pair.alg.ambient_dim())).expect("identity is invertible")
    }

    /// Involution conjugated by g = exp(y) for y ∈ g₀.
    pub fn twisted(pair: &JordanPair, y: &ComplexMatrix, tol: &Tolerance) -> Result<Self> {
        pair.alg.check_homogeneous(y, 0, tol)?;
        Self::build(pair, expm(y))
    }

    fn build(pair: &JordanPair, g: ComplexMatrix) -> Result<Self> {
        let p = &g * &g.adjoint();
        let p_inv = inverse(&p)?;
        let mut out = Self {
            omega_plus: ComplexMatrix::zeros(0, 0),
            omega_minus: ComplexMatrix::zeros(0, 0),
            g,
            p,
            p_inv,
        };
        for side in [Side::Plus, Side::Minus] {
            let from = pair.basis(side);
            let mut m = ComplexMatrix::zeros(pair.dim(side.opposite()), from.len());
            for (j, b) in from.iter().enumerate() {
                for (i, z) in pair
                    .coordinates(side.opposite(), &out.apply_ambient(b))
                    .into_iter()
                    .enumerate()
                {
                    m[(i, j)] = z;
                }
            }
            match side {
                Side::Plus => out.omega_plus = m,
                Side::Minus => out.omega_minus = m,
            }
        }
        Ok(out)
    }

    fn apply_ambient(&self, x: &ComplexMatrix) -> ComplexMatrix {
        &(&self.p * &x.adjoint()) * &self.p_inv
    }

    /// ω(x) through the coordinate matrices.
    pub fn apply(&self, pair: &JordanPair, side: Side, x: &ComplexMatrix) -> ComplexMatrix {
        let coords: Vec<C64> = pair.coordinates(side, x).into_iter().map(|z| z.conj()).collect();
        let m = match side {
            Side::Plus => &self.omega_plus,
            Side::Minus => &self.omega_minus,
        };
        pair.element(side.opposite(), &m.mul_vec(&coords))
    }

    /// The compact conjugation on g₀: Z ↦ −P Z* P⁻¹.
    pub fn conjugation(&self, z: &ComplexMatrix) -> ComplexMatrix {
        -&self.apply_ambient(z)
    }

    pub fn levi_element(&self) -> &ComplexMatrix {
        &self.g
    }

    /// Gram matrix of H(x, y) = B(x, ω(y)) on V_side; H(x, y) = xᵀ G ȳ.
    pub fn hermitian_gram(&self, pair: &JordanPair, side: Side) -> ComplexMatrix {
        let b = pairing_matrix(pair, side).matrix;
        let w = match side {
            Side::Plus => &self.omega_plus,
            Side::Minus => &self.omega_minus,
        };
        &b * w
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CartanReport {
    /// max ‖ω²x − x‖ over basis vectors.
    pub involution_residual: f64,
    /// max ‖ω{x,y,z} − {ωx, ωy, ωz}‖ over basis triples.
    pub equivariance_residual: f64,
    /// ‖G − G*‖ / ‖G‖ for the Gram matrices of H.
    pub hermitian_residual: f64,
    /// λ_min / λ_max of the Gram matrices of H.
    pub min_eigen_ratio: f64,
    pub passed: bool,
}

pub fn check_cartan(pair: &JordanPair, inv: &CartanInvolution, tol: &Tolerance) -> CartanReport {
    let mut involution_residual: f64 = 0.0;
    let mut equivariance_residual: f64 = 0.0;
    let mut hermitian_residual: f64 = 0.0;
    let mut min_eigen_ratio = f64::INFINITY;
    for side in [Side::Plus, Side::Minus] {
        let s = side.opposite();
        for x in pair.basis(side) {
            let back = inv.apply(pair, s, &inv.apply(pair, side, x));
            involution_residual = involution_residual.max((&back - x).frobenius_norm());
            for y in pair.basis(s) {
                let wy = inv.apply(pair, s, y);
                let wx = inv.apply(pair, side, x);
                for z in pair.basis(side) {
                    let lhs = inv.apply(pair, side, &product(x, y, z));
                    let rhs = product(&wx, &wy, &inv.apply(pair, side, z));
                    equivariance_residual = equivariance_residual.max((&lhs - &rhs).frobenius_norm());
                }
            }
        }
        let g = inv.hermitian_gram(pair, side);
        if g.rows() > 0 {
            hermitian_residual = hermitian_residual.max(g.hermitian_defect() / g.frobenius_norm());
            let sym = (&g + &g.adjoint()).scale_re(0.5);
            let vals = hermitian_eigen(&sym).values;
            let max = vals[vals.len() - 1];
            min_eigen_ratio = min_eigen_ratio.min(if max > 0.0 { vals[0] / max } else { -1.0 });
        }
    }
    if min_eigen_ratio == f64::INFINITY {
        min_eigen_ratio = 1.0;
    }
    let scale = 1.0 + inv.p.frobenius_norm() * inv.p_inv.frobenius_norm();
    let passed = involution_residual <= tol.residual_tol * scale
        && equivariance_residual <= tol.residual_tol * scale.powi(3)
        && hermitian_residual <= tol.residual_tol * scale
        && min_eigen_ratio > 1e-6;
    CartanReport {
        involution_residual,
        equivariance_residual,
        hermitian_residual,
        min_eigen_ratio,
        passed,
    }
}

/// max over basis pairs of ‖[ωx, ωy] − θ([x, y])‖, θ the compact conjugation of g₀.
pub fn reconstruction_residual(pair: &JordanPair, inv: &CartanInvolution) -> f64 {
    let mut worst: f64 = 0.0;
    for x in pair.basis(Side::Plus) {
        let wx = inv.apply(pair, Side::Plus, x);
        for y in pair.basis(Side::Minus) {
            let wy = inv.apply(pair, Side::Minus, y);
            let lhs = wx.commutator(&wy);
            let rhs = inv.conjugation(&x.commutator(y));
            worst = worst.max((&lhs - &rhs).frobenius_norm());
        }
    }
    worst
}

/// MP-inverse A⁺ ∈ V∓ of A ∈ V± through the homogeneous sl2-triple, relative to
/// the compact form fixed by `inv`.
pub fn mp_inverse_jordan(
    pair: &JordanPair,
    inv: &CartanInvolution,
    a: &ComplexMatrix,
    tol: &Tolerance,
) -> Result<ComplexMatrix> {
    let side = match pair.side_of(a, tol)? {
        None => return Ok(a.clone()),
        Some(s) => s,
    };
    let g = &inv.g;
    let g_inv = inverse(g)?;
    let a0 = &(&g_inv * a) * g;
    let x0 = match side {
        Side::Plus => mp_inverse_short(&pair.alg, &a0, tol)?,
        Side::Minus => minimal_characteristic(&pair.alg, &a0, -1, tol)?.triple.f,
    };
    Ok(&(g * &x0) * &g_inv)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JordanMpReport {
    /// ‖{A X A} − A‖
    pub r_axa: f64,
    /// ‖{X A X} − X‖
    pub r_xax: f64,
    /// Hermitian defect of {A, X, ·} on A's space.
    pub herm_ax: f64,
    /// Hermitian defect of {X, A, ·} on X's space.
    pub herm_xa: f64,
    pub scale: f64,
    pub passed: bool,
}

impl JordanMpReport {
    pub fn equations_hold(&self, tol: &Tolerance) -> bool {
        self.r_axa.max(self.r_xax) <= tol.residual_tol * self.scale
    }

    pub fn max_residual(&self) -> f64 {
        self.r_axa.max(self.r_xax).max(self.herm_ax).max(self.herm_xa)
    }
}

/// ‖TᵀG − G T̄‖ / ‖G‖: T is H-Hermitian iff this vanishes.
pub fn operator_hermitian_defect(t: &ComplexMatrix, gram: &ComplexMatrix) -> f64 {
    let g = gram.frobenius_norm();
    if g == 0.0 {
        return 0.0;
    }
    (&(&t.transpose() * gram) - &(gram * &t.conj())).frobenius_norm() / g
}

pub fn verify_jordan_mp(
    pair: &JordanPair,
    inv: &CartanInvolution,
    a: &ComplexMatrix,
    x: &ComplexMatrix,
    tol: &Tolerance,
) -> Result<JordanMpReport> {
    let side = match (pair.side_of(a, tol)?, pair.side_of(x, tol)?) {
        (Some(s), _) => s,
        (None, Some(s)) => s.opposite(),
        (None, None) => Side::Plus,
    };
    pair.require(side, a, tol)?;
    pair.require(side.opposite(), x, tol)?;
    let r_axa = (&product(a, x, a) - a).frobenius_norm();
    let r_xax = (&product(x, a, x) - x).frobenius_norm();
    let t_ax = pair.operator_matrix(side, |z| product(a, x, z));
    let t_xa = pair.operator_matrix(side.opposite(), |z| product(x, a, z));
    let herm_ax = operator_hermitian_defect(&t_ax, &inv.hermitian_gram(pair, side));
    let herm_xa = operator_hermitian_defect(&t_xa, &inv.hermitian_gram(pair, side.opposite()));
    let scale = 1.0 + a.frobenius_norm() + x.frobenius_norm();
    let passed = [r_axa, r_xax, herm_ax, herm_xa]
        .iter()
        .all(|&r| r <= tol.residual_tol * scale);
    Ok(JordanMpReport {
        r_axa,
        r_xax,
        herm_ax,
        herm_xa,
        scale,
        passed,
    })
}

/// Outcome of the iteration X ← 2X − {X A X}.
#[derive(Debug, Clone)]
pub struct JordanIteration {
    pub x: ComplexMatrix,
    pub iterations: usize,
    pub converged: bool,
}

const MAX_ITERATIONS: usize = 500;

/// Default start α·ω(A) with α = 1/‖{A, ωA, ·}‖₂.
pub fn default_start(pair: &JordanPair, inv: &CartanInvolution, a: &ComplexMatrix, side: Side) -> ComplexMatrix {
    let wa = inv.apply(pair, side, a);
    let l = pair.operator_matrix(side, |z| product(a, &wa, z));
    let rho = spectral_norm(&l);
    if rho == 0.0 {
        return wa;
    }
    wa.scale_re(1.0 / rho)
}

/// Solves the pair equations by the Newton–Schulz-type iteration X ← 2X − {X A X}.
pub fn jordan_equation_inverse(
    pair: &JordanPair,
    inv: &CartanInvolution,
    a: &ComplexMatrix,
    start: Option<&ComplexMatrix>,
    tol: &Tolerance,
) -> Result<JordanIteration> {
    let side = match pair.side_of(a, tol)? {
        None => {
            return Ok(JordanIteration {
                x: a.clone(),
                iterations: 0,
                converged: true,
            })
        }
        Some(s) => s,
    };
    let mut x = match start {
        Some(x0) => {
            pair.require(side.opposite(), x0, tol)?;
            x0.clone()
        }
        None => default_start(pair, inv, a, side),
    };
    let mut prev = f64::INFINITY;
    for it in 1..=MAX_ITERATIONS {
        let next = &x.scale_re(2.0) - &product(&x, a, &x);
        let step = (&next - &x).frobenius_norm() / next.frobenius_norm().max(f64::MIN_POSITIVE);
        x = next;
        if !x.is_finite() {
            return Err(Error::NonFinite);
        }
        if step < 1e-14 || (step >= prev && prev < 1e-9) {
            return Ok(JordanIteration {
                x,
                iterations: it,
                converged: true,
            });
        }
        prev = step;
    }
    Ok(JordanIteration {
        x,
        iterations: MAX_ITERATIONS,
        converged: false,
    })
}
