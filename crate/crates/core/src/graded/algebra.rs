use std::fmt;

use crate::error::{Error, Result};
use crate::numcore::{rank_decomposition, ComplexMatrix, Tolerance, C64, ONE, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Sl,
    So,
    Sp,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Sl => "sl",
            Kind::So => "so",
            Kind::Sp => "sp",
        })
    }
}

/// Orthonormal basis of one graded component.
#[derive(Debug, Clone)]
pub struct Component {
    pub degree: i32,
    pub basis: Vec<ComplexMatrix>,
}

/// A classical matrix Lie algebra with a block Z-grading.
///
/// Entry (r, c) of an ambient matrix has degree `block(c) - block(r)`. For SO and
/// SP the invariant form pairs block i with block k-1-i, which keeps every
/// graded component inside the algebra.
#[derive(Debug, Clone)]
pub struct GradedAlgebra {
    kind: Kind,
    blocks: Vec<usize>,
    offsets: Vec<usize>,
    block_of: Vec<usize>,
    form: Option<ComplexMatrix>,
    components: Vec<Component>,
}

impl GradedAlgebra {
    pub fn new(kind: Kind, blocks: &[usize]) -> Result<Self> {
        match kind {
            Kind::Sl => Self::sl(blocks),
            Kind::So => Self::so(blocks),
            Kind::Sp => Self::sp(blocks),
        }
    }

    /// sl_n with the given block sizes.
    pub fn sl(blocks: &[usize]) -> Result<Self> {
        check_blocks(blocks)?;
        Self::build(Kind::Sl, blocks, None)
    }

    /// so_n with the block-pairing symmetric form (identity on a middle block).
    pub fn so(blocks: &[usize]) -> Result<Self> {
        check_blocks(blocks)?;
        check_palindromic(blocks)?;
        let form = paired_form(blocks, Kind::So);
        Self::build(Kind::So, blocks, Some(form))
    }

    /// sp_2n with the block-pairing skew form (standard J on a middle block).
    pub fn sp(blocks: &[usize]) -> Result<Self> {
        check_blocks(blocks)?;
        check_palindromic(blocks)?;
        let k = blocks.len();
        if k % 2 == 1 && blocks[k / 2] % 2 == 1 {
            return Err(Error::InvalidGrading(
                "middle block of a symplectic grading must have even size".into(),
            ));
        }
        let form = paired_form(blocks, Kind::Sp);
        Self::build(Kind::Sp, blocks, Some(form))
    }

    /// SO or SP with an explicit real orthogonal form. The form must pair
    /// block i with block k-1-i.
    pub fn with_form(kind: Kind, blocks: &[usize], form: ComplexMatrix, tol: &Tolerance) -> Result<Self> {
        check_blocks(blocks)?;
        let n: usize = blocks.iter().sum();
        if kind == Kind::Sl {
            return Err(Error::InvalidGrading("sl carries no invariant form".into()));
        }
        if form.shape() != (n, n) {
            return Err(Error::ShapeMismatch(format!(
                "form is {}x{}, blocks sum to {n}",
                form.rows(),
                form.cols()
            )));
        }
        let sign = if kind == Kind::So { 1.0 } else { -1.0 };
        let sym = (&form.transpose() - &form.scale_re(sign)).frobenius_norm();
        let orth = (&(&form.adjoint() * &form) - &ComplexMatrix::identity(n)).frobenius_norm();
        let defect = sym + orth + form.imag_norm();
        if defect > tol.residual_tol * (1.0 + form.frobenius_norm()) {
            return Err(Error::SymmetryViolation { defect });
        }
        let block_of = block_index(blocks);
        let k = blocks.len();
        for r in 0..n {
            for c in 0..n {
                if form[(r, c)] != ZERO && block_of[r] + block_of[c] != k - 1 {
                    return Err(Error::InvalidGrading(format!(
                        "form entry ({r},{c}) does not pair block {} with block {}",
                        block_of[r],
                        k - 1 - block_of[r]
                    )));
                }
            }
        }
        Self::build(kind, blocks, Some(form))
    }

    fn build(kind: Kind, blocks: &[usize], form: Option<ComplexMatrix>) -> Result<Self> {
        let n: usize = blocks.iter().sum();
        let block_of = block_index(blocks);
        let mut offsets = Vec::with_capacity(blocks.len());
        let mut acc = 0;
        for &b in blocks {
            offsets.push(acc);
            acc += b;
        }
        let kmax = blocks.len() as i32 - 1;
        let mut components = Vec::new();
        for m in -kmax..=kmax {
            let positions: Vec<(usize, usize)> = (0..n)
                .flat_map(|r| (0..n).map(move |c| (r, c)))
                .filter(|&(r, c)| block_of[c] as i32 - block_of[r] as i32 == m)
                .collect();
            let basis = component_basis(kind, n, &positions, form.as_ref());
            components.push(Component { degree: m, basis });
        }
        Ok(Self {
            kind,
            blocks: blocks.to_vec(),
            offsets,
            block_of,
            form,
            components,
        })
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn ambient_dim(&self) -> usize {
        self.block_of.len()
    }

    pub fn block_sizes(&self) -> &[usize] {
        &self.blocks
    }

    pub fn block_offset(&self, i: usize) -> usize {
        self.offsets[i]
    }

    pub fn block_of(&self, coord: usize) -> usize {
        self.block_of[coord]
    }

    pub fn form_matrix(&self) -> Option<&ComplexMatrix> {
        self.form.as_ref()
    }

    /// Degree of the block (i, j).
    pub fn degree_of_block(&self, i: usize, j: usize) -> i32 {
        j as i32 - i as i32
    }

    pub fn max_degree(&self) -> i32 {
        self.blocks.len() as i32 - 1
    }

    pub fn dim(&self) -> usize {
        self.components.iter().map(|c| c.basis.len()).sum()
    }

    /// Basis of g_m; empty outside the grading range.
    pub fn component(&self, m: i32) -> &[ComplexMatrix] {
        self.components
            .iter()
            .find(|c| c.degree == m)
            .map_or(&[][..], |c| &c.basis)
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    /// Orthonormal basis of the whole algebra, ordered by degree.
    pub fn basis(&self) -> Vec<ComplexMatrix> {
        self.components.iter().flat_map(|c| c.basis.iter().cloned()).collect()
    }

    /// True if g_m = 0 for all |m| > 1.
    pub fn is_short(&self) -> bool {
        self.short_violation().is_none()
    }

    pub(crate) fn short_violation(&self) -> Option<i32> {
        self.components
            .iter()
            .find(|c| c.degree.abs() > 1 && !c.basis.is_empty())
            .map(|c| c.degree)
    }

    /// Component of `x` in degree `m` (support restriction).
    pub fn project_degree(&self, x: &ComplexMatrix, m: i32) -> ComplexMatrix {
        let n = self.ambient_dim();
        ComplexMatrix::from_fn(n, n, |r, c| {
            if self.block_of[c] as i32 - self.block_of[r] as i32 == m {
                x[(r, c)]
            } else {
                ZERO
            }
        })
    }

    /// Degree of `x` if its support lies in a single degree; `None` for zero or mixed support.
    pub fn degree_of(&self, x: &ComplexMatrix) -> Option<i32> {
        let mut deg = None;
        for r in 0..x.rows() {
            for c in 0..x.cols() {
                if x[(r, c)] != ZERO {
                    let m = self.block_of[c] as i32 - self.block_of[r] as i32;
                    match deg {
                        None => deg = Some(m),
                        Some(d) if d != m => return None,
                        _ => {}
                    }
                }
            }
        }
        deg
    }

    /// Distance from `x` to the algebra.
    pub fn membership_residual(&self, x: &ComplexMatrix) -> f64 {
        let n = self.ambient_dim();
        if x.shape() != (n, n) {
            return f64::INFINITY;
        }
        let mut r = match self.kind {
            Kind::Sl => x.trace().norm() / (n as f64).sqrt(),
            _ => 0.0,
        };
        if let Some(s) = &self.form {
            r += (&(&x.transpose() * s) + &(s * x)).frobenius_norm();
        }
        r
    }

    pub fn check_member(&self, x: &ComplexMatrix, tol: &Tolerance) -> Result<()> {
        let n = self.ambient_dim();
        if x.shape() != (n, n) {
            return Err(Error::ShapeMismatch(format!(
                "element is {}x{}, algebra acts on dimension {n}",
                x.rows(),
                x.cols()
            )));
        }
        if !x.is_finite() {
            return Err(Error::NonFinite);
        }
        let residual = self.membership_residual(x);
        if residual > tol.residual_tol * (1.0 + x.frobenius_norm()) {
            return Err(Error::NotInAlgebra { residual });
        }
        Ok(())
    }

    /// Checks membership in g_m: in the algebra and supported in degree m up to tolerance.
    pub fn check_homogeneous(&self, x: &ComplexMatrix, m: i32, tol: &Tolerance) -> Result<()> {
        self.check_member(x, tol)?;
        let off = (x - &self.project_degree(x, m)).frobenius_norm();
        if off > tol.residual_tol * (1.0 + x.frobenius_norm()) {
            return Err(Error::NotHomogeneous);
        }
        Ok(())
    }

    /// Coordinates of `x` in the orthonormal basis `basis`.
    pub fn coordinates(basis: &[ComplexMatrix], x: &ComplexMatrix) -> Vec<C64> {
        basis.iter().map(|b| b.inner(x)).collect()
    }

    pub fn combine(basis: &[ComplexMatrix], coeffs: &[C64], n: usize) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(n, n);
        for (b, &c) in basis.iter().zip(coeffs) {
            if c != ZERO {
                out = &out + &b.scale(c);
            }
        }
        out
    }

    /// Matrix of ad(x) in the full orthonormal basis.
    pub fn ad_matrix(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let basis = self.basis();
        ad_in_basis(&basis, &basis, x)
    }

    /// Killing form tr(ad x · ad y).
    pub fn killing_form(&self, x: &ComplexMatrix, y: &ComplexMatrix, tol: &Tolerance) -> Result<C64> {
        self.check_member(x, tol)?;
        self.check_member(y, tol)?;
        Ok(self
            .basis()
            .iter()
            .map(|b| b.inner(&bracket_unchecked(x, &bracket_unchecked(y, b))))
            .sum())
    }

    /// Compact-form conjugation θ(X) = −X*.
    pub fn theta(&self, x: &ComplexMatrix) -> ComplexMatrix {
        -&x.adjoint()
    }

    /// Copy of the block (i, j) of an ambient matrix.
    pub fn block(&self, x: &ComplexMatrix, i: usize, j: usize) -> ComplexMatrix {
        x.submatrix(self.offsets[i], self.offsets[j], self.blocks[i], self.blocks[j])
    }

    /// Ambient matrix with `b` in block (i, j) and zeros elsewhere.
    pub fn embed_block(&self, b: &ComplexMatrix, i: usize, j: usize) -> ComplexMatrix {
        assert_eq!(b.shape(), (self.blocks[i], self.blocks[j]));
        let n = self.ambient_dim();
        let mut x = ComplexMatrix::zeros(n, n);
        x.set_submatrix(self.offsets[i], self.offsets[j], b);
        x
    }
}

/// Lie bracket XY − YX.
pub fn bracket(x: &ComplexMatrix, y: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !x.is_square() || x.shape() != y.shape() {
        return Err(Error::ShapeMismatch(format!(
            "bracket of {}x{} and {}x{}",
            x.rows(),
            x.cols(),
            y.rows(),
            y.cols()
        )));
    }
    Ok(bracket_unchecked(x, y))
}

pub(crate) fn bracket_unchecked(x: &ComplexMatrix, y: &ComplexMatrix) -> ComplexMatrix {
    x.commutator(y)
}

/// Matrix of ad(x) from span(domain) to span(codomain); both orthonormal.
pub fn ad_in_basis(codomain: &[ComplexMatrix], domain: &[ComplexMatrix], x: &ComplexMatrix) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(codomain.len(), domain.len());
    for (j, b) in domain.iter().enumerate() {
        let img = bracket_unchecked(x, b);
        for (i, c) in codomain.iter().enumerate() {
            m[(i, j)] = c.inner(&img);
        }
    }
    m
}

fn check_blocks(blocks: &[usize]) -> Result<()> {
    if blocks.is_empty() || blocks.contains(&0) {
        return Err(Error::InvalidGrading(
            "block sizes must be positive and non-empty".into(),
        ));
    }
    Ok(())
}

fn check_palindromic(blocks: &[usize]) -> Result<()> {
    let k = blocks.len();
    if (0..k).any(|i| blocks[i] != blocks[k - 1 - i]) {
        return Err(Error::InvalidGrading(format!(
            "orthogonal and symplectic gradings need palindromic blocks, got {blocks:?}"
        )));
    }
    Ok(())
}

fn block_index(blocks: &[usize]) -> Vec<usize> {
    blocks
        .iter()
        .enumerate()
        .flat_map(|(i, &b)| std::iter::repeat_n(i, b))
        .collect()
}

fn paired_form(blocks: &[usize], kind: Kind) -> ComplexMatrix {
    let n: usize = blocks.iter().sum();
    let k = blocks.len();
    let mut offsets = vec![0; k];
    for i in 1..k {
        offsets[i] = offsets[i - 1] + blocks[i - 1];
    }
    let mut s = ComplexMatrix::zeros(n, n);
    for i in 0..k {
        let j = k - 1 - i;
        if i < j {
            for p in 0..blocks[i] {
                let (r, c) = (offsets[i] + p, offsets[j] + p);
                s[(r, c)] = ONE;
                s[(c, r)] = if kind == Kind::So { ONE } else { -ONE };
            }
        } else if i == j {
            let d = blocks[i];
            let o = offsets[i];
            match kind {
                Kind::So => {
                    for p in 0..d {
                        s[(o + p, o + p)] = ONE;
                    }
                }
                _ => {
                    let h = d / 2;
                    for p in 0..h {
                        s[(o + p, o + h + p)] = ONE;
                        s[(o + h + p, o + p)] = -ONE;
                    }
                }
            }
        }
    }
    s
}

/// Orthonormal basis of the algebra elements supported on `positions`.
fn component_basis(
    kind: Kind,
    n: usize,
    positions: &[(usize, usize)],
    form: Option<&ComplexMatrix>,
) -> Vec<ComplexMatrix> {
    if positions.is_empty() {
        return Vec::new();
    }
    let p = positions.len();
    let constraints = match (kind, form) {
        (Kind::Sl, _) => {
            let diag: Vec<usize> = (0..p).filter(|&q| positions[q].0 == positions[q].1).collect();
            if diag.is_empty() {
                ComplexMatrix::zeros(0, p)
            } else {
                let mut c = ComplexMatrix::zeros(1, p);
                for q in diag {
                    c[(0, q)] = ONE;
                }
                c
            }
        }
        (_, Some(s)) => {
            // Row (a, b) of XᵀS + SX, for a ≤ b (the expression is (skew-)symmetric).
            let rows: Vec<(usize, usize)> = (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect();
            let row_index = |a: usize, b: usize| -> Option<usize> {
                if a <= b {
                    Some(a * n - a * (a + 1) / 2 + b)
                } else {
                    None
                }
            };
            let mut c = ComplexMatrix::zeros(rows.len(), p);
            for (q, &(r, col)) in positions.iter().enumerate() {
                // X = E_{r,col}: (XᵀS)_{a b} = [a == col]·S_{r b}; (SX)_{a b} = S_{a r}·[b == col]
                for b in 0..n {
                    let v = s[(r, b)];
                    if v != ZERO {
                        if let Some(i) = row_index(col, b) {
                            c[(i, q)] += v;
                        }
                    }
                }
                for a in 0..n {
                    let v = s[(a, r)];
                    if v != ZERO {
                        if let Some(i) = row_index(a, col) {
                            c[(i, q)] += v;
                        }
                    }
                }
            }
            debug_assert_eq!(rows.len(), n * (n + 1) / 2);
            c
        }
        (_, None) => unreachable!("orthogonal and symplectic algebras always carry a form"),
    };
    let kernel = if constraints.rows() == 0 {
        ComplexMatrix::identity(p)
    } else {
        rank_decomposition(&constraints, &Tolerance::default()).kernel_basis
    };
    (0..kernel.cols())
        .map(|j| {
            let mut x = ComplexMatrix::zeros(n, n);
            for (q, &(r, c)) in positions.iter().enumerate() {
                x[(r, c)] = clean(kernel[(q, j)]);
            }
            x
        })
        .collect()
}

// Flush rounding noise below the support threshold.
fn clean(z: C64) -> C64 {
    let f = |x: f64| if x.abs() < 1e-15 { 0.0 } else { x };
    C64::new(f(z.re), f(z.im))
}
