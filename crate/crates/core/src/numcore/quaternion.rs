use std::ops::{Add, Mul, Neg, Sub};

use super::matrix::{c, ComplexMatrix};
use crate::error::{Error, Result};

/// q = a + b·i + c·j + d·k
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quaternion {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Quaternion {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Self = Self::new(1.0, 0.0, 0.0, 0.0);

    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { a, b, c, d }
    }

    pub fn conj(self) -> Self {
        Self::new(self.a, -self.b, -self.c, -self.d)
    }

    pub fn norm_sqr(self) -> f64 {
        self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d
    }

    pub fn is_finite(self) -> bool {
        [self.a, self.b, self.c, self.d].iter().all(|x| x.is_finite())
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }
}

impl Add for Quaternion {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)
    }
}

impl Sub for Quaternion {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)
    }
}

impl Neg for Quaternion {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl Mul for Quaternion {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.a * o.a - self.b * o.b - self.c * o.c - self.d * o.d,
            self.a * o.b + self.b * o.a + self.c * o.d - self.d * o.c,
            self.a * o.c - self.b * o.d + self.c * o.a + self.d * o.b,
            self.a * o.d + self.b * o.c - self.c * o.b + self.d * o.a,
        )
    }
}

/// Dense row-major quaternion matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct QuaternionMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Quaternion>,
}

impl QuaternionMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Quaternion::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Quaternion::ONE;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Quaternion>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if !data.iter().all(|q| q.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Quaternion {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, q: Quaternion) {
        self.data[i * self.cols + j] = q;
    }

    pub fn as_slice(&self) -> &[Quaternion] {
        &self.data
    }

    /// Quaternionic conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = Quaternion::ZERO;
                for k in 0..self.cols {
                    acc = acc + self.get(i, k) * rhs.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Complex embedding ε, entrywise q ↦ [[a+bi, c+di], [−c+di, a−bi]].
    pub fn embed(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(2 * self.rows, 2 * self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let q = self.get(i, j);
                m[(2 * i, 2 * j)] = c(q.a, q.b);
                m[(2 * i, 2 * j + 1)] = c(q.c, q.d);
                m[(2 * i + 1, 2 * j)] = c(-q.c, q.d);
                m[(2 * i + 1, 2 * j + 1)] = c(q.a, -q.b);
            }
        }
        m
    }

    /// Inverse of [`embed`](Self::embed). Each 2×2 block is projected onto the image of ε;
    /// fails if the projection moves any entry by more than `max_mismatch` in Frobenius norm.
    pub fn from_embedding(m: &ComplexMatrix, max_mismatch: f64) -> Result<Self> {
        if !m.rows().is_multiple_of(2) || !m.cols().is_multiple_of(2) {
            return Err(Error::ShapeMismatch(format!(
                "embedded matrix must have even shape, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let (rows, cols) = (m.rows() / 2, m.cols() / 2);
        let mut out = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                let p = m[(2 * i, 2 * j)];
                let q = m[(2 * i, 2 * j + 1)];
                let r = m[(2 * i + 1, 2 * j)];
                let s = m[(2 * i + 1, 2 * j + 1)];
                let z1 = (p + s.conj()) * 0.5;
                let z2 = (q - r.conj()) * 0.5;
                out.set(i, j, Quaternion::new(z1.re, z1.im, z2.re, z2.im));
            }
        }
        let mismatch = (&out.embed() - m).frobenius_norm();
        if mismatch > max_mismatch {
            return Err(Error::EmbeddingMismatch { mismatch });
        }
        Ok(out)
    }
}
