//! Dense square matrices over [`RingElem`]. Indices are 0-based.

use std::ops::{Add, Mul, Sub};

use crate::ring::RingElem;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    n: usize,
    data: Vec<RingElem>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix {
            n,
            data: vec![RingElem::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = RingElem::one();
        }
        m
    }

    pub fn diagonal(diag: &[RingElem]) -> Self {
        let mut m = Matrix::zeros(diag.len());
        for (i, d) in diag.iter().enumerate() {
            m.set(i, i, d.clone());
        }
        m
    }

    pub fn from_entries(
        n: usize,
        entries: impl IntoIterator<Item = (usize, usize, RingElem)>,
    ) -> Self {
        let mut m = Matrix::zeros(n);
        for (r, c, v) in entries {
            m.set(r, c, v);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> &RingElem {
        &self.data[row * self.n + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: RingElem) {
        self.data[row * self.n + col] = v;
    }

    /// Nonzero entries as `(row, col, value)`, row-major.
    pub fn nonzeros(&self) -> impl Iterator<Item = (usize, usize, &RingElem)> + '_ {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| (i / self.n, i % self.n, v))
    }

    pub fn is_identity(&self) -> bool {
        *self == Matrix::identity(self.n)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(RingElem::is_zero)
    }

    pub fn scale(&self, s: &RingElem) -> Matrix {
        Matrix {
            n: self.n,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    /// Kronecker product; `other` is inserted at every entry of `self`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let n = self.n * other.n;
        let mut out = Matrix::zeros(n);
        for (i, k, a) in self.nonzeros() {
            for (j, l, b) in other.nonzeros() {
                out.set(i * other.n + j, k * other.n + l, a * b);
            }
        }
        out
    }

    pub fn eval(&self, q: f64, p: f64, y: f64) -> Vec<f64> {
        self.data.iter().map(|v| v.eval(q, p, y)).collect()
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &rhs.data[k * n + j];
                    if !b.is_zero() {
                        out.data[i * n + j].add_product(a, b);
                    }
                }
            }
        }
        out
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        Matrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        Matrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}
