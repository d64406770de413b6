//! Explicit matrix representation of the Clifford algebra.
//!
//! Used only as an oracle: the algebra itself is defined by the reduction
//! rules in [`crate::clifford`].

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::clifford::Clifford;
use crate::error::{Error, Result};
use crate::poly::{Assignment, Poly};
use crate::scalar::{Scalar, ToComplex64};

/// Dense square matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    dim: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zero(dim: usize) -> Self {
        Matrix {
            dim,
            data: vec![S::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zero(dim);
        for k in 0..dim {
            m.data[k * dim + k] = S::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let dim = rows.len();
        let data: Vec<S> = rows.into_iter().flatten().collect();
        assert_eq!(data.len(), dim * dim, "matrix must be square");
        Matrix { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> &S {
        &self.data[r * self.dim + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: S) {
        self.data[r * self.dim + c] = v;
    }

    pub fn scale(&self, s: &S) -> Self {
        Matrix {
            dim: self.dim,
            data: self.data.iter().map(|x| x.mul_ref(s)).collect(),
        }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix {
            dim: self.dim,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn trace(&self) -> S {
        let mut acc = S::zero();
        for k in 0..self.dim {
            acc.add_assign_ref(self.get(k, k));
        }
        acc
    }

    /// `tr(self * other)` in `O(dim^2)`.
    pub fn trace_product(&self, other: &Self) -> S {
        let d = self.dim;
        let mut acc = S::zero();
        for r in 0..d {
            for c in 0..d {
                let a = &self.data[r * d + c];
                if a.is_zero() {
                    continue;
                }
                acc.add_assign_ref(&a.mul_ref(&other.data[c * d + r]));
            }
        }
        acc
    }

    pub fn kron(&self, other: &Self) -> Self {
        let d = self.dim * other.dim;
        let mut out = Self::zero(d);
        for r1 in 0..self.dim {
            for c1 in 0..self.dim {
                let a = self.get(r1, c1);
                if a.is_zero() {
                    continue;
                }
                for r2 in 0..other.dim {
                    for c2 in 0..other.dim {
                        out.set(
                            r1 * other.dim + r2,
                            c1 * other.dim + c2,
                            a.mul_ref(other.get(r2, c2)),
                        );
                    }
                }
            }
        }
        out
    }

    pub fn add_scaled(&mut self, other: &Self, s: &S) {
        for (x, y) in self.data.iter_mut().zip(&other.data) {
            if !y.is_zero() {
                x.add_assign_ref(&y.mul_ref(s));
            }
        }
    }
}

impl<S: Scalar> Mul<&Matrix<S>> for &Matrix<S> {
    type Output = Matrix<S>;
    fn mul(self, rhs: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        let d = self.dim;
        let mut out = Matrix::<S>::zero(d);
        for r in 0..d {
            for k in 0..d {
                let a = &self.data[r * d + k];
                if a.is_zero() {
                    continue;
                }
                for c in 0..d {
                    let b = &rhs.data[k * d + c];
                    if !b.is_zero() {
                        out.data[r * d + c].add_assign_ref(&a.mul_ref(b));
                    }
                }
            }
        }
        out
    }
}

impl<S: Scalar> Add<&Matrix<S>> for &Matrix<S> {
    type Output = Matrix<S>;
    fn add(self, rhs: &Matrix<S>) -> Matrix<S> {
        let mut out = self.clone();
        out.add_scaled(rhs, &S::one());
        out
    }
}

impl<S: Scalar> Sub<&Matrix<S>> for &Matrix<S> {
    type Output = Matrix<S>;
    fn sub(self, rhs: &Matrix<S>) -> Matrix<S> {
        let mut out = self.clone();
        out.add_scaled(rhs, &-S::one());
        out
    }
}

/// `n` matrices of size `2^(n/2)` with `g_i g_j + g_j g_i = -2 delta_ij`.
#[derive(Clone, Debug)]
pub struct GammaRep<S> {
    n: usize,
    gammas: Vec<Matrix<S>>,
}

impl<S: Scalar> GammaRep<S> {
    /// Iterated tensor products of Pauli matrices, multiplied by `i`.
    pub fn new(n: usize) -> Result<Self> {
        if n % 2 == 1 || n == 0 || n > 10 {
            return Err(Error::InvalidArgument(format!(
                "gamma representation needs even rank in 2..=10, got {n}"
            )));
        }
        let o = S::zero;
        let l = S::one;
        let i = S::imag_unit;
        let s1 = Matrix::from_rows(vec![vec![o(), l()], vec![l(), o()]]);
        let s2 = Matrix::from_rows(vec![vec![o(), -i()], vec![i(), o()]]);
        let s3 = Matrix::from_rows(vec![vec![l(), o()], vec![o(), -l()]]);
        let id2 = Matrix::<S>::identity(2);
        let k = n / 2;
        let mut gammas = Vec::with_capacity(n);
        for j in 0..k {
            for s in [&s1, &s2] {
                let mut m = Matrix::identity(1);
                for _ in 0..j {
                    m = m.kron(&s3);
                }
                m = m.kron(s);
                for _ in j + 1..k {
                    m = m.kron(&id2);
                }
                gammas.push(m.scale(&S::imag_unit()));
            }
        }
        Ok(GammaRep { n, gammas })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << (self.n / 2)
    }

    /// `gamma_k`, `k` counted from 1.
    pub fn gamma(&self, k: usize) -> &Matrix<S> {
        &self.gammas[k - 1]
    }

    /// Matrix of the basis word with the given bitmask.
    pub fn word(&self, mask: u32) -> Matrix<S> {
        let mut m = Matrix::identity(self.dim());
        for k in 0..self.n {
            if mask & (1 << k) != 0 {
                m = &m * &self.gammas[k];
            }
        }
        m
    }

    /// Image of a Clifford element with scalar coefficients.
    pub fn represent(&self, a: &Clifford<S>) -> Matrix<S> {
        let mut m = Matrix::zero(self.dim());
        for (mask, c) in a.terms() {
            m.add_scaled(&self.word(mask), c);
        }
        m
    }
}

/// Evaluates a Clifford element numerically in the gamma representation
/// and returns the matrix trace.
pub fn matrix_trace_oracle<S: Scalar + ToComplex64>(
    a: &Clifford<Poly<S>>,
    assignment: &Assignment,
) -> Result<Complex64> {
    let rep = GammaRep::<Complex64>::new(a.rank())?;
    let numeric = a.try_map_coeffs(|p| p.eval(assignment))?;
    Ok(rep.represent(&numeric).trace())
}
