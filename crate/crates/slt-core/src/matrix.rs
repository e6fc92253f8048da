//! Dense exact matrices and the canonical-form algorithms the rest of the
//! toolkit is built on: reduced row echelon form, kernel bases, Kronecker
//! products and orthogonal projections.
//!
//! All values are immutable after construction and every operation is a
//! pure function over the exact field, so results are reproducible
//! bit-for-bit across runs and platforms.

use crate::scalar::Scalar;
use std::fmt;
use std::ops::{Add, Index, Mul, Sub};

/// A rows×cols matrix over the exact field, stored row-major.
///
/// Zero-row and zero-column matrices are first-class: a basis of the zero
/// subspace of F^n is the n×0 matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            entries: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Matrix {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Matrix {
            rows,
            cols,
            entries,
        }
    }

    /// Builds an n×k matrix whose columns are the given vectors.
    pub fn from_columns(ambient: usize, cols: &[Vec<Scalar>]) -> Matrix {
        assert!(
            cols.iter().all(|c| c.len() == ambient),
            "column length mismatch"
        );
        Matrix::from_fn(ambient, cols.len(), |i, j| cols[j][i].clone())
    }

    /// Convenience constructor from integer literals, used pervasively in tests.
    pub fn from_int_rows(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&n| Scalar::from_int(n)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    /// Entrywise conjugation (no transpose).
    pub fn conj(&self) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).conj())
    }

    pub fn scale(&self, by: &Scalar) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) * by)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for (j, vj) in v.iter().enumerate() {
                    if !self.get(i, j).is_zero() && !vj.is_zero() {
                        acc += &(self.get(i, j) * vj);
                    }
                }
                acc
            })
            .collect()
    }

    /// Stacks matrices left-to-right (equal row counts).
    pub fn hstack(parts: &[&Matrix]) -> Matrix {
        assert!(!parts.is_empty());
        let rows = parts[0].rows;
        assert!(
            parts.iter().all(|p| p.rows == rows),
            "row count mismatch in hstack"
        );
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut m = Matrix::zeros(rows, cols);
        let mut off = 0;
        for p in parts {
            for i in 0..rows {
                for j in 0..p.cols {
                    m.set(i, off + j, p.get(i, j).clone());
                }
            }
            off += p.cols;
        }
        m
    }

    /// Stacks matrices top-to-bottom (equal column counts).
    pub fn vstack(parts: &[&Matrix]) -> Matrix {
        assert!(!parts.is_empty());
        let cols = parts[0].cols;
        assert!(
            parts.iter().all(|p| p.cols == cols),
            "column count mismatch in vstack"
        );
        let entries = parts
            .iter()
            .flat_map(|p| p.entries.iter().cloned())
            .collect();
        Matrix {
            rows: parts.iter().map(|p| p.rows).sum(),
            cols,
            entries,
        }
    }

    pub fn select_columns(&self, idx: &[usize]) -> Matrix {
        Matrix::from_fn(self.rows, idx.len(), |i, j| self.get(i, idx[j]).clone())
    }

    /// Reduced row echelon form together with the pivot column indices.
    /// The RREF is unique, which is what makes it usable as a canonical
    /// form for row spaces and hence for subspaces.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    let a = m.get(r, j).clone();
                    let b = m.get(p, j).clone();
                    m.set(r, j, b);
                    m.set(p, j, a);
                }
            }
            let inv = m.get(r, c).inv();
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i != r && !m.get(i, c).is_zero() {
                    let factor = m.get(i, c).clone();
                    for j in c..m.cols {
                        let v = m.get(i, j).clone() - &(&factor * m.get(r, j));
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Canonical basis of `{x : Ax = 0}`, returned as the columns of a
    /// cols×(cols−rank) matrix. Each free column of the RREF contributes
    /// one basis vector with a 1 in its own position, so the result is
    /// determined by the matrix alone.
    pub fn kernel_basis(&self) -> Matrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Matrix::zeros(self.cols, free.len());
        for (out, &f) in free.iter().enumerate() {
            k.set(f, out, Scalar::one());
            for (row, &p) in pivots.iter().enumerate() {
                k.set(p, out, -r.get(row, f));
            }
        }
        k
    }

    /// Gauss-Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<Matrix> {
        assert!(self.is_square(), "inverse of non-square matrix");
        let n = self.rows;
        let aug = Matrix::hstack(&[self, &Matrix::identity(n)]);
        let (r, pivots) = aug.rref();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        Some(Matrix::from_fn(n, n, |i, j| r.get(i, n + j).clone()))
    }

    /// Kronecker product: block (i,j) of the result is `a_ij · B`.
    pub fn kronecker(&self, other: &Matrix) -> Matrix {
        let (p, q) = (other.rows, other.cols);
        Matrix::from_fn(self.rows * p, self.cols * q, |i, j| {
            let a = self.get(i / p, j / q);
            if a.is_zero() {
                Scalar::zero()
            } else {
                a * other.get(i % p, j % q)
            }
        })
    }

    /// Column-stacking vectorization: `vec(T)[j·rows + i] = T[i,j]`.
    /// Fixed convention; kernel computations on operator spaces rely on
    /// `vec(ATB) = (Bᵀ ⊗ A)·vec(T)` holding for it.
    pub fn vectorize(&self) -> Vec<Scalar> {
        let mut v = Vec::with_capacity(self.rows * self.cols);
        for j in 0..self.cols {
            for i in 0..self.rows {
                v.push(self.get(i, j).clone());
            }
        }
        v
    }

    /// Inverse of [`Matrix::vectorize`].
    pub fn from_vectorized(rows: usize, cols: usize, v: &[Scalar]) -> Matrix {
        assert_eq!(v.len(), rows * cols);
        Matrix::from_fn(rows, cols, |i, j| v[j * rows + i].clone())
    }

    /// Rank one operator `x·y*`: maps z to (z,y)·x.
    pub fn outer(x: &[Scalar], y: &[Scalar]) -> Matrix {
        Matrix::from_fn(x.len(), y.len(), |i, j| &x[i] * &y[j].conj())
    }
}

/// Orthogonal projection onto the column space of `b`.
///
/// A column basis is extracted first (the input may be linearly
/// dependent), then `P = B'(B'*B')⁻¹B'*`. The Gram matrix is invertible
/// over Q and Q(i) because both fields are formally real, and the result
/// stays in the field. An empty span yields the zero projection.
pub fn orthogonal_projection(b: &Matrix) -> Matrix {
    let n = b.rows();
    let (_, pivots) = b.rref();
    if pivots.is_empty() {
        return Matrix::zeros(n, n);
    }
    let basis = b.select_columns(&pivots);
    let gram = &basis.adjoint() * &basis;
    let inv = gram
        .inverse()
        .expect("Gram matrix of independent columns is invertible");
    &(&basis * &inv) * &basis.adjoint()
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        self.get(i, j)
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert!(
            self.rows == rhs.rows && self.cols == rhs.cols,
            "shape mismatch"
        );
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).clone() + rhs.get(i, j)
        })
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert!(
            self.rows == rhs.rows && self.cols == rhs.cols,
            "shape mismatch"
        );
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).clone() - rhs.get(i, j)
        })
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "inner dimension mismatch");
        Matrix::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = Scalar::zero();
            for k in 0..self.cols {
                let a = self.get(i, k);
                if !a.is_zero() {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        acc += &(a * b);
                    }
                }
            }
            acc
        })
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  [")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}
