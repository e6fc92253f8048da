//! Subspaces of F^n in canonical form.
//!
//! A subspace is stored as the unique RREF-canonical basis of its column
//! space together with its orthogonal projection matrix. Two subspaces are
//! equal exactly when their canonical bases are entrywise equal, which
//! makes them hashable, orderable and deduplicable — the property the
//! lattice closure engine depends on.

use crate::error::{Error, Result};
use crate::matrix::{orthogonal_projection, Matrix};
use crate::scalar::Scalar;
use std::cmp::Ordering;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    /// n×k matrix whose columns are the canonical basis vectors.
    basis: Matrix,
    /// Cached orthogonal projection onto the subspace.
    projection: Matrix,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Subspace {
        Subspace {
            ambient,
            basis: Matrix::zeros(ambient, 0),
            projection: Matrix::zeros(ambient, ambient),
        }
    }

    pub fn full(ambient: usize) -> Subspace {
        Subspace {
            ambient,
            basis: Matrix::identity(ambient),
            projection: Matrix::identity(ambient),
        }
    }

    /// Subspace spanned by the columns of `spanning` (dependencies allowed).
    pub fn from_spanning(spanning: &Matrix) -> Subspace {
        let ambient = spanning.rows();
        let basis = canonical_basis(spanning);
        let projection = orthogonal_projection(&basis);
        Subspace {
            ambient,
            basis,
            projection,
        }
    }

    /// Subspace spanned by the given coordinate vectors.
    pub fn from_vectors(ambient: usize, vectors: &[Vec<Scalar>]) -> Result<Subspace> {
        for v in vectors {
            if v.len() != ambient {
                return Err(Error::DimensionMismatch {
                    left: ambient,
                    right: v.len(),
                });
            }
        }
        Ok(Subspace::from_spanning(&Matrix::from_columns(
            ambient, vectors,
        )))
    }

    /// Coordinate subspace spanned by the listed standard basis vectors.
    pub fn coordinate(ambient: usize, axes: &[usize]) -> Subspace {
        let cols: Vec<Vec<Scalar>> = axes
            .iter()
            .map(|&a| {
                let mut v = vec![Scalar::zero(); ambient];
                v[a] = Scalar::one();
                v
            })
            .collect();
        Subspace::from_spanning(&Matrix::from_columns(ambient, &cols))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn projection(&self) -> &Matrix {
        &self.projection
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch {
                left: self.ambient,
                right: other.ambient,
            });
        }
        Ok(())
    }

    /// Intersection, computed as the kernel of the stacked complement
    /// constraints `(I−P_S)x = 0`, `(I−P_T)x = 0`.
    pub fn meet(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let id = Matrix::identity(self.ambient);
        let a = &id - &self.projection;
        let b = &id - &other.projection;
        let kernel = Matrix::vstack(&[&a, &b]).kernel_basis();
        Ok(Subspace::from_spanning(&kernel))
    }

    /// Linear span of the union of the two subspaces.
    pub fn join(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        Ok(Subspace::from_spanning(&Matrix::hstack(&[
            &self.basis,
            &other.basis,
        ])))
    }

    /// Orthogonal complement with respect to the Hermitian inner product.
    pub fn perp(&self) -> Subspace {
        let kernel = self.basis.adjoint().kernel_basis();
        let basis = canonical_basis(&kernel);
        let projection = &Matrix::identity(self.ambient) - &self.projection;
        debug_assert_eq!(projection, orthogonal_projection(&basis));
        Subspace {
            ambient: self.ambient,
            basis,
            projection,
        }
    }

    /// Range inclusion, decided by `rank([basis(T) | basis(S)]) = rank(basis(T))`.
    pub fn leq(&self, other: &Subspace) -> Result<bool> {
        self.check_ambient(other)?;
        if self.dim() > other.dim() {
            return Ok(false);
        }
        Ok(Matrix::hstack(&[&other.basis, &self.basis]).rank() == other.dim())
    }

    pub fn contains_vector(&self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.ambient);
        self.projection.mul_vec(v) == v
    }

    /// Image of the subspace under a linear map (an m×n matrix applied to
    /// a subspace of F^n).
    pub fn apply(&self, map: &Matrix) -> Subspace {
        assert_eq!(map.cols(), self.ambient, "map domain mismatch");
        Subspace::from_spanning(&(map * &self.basis))
    }

    /// Tensor product subspace `self ⊗ other` inside F^(m·n), realized via
    /// Kronecker products. The projection onto it is the Kronecker product
    /// of the factor projections.
    pub fn kron(&self, other: &Subspace) -> Subspace {
        let ambient = self.ambient * other.ambient;
        let basis = canonical_basis(&self.basis.kronecker(&other.basis));
        let projection = self.projection.kronecker(&other.projection);
        debug_assert_eq!(projection, orthogonal_projection(&basis));
        Subspace {
            ambient,
            basis,
            projection,
        }
    }

    /// Deterministic total order: ambient, then dimension, then the
    /// canonical basis entries lexicographically. Lattice element lists
    /// are sorted by this order, so 0 comes first and I last.
    pub fn cmp_canonical(&self, other: &Subspace) -> Ordering {
        self.ambient
            .cmp(&other.ambient)
            .then_with(|| self.dim().cmp(&other.dim()))
            .then_with(|| {
                for (a, b) in self.basis.entries().iter().zip(other.basis.entries()) {
                    let ord = a.cmp_lex(b);
                    if ord != Ordering::Equal {
                        return ord;
                    }
                }
                Ordering::Equal
            })
    }

    pub fn has_gaussian_entries(&self) -> bool {
        self.basis.entries().iter().any(|s| !s.is_real())
    }
}

/// Canonical basis of the column space of `spanning`: the nonzero rows of
/// `rref(spanningᵀ)`, transposed back into columns. Unique per subspace.
fn canonical_basis(spanning: &Matrix) -> Matrix {
    let (r, pivots) = spanning.transpose().rref();
    Matrix::from_fn(spanning.rows(), pivots.len(), |i, j| r.get(j, i).clone())
}

impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_canonical(other)
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "Subspace(0 in F^{})", self.ambient);
        }
        if self.is_full() {
            return write!(f, "Subspace(F^{})", self.ambient);
        }
        write!(
            f,
            "Subspace(dim {} in F^{}, basis ",
            self.dim(),
            self.ambient
        )?;
        for j in 0..self.basis.cols() {
            let col: Vec<String> = (0..self.ambient)
                .map(|i| self.basis.get(i, j).to_string())
                .collect();
            write!(f, "({})", col.join(","))?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn span(ambient: usize, vecs: &[&[i64]]) -> Subspace {
        Subspace::from_vectors(
            ambient,
            &vecs
                .iter()
                .map(|v| v.iter().map(|&n| Scalar::from_int(n)).collect())
                .collect::<Vec<_>>(),
        )
        .unwrap()
    }

    #[test]
    fn canonical_form_identifies_equal_spans() {
        let a = span(2, &[&[1, 1], &[2, 2]]);
        let b = span(2, &[&[3, 3]]);
        assert_eq!(a, b);
        assert_eq!(a.dim(), 1);
    }

    #[test]
    fn meet_examples() {
        let e1 = span(2, &[&[1, 0]]);
        let diag = span(2, &[&[1, 1]]);
        assert_eq!(e1.meet(&e1).unwrap(), e1);
        assert!(e1.meet(&diag).unwrap().is_zero());
        assert_eq!(e1.meet(&Subspace::full(2)).unwrap(), e1);
    }

    #[test]
    fn join_examples() {
        let e1 = span(2, &[&[1, 0]]);
        let diag = span(2, &[&[1, 1]]);
        assert!(e1.join(&diag).unwrap().is_full());
        assert_eq!(e1.join(&Subspace::zero(2)).unwrap(), e1);
        assert_eq!(e1.join(&diag).unwrap(), diag.join(&e1).unwrap());
    }

    #[test]
    fn perp_examples() {
        assert!(Subspace::zero(3).perp().is_full());
        // span(1,1)⊥ = span(1,−1), by solving x + y = 0
        let d = span(2, &[&[1, 1]]);
        assert_eq!(d.perp(), span(2, &[&[1, -1]]));
        let s = span(3, &[&[1, 2, 0], &[0, 1, 1]]);
        assert_eq!(s.perp().perp(), s);
    }

    #[test]
    fn leq_examples() {
        let e1 = span(3, &[&[1, 0, 0]]);
        let e12 = span(3, &[&[1, 0, 0], &[0, 1, 0]]);
        let e2 = span(3, &[&[0, 1, 0]]);
        assert!(Subspace::zero(3).leq(&e2).unwrap());
        assert!(e1.leq(&e12).unwrap());
        assert!(!e1.leq(&e2).unwrap());
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let a = Subspace::zero(2);
        let b = Subspace::zero(3);
        assert!(matches!(a.meet(&b), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(a.join(&b), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(a.leq(&b), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn kron_of_lines() {
        let e1 = span(2, &[&[1, 0]]);
        let d = span(2, &[&[1, 1]]);
        let t = e1.kron(&d);
        assert_eq!(t.ambient_dim(), 4);
        assert_eq!(t.dim(), 1);
        // e1 ⊗ (1,1) = (1,1,0,0) under K-major indexing
        assert!(t.contains_vector(&[Scalar::one(), Scalar::one(), Scalar::zero(), Scalar::zero()]));
    }

    #[test]
    fn canonical_order_sorts_zero_first_full_last() {
        let mut v = [Subspace::full(2), span(2, &[&[1, 0]]), Subspace::zero(2)];
        v.sort();
        assert!(v[0].is_zero());
        assert!(v[2].is_full());
    }
}
