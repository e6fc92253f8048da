//! Atom maps and the correspondence between them and tensor product
//! lattices.
//!
//! An [`AtomMap`] assigns a subspace of K to each member of a finite list
//! of subspaces of H. The two directions of the correspondence are
//!
//! - `theta(f) = ∨_j f(E_j) ⊗ E_j`, a subspace of K⊗H, and
//! - `phi(Q)(E) = the largest R with R ⊗ E ≤ Q`,
//!
//! where `phi` comes in two modes: the *full* mode solves for the maximal
//! subspace directly with one kernel problem per atom (the solution set is
//! itself a subspace, so it equals the supremum over the full projection
//! lattice of K), while the *lattice* mode takes the join over an explicit
//! finite lattice, matching the set-theoretic definition literally.
//!
//! Tensor products of lattices are generated by the elementary Kronecker
//! projections and closed by the generic fixpoint engine. The K factor
//! always comes first in Kronecker indexing: `(u⊗v)[j·dim H + i] = u[j]·v[i]`.

use crate::error::{Error, Result};
use crate::lattice::ProjectionLattice;
use crate::matrix::Matrix;
use crate::opalg;
use crate::scalar::Scalar;
use crate::subspace::Subspace;

/// A map from a finite list of subspaces of H (the "atoms", though any
/// subspaces are allowed) to subspaces of K.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomMap {
    k_dim: usize,
    h_dim: usize,
    atoms: Vec<Subspace>,
    values: Vec<Subspace>,
}

impl AtomMap {
    pub fn new(k_dim: usize, atoms: Vec<Subspace>, values: Vec<Subspace>) -> Result<AtomMap> {
        if atoms.len() != values.len() {
            return Err(Error::LengthMismatch {
                atoms: atoms.len(),
                values: values.len(),
            });
        }
        let h_dim = atoms.first().map_or(0, Subspace::ambient_dim);
        for a in &atoms {
            if a.ambient_dim() != h_dim {
                return Err(Error::DimensionMismatch {
                    left: h_dim,
                    right: a.ambient_dim(),
                });
            }
        }
        for v in &values {
            if v.ambient_dim() != k_dim {
                return Err(Error::DimensionMismatch {
                    left: k_dim,
                    right: v.ambient_dim(),
                });
            }
        }
        Ok(AtomMap {
            k_dim,
            h_dim,
            atoms,
            values,
        })
    }

    /// The constant map with the given value on every atom.
    pub fn constant(atoms: &[Subspace], value: &Subspace) -> Result<AtomMap> {
        AtomMap::new(
            value.ambient_dim(),
            atoms.to_vec(),
            vec![value.clone(); atoms.len()],
        )
    }

    pub fn k_dim(&self) -> usize {
        self.k_dim
    }

    pub fn h_dim(&self) -> usize {
        self.h_dim
    }

    pub fn atoms(&self) -> &[Subspace] {
        &self.atoms
    }

    pub fn values(&self) -> &[Subspace] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    fn check_same_atoms(&self, other: &AtomMap) -> Result<()> {
        if self.atoms != other.atoms || self.k_dim != other.k_dim {
            return Err(Error::invalid(
                "atom maps must share the same atom list and value space",
            ));
        }
        Ok(())
    }

    /// Pointwise join: `(f ∨ g)(E) = f(E) ∨ g(E)`.
    pub fn join(&self, other: &AtomMap) -> Result<AtomMap> {
        self.check_same_atoms(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.join(b))
            .collect::<Result<Vec<_>>>()?;
        AtomMap::new(self.k_dim, self.atoms.clone(), values)
    }

    /// Pointwise meet: `(f ∧ g)(E) = f(E) ∧ g(E)`.
    pub fn meet(&self, other: &AtomMap) -> Result<AtomMap> {
        self.check_same_atoms(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.meet(b))
            .collect::<Result<Vec<_>>>()?;
        AtomMap::new(self.k_dim, self.atoms.clone(), values)
    }

    /// Pointwise order: `f ≤ g` iff `f(E) ≤ g(E)` for every atom.
    pub fn leq(&self, other: &AtomMap) -> Result<bool> {
        self.check_same_atoms(other)?;
        for (a, b) in self.values.iter().zip(&other.values) {
            if !a.leq(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The dual map over the complement atoms: `f⊥(D_j) = f(E_j)⊥`.
    /// `complement_atoms` must be index-aligned with this map's atoms, as
    /// produced by [`ProjectionLattice::complement_lattice`].
    pub fn perp(&self, complement_atoms: &[Subspace]) -> Result<AtomMap> {
        if complement_atoms.len() != self.atoms.len() {
            return Err(Error::LengthMismatch {
                atoms: complement_atoms.len(),
                values: self.values.len(),
            });
        }
        let values = self.values.iter().map(Subspace::perp).collect();
        AtomMap::new(self.k_dim, complement_atoms.to_vec(), values)
    }
}

/// `theta(f) = ∨_j f(E_j) ⊗ E_j` inside K⊗H. The empty join is 0.
pub fn theta(f: &AtomMap) -> Subspace {
    let ambient = f.k_dim() * f.h_dim();
    let mut acc = Subspace::zero(ambient);
    for (value, atom) in f.values().iter().zip(f.atoms()) {
        acc = acc.join(&value.kron(atom)).expect("product dims agree");
    }
    acc
}

/// Full-mode `phi`: for each atom E, the maximal subspace
/// `R_E = {x ∈ K : x ⊗ e ∈ Q for all e ∈ range E}`, computed by one
/// kernel solve per atom. Membership of x⊗e in Q is the constraint
/// `(I − P_Q)·(I_K ⊗ e)·x = 0` stacked over a basis of E.
pub fn phi_full(q: &Subspace, atoms: &[Subspace], k_dim: usize) -> Result<AtomMap> {
    let h_dim = atoms.first().map_or(0, Subspace::ambient_dim);
    if q.ambient_dim() != k_dim * h_dim {
        return Err(Error::DimensionMismatch {
            left: q.ambient_dim(),
            right: k_dim * h_dim,
        });
    }
    let id_kh = Matrix::identity(q.ambient_dim());
    let id_k = Matrix::identity(k_dim);
    let off_q = &id_kh - q.projection();
    let mut values = Vec::with_capacity(atoms.len());
    for atom in atoms {
        if atom.is_zero() {
            // every x satisfies x ⊗ 0 ≤ Q
            values.push(Subspace::full(k_dim));
            continue;
        }
        let mut blocks = Vec::with_capacity(atom.dim());
        for j in 0..atom.dim() {
            let e = Matrix::from_columns(atom.ambient_dim(), &[atom.basis().column(j)]);
            blocks.push(&off_q * &id_k.kronecker(&e));
        }
        let refs: Vec<&Matrix> = blocks.iter().collect();
        let kernel = Matrix::vstack(&refs).kernel_basis();
        values.push(Subspace::from_spanning(&kernel));
    }
    AtomMap::new(k_dim, atoms.to_vec(), values)
}

/// Lattice-mode `phi`: the join over the explicit finite lattice,
/// `f_Q(E) = ∨{P ∈ L : P ⊗ E ≤ Q}`.
pub fn phi_lattice(
    q: &Subspace,
    atoms: &[Subspace],
    lattice: &ProjectionLattice,
) -> Result<AtomMap> {
    if !lattice.is_closed() {
        return Err(Error::NotClosed);
    }
    let k_dim = lattice.ambient_dim();
    let h_dim = atoms.first().map_or(0, Subspace::ambient_dim);
    if q.ambient_dim() != k_dim * h_dim {
        return Err(Error::DimensionMismatch {
            left: q.ambient_dim(),
            right: k_dim * h_dim,
        });
    }
    let mut values = Vec::with_capacity(atoms.len());
    for atom in atoms {
        let mut acc = Subspace::zero(k_dim);
        for p in lattice.elements() {
            if p.kron(atom).leq(q)? {
                acc = acc.join(p)?;
            }
        }
        values.push(acc);
    }
    AtomMap::new(k_dim, atoms.to_vec(), values)
}

/// The tensor product lattice L⊗M: the closure of the elementary
/// projections `a ⊗ b`, with a record of where each elementary tensor
/// landed in the product.
#[derive(Clone, Debug)]
pub struct TensorLattice {
    left: ProjectionLattice,
    right: ProjectionLattice,
    product: ProjectionLattice,
    elementary: Vec<ElementaryTensor>,
}

/// Indices of one elementary tensor `left[i] ⊗ right[j] = product[k]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ElementaryTensor {
    pub left_index: usize,
    pub right_index: usize,
    pub product_index: usize,
}

impl TensorLattice {
    pub fn left(&self) -> &ProjectionLattice {
        &self.left
    }

    pub fn right(&self) -> &ProjectionLattice {
        &self.right
    }

    pub fn product(&self) -> &ProjectionLattice {
        &self.product
    }

    pub fn elementary(&self) -> &[ElementaryTensor] {
        &self.elementary
    }
}

/// Generates L⊗M by closing the set of elementary Kronecker projections.
pub fn tensor_lattice(
    left: &ProjectionLattice,
    right: &ProjectionLattice,
    cap: usize,
) -> Result<TensorLattice> {
    if !left.is_closed() || !right.is_closed() {
        return Err(Error::NotClosed);
    }
    let mut generators = Vec::with_capacity(left.len() * right.len());
    for a in left.elements() {
        for b in right.elements() {
            generators.push(a.kron(b));
        }
    }
    let product =
        ProjectionLattice::closure(left.ambient_dim() * right.ambient_dim(), &generators, cap)?;
    let mut elementary = Vec::with_capacity(generators.len());
    for (li, a) in left.elements().iter().enumerate() {
        for (ri, b) in right.elements().iter().enumerate() {
            let product_index = product
                .index_of(&a.kron(b))
                .ok_or_else(|| Error::Internal("elementary tensor missing from closure".into()))?;
            elementary.push(ElementaryTensor {
                left_index: li,
                right_index: ri,
                product_index,
            });
        }
    }
    Ok(TensorLattice {
        left: left.clone(),
        right: right.clone(),
        product,
        elementary,
    })
}

/// The flip K⊗H → H⊗K on subspaces, realized by the perfect-shuffle
/// permutation `(u ⊗ v) ↦ (v ⊗ u)`.
pub fn swap_tensor_factors(s: &Subspace, k_dim: usize, h_dim: usize) -> Result<Subspace> {
    if s.ambient_dim() != k_dim * h_dim {
        return Err(Error::DimensionMismatch {
            left: s.ambient_dim(),
            right: k_dim * h_dim,
        });
    }
    let b = s.basis();
    let permuted = Matrix::from_fn(b.rows(), b.cols(), |row, col| {
        let (i, j) = (row / k_dim, row % k_dim); // target index (i,j) in H⊗K
        b.get(j * h_dim + i, col).clone()
    });
    Ok(Subspace::from_spanning(&permuted))
}

/// Decomposes the cyclic subspace of ξ under `1 ⊗ Alg M` as `theta(f)`.
///
/// ξ ∈ K⊗H is reshaped into the K×H matrix X with `ξ = Σ_j e_j ⊗ x_j` and
/// row j of X equal to x_j (the K index is the row index — `theta`'s
/// Kronecker order depends on this). For each atom E of M the value is
///
/// `f(E) = X · conj(range (E₋)⊥)`,
///
/// the image of the conjugated co-atom range; the conjugation implements
/// the inner products `(x_j, q)` and is the identity over Q. Requires the
/// rank one density property — without it the orbit can be strictly larger
/// than `theta(f)` — and checks the resulting identity before returning.
pub fn cyclic_decomposition(xi: &[Scalar], m: &ProjectionLattice, k_dim: usize) -> Result<AtomMap> {
    if !opalg::has_rank_one_density(m)? {
        return Err(Error::DensityRequired);
    }
    let h_dim = m.ambient_dim();
    if xi.len() != k_dim * h_dim {
        return Err(Error::DimensionMismatch {
            left: xi.len(),
            right: k_dim * h_dim,
        });
    }
    let x = Matrix::from_fn(k_dim, h_dim, |j, i| xi[j * h_dim + i].clone());

    let atoms = m.atoms()?;
    let mut values = Vec::with_capacity(atoms.len());
    for atom in &atoms {
        let coatom_perp = m.l_minus(atom)?.perp();
        values.push(Subspace::from_spanning(&(&x * &coatom_perp.basis().conj())));
    }
    let f = AtomMap::new(k_dim, atoms, values)?;

    // the defining identity: theta(f) is exactly the orbit span of ξ
    let alg = opalg::alg_of(m)?;
    let id_k = Matrix::identity(k_dim);
    let orbit: Vec<Vec<Scalar>> = alg
        .basis()
        .iter()
        .map(|t| id_k.kronecker(t).mul_vec(xi))
        .collect();
    let orbit_span = Subspace::from_vectors(k_dim * h_dim, &orbit)?;
    if theta(&f) != orbit_span {
        return Err(Error::Internal(
            "cyclic decomposition does not match the orbit span".into(),
        ));
    }
    Ok(f)
}
