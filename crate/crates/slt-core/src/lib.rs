//! Exact-arithmetic toolkit for subspace lattices and reflexive operator
//! algebras on finite-dimensional spaces.
//!
//! Everything is computed over the rationals (or Gaussian rationals), so
//! rank decisions, lattice operations and algebra dimensions are exact:
//! there are no tolerances anywhere. The main pieces:
//!
//! - [`matrix`]: canonical exact linear algebra (RREF, kernels, Kronecker
//!   products, orthogonal projections);
//! - [`subspace`] and [`lattice`]: subspaces in canonical form, finite
//!   lattice closure, the `L₋` operation, atoms and structural
//!   classification (CSL / distributive / complemented / ABSL);
//! - [`opalg`]: operator algebras as matrix spaces — `Alg L`, the rank one
//!   subspace, rank one density, invariant subspaces;
//! - [`tensor`]: atom maps and the `theta`/`phi` correspondence between
//!   them and tensor product lattices, plus cyclic-vector decompositions;
//! - [`checks`] and [`scenario`]: a verification engine that exercises the
//!   lattice-tensor identities on concrete instances and writes
//!   deterministic reports.

pub mod checks;
pub mod error;
pub mod fixtures;
pub mod json;
pub mod lattice;
pub mod matrix;
pub mod opalg;
pub mod rng;
pub mod scalar;
pub mod scenario;
pub mod subspace;
pub mod tensor;

pub use error::{Error, Result};
pub use lattice::{LatticeFlags, ProjectionLattice};
pub use matrix::Matrix;
pub use opalg::OperatorSpace;
pub use scalar::{Field, Scalar};
pub use subspace::Subspace;
pub use tensor::{AtomMap, TensorLattice};
