//! The bundled lattice corpus used by scenarios and the acceptance suite.
//!
//! Every fixture is deterministic: the "generic" two-atom lattices derive
//! their atoms from a seed, so a scenario pins them completely. The
//! `reflexive` flag records which fixtures are known reflexive (trivial
//! lattices, nests and atomic Boolean lattices are; the diamond is not),
//! which the membership-style checks use to pick between exact lattice
//! membership and the invariance-only necessary condition.

use crate::error::{Error, Result};
use crate::lattice::{ProjectionLattice, DEFAULT_CLOSURE_CAP};
use crate::rng::{self, rng_for};
use crate::scalar::{Field, Scalar};
use crate::subspace::Subspace;

/// A named lattice plus the metadata the checks care about.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub lattice: ProjectionLattice,
    /// Known to satisfy L = Lat Alg L.
    pub reflexive: bool,
}

fn span_int(ambient: usize, vecs: &[&[i64]]) -> Subspace {
    Subspace::from_vectors(
        ambient,
        &vecs
            .iter()
            .map(|v| v.iter().map(|&n| Scalar::from_int(n)).collect())
            .collect::<Vec<_>>(),
    )
    .expect("fixture vectors sized to ambient")
}

/// {0, I} on F^n.
pub fn trivial(n: usize) -> ProjectionLattice {
    ProjectionLattice::trivial(n)
}

/// The nest {0, span(e1), I} on F².
pub fn nest2() -> ProjectionLattice {
    ProjectionLattice::from_elements(2, vec![span_int(2, &[&[1, 0]])])
        .expect("nest elements share ambient dim")
}

/// The two-atom Boolean lattice {0, span(e1), span(e1+e2), I} on F².
pub fn two_atom2() -> ProjectionLattice {
    ProjectionLattice::from_elements(2, vec![span_int(2, &[&[1, 0]]), span_int(2, &[&[1, 1]])])
        .expect("two-atom elements share ambient dim")
}

/// The Boolean lattice of all coordinate subspaces of F^n (2^n elements).
pub fn axes(n: usize) -> ProjectionLattice {
    let gens: Vec<Subspace> = (0..n).map(|i| Subspace::coordinate(n, &[i])).collect();
    ProjectionLattice::closure(n, &gens, (1 << n).max(16)).expect("axes closure fits 2^n")
}

/// The diamond of three distinct lines in F²: the smallest
/// non-distributive subspace lattice, and one without rank one density.
pub fn nondistributive2() -> ProjectionLattice {
    ProjectionLattice::closure(
        2,
        &[
            span_int(2, &[&[1, 0]]),
            span_int(2, &[&[0, 1]]),
            span_int(2, &[&[1, 1]]),
        ],
        DEFAULT_CLOSURE_CAP,
    )
    .expect("diamond closure has 5 elements")
}

/// A seeded "generic" two-atom Boolean lattice {0, P, Q, I} with
/// complementary atoms of dimension `atom_dim` inside F^ambient. Atom
/// spanning vectors are drawn until P ∧ Q = 0 and P ∨ Q = I hold, which a
/// generic draw satisfies immediately.
pub fn generic_two_atom(
    ambient: usize,
    atom_dim: usize,
    seed: u64,
    field: Field,
) -> Result<ProjectionLattice> {
    if atom_dim == 0 || 2 * atom_dim != ambient {
        return Err(Error::invalid(
            "generic two-atom lattice needs ambient = 2 × atom_dim, atom_dim ≥ 1",
        ));
    }
    let mut r = rng_for(seed);
    for _ in 0..64 {
        let p_vecs: Vec<Vec<Scalar>> = (0..atom_dim)
            .map(|_| rng::random_vector(&mut r, ambient, field))
            .collect();
        let q_vecs: Vec<Vec<Scalar>> = (0..atom_dim)
            .map(|_| rng::random_vector(&mut r, ambient, field))
            .collect();
        let p = Subspace::from_vectors(ambient, &p_vecs)?;
        let q = Subspace::from_vectors(ambient, &q_vecs)?;
        if p.dim() != atom_dim || q.dim() != atom_dim {
            continue;
        }
        if !p.meet(&q)?.is_zero() {
            continue;
        }
        debug_assert!(p.join(&q)?.is_full());
        let lat = ProjectionLattice::from_elements(ambient, vec![p, q])?;
        debug_assert!(lat.flags().is_absl);
        return Ok(lat);
    }
    Err(Error::Internal(
        "failed to draw complementary atoms in 64 attempts".into(),
    ))
}

/// Resolves a fixture by its scenario/CLI name. Seeded fixtures (the
/// generic family) consume the given seed.
pub fn resolve(name: &str, seed: u64, field: Field) -> Result<Fixture> {
    let canonical = name.to_ascii_lowercase();
    let (lattice, reflexive) = match canonical.as_str() {
        "triv2" => (trivial(2), true),
        "triv3" => (trivial(3), true),
        "nest2" => (nest2(), true),
        "twoatom2" => (two_atom2(), true),
        "axes3" => (axes(3), true),
        "axes4" => (axes(4), true),
        "nondist2" => (nondistributive2(), false),
        "generic4" => (generic_two_atom(4, 2, seed, field)?, true),
        _ => return Err(Error::UnknownFixture(name.to_string())),
    };
    Ok(Fixture {
        name: canonical,
        lattice,
        reflexive,
    })
}

pub const FIXTURE_NAMES: &[&str] = &[
    "triv2", "triv3", "nest2", "twoatom2", "axes3", "axes4", "nondist2", "generic4",
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opalg;

    #[test]
    fn corpus_shapes() {
        assert_eq!(trivial(2).len(), 2);
        assert_eq!(nest2().len(), 3);
        assert_eq!(two_atom2().len(), 4);
        assert_eq!(axes(3).len(), 8);
        assert_eq!(axes(4).len(), 16);
        assert_eq!(nondistributive2().len(), 5);
    }

    #[test]
    fn axes_lattices_are_commutative_absls() {
        for n in [3, 4] {
            let f = axes(n).flags();
            assert!(f.is_csl && f.is_absl);
        }
    }

    #[test]
    fn generic_two_atom_is_a_dense_absl() {
        for seed in [1u64, 2, 3] {
            let lat = generic_two_atom(4, 2, seed, Field::Rational).unwrap();
            assert_eq!(lat.len(), 4);
            assert!(lat.flags().is_absl);
            assert!(opalg::has_rank_one_density(&lat).unwrap());
        }
    }

    #[test]
    fn generic_two_atom_is_seed_deterministic() {
        let a = generic_two_atom(4, 2, 9, Field::Rational).unwrap();
        let b = generic_two_atom(4, 2, 9, Field::Rational).unwrap();
        assert_eq!(a.elements(), b.elements());
    }

    #[test]
    fn resolve_knows_the_corpus() {
        for name in FIXTURE_NAMES {
            let f = resolve(name, 7, Field::Rational).unwrap();
            assert!(f.lattice.is_closed());
        }
        assert!(matches!(
            resolve("nosuch", 0, Field::Rational),
            Err(Error::UnknownFixture(_))
        ));
    }
}
