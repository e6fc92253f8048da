//! Finite projection lattices: closure under meet and join, the `L₋`
//! operation, atoms, and structural classification.
//!
//! Topological closure has no finite content, so "subspace lattice" here
//! means a finite family containing 0 and I and closed under pairwise
//! ∧ and ∨. Closed lattices carry meet/join index tables, which makes the
//! O(n³) distributivity scan and the ABSL checks cheap even at the
//! closure cap.

use crate::error::{Error, Result};
use crate::subspace::Subspace;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Default cap on closure size. Tensor closures can explode; every
/// identity checked by the verification engine has a witness well inside
/// this bound.
pub const DEFAULT_CLOSURE_CAP: usize = 512;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeFlags {
    pub is_closed: bool,
    pub is_csl: bool,
    pub is_distributive: bool,
    pub is_complemented: bool,
    pub is_absl: bool,
}

/// Meet/join tables and atom indices, present exactly when the element
/// set is closed.
#[derive(Clone, Debug)]
struct ClosedData {
    meet: Vec<usize>,
    join: Vec<usize>,
    atoms: Vec<usize>,
}

/// A finite set of subspaces of a common ambient space, deduplicated and
/// sorted canonically. Always contains 0 and I.
#[derive(Clone, Debug)]
pub struct ProjectionLattice {
    ambient: usize,
    elements: Vec<Subspace>,
    closed: Option<ClosedData>,
    flags: LatticeFlags,
}

impl ProjectionLattice {
    /// The trivial lattice {0, I}.
    pub fn trivial(ambient: usize) -> ProjectionLattice {
        ProjectionLattice::from_elements(ambient, vec![]).expect("trivial lattice is closed")
    }

    /// Builds a lattice from an explicit element list. 0 and I are added
    /// if missing, duplicates are dropped, and the result is checked for
    /// closure; classification flags reflect what was found.
    pub fn from_elements(ambient: usize, elements: Vec<Subspace>) -> Result<ProjectionLattice> {
        let mut set = BTreeSet::new();
        for e in elements {
            if e.ambient_dim() != ambient {
                return Err(Error::DimensionMismatch {
                    left: ambient,
                    right: e.ambient_dim(),
                });
            }
            set.insert(e);
        }
        set.insert(Subspace::zero(ambient));
        set.insert(Subspace::full(ambient));
        let elements: Vec<Subspace> = set.into_iter().collect();
        let mut lat = ProjectionLattice {
            ambient,
            elements,
            closed: None,
            flags: LatticeFlags::default(),
        };
        lat.closed = lat.build_tables();
        lat.flags = lat.classify();
        Ok(lat)
    }

    /// Smallest family containing `generators` ∪ {0, I} that is closed
    /// under pairwise ∧ and ∨, computed by fixpoint iteration with
    /// canonical-form deduplication. Fails once more than `cap` elements
    /// appear, reporting the partial set and the offending pair.
    pub fn closure(
        ambient: usize,
        generators: &[Subspace],
        cap: usize,
    ) -> Result<ProjectionLattice> {
        let cap = cap.max(2);
        let mut set = BTreeSet::new();
        set.insert(Subspace::zero(ambient));
        set.insert(Subspace::full(ambient));
        for g in generators {
            if g.ambient_dim() != ambient {
                return Err(Error::DimensionMismatch {
                    left: ambient,
                    right: g.ambient_dim(),
                });
            }
            set.insert(g.clone());
        }
        if set.len() > cap {
            let witness = Box::new((generators[0].clone(), generators[0].clone()));
            return Err(Error::CapExceeded {
                cap,
                partial: set.into_iter().collect(),
                witness,
            });
        }

        // Worklist fixpoint: combine each new element against everything
        // known so far; pairs of older elements were handled in earlier
        // rounds.
        let mut all: Vec<Subspace> = set.iter().cloned().collect();
        let mut start = 0;
        while start < all.len() {
            let end = all.len();
            for i in start..end {
                for j in 0..end {
                    let a = all[i].clone();
                    let b = all[j].clone();
                    for cand in [a.meet(&b)?, a.join(&b)?] {
                        if !set.contains(&cand) {
                            if set.len() == cap {
                                return Err(Error::CapExceeded {
                                    cap,
                                    partial: set.into_iter().collect(),
                                    witness: Box::new((a, b)),
                                });
                            }
                            set.insert(cand.clone());
                            all.push(cand);
                        }
                    }
                }
            }
            start = end;
        }

        let elements: Vec<Subspace> = set.into_iter().collect();
        let mut lat = ProjectionLattice {
            ambient,
            elements,
            closed: None,
            flags: LatticeFlags::default(),
        };
        lat.closed = lat.build_tables();
        debug_assert!(lat.closed.is_some(), "closure output must be closed");
        lat.flags = lat.classify();
        Ok(lat)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false // always contains 0 and I
    }

    pub fn elements(&self) -> &[Subspace] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Subspace {
        &self.elements[i]
    }

    pub fn flags(&self) -> LatticeFlags {
        self.flags
    }

    pub fn is_closed(&self) -> bool {
        self.closed.is_some()
    }

    /// Index of `s` in the element list, if present.
    pub fn index_of(&self, s: &Subspace) -> Option<usize> {
        self.elements.binary_search_by(|e| e.cmp_canonical(s)).ok()
    }

    pub fn contains(&self, s: &Subspace) -> bool {
        self.index_of(s).is_some()
    }

    fn tables(&self) -> Result<&ClosedData> {
        self.closed.as_ref().ok_or(Error::NotClosed)
    }

    pub fn meet_index(&self, i: usize, j: usize) -> Result<usize> {
        Ok(self.tables()?.meet[i * self.len() + j])
    }

    pub fn join_index(&self, i: usize, j: usize) -> Result<usize> {
        Ok(self.tables()?.join[i * self.len() + j])
    }

    fn zero_index(&self) -> usize {
        0 // canonical order sorts by dimension
    }

    fn full_index(&self) -> usize {
        self.len() - 1
    }

    /// `L₋ = ∨{P ∈ L : L ≰ P}`, the join of all elements not dominating
    /// `L`. The empty join is 0.
    pub fn l_minus(&self, s: &Subspace) -> Result<Subspace> {
        let data = self.tables()?;
        let idx = self.index_of(s).ok_or(Error::NotInLattice)?;
        let n = self.len();
        let mut acc = self.zero_index();
        for j in 0..n {
            // L ≤ e_j iff meet(L, e_j) = L
            if data.meet[idx * n + j] != idx {
                acc = data.join[acc * n + j];
            }
        }
        Ok(self.elements[acc].clone())
    }

    /// All nonzero elements with no nonzero element strictly below them.
    pub fn atoms(&self) -> Result<Vec<Subspace>> {
        let data = self.tables()?;
        Ok(data
            .atoms
            .iter()
            .map(|&i| self.elements[i].clone())
            .collect())
    }

    /// Recomputes the classification flags. Distributivity is an
    /// exhaustive triple scan over the index tables with early exit.
    pub fn classify(&self) -> LatticeFlags {
        let Some(data) = self.closed.as_ref() else {
            return LatticeFlags::default();
        };
        let n = self.len();
        let zero = self.zero_index();
        let full = self.full_index();

        let mut is_csl = true;
        'csl: for i in 0..n {
            for j in (i + 1)..n {
                let p = self.elements[i].projection();
                let q = self.elements[j].projection();
                if (p * q) != (q * p) {
                    is_csl = false;
                    break 'csl;
                }
            }
        }

        let mut is_distributive = true;
        'dist: for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let lhs = data.meet[a * n + data.join[b * n + c]];
                    let rhs = data.join[data.meet[a * n + b] * n + data.meet[a * n + c]];
                    if lhs != rhs {
                        is_distributive = false;
                        break 'dist;
                    }
                }
            }
        }

        let is_complemented = (0..n)
            .all(|a| (0..n).any(|b| data.meet[a * n + b] == zero && data.join[a * n + b] == full));

        let mut is_absl = is_distributive && is_complemented;
        if is_absl {
            // every element must equal the join of the atoms it dominates
            for a in 0..n {
                let mut acc = zero;
                for &at in &data.atoms {
                    if data.meet[at * n + a] == at {
                        acc = data.join[acc * n + at];
                    }
                }
                if acc != a {
                    is_absl = false;
                    break;
                }
            }
        }

        LatticeFlags {
            is_closed: true,
            is_csl,
            is_distributive,
            is_complemented,
            is_absl,
        }
    }

    /// The complement lattice `{L⊥ : L ∈ lat}` of an ABSL, together with
    /// the family `D_j = ∧_{i≠j} E_i⊥` indexed like the input atoms.
    /// The returned family is checked to be exactly the atom set of the
    /// returned lattice.
    pub fn complement_lattice(&self) -> Result<(ProjectionLattice, Vec<Subspace>)> {
        if !self.flags.is_absl {
            return Err(Error::NotAbsl);
        }
        let perps: Vec<Subspace> = self.elements.iter().map(Subspace::perp).collect();
        let complement = ProjectionLattice::from_elements(self.ambient, perps)?;
        if !complement.is_closed() {
            return Err(Error::Internal(
                "complement of a closed lattice must be closed".into(),
            ));
        }

        let atoms = self.atoms()?;
        let mut family = Vec::with_capacity(atoms.len());
        for j in 0..atoms.len() {
            // empty meet is I
            let mut d = Subspace::full(self.ambient);
            for (i, e) in atoms.iter().enumerate() {
                if i != j {
                    d = d.meet(&e.perp())?;
                }
            }
            family.push(d);
        }

        let mut sorted = family.clone();
        sorted.sort();
        if sorted != complement.atoms()? {
            return Err(Error::Internal(
                "complement-lattice atom family does not match its computed atoms".into(),
            ));
        }
        Ok((complement, family))
    }

    /// Builds meet/join tables; `None` when some meet or join escapes the
    /// element set (i.e. the set is not closed).
    fn build_tables(&self) -> Option<ClosedData> {
        let n = self.len();
        let mut meet = vec![0usize; n * n];
        let mut join = vec![0usize; n * n];
        for i in 0..n {
            for j in i..n {
                let m = self.elements[i].meet(&self.elements[j]).ok()?;
                let v = self.elements[i].join(&self.elements[j]).ok()?;
                let mi = self.index_of(&m)?;
                let ji = self.index_of(&v)?;
                meet[i * n + j] = mi;
                meet[j * n + i] = mi;
                join[i * n + j] = ji;
                join[j * n + i] = ji;
            }
        }

        let zero = 0usize;
        let mut atoms = Vec::new();
        for i in 0..n {
            if i == zero {
                continue;
            }
            let minimal = (0..n).all(|j| j == zero || j == i || meet[j * n + i] != j);
            if minimal {
                atoms.push(i);
            }
        }
        Some(ClosedData { meet, join, atoms })
    }
}

/// Convenience: the meet/join of two lattice members through the tables,
/// falling back to the subspace operations when either index is missing.
impl ProjectionLattice {
    pub fn meet_of(&self, a: &Subspace, b: &Subspace) -> Result<Subspace> {
        match (self.index_of(a), self.index_of(b), &self.closed) {
            (Some(i), Some(j), Some(data)) => {
                Ok(self.elements[data.meet[i * self.len() + j]].clone())
            }
            _ => a.meet(b),
        }
    }

    pub fn join_of(&self, a: &Subspace, b: &Subspace) -> Result<Subspace> {
        match (self.index_of(a), self.index_of(b), &self.closed) {
            (Some(i), Some(j), Some(data)) => {
                Ok(self.elements[data.join[i * self.len() + j]].clone())
            }
            _ => a.join(b),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

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

    fn two_atom() -> ProjectionLattice {
        ProjectionLattice::closure(
            2,
            &[span(2, &[&[1, 0]]), span(2, &[&[1, 1]])],
            DEFAULT_CLOSURE_CAP,
        )
        .unwrap()
    }

    fn nest() -> ProjectionLattice {
        ProjectionLattice::from_elements(2, vec![span(2, &[&[1, 0]])]).unwrap()
    }

    #[test]
    fn closure_of_nothing_is_trivial() {
        let lat = ProjectionLattice::closure(3, &[], 16).unwrap();
        assert_eq!(lat.len(), 2);
        assert!(lat.elements()[0].is_zero());
        assert!(lat.elements()[1].is_full());
        let f = lat.flags();
        assert!(f.is_closed && f.is_csl && f.is_distributive && f.is_complemented && f.is_absl);
    }

    #[test]
    fn closure_of_two_lines_is_four_element_absl() {
        let lat = two_atom();
        assert_eq!(lat.len(), 4);
        let f = lat.flags();
        assert!(f.is_closed);
        assert!(!f.is_csl, "non-orthogonal atoms do not commute");
        assert!(f.is_distributive);
        assert!(f.is_complemented);
        assert!(f.is_absl);
        assert_eq!(lat.atoms().unwrap().len(), 2);
    }

    #[test]
    fn closure_of_closed_set_is_identity() {
        let lat = two_atom();
        let again = ProjectionLattice::closure(2, lat.elements(), DEFAULT_CLOSURE_CAP).unwrap();
        assert_eq!(again.elements(), lat.elements());
    }

    #[test]
    fn closure_cap_reports_witness() {
        // three generic lines in Q² close to 5 elements; cap 4 must fail
        let gens = [
            span(2, &[&[1, 0]]),
            span(2, &[&[0, 1]]),
            span(2, &[&[1, 1]]),
        ];
        match ProjectionLattice::closure(2, &gens, 4) {
            Err(Error::CapExceeded { cap, partial, .. }) => {
                assert_eq!(cap, 4);
                assert!(partial.len() >= 4);
            }
            other => panic!("expected CapExceeded, got {other:?}"),
        }
    }

    #[test]
    fn l_minus_on_nest_and_two_atom() {
        let nest = nest();
        let e = span(2, &[&[1, 0]]);
        assert!(nest.l_minus(&Subspace::zero(2)).unwrap().is_zero());
        assert!(nest.l_minus(&e).unwrap().is_zero());
        assert_eq!(nest.l_minus(&Subspace::full(2)).unwrap(), e);

        let ta = two_atom();
        let p = span(2, &[&[1, 0]]);
        let q = span(2, &[&[1, 1]]);
        assert_eq!(ta.l_minus(&p).unwrap(), q);
        assert_eq!(ta.l_minus(&q).unwrap(), p);
    }

    #[test]
    fn l_minus_requires_membership() {
        let nest = nest();
        assert!(matches!(
            nest.l_minus(&span(2, &[&[1, 1]])),
            Err(Error::NotInLattice)
        ));
    }

    #[test]
    fn atoms_examples() {
        assert_eq!(
            ProjectionLattice::trivial(3).atoms().unwrap(),
            vec![Subspace::full(3)]
        );
        let nest = nest();
        assert_eq!(nest.atoms().unwrap(), vec![span(2, &[&[1, 0]])]);
        let ta = two_atom();
        let atoms = ta.atoms().unwrap();
        assert_eq!(atoms.len(), 2);
        assert!(atoms.contains(&span(2, &[&[1, 0]])));
        assert!(atoms.contains(&span(2, &[&[1, 1]])));
    }

    #[test]
    fn diamond_lattice_is_not_distributive() {
        let lat = ProjectionLattice::closure(
            2,
            &[
                span(2, &[&[1, 0]]),
                span(2, &[&[0, 1]]),
                span(2, &[&[1, 1]]),
            ],
            DEFAULT_CLOSURE_CAP,
        )
        .unwrap();
        assert_eq!(lat.len(), 5);
        let f = lat.flags();
        assert!(!f.is_distributive);
        assert!(f.is_complemented);
        assert!(!f.is_absl);
    }

    #[test]
    fn nest_is_csl_but_not_complemented() {
        let f = nest().flags();
        assert!(f.is_csl);
        assert!(f.is_distributive);
        assert!(!f.is_complemented);
        assert!(!f.is_absl);
    }

    #[test]
    fn unclosed_literal_is_flagged() {
        // {0, e1, diag, I} without their meet-closure partner… actually
        // meets are 0 and joins are I, so pick a genuinely unclosed set in Q³.
        let lat = ProjectionLattice::from_elements(
            3,
            vec![
                span(3, &[&[1, 0, 0], &[0, 1, 0]]),
                span(3, &[&[0, 0, 1], &[0, 1, 0]]),
            ],
        )
        .unwrap();
        // the two planes meet in span(e2), which is missing
        assert!(!lat.is_closed());
        assert!(lat.l_minus(&Subspace::zero(3)).is_err());
    }

    #[test]
    fn complement_of_trivial_lattice() {
        let (c, atoms) = ProjectionLattice::trivial(2).complement_lattice().unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(atoms, vec![Subspace::full(2)]);
    }

    #[test]
    fn complement_of_two_atom_absl() {
        let ta = two_atom();
        let (c, d) = ta.complement_lattice().unwrap();
        assert_eq!(c.len(), 4);
        let atoms = ta.atoms().unwrap();
        // D_j = meet over the other atoms' perps; with two atoms D_0 = E_1⊥
        assert_eq!(d[0], atoms[1].perp());
        assert_eq!(d[1], atoms[0].perp());
    }

    #[test]
    fn complement_of_coordinate_absl_in_q3() {
        let gens: Vec<Subspace> = (0..3).map(|i| Subspace::coordinate(3, &[i])).collect();
        let lat = ProjectionLattice::closure(3, &gens, DEFAULT_CLOSURE_CAP).unwrap();
        assert_eq!(lat.len(), 8);
        assert!(lat.flags().is_absl);
        let (c, d) = lat.complement_lattice().unwrap();
        assert_eq!(c.len(), 8);
        // e_i⊥ ∧ e_j⊥ is the remaining coordinate axis
        let mut d_sorted = d.clone();
        d_sorted.sort();
        assert_eq!(d_sorted, lat.atoms().unwrap());
    }

    #[test]
    fn complement_rejects_non_absl() {
        assert!(matches!(nest().complement_lattice(), Err(Error::NotAbsl)));
    }
}
