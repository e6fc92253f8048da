//! Operator algebras as canonical matrix spaces.
//!
//! `Alg L` — the algebra of all operators leaving every element of a
//! lattice invariant — is realized as one stacked kernel problem over
//! vectorized matrices. On top of it sit the rank one subspace, the rank
//! one density test (span equality replaces weak* density in finite
//! dimensions), invariant-subspace membership and a deterministic sampler
//! for members of `Lat A`.

use crate::error::{Error, Result};
use crate::lattice::ProjectionLattice;
use crate::matrix::Matrix;
use crate::rng::{self, rng_for};
use crate::scalar::Field;
use crate::subspace::Subspace;

/// A linear subspace of n×n matrices given by a canonical basis.
///
/// The canonical form is the RREF of the vectorized basis, so two spaces
/// are equal as sets iff their canonical bases agree entrywise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorSpace {
    ambient: usize,
    basis: Vec<Matrix>,
    is_algebra: bool,
}

impl OperatorSpace {
    /// Canonicalizes a spanning set of n×n matrices.
    pub fn from_spanning(ambient: usize, mats: &[Matrix], is_algebra: bool) -> OperatorSpace {
        assert!(mats
            .iter()
            .all(|m| m.rows() == ambient && m.cols() == ambient));
        if mats.is_empty() {
            return OperatorSpace {
                ambient,
                basis: Vec::new(),
                is_algebra,
            };
        }
        let rows: Vec<Vec<_>> = mats.iter().map(Matrix::vectorize).collect();
        let (r, pivots) = Matrix::from_rows(rows).rref();
        let basis = (0..pivots.len())
            .map(|i| Matrix::from_vectorized(ambient, ambient, r.row(i)))
            .collect();
        OperatorSpace {
            ambient,
            basis,
            is_algebra,
        }
    }

    pub fn full(ambient: usize) -> OperatorSpace {
        let mut mats = Vec::with_capacity(ambient * ambient);
        for i in 0..ambient {
            for j in 0..ambient {
                let mut m = Matrix::zeros(ambient, ambient);
                m.set(i, j, crate::scalar::Scalar::one());
                mats.push(m);
            }
        }
        OperatorSpace::from_spanning(ambient, &mats, true)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Matrix] {
        &self.basis
    }

    pub fn is_algebra(&self) -> bool {
        self.is_algebra
    }

    /// Membership of a matrix in the span.
    pub fn contains(&self, m: &Matrix) -> bool {
        assert!(m.rows() == self.ambient && m.cols() == self.ambient);
        if self.basis.is_empty() {
            return m.is_zero();
        }
        let mut rows: Vec<Vec<_>> = self.basis.iter().map(Matrix::vectorize).collect();
        rows.push(m.vectorize());
        Matrix::from_rows(rows).rank() == self.dim()
    }

    /// Optional construction-time verification that the space really is a
    /// unital algebra: contains I and is closed under basis products.
    /// Kept separate because the O(d²) membership products dominate the
    /// cost for spaces that are algebras by construction.
    pub fn verify_algebra(&self) -> bool {
        self.contains(&Matrix::identity(self.ambient))
            && self
                .basis
                .iter()
                .all(|a| self.basis.iter().all(|b| self.contains(&(a * b))))
    }

    /// Span of all Kronecker products of the two bases; the tensor of two
    /// algebras is again an algebra.
    pub fn tensor_span(&self, other: &OperatorSpace) -> OperatorSpace {
        let mut mats = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.basis {
            for b in &other.basis {
                mats.push(a.kronecker(b));
            }
        }
        OperatorSpace::from_spanning(
            self.ambient * other.ambient,
            &mats,
            self.is_algebra && other.is_algebra,
        )
    }

    /// Set equality: equal dimension plus membership of every basis
    /// matrix of `self` in `other`.
    pub fn space_eq(&self, other: &OperatorSpace) -> Result<bool> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch {
                left: self.ambient,
                right: other.ambient,
            });
        }
        Ok(self.dim() == other.dim() && self.basis.iter().all(|m| other.contains(m)))
    }
}

/// `Alg L`: all T with `(I−P)·T·P = 0` for every lattice element. The
/// constraints are stacked in vectorized form — for element basis B and
/// projection P, `vec((I−P)·T·B) = (Bᵀ ⊗ (I−P))·vec(T)` — and solved as
/// one kernel problem.
pub fn alg_of(lat: &ProjectionLattice) -> Result<OperatorSpace> {
    if !lat.is_closed() {
        return Err(Error::NotClosed);
    }
    let n = lat.ambient_dim();
    let id = Matrix::identity(n);
    let mut blocks = Vec::new();
    for s in lat.elements() {
        if s.is_zero() || s.is_full() {
            continue; // vacuous constraints
        }
        let complement = &id - s.projection();
        blocks.push(s.basis().transpose().kronecker(&complement));
    }
    let kernel = if blocks.is_empty() {
        Matrix::identity(n * n)
    } else {
        let refs: Vec<&Matrix> = blocks.iter().collect();
        Matrix::vstack(&refs).kernel_basis()
    };
    let mats: Vec<Matrix> = (0..kernel.cols())
        .map(|j| Matrix::from_vectorized(n, n, &kernel.column(j)))
        .collect();
    Ok(OperatorSpace::from_spanning(n, &mats, true))
}

/// The rank one subspace of `Alg L`: the span over L ∈ lat of all
/// `x·y*` with `x ∈ range L` and `y ∈ range (L₋)⊥`.
pub fn rank_one_subspace(lat: &ProjectionLattice) -> Result<OperatorSpace> {
    if !lat.is_closed() {
        return Err(Error::NotClosed);
    }
    let n = lat.ambient_dim();
    let mut mats = Vec::new();
    for s in lat.elements() {
        if s.is_zero() {
            continue;
        }
        let coker = lat.l_minus(s)?.perp();
        for i in 0..s.dim() {
            let x = s.basis().column(i);
            for j in 0..coker.dim() {
                let y = coker.basis().column(j);
                mats.push(Matrix::outer(&x, &y));
            }
        }
    }
    Ok(OperatorSpace::from_spanning(n, &mats, false))
}

/// Finite-dimensional rank one density: the rank one span fills `Alg L`.
/// The span is always contained in the algebra, so dimension equality is
/// set equality.
pub fn has_rank_one_density(lat: &ProjectionLattice) -> Result<bool> {
    let alg = alg_of(lat)?;
    let rank_one = rank_one_subspace(lat)?;
    debug_assert!(rank_one.basis().iter().all(|m| alg.contains(m)));
    Ok(rank_one.dim() == alg.dim())
}

/// Is the range of `q` invariant under every operator of `a`?
pub fn is_invariant(q: &Subspace, a: &OperatorSpace) -> Result<bool> {
    if q.ambient_dim() != a.ambient_dim() {
        return Err(Error::DimensionMismatch {
            left: q.ambient_dim(),
            right: a.ambient_dim(),
        });
    }
    let id = Matrix::identity(q.ambient_dim());
    let complement = &id - q.projection();
    Ok(a.basis()
        .iter()
        .all(|t| (&(&complement * t) * q.basis()).is_zero()))
}

/// Smallest invariant subspace containing `x`: the span of the basis
/// orbit `{T·x}`. Requires an algebra (then the orbit is genuinely
/// invariant, and contains `x` because the algebra is unital).
pub fn cyclic_invariant_subspace(
    a: &OperatorSpace,
    x: &[crate::scalar::Scalar],
) -> Result<Subspace> {
    if !a.is_algebra() {
        return Err(Error::NotAlgebra);
    }
    if x.len() != a.ambient_dim() {
        return Err(Error::DimensionMismatch {
            left: a.ambient_dim(),
            right: x.len(),
        });
    }
    let vectors: Vec<Vec<_>> = a.basis().iter().map(|t| t.mul_vec(x)).collect();
    let s = Subspace::from_vectors(a.ambient_dim(), &vectors)?;
    debug_assert!(is_invariant(&s, a)?);
    Ok(s)
}

/// Deterministic-for-seed sample of distinct members of `Lat A`.
///
/// The pool starts from 0 and I and the cyclic subspaces of pseudo-random
/// vectors; applying basis operators to those vectors first yields the
/// lower-dimensional members that plain random vectors rarely hit. One
/// round of pairwise meets and joins rounds the pool out. May return
/// fewer than `n` elements; callers must check the count.
pub fn sample_invariant_projections(
    a: &OperatorSpace,
    seed: u64,
    n: usize,
    field: Field,
) -> Result<Vec<Subspace>> {
    if !a.is_algebra() {
        return Err(Error::NotAlgebra);
    }
    let ambient = a.ambient_dim();
    let mut rng = rng_for(seed);

    fn push(pool: &mut Vec<Subspace>, s: Subspace) {
        if !pool.contains(&s) {
            pool.push(s);
        }
    }

    // enough headroom that truncation to n still leaves variety
    let target = 2 * n.max(8);

    let mut pool: Vec<Subspace> = vec![Subspace::zero(ambient), Subspace::full(ambient)];
    let vectors: Vec<Vec<_>> = (0..n.max(8))
        .map(|_| rng::random_vector(&mut rng, ambient, field))
        .collect();
    for x in &vectors {
        push(&mut pool, cyclic_invariant_subspace(a, x)?);
    }
    // orbits of transformed vectors T·x with T ∈ A — these sit inside the
    // orbit of x and supply the lower-dimensional members of Lat A that
    // plain random vectors rarely reach. T alternates between a random
    // algebra element C (small random coefficients over the basis) and a
    // rank-reduced product basis[i]·C, which steers the image direction
    // while keeping the rank low.
    use rand::Rng;
    let budget = 16 * n.max(8);
    let mut used = 0;
    while pool.len() < target && used < budget && !a.basis().is_empty() {
        let x = &vectors[used % vectors.len()];
        let mut image = vec![crate::scalar::Scalar::zero(); ambient];
        for t in a.basis() {
            let c = rng::random_scalar(&mut rng, field);
            if c.is_zero() {
                continue;
            }
            for (acc, v) in image.iter_mut().zip(t.mul_vec(x)) {
                *acc += &(&c * &v);
            }
        }
        if used % 2 == 1 {
            let i = rng.random_range(0..a.basis().len());
            image = a.basis()[i].mul_vec(&image);
        }
        push(&mut pool, cyclic_invariant_subspace(a, &image)?);
        used += 1;
    }

    let base = pool.clone();
    'meets: for i in 0..base.len() {
        for j in (i + 1)..base.len() {
            if pool.len() >= target {
                break 'meets;
            }
            push(&mut pool, base[i].meet(&base[j])?);
            push(&mut pool, base[i].join(&base[j])?);
        }
    }

    debug_assert!(pool.iter().all(|s| is_invariant(s, a).unwrap()));
    pool.truncate(n);
    Ok(pool)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::DEFAULT_CLOSURE_CAP;
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

    fn nest() -> ProjectionLattice {
        ProjectionLattice::from_elements(2, vec![span(2, &[&[1, 0]])]).unwrap()
    }

    fn two_atom() -> ProjectionLattice {
        ProjectionLattice::closure(
            2,
            &[span(2, &[&[1, 0]]), span(2, &[&[1, 1]])],
            DEFAULT_CLOSURE_CAP,
        )
        .unwrap()
    }

    /// Independent route for Alg L: full n²-row constraint blocks
    /// `(Pᵀ ⊗ (I−P))·vec(T) = 0` per element, no basis reduction.
    fn alg_of_bruteforce(lat: &ProjectionLattice) -> OperatorSpace {
        let n = lat.ambient_dim();
        let id = Matrix::identity(n);
        let blocks: Vec<Matrix> = lat
            .elements()
            .iter()
            .map(|s| {
                s.projection()
                    .transpose()
                    .kronecker(&(&id - s.projection()))
            })
            .collect();
        let refs: Vec<&Matrix> = blocks.iter().collect();
        let kernel = Matrix::vstack(&refs).kernel_basis();
        let mats: Vec<Matrix> = (0..kernel.cols())
            .map(|j| Matrix::from_vectorized(n, n, &kernel.column(j)))
            .collect();
        OperatorSpace::from_spanning(n, &mats, true)
    }

    #[test]
    fn alg_of_trivial_lattice_is_everything() {
        let alg = alg_of(&ProjectionLattice::trivial(3)).unwrap();
        assert_eq!(alg.dim(), 9);
    }

    #[test]
    fn alg_of_nest_is_upper_triangular() {
        let alg = alg_of(&nest()).unwrap();
        assert_eq!(alg.dim(), 3);
        assert!(alg.contains(&Matrix::from_int_rows(&[&[1, 5], &[0, 2]])));
        assert!(!alg.contains(&Matrix::from_int_rows(&[&[0, 0], &[1, 0]])));
        assert_eq!(alg, alg_of_bruteforce(&nest()));
    }

    #[test]
    fn alg_of_two_atom_absl() {
        let lat = two_atom();
        let alg = alg_of(&lat).unwrap();
        assert_eq!(alg.dim(), 2);
        assert_eq!(alg, alg_of_bruteforce(&lat));
        assert!(alg.verify_algebra());
    }

    /// Independent route for the rank one subspace: P_L·E_ij·P_{(L₋)⊥}
    /// over all elementary matrices Z = E_ij.
    fn rank_one_bruteforce(lat: &ProjectionLattice) -> OperatorSpace {
        let n = lat.ambient_dim();
        let mut mats = Vec::new();
        for s in lat.elements() {
            let right = lat.l_minus(s).unwrap().perp();
            for i in 0..n {
                for j in 0..n {
                    let mut e = Matrix::zeros(n, n);
                    e.set(i, j, Scalar::one());
                    mats.push(&(s.projection() * &e) * right.projection());
                }
            }
        }
        OperatorSpace::from_spanning(n, &mats, false)
    }

    #[test]
    fn rank_one_subspace_examples() {
        let triv = ProjectionLattice::trivial(2);
        assert_eq!(rank_one_subspace(&triv).unwrap().dim(), 4);

        let nest = nest();
        let r = rank_one_subspace(&nest).unwrap();
        assert_eq!(r.dim(), 3);
        assert!(r.space_eq(&rank_one_bruteforce(&nest)).unwrap());

        let ta = two_atom();
        let r = rank_one_subspace(&ta).unwrap();
        assert_eq!(r.dim(), 2);
        assert!(r.space_eq(&rank_one_bruteforce(&ta)).unwrap());
    }

    #[test]
    fn rank_one_sits_inside_alg() {
        for lat in [ProjectionLattice::trivial(2), nest(), two_atom()] {
            let alg = alg_of(&lat).unwrap();
            let r = rank_one_subspace(&lat).unwrap();
            assert!(r.basis().iter().all(|m| alg.contains(m)));
        }
    }

    #[test]
    fn density_corpus() {
        assert!(has_rank_one_density(&ProjectionLattice::trivial(2)).unwrap());
        assert!(has_rank_one_density(&nest()).unwrap());
        assert!(has_rank_one_density(&two_atom()).unwrap());
        // the diamond of three lines in Q² is non-distributive and fails
        let diamond = ProjectionLattice::closure(
            2,
            &[
                span(2, &[&[1, 0]]),
                span(2, &[&[0, 1]]),
                span(2, &[&[1, 1]]),
            ],
            DEFAULT_CLOSURE_CAP,
        )
        .unwrap();
        assert!(!has_rank_one_density(&diamond).unwrap());
        // density implies distributivity on this corpus
        assert!(!diamond.flags().is_distributive);
    }

    #[test]
    fn invariance_under_upper_triangular() {
        let alg = alg_of(&nest()).unwrap();
        assert!(is_invariant(&Subspace::zero(2), &alg).unwrap());
        assert!(is_invariant(&Subspace::full(2), &alg).unwrap());
        assert!(is_invariant(&span(2, &[&[1, 0]]), &alg).unwrap());
        assert!(!is_invariant(&span(2, &[&[0, 1]]), &alg).unwrap());
    }

    #[test]
    fn lattice_elements_are_invariant_under_their_alg() {
        for lat in [nest(), two_atom()] {
            let alg = alg_of(&lat).unwrap();
            for s in lat.elements() {
                assert!(is_invariant(s, &alg).unwrap());
            }
        }
    }

    #[test]
    fn cyclic_subspace_examples() {
        let alg = alg_of(&nest()).unwrap();
        let zero = [Scalar::zero(), Scalar::zero()];
        assert!(cyclic_invariant_subspace(&alg, &zero).unwrap().is_zero());
        // orbit of e2 under upper triangulars reaches e1 as well
        let e2 = [Scalar::zero(), Scalar::one()];
        assert!(cyclic_invariant_subspace(&alg, &e2).unwrap().is_full());
        let e1 = [Scalar::one(), Scalar::zero()];
        assert_eq!(
            cyclic_invariant_subspace(&alg, &e1).unwrap(),
            span(2, &[&[1, 0]])
        );
    }

    #[test]
    fn algebra_preconditions_are_enforced() {
        let alg = alg_of(&nest()).unwrap();
        // wrong vector length
        assert!(matches!(
            cyclic_invariant_subspace(&alg, &[Scalar::one()]),
            Err(Error::DimensionMismatch { .. })
        ));
        // non-algebra spaces are rejected by the orbit and the sampler
        let not_algebra = rank_one_subspace(&nest()).unwrap();
        assert!(!not_algebra.is_algebra());
        assert!(matches!(
            cyclic_invariant_subspace(&not_algebra, &[Scalar::one(), Scalar::zero()]),
            Err(Error::NotAlgebra)
        ));
        assert!(matches!(
            sample_invariant_projections(&not_algebra, 1, 4, Field::Rational),
            Err(Error::NotAlgebra)
        ));
        // is_invariant needs matching ambient dims
        assert!(matches!(
            is_invariant(&Subspace::zero(3), &alg),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn sampler_full_algebra_yields_only_trivial_subspaces() {
        let full = OperatorSpace::full(3);
        let sample = sample_invariant_projections(&full, 5, 8, Field::Rational).unwrap();
        assert!(sample.iter().all(|s| s.is_zero() || s.is_full()));
    }

    #[test]
    fn sampler_on_upper_triangular_hits_exactly_lat() {
        let alg = alg_of(&nest()).unwrap();
        // exhaustive fact in dim 2: Lat(upper triangular) = {0, span e1, I}
        let lat_members = [Subspace::zero(2), span(2, &[&[1, 0]]), Subspace::full(2)];
        for seed in [0u64, 1, 7, 99] {
            let sample = sample_invariant_projections(&alg, seed, 16, Field::Rational).unwrap();
            assert!(sample.iter().all(|s| lat_members.contains(s)));
        }
    }

    #[test]
    fn sampler_is_deterministic() {
        let alg = alg_of(&two_atom()).unwrap();
        let a = sample_invariant_projections(&alg, 11, 12, Field::Rational).unwrap();
        let b = sample_invariant_projections(&alg, 11, 12, Field::Rational).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn tensor_span_dimensions() {
        let nest_alg = alg_of(&nest()).unwrap(); // dim 3
        let ta_alg = alg_of(&two_atom()).unwrap(); // dim 2
        assert_eq!(nest_alg.tensor_span(&ta_alg).dim(), 6);
        let scalars = OperatorSpace::from_spanning(2, &[Matrix::identity(2)], true);
        assert_eq!(nest_alg.tensor_span(&scalars).dim(), nest_alg.dim());
        let full2 = OperatorSpace::full(2);
        assert!(full2
            .tensor_span(&full2)
            .space_eq(&OperatorSpace::full(4))
            .unwrap());
    }

    #[test]
    fn space_equality_cases() {
        let upper = alg_of(&nest()).unwrap();
        assert!(upper.space_eq(&upper).unwrap());
        let lower = OperatorSpace::from_spanning(
            2,
            &[
                Matrix::from_int_rows(&[&[1, 0], &[0, 0]]),
                Matrix::from_int_rows(&[&[0, 0], &[1, 0]]),
                Matrix::from_int_rows(&[&[0, 0], &[0, 1]]),
            ],
            true,
        );
        assert!(!upper.space_eq(&lower).unwrap());
        // same span presented in a different order canonicalizes identically
        let shuffled = OperatorSpace::from_spanning(
            2,
            &[
                Matrix::from_int_rows(&[&[0, 0], &[0, 1]]),
                Matrix::from_int_rows(&[&[0, 7], &[0, 0]]),
                Matrix::from_int_rows(&[&[1, 0], &[0, 0]]),
            ],
            true,
        );
        assert!(upper.space_eq(&shuffled).unwrap());
        assert_eq!(upper, shuffled);
    }
}
