//! Identity checkers for the lattice-tensor correspondence.
//!
//! Each checker verifies one family of exact identities on a concrete
//! lattice instance and returns a [`CheckReport`]. Hypothesis failures
//! (no rank one density, not an ABSL) are reported as SKIP, never PASS:
//! the identities are conditional and the report must not overclaim.
//!
//! A FAIL report carries a counterexample payload containing everything
//! needed to re-evaluate the single violated assertion; [`replay`] does
//! exactly that, so failures are independently reproducible from the
//! report alone.

use crate::error::{Error, Result};
use crate::fixtures::Fixture;
use crate::json::lattice_from_value;
use crate::lattice::ProjectionLattice;
use crate::matrix::Matrix;
use crate::opalg::{
    alg_of, has_rank_one_density, is_invariant, rank_one_subspace, sample_invariant_projections,
    OperatorSpace,
};
use crate::rng::{self, rng_for, sub_seed};
use crate::scalar::Field;
use crate::subspace::Subspace;
use crate::tensor::{phi_full, swap_tensor_factors, tensor_lattice, theta, AtomMap};
use itertools::Itertools;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use std::time::{Duration, Instant};

pub const CHECK_IDS: &[&str] = &[
    "theta-phi-inverse",
    "isomorphism",
    "perp-identity",
    "latalg-tensor",
    "ltpf",
    "atpf-dimension",
    "absl-tensor",
    "reflexivity-transfer",
    "phi-join-probe",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skip,
}

/// Outcome of one check. The wall-clock timing is kept for the human
/// table but excluded from JSON so that reports are byte-identical for
/// identical (scenario, seed) inputs.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub check_id: String,
    pub theorem: String,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skip_reason: Option<String>,
    pub samples: usize,
    pub details: Map<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

/// Caps, seed and sample count shared by all checks in one run.
#[derive(Clone, Copy, Debug)]
pub struct CheckContext {
    pub seed: u64,
    pub samples: usize,
    pub max_lattice: usize,
    pub max_product_dim: usize,
    pub field: Field,
}

impl Default for CheckContext {
    fn default() -> Self {
        CheckContext {
            seed: 0,
            samples: 16,
            max_lattice: crate::lattice::DEFAULT_CLOSURE_CAP,
            max_product_dim: 16,
            field: Field::Rational,
        }
    }
}

impl CheckContext {
    fn ensure_product_dim(&self, dim: usize) -> Result<()> {
        if dim > self.max_product_dim {
            return Err(Error::ProductDimExceeded { cap: self.max_product_dim, requested: dim });
        }
        Ok(())
    }
}

/// Collects pass/fail state plus the first counterexample.
struct Run {
    check_id: &'static str,
    theorem: &'static str,
    started: Instant,
    samples: usize,
    details: Map<String, Value>,
    counterexample: Option<Value>,
}

impl Run {
    fn new(check_id: &'static str, theorem: &'static str) -> Run {
        Run {
            check_id,
            theorem,
            started: Instant::now(),
            samples: 0,
            details: Map::new(),
            counterexample: None,
        }
    }

    fn detail(&mut self, key: &str, value: Value) {
        self.details.insert(key.to_string(), value);
    }

    /// Records a violated assertion; the first one wins.
    fn violation(&mut self, assertion: &str, data: Value) {
        if self.counterexample.is_none() {
            self.counterexample = Some(json!({
                "check": self.check_id,
                "assertion": assertion,
                "data": data,
            }));
        }
    }

    fn ok(&self) -> bool {
        self.counterexample.is_none()
    }

    fn finish(self) -> CheckReport {
        let status = if self.ok() {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        CheckReport {
            check_id: self.check_id.to_string(),
            theorem: self.theorem.to_string(),
            status,
            skip_reason: None,
            samples: self.samples,
            details: self.details,
            counterexample: self.counterexample,
            elapsed: self.started.elapsed(),
        }
    }

    fn skip(self, reason: String) -> CheckReport {
        CheckReport {
            check_id: self.check_id.to_string(),
            theorem: self.theorem.to_string(),
            status: CheckStatus::Skip,
            skip_reason: Some(reason),
            samples: self.samples,
            details: self.details,
            counterexample: None,
            elapsed: self.started.elapsed(),
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable toolkit types")
}

/// The algebra `{I_K ⊗ T : T ∈ A}` on K⊗H.
fn kron_algebra(k_dim: usize, a: &OperatorSpace) -> OperatorSpace {
    let id = Matrix::identity(k_dim);
    let mats: Vec<Matrix> = a.basis().iter().map(|t| id.kronecker(t)).collect();
    OperatorSpace::from_spanning(k_dim * a.ambient_dim(), &mats, a.is_algebra())
}

/// Density precondition shared by most checks; returns the SKIP reason
/// when it fails.
fn density_skip(m: &ProjectionLattice) -> Result<Option<String>> {
    if has_rank_one_density(m)? {
        return Ok(None);
    }
    let alg = alg_of(m)?;
    let r = rank_one_subspace(m)?;
    Ok(Some(format!(
        "rank one density fails: rank one span has dimension {} inside Alg of dimension {}",
        r.dim(),
        alg.dim()
    )))
}

fn absl_skip(m: &ProjectionLattice) -> Result<Option<String>> {
    if !m.flags().is_absl {
        return Ok(Some(
            "lattice is not an atomic Boolean subspace lattice".into(),
        ));
    }
    density_skip(m)
}

/// Random atom map with values drawn from a pool of subspaces.
fn random_map_from_pool(
    rng: &mut rand_chacha::ChaCha20Rng,
    atoms: &[Subspace],
    pool: &[Subspace],
    k_dim: usize,
) -> AtomMap {
    use rand::Rng;
    let values: Vec<Subspace> = (0..atoms.len())
        .map(|_| pool[rng.random_range(0..pool.len())].clone())
        .collect();
    AtomMap::new(k_dim, atoms.to_vec(), values).expect("pool values live on K")
}

/// Random atom map with arbitrary random subspace values.
fn random_map(
    rng: &mut rand_chacha::ChaCha20Rng,
    atoms: &[Subspace],
    k_dim: usize,
    field: Field,
) -> AtomMap {
    let values: Vec<Subspace> = (0..atoms.len())
        .map(|_| rng::random_subspace(rng, k_dim, field))
        .collect();
    AtomMap::new(k_dim, atoms.to_vec(), values).expect("random values live on K")
}

// ---------------------------------------------------------------------------
// theta-phi-inverse
// ---------------------------------------------------------------------------

/// On sampled members Q of Lat(1⊗Alg M): `theta(phi(Q)) = Q`, phi is
/// injective and meet-preserving. Needs rank one density of M; the index
/// set of phi is the whole element list of M, so the check applies to
/// dense non-ABSL lattices (nests) as well.
pub fn theta_phi_inverse(
    m: &ProjectionLattice,
    k_dim: usize,
    ctx: &CheckContext,
) -> Result<CheckReport> {
    let mut run = Run::new(
        "theta-phi-inverse",
        "theta(phi(Q)) = Q on Lat(1 ⊗ Alg M); phi injective and meet-preserving",
    );
    run.detail("k_dim", json!(k_dim));
    run.detail("m_size", json!(m.len()));
    ctx.ensure_product_dim(k_dim * m.ambient_dim())?;
    if let Some(reason) = density_skip(m)? {
        return Ok(run.skip(reason));
    }

    let alg = alg_of(m)?;
    let big = kron_algebra(k_dim, &alg);
    let samples = sample_invariant_projections(&big, ctx.seed, ctx.samples, ctx.field)?;
    run.samples = samples.len();
    run.detail("requested_samples", json!(ctx.samples));
    run.detail("distinct_samples", json!(samples.len()));

    let eval_set: Vec<Subspace> = m.elements().to_vec();
    let mut maps = Vec::with_capacity(samples.len());
    for q in &samples {
        let f = phi_full(q, &eval_set, k_dim)?;
        if &theta(&f) != q {
            run.violation(
                "theta-phi-identity",
                json!({ "m": to_value(m), "k_dim": k_dim, "q": to_value(q) }),
            );
        }
        maps.push(f);
    }

    for i in 0..samples.len() {
        for j in (i + 1)..samples.len() {
            if maps[i] == maps[j] {
                run.violation(
                    "phi-injective",
                    json!({
                        "m": to_value(m), "k_dim": k_dim,
                        "q1": to_value(&samples[i]), "q2": to_value(&samples[j]),
                    }),
                );
            }
            let meet_map = phi_full(&samples[i].meet(&samples[j])?, &eval_set, k_dim)?;
            if meet_map != maps[i].meet(&maps[j])? {
                run.violation(
                    "phi-meet-preserving",
                    json!({
                        "m": to_value(m), "k_dim": k_dim,
                        "q1": to_value(&samples[i]), "q2": to_value(&samples[j]),
                    }),
                );
            }
        }
    }
    Ok(run.finish())
}

// ---------------------------------------------------------------------------
// isomorphism
// ---------------------------------------------------------------------------

/// theta is a lattice isomorphism from the maps m(E, L) onto L⊗M when M
/// is an ABSL with rank one density: enumerates all |L|^#atoms maps when
/// that fits the cap (sampling otherwise), and asserts bijectivity, the
/// inverse property of phi, meet/join preservation and order reflection.
pub fn isomorphism(
    l: &ProjectionLattice,
    m: &ProjectionLattice,
    ctx: &CheckContext,
) -> Result<CheckReport> {
    let mut run = Run::new(
        "isomorphism",
        "theta: m(E, L) -> L tensor M is a lattice isomorphism with inverse phi",
    );
    ctx.ensure_product_dim(l.ambient_dim() * m.ambient_dim())?;
    if let Some(reason) = absl_skip(m)? {
        return Ok(run.skip(reason));
    }

    let atoms = m.atoms()?;
    let k_dim = l.ambient_dim();
    let t = tensor_lattice(l, m, ctx.max_lattice)?;
    run.detail("lattice_size", json!(l.len()));
    run.detail("atom_count", json!(atoms.len()));
    run.detail("product_size", json!(t.product().len()));

    let total = l.len().checked_pow(atoms.len() as u32);
    let exhaustive = total.is_some_and(|n| n <= ctx.max_lattice);
    run.detail("exhaustive", json!(exhaustive));

    let maps: Vec<AtomMap> = if exhaustive {
        (0..atoms.len())
            .map(|_| l.elements().iter().cloned())
            .multi_cartesian_product()
            .map(|values| AtomMap::new(k_dim, atoms.clone(), values).expect("values live on K"))
            .collect()
    } else {
        let mut rng = rng_for(ctx.seed);
        (0..ctx.samples)
            .map(|_| random_map_from_pool(&mut rng, &atoms, l.elements(), k_dim))
            .collect()
    };
    run.samples = maps.len();

    let mut images = Vec::with_capacity(maps.len());
    for f in &maps {
        let q = theta(f);
        if !t.product().contains(&q) {
            run.violation(
                "theta-into-product",
                json!({ "l": to_value(l), "m": to_value(m), "f": to_value(f) }),
            );
        }
        let back = phi_full(&q, &atoms, k_dim)?;
        if &back != f {
            run.violation(
                "phi-theta-identity",
                json!({ "l": to_value(l), "m": to_value(m), "f": to_value(f) }),
            );
        }
        images.push(q);
    }

    if exhaustive {
        let mut distinct = images.clone();
        distinct.sort();
        distinct.dedup();
        if distinct.len() != images.len() {
            run.violation(
                "theta-injective",
                json!({ "l": to_value(l), "m": to_value(m) }),
            );
        }
        if distinct.len() != t.product().len() {
            run.violation(
                "theta-onto-product",
                json!({
                    "l": to_value(l), "m": to_value(m),
                    "image_count": distinct.len(), "product_count": t.product().len(),
                }),
            );
        }
    }

    // lattice-operation preservation and order reflection on map pairs
    let mut rng = rng_for(sub_seed(ctx.seed, 1));
    use rand::Rng;
    let pair_budget = 64usize;
    let pairs: Vec<(usize, usize)> = if maps.len() * maps.len() <= pair_budget {
        (0..maps.len()).cartesian_product(0..maps.len()).collect()
    } else {
        (0..pair_budget)
            .map(|_| {
                (
                    rng.random_range(0..maps.len()),
                    rng.random_range(0..maps.len()),
                )
            })
            .collect()
    };
    for (i, j) in pairs {
        let (f, g) = (&maps[i], &maps[j]);
        let payload =
            || json!({ "l": to_value(l), "m": to_value(m), "f": to_value(f), "g": to_value(g) });
        if theta(&f.join(g)?) != theta(f).join(&theta(g))? {
            run.violation("theta-join-preserving", payload());
        }
        if theta(&f.meet(g)?) != theta(f).meet(&theta(g))? {
            run.violation("theta-meet-preserving", payload());
        }
        if f.leq(g)? != theta(f).leq(&theta(g))? {
            run.violation("order-reflection", payload());
        }
    }
    Ok(run.finish())
}

// ---------------------------------------------------------------------------
// perp-identity
// ---------------------------------------------------------------------------

/// `theta(f)⊥ = theta(f⊥)` for random maps over the atoms of a dense
/// ABSL, plus the complement-lattice atom identity D_j = ∧_{i≠j} E_i⊥.
pub fn perp_identity(
    m: &ProjectionLattice,
    k_dim: usize,
    ctx: &CheckContext,
) -> Result<CheckReport> {
    let mut run = Run::new(
        "perp-identity",
        "theta(f)-perp = theta(f-perp); complement lattice atoms are D_j = meet of other atom perps",
    );
    ctx.ensure_product_dim(k_dim * m.ambient_dim())?;
    if let Some(reason) = absl_skip(m)? {
        return Ok(run.skip(reason));
    }

    let (complement, d_family) = m.complement_lattice()?;
    let mut sorted = d_family.clone();
    sorted.sort();
    if sorted != complement.atoms()? {
        run.violation("complement-atoms", json!({ "m": to_value(m) }));
    }
    run.detail("complement_size", json!(complement.len()));

    let atoms = m.atoms()?;
    let mut maps = vec![
        AtomMap::constant(&atoms, &Subspace::zero(k_dim))?,
        AtomMap::constant(&atoms, &Subspace::full(k_dim))?,
    ];
    let mut rng = rng_for(ctx.seed);
    for _ in 0..ctx.samples {
        maps.push(random_map(&mut rng, &atoms, k_dim, ctx.field));
    }
    run.samples = maps.len();

    for f in &maps {
        if theta(f).perp() != theta(&f.perp(&d_family)?) {
            run.violation(
                "perp-identity",
                json!({ "m": to_value(m), "k_dim": k_dim, "f": to_value(f) }),
            );
        }
    }
    Ok(run.finish())
}

// ---------------------------------------------------------------------------
// latalg-tensor
// ---------------------------------------------------------------------------

/// Lat Alg(L⊗M) = (Lat Alg L)⊗M, checked in both directions on samples:
/// maps valued in sampled members of Lat Alg L push forward to invariant
/// projections of Alg(L⊗M), and sampled invariant projections pull back
/// through phi to members of Lat Alg L.
pub fn latalg_tensor(
    l: &ProjectionLattice,
    m: &ProjectionLattice,
    ctx: &CheckContext,
) -> Result<CheckReport> {
    let mut run = Run::new(
        "latalg-tensor",
        "Lat Alg(L tensor M) = (Lat Alg L) tensor M",
    );
    ctx.ensure_product_dim(l.ambient_dim() * m.ambient_dim())?;
    if let Some(reason) = absl_skip(m)? {
        return Ok(run.skip(reason));
    }

    let atoms = m.atoms()?;
    let k_dim = l.ambient_dim();
    let alg_l = alg_of(l)?;
    let t = tensor_lattice(l, m, ctx.max_lattice)?;
    let alg_t = alg_of(t.product())?;
    run.detail("alg_l_dim", json!(alg_l.dim()));
    run.detail("alg_product_dim", json!(alg_t.dim()));

    // direction ⊇: theta of maps valued in Lat Alg L is invariant
    let pool = sample_invariant_projections(&alg_l, sub_seed(ctx.seed, 1), ctx.samples, ctx.field)?;
    let mut rng = rng_for(sub_seed(ctx.seed, 2));
    for _ in 0..ctx.samples {
        let f = random_map_from_pool(&mut rng, &atoms, &pool, k_dim);
        if !is_invariant(&theta(&f), &alg_t)? {
            run.violation(
                "theta-invariant",
                json!({ "l": to_value(l), "m": to_value(m), "f": to_value(&f) }),
            );
        }
        run.samples += 1;
    }

    // direction ⊆: phi values of invariant projections lie in Lat Alg L
    let qs = sample_invariant_projections(&alg_t, sub_seed(ctx.seed, 3), ctx.samples, ctx.field)?;
    for q in &qs {
        let f = phi_full(q, &atoms, k_dim)?;
        for v in f.values() {
            if !is_invariant(v, &alg_l)? {
                run.violation(
                    "phi-values-invariant",
                    json!({ "l": to_value(l), "m": to_value(m), "q": to_value(q) }),
                );
            }
        }
        run.samples += 1;
    }
    Ok(run.finish())
}

// ---------------------------------------------------------------------------
// ltpf
// ---------------------------------------------------------------------------

/// The lattice tensor product formula for Alg L and Alg M: sampled
/// invariant projections of the spanned algebra Alg L ⊗ Alg M decompose
/// as joins of coefficient ⊗ atom with coefficients in L (exact lattice
/// membership for fixtures known reflexive; the invariance necessary
/// condition otherwise, labeled in the report).
pub fn ltpf(
    l: &ProjectionLattice,
    l_reflexive: bool,
    m: &ProjectionLattice,
    ctx: &CheckContext,
) -> Result<CheckReport> {
    let mut run = Run::new(
        "ltpf",
        "Lat(Alg L tensor Alg M) = Lat Alg L tensor Lat Alg M",
    );
    ctx.ensure_product_dim(l.ambient_dim() * m.ambient_dim())?;
    if let Some(reason) = absl_skip(m)? {
        return Ok(run.skip(reason));
    }

    let atoms = m.atoms()?;
    let k_dim = l.ambient_dim();
    let alg_l = alg_of(l)?;
    let span_alg = alg_l.tensor_span(&alg_of(m)?);
    run.detail("span_alg_dim", json!(span_alg.dim()));
    run.detail(
        "membership_mode",
        json!(if l_reflexive { "lattice" } else { "invariance" }),
    );
    run.detail("explicit_two_atom_form", json!(atoms.len() == 2));

    let qs = sample_invariant_projections(&span_alg, ctx.seed, ctx.samples, ctx.field)?;
    run.samples = qs.len();
    for q in &qs {
        let f = phi_full(q, &atoms, k_dim)?;
        if &theta(&f) != q {
            run.violation(
                "ltpf-decomposition",
                json!({ "l": to_value(l), "m": to_value(m), "q": to_value(q) }),
            );
        }
        for v in f.values() {
            let ok = if l_reflexive {
                l.contains(v)
            } else {
                is_invariant(v, &alg_l)?
            };
            if !ok {
                run.violation(
                    "ltpf-coefficients",
                    json!({
                        "l": to_value(l), "m": to_value(m), "q": to_value(q),
                        "mode": if l_reflexive { "lattice" } else { "invariance" },
                    }),
                );
            }
        }
    }

    // converse inclusion: every theta of an L-valued map is invariant
    let mut rng = rng_for(sub_seed(ctx.seed, 1));
    for _ in 0..ctx.samples {
        let f = random_map_from_pool(&mut rng, &atoms, l.elements(), k_dim);
        if !is_invariant(&theta(&f), &span_alg)? {
            run.violation(
                "theta-invariant",
                json!({ "l": to_value(l), "m": to_value(m), "f": to_value(&f) }),
            );
        }
    }
    Ok(run.finish())
}

// ---------------------------------------------------------------------------
// atpf-dimension
// ---------------------------------------------------------------------------

/// The algebra tensor product formula: Alg(L⊗M) equals the Kronecker
/// span Alg L ⊗ Alg M, compared as canonical operator spaces.
pub fn atpf_dimension(
    l: &ProjectionLattice,
    m: &ProjectionLattice,
    ctx: &CheckContext,
) -> Result<CheckReport> {
    let mut run = Run::new("atpf-dimension", "Alg(L tensor M) = Alg L tensor Alg M");
    ctx.ensure_product_dim(l.ambient_dim() * m.ambient_dim())?;
    if let Some(reason) = density_skip(m)? {
        return Ok(run.skip(reason));
    }

    let t = tensor_lattice(l, m, ctx.max_lattice)?;
    let lhs = alg_of(t.product())?;
    let rhs = alg_of(l)?.tensor_span(&alg_of(m)?);
    run.detail("alg_of_product_dim", json!(lhs.dim()));
    run.detail("kronecker_span_dim", json!(rhs.dim()));
    if !lhs.space_eq(&rhs)? {
        run.violation(
            "atpf-equality",
            json!({ "l": to_value(l), "m": to_value(m) }),
        );
    }
    Ok(run.finish())
}

// ---------------------------------------------------------------------------
// absl-tensor
// ---------------------------------------------------------------------------

/// The tensor product of two ABSLs (one of them with rank one density)
/// is an ABSL whose atoms are exactly the Kronecker products of atoms,
/// with complements witnessed by complementing the coefficients.
pub fn absl_tensor(
    l: &ProjectionLattice,
    m: &ProjectionLattice,
    ctx: &CheckContext,
) -> Result<CheckReport> {
    let mut run = Run::new(
        "absl-tensor",
        "L tensor M is an ABSL with atoms D_i tensor E_j",
    );
    ctx.ensure_product_dim(l.ambient_dim() * m.ambient_dim())?;
    if !l.flags().is_absl || !m.flags().is_absl {
        return Ok(run.skip("both factors must be ABSLs".into()));
    }
    let dense_m = has_rank_one_density(m)?;
    let dense_l = has_rank_one_density(l)?;
    if !dense_m && !dense_l {
        return Ok(run.skip("neither factor has the rank one density property".into()));
    }

    let t = tensor_lattice(l, m, ctx.max_lattice)?;
    let flags = t.product().flags();
    run.detail("product_size", json!(t.product().len()));
    if !flags.is_absl {
        run.violation("absl-flags", json!({ "l": to_value(l), "m": to_value(m) }));
    }

    let mut expected: Vec<Subspace> = Vec::new();
    for a in l.atoms()? {
        for b in m.atoms()? {
            expected.push(a.kron(&b));
        }
    }
    expected.sort();
    run.detail("atom_count", json!(expected.len()));
    if expected != t.product().atoms()? {
        run.violation("absl-atoms", json!({ "l": to_value(l), "m": to_value(m) }));
    }

    // complement witness: complementing the coefficients of the unique
    // decomposition complements the element
    run.samples = t.product().len();
    for q in t.product().elements() {
        let witnessed = if dense_m {
            complement_witness(q, l, m, false)?
        } else {
            complement_witness(q, l, m, true)?
        };
        if !witnessed {
            run.violation(
                "complement-witness",
                json!({
                    "l": to_value(l), "m": to_value(m), "q": to_value(q),
                    "swap": !dense_m,
                }),
            );
        }
    }
    Ok(run.finish())
}

/// Verifies the complementation witness for one product element. With
/// `swap` the roles of the factors are exchanged through the shuffle
/// permutation, covering the case where only the left factor is dense.
fn complement_witness(
    q: &Subspace,
    l: &ProjectionLattice,
    m: &ProjectionLattice,
    swap: bool,
) -> Result<bool> {
    let (coeff_lat, atom_lat, q_oriented) = if swap {
        let flipped = swap_tensor_factors(q, l.ambient_dim(), m.ambient_dim())?;
        (m, l, flipped)
    } else {
        (l, m, q.clone())
    };
    let atoms = atom_lat.atoms()?;
    let k_dim = coeff_lat.ambient_dim();
    let f = phi_full(&q_oriented, &atoms, k_dim)?;
    if theta(&f) != q_oriented {
        return Ok(false);
    }
    let mut complements = Vec::with_capacity(f.values().len());
    for v in f.values() {
        // unique complement inside the Boolean coefficient lattice
        let Some(vi) = coeff_lat.index_of(v) else {
            return Ok(false);
        };
        let mut found = None;
        for j in 0..coeff_lat.len() {
            if coeff_lat.element(coeff_lat.meet_index(vi, j)?).is_zero()
                && coeff_lat.element(coeff_lat.join_index(vi, j)?).is_full()
            {
                found = Some(coeff_lat.element(j).clone());
                break;
            }
        }
        let Some(c) = found else { return Ok(false) };
        complements.push(c);
    }
    let witness = theta(&AtomMap::new(k_dim, atoms.clone(), complements)?);
    Ok(q_oriented.meet(&witness)?.is_zero() && q_oriented.join(&witness)?.is_full())
}

// ---------------------------------------------------------------------------
// reflexivity-transfer
// ---------------------------------------------------------------------------

/// Membership transfer and the finite property-(p) surrogate.
///
/// Stage one: for sampled members of Lat Alg(L⊗M), membership in the
/// finite tensor lattice is equivalent to all phi coefficients lying in
/// the finite L. Stage two (the surrogate, with a finite K of dimension
/// `k_dim` in place of the full projection lattice factor): sampled
/// members of Lat(1 ⊗ Alg(L⊗M)) decompose as ∨ R_j ⊗ E_j with every R_j
/// invariant under 1 ⊗ Alg L.
pub fn reflexivity_transfer(
    l: &ProjectionLattice,
    m: &ProjectionLattice,
    k_dim: usize,
    ctx: &CheckContext,
) -> Result<CheckReport> {
    let mut run = Run::new(
        "reflexivity-transfer",
        "membership transfer between L tensor M and L; finite property-(p) surrogate",
    );
    ctx.ensure_product_dim(k_dim * l.ambient_dim() * m.ambient_dim())?;
    if let Some(reason) = absl_skip(m)? {
        return Ok(run.skip(reason));
    }
    run.detail(
        "note",
        json!(
            "property (p) evaluated with a finite-dimensional stand-in for the full projection \
             lattice factor; infinite separably-acting factors are out of scope"
        ),
    );

    let atoms = m.atoms()?;
    let kl = l.ambient_dim();
    let t = tensor_lattice(l, m, ctx.max_lattice)?;
    let alg_t = alg_of(t.product())?;

    // stage one: finite membership transfer (an exact iff)
    let qs = sample_invariant_projections(&alg_t, ctx.seed, ctx.samples, ctx.field)?;
    run.detail("stage_one_samples", json!(qs.len()));
    for q in &qs {
        let f = phi_full(q, &atoms, kl)?;
        let in_product = t.product().contains(q);
        let coeffs_in_l = f.values().iter().all(|v| l.contains(v));
        if in_product != coeffs_in_l {
            run.violation(
                "membership-iff",
                json!({ "l": to_value(l), "m": to_value(m), "q": to_value(q) }),
            );
        }
        run.samples += 1;
    }

    // stage two: property-(p) surrogate over the enlarged K
    let one_alg = kron_algebra(k_dim, &alg_t);
    let one_alg_l = kron_algebra(k_dim, &alg_of(l)?);
    let qs2 =
        sample_invariant_projections(&one_alg, sub_seed(ctx.seed, 1), ctx.samples, ctx.field)?;
    run.detail("stage_two_samples", json!(qs2.len()));
    if qs2.len() < ctx.samples {
        run.detail("stage_two_shortfall", json!(ctx.samples - qs2.len()));
    }
    for q in &qs2 {
        let f = phi_full(q, &atoms, k_dim * kl)?;
        if &theta(&f) != q {
            run.violation(
                "property-p-stage1",
                json!({
                    "l": to_value(l), "m": to_value(m), "k_dim": k_dim, "q": to_value(q),
                }),
            );
        }
        for r in f.values() {
            if !is_invariant(r, &one_alg_l)? {
                run.violation(
                    "property-p-stage2",
                    json!({
                        "l": to_value(l), "m": to_value(m), "k_dim": k_dim, "q": to_value(q),
                    }),
                );
            }
        }
        run.samples += 1;
    }
    Ok(run.finish())
}

// ---------------------------------------------------------------------------
// phi-join-probe
// ---------------------------------------------------------------------------

/// Deliberately asserts the false statement "phi preserves joins" on the
/// configuration M' = (L1 ⊗ E1) ∨ (L2 ⊗ E2) with L1 ∧ L2 ≠ 0, evaluated
/// on {E1, E2, E1∨E2}. The probe must fail — phi(M')(E1∨E2) dominates
/// L1 ∧ L2 > 0 while the pointwise join vanishes there — and the check
/// passes exactly when the harness detects that violation.
pub fn phi_join_probe(
    m: &ProjectionLattice,
    k_dim: usize,
    ctx: &CheckContext,
) -> Result<CheckReport> {
    let mut run = Run::new(
        "phi-join-probe",
        "phi is not join-preserving; the harness must detect the violation",
    );
    ctx.ensure_product_dim(k_dim * m.ambient_dim())?;
    if let Some(reason) = absl_skip(m)? {
        return Ok(run.skip(reason));
    }
    let atoms = m.atoms()?;
    if atoms.len() < 2 {
        return Ok(run.skip("need at least two atoms".into()));
    }

    match probe_phi_join(m, k_dim)? {
        Some(probe_detail) => {
            run.detail("probe_violation", probe_detail);
            run.samples = 1;
        }
        None => {
            run.violation(
                "phi-join-preserving",
                json!({ "m": to_value(m), "k_dim": k_dim }),
            );
        }
    }
    Ok(run.finish())
}

/// Runs the raw (false) join-preservation assertion. Returns the
/// violation evidence when phi fails to preserve the join — the expected
/// outcome — or `None` if the assertion unexpectedly holds.
pub fn probe_phi_join(m: &ProjectionLattice, k_dim: usize) -> Result<Option<Value>> {
    let atoms = m.atoms()?;
    let e1 = &atoms[0];
    let e2 = &atoms[1];
    let e_join = e1.join(e2)?;
    let eval_set = vec![e1.clone(), e2.clone(), e_join.clone()];

    let l1 = Subspace::full(k_dim);
    let l2 = Subspace::coordinate(k_dim, &[0]);
    debug_assert!(!l1.meet(&l2)?.is_zero());
    let m1 = l1.kron(e1);
    let m2 = l2.kron(e2);
    let joined = m1.join(&m2)?;

    let f_m = phi_full(&joined, &eval_set, k_dim)?;
    let f_1 = phi_full(&m1, &eval_set, k_dim)?;
    let f_2 = phi_full(&m2, &eval_set, k_dim)?;
    let pointwise = f_1.join(&f_2)?;

    if f_m == pointwise {
        return Ok(None); // the false assertion held: the probe failed to fire
    }
    // confirm the structure of the violation
    let overlap = l1.meet(&l2)?;
    let at_join = &f_m.values()[2];
    let dominated = !overlap.is_zero() && overlap.leq(at_join)?;
    let pointwise_vanishes = pointwise.values()[2].is_zero();
    Ok(Some(json!({
        "phi_m_at_join_dim": at_join.dim(),
        "overlap_dim": overlap.dim(),
        "overlap_dominated": dominated,
        "pointwise_join_vanishes": pointwise_vanishes,
    })))
}

// ---------------------------------------------------------------------------
// dispatch and replay
// ---------------------------------------------------------------------------

/// Runs a check by id. `l` and `m` are fixture-wrapped lattices; checks
/// that only involve one lattice use `m`.
pub fn run_check(
    id: &str,
    l: Option<&Fixture>,
    m: Option<&Fixture>,
    k_dim: usize,
    ctx: &CheckContext,
) -> Result<CheckReport> {
    fn need<'a>(f: Option<&'a Fixture>, id: &str, side: &str) -> Result<&'a Fixture> {
        f.ok_or_else(|| Error::invalid(format!("check `{id}` needs lattice `{side}`")))
    }
    match id {
        "theta-phi-inverse" => theta_phi_inverse(&need(m, id, "m")?.lattice, k_dim, ctx),
        "isomorphism" => isomorphism(&need(l, id, "l")?.lattice, &need(m, id, "m")?.lattice, ctx),
        "perp-identity" => perp_identity(&need(m, id, "m")?.lattice, k_dim, ctx),
        "latalg-tensor" => {
            latalg_tensor(&need(l, id, "l")?.lattice, &need(m, id, "m")?.lattice, ctx)
        }
        "ltpf" => {
            let lf = need(l, id, "l")?;
            ltpf(&lf.lattice, lf.reflexive, &need(m, id, "m")?.lattice, ctx)
        }
        "atpf-dimension" => {
            atpf_dimension(&need(l, id, "l")?.lattice, &need(m, id, "m")?.lattice, ctx)
        }
        "absl-tensor" => absl_tensor(&need(l, id, "l")?.lattice, &need(m, id, "m")?.lattice, ctx),
        "reflexivity-transfer" => reflexivity_transfer(
            &need(l, id, "l")?.lattice,
            &need(m, id, "m")?.lattice,
            k_dim,
            ctx,
        ),
        "phi-join-probe" => phi_join_probe(&need(m, id, "m")?.lattice, k_dim, ctx),
        other => Err(Error::UnknownCheck(other.to_string())),
    }
}

fn payload_lattice(data: &Value, key: &str, cap: usize) -> Result<ProjectionLattice> {
    let v = data
        .get(key)
        .ok_or_else(|| Error::invalid(format!("payload is missing `{key}`")))?;
    lattice_from_value(v, cap)
}

fn payload_field<T: for<'de> Deserialize<'de>>(data: &Value, key: &str) -> Result<T> {
    let v = data
        .get(key)
        .ok_or_else(|| Error::invalid(format!("payload is missing `{key}`")))?;
    Ok(serde_json::from_value(v.clone())?)
}

/// Re-evaluates the single assertion recorded in a counterexample
/// payload. A genuine counterexample fails again; the report mirrors the
/// outcome so the CLI can exit nonzero on reproduced failures.
pub fn replay(payload: &Value, ctx: &CheckContext) -> Result<CheckReport> {
    let assertion: String = payload_field(payload, "assertion")?;
    let check: String = payload_field(payload, "check")?;
    let data = payload
        .get("data")
        .ok_or_else(|| Error::invalid("payload is missing `data`"))?;
    let cap = ctx.max_lattice;

    let holds: bool = match assertion.as_str() {
        "theta-phi-identity" => {
            let m = payload_lattice(data, "m", cap)?;
            let k_dim: usize = payload_field(data, "k_dim")?;
            let q: Subspace = payload_field(data, "q")?;
            theta(&phi_full(&q, m.elements(), k_dim)?) == q
        }
        "phi-injective" => {
            let m = payload_lattice(data, "m", cap)?;
            let k_dim: usize = payload_field(data, "k_dim")?;
            let q1: Subspace = payload_field(data, "q1")?;
            let q2: Subspace = payload_field(data, "q2")?;
            q1 == q2 || phi_full(&q1, m.elements(), k_dim)? != phi_full(&q2, m.elements(), k_dim)?
        }
        "phi-meet-preserving" => {
            let m = payload_lattice(data, "m", cap)?;
            let k_dim: usize = payload_field(data, "k_dim")?;
            let q1: Subspace = payload_field(data, "q1")?;
            let q2: Subspace = payload_field(data, "q2")?;
            let lhs = phi_full(&q1.meet(&q2)?, m.elements(), k_dim)?;
            let rhs =
                phi_full(&q1, m.elements(), k_dim)?.meet(&phi_full(&q2, m.elements(), k_dim)?)?;
            lhs == rhs
        }
        "theta-into-product" => {
            let l = payload_lattice(data, "l", cap)?;
            let m = payload_lattice(data, "m", cap)?;
            let f: AtomMap = payload_field(data, "f")?;
            tensor_lattice(&l, &m, cap)?.product().contains(&theta(&f))
        }
        "phi-theta-identity" => {
            let m = payload_lattice(data, "m", cap)?;
            let f: AtomMap = payload_field(data, "f")?;
            phi_full(&theta(&f), &m.atoms()?, f.k_dim())? == f
        }
        "theta-join-preserving" => {
            let f: AtomMap = payload_field(data, "f")?;
            let g: AtomMap = payload_field(data, "g")?;
            theta(&f.join(&g)?) == theta(&f).join(&theta(&g))?
        }
        "theta-meet-preserving" => {
            let f: AtomMap = payload_field(data, "f")?;
            let g: AtomMap = payload_field(data, "g")?;
            theta(&f.meet(&g)?) == theta(&f).meet(&theta(&g))?
        }
        "order-reflection" => {
            let f: AtomMap = payload_field(data, "f")?;
            let g: AtomMap = payload_field(data, "g")?;
            f.leq(&g)? == theta(&f).leq(&theta(&g))?
        }
        "perp-identity" => {
            let m = payload_lattice(data, "m", cap)?;
            let f: AtomMap = payload_field(data, "f")?;
            let (_, d_family) = m.complement_lattice()?;
            theta(&f).perp() == theta(&f.perp(&d_family)?)
        }
        "complement-atoms" => {
            let m = payload_lattice(data, "m", cap)?;
            m.complement_lattice().is_ok()
        }
        "theta-invariant" => {
            let l = payload_lattice(data, "l", cap)?;
            let m = payload_lattice(data, "m", cap)?;
            let f: AtomMap = payload_field(data, "f")?;
            let t = tensor_lattice(&l, &m, cap)?;
            is_invariant(&theta(&f), &alg_of(t.product())?)?
        }
        "phi-values-invariant" => {
            let l = payload_lattice(data, "l", cap)?;
            let m = payload_lattice(data, "m", cap)?;
            let q: Subspace = payload_field(data, "q")?;
            let f = phi_full(&q, &m.atoms()?, l.ambient_dim())?;
            let alg_l = alg_of(&l)?;
            let mut all = true;
            for v in f.values() {
                all &= is_invariant(v, &alg_l)?;
            }
            all
        }
        "ltpf-decomposition" | "property-p-stage1" => {
            let l = payload_lattice(data, "l", cap)?;
            let m = payload_lattice(data, "m", cap)?;
            let q: Subspace = payload_field(data, "q")?;
            let k_dim = q.ambient_dim() / m.ambient_dim();
            let _ = l;
            theta(&phi_full(&q, &m.atoms()?, k_dim)?) == q
        }
        "ltpf-coefficients" => {
            let l = payload_lattice(data, "l", cap)?;
            let m = payload_lattice(data, "m", cap)?;
            let q: Subspace = payload_field(data, "q")?;
            let mode: String = payload_field(data, "mode")?;
            let f = phi_full(&q, &m.atoms()?, l.ambient_dim())?;
            let alg_l = alg_of(&l)?;
            let mut all = true;
            for v in f.values() {
                all &= if mode == "lattice" {
                    l.contains(v)
                } else {
                    is_invariant(v, &alg_l)?
                };
            }
            all
        }
        "atpf-equality" => {
            let l = payload_lattice(data, "l", cap)?;
            let m = payload_lattice(data, "m", cap)?;
            let t = tensor_lattice(&l, &m, cap)?;
            alg_of(t.product())?.space_eq(&alg_of(&l)?.tensor_span(&alg_of(&m)?))?
        }
        "absl-flags" => {
            let l = payload_lattice(data, "l", cap)?;
            let m = payload_lattice(data, "m", cap)?;
            tensor_lattice(&l, &m, cap)?.product().flags().is_absl
        }
        "absl-atoms" => {
            let l = payload_lattice(data, "l", cap)?;
            let m = payload_lattice(data, "m", cap)?;
            let t = tensor_lattice(&l, &m, cap)?;
            let mut expected = Vec::new();
            for a in l.atoms()? {
                for b in m.atoms()? {
                    expected.push(a.kron(&b));
                }
            }
            expected.sort();
            expected == t.product().atoms()?
        }
        "complement-witness" => {
            let l = payload_lattice(data, "l", cap)?;
            let m = payload_lattice(data, "m", cap)?;
            let q: Subspace = payload_field(data, "q")?;
            let swap: bool = payload_field(data, "swap")?;
            complement_witness(&q, &l, &m, swap)?
        }
        "membership-iff" => {
            let l = payload_lattice(data, "l", cap)?;
            let m = payload_lattice(data, "m", cap)?;
            let q: Subspace = payload_field(data, "q")?;
            let t = tensor_lattice(&l, &m, cap)?;
            let f = phi_full(&q, &m.atoms()?, l.ambient_dim())?;
            t.product().contains(&q) == f.values().iter().all(|v| l.contains(v))
        }
        "property-p-stage2" => {
            let l = payload_lattice(data, "l", cap)?;
            let m = payload_lattice(data, "m", cap)?;
            let k_dim: usize = payload_field(data, "k_dim")?;
            let q: Subspace = payload_field(data, "q")?;
            let f = phi_full(&q, &m.atoms()?, k_dim * l.ambient_dim())?;
            let one_alg_l = kron_algebra(k_dim, &alg_of(&l)?);
            let mut all = true;
            for r in f.values() {
                all &= is_invariant(r, &one_alg_l)?;
            }
            all
        }
        "phi-join-preserving" => {
            let m = payload_lattice(data, "m", cap)?;
            let k_dim: usize = payload_field(data, "k_dim")?;
            // holds iff the probe found no violation
            probe_phi_join(&m, k_dim)?.is_none()
        }
        other => return Err(Error::invalid(format!("unknown assertion `{other}`"))),
    };

    let mut run = Run::new("replay", "re-evaluation of a recorded counterexample");
    run.detail("source_check", json!(check));
    run.detail("assertion", json!(assertion));
    run.detail("reproduced", json!(!holds));
    run.samples = 1;
    if !holds {
        run.violation(&assertion, data.clone());
    }
    Ok(run.finish())
}
