//! End-to-end coverage over the Gaussian rationals: the identities that
//! depend on conjugation being threaded correctly (adjoints in
//! projections, perps, rank one operators and the cyclic-decomposition
//! inner products).

use slt_core::checks::{self, CheckContext, CheckStatus};
use slt_core::lattice::ProjectionLattice;
use slt_core::matrix::Matrix;
use slt_core::opalg::{alg_of, has_rank_one_density};
use slt_core::scalar::{Field, Scalar};
use slt_core::scenario::{run_scenario, Scenario};
use slt_core::subspace::Subspace;
use slt_core::tensor::{cyclic_decomposition, theta};

fn ctx(seed: u64, samples: usize) -> CheckContext {
    CheckContext {
        seed,
        samples,
        field: Field::Gaussian,
        ..CheckContext::default()
    }
}

fn i() -> Scalar {
    Scalar::gaussian(0, 1)
}

/// Atoms span(1, i) and span(1, −i): mutually orthogonal complementary
/// lines that only exist over Q(i).
fn circular_two_atom() -> ProjectionLattice {
    let p = Subspace::from_vectors(2, &[vec![Scalar::one(), i()]]).unwrap();
    let q = Subspace::from_vectors(2, &[vec![Scalar::one(), -i()]]).unwrap();
    ProjectionLattice::from_elements(2, vec![p, q]).unwrap()
}

/// A skew pair: span(1, i) against the real diagonal span(1, 1).
fn skew_two_atom() -> ProjectionLattice {
    let p = Subspace::from_vectors(2, &[vec![Scalar::one(), i()]]).unwrap();
    let q = Subspace::from_vectors(2, &[vec![Scalar::one(), Scalar::one()]]).unwrap();
    ProjectionLattice::from_elements(2, vec![p, q]).unwrap()
}

#[test]
fn gaussian_two_atom_lattices_classify_and_are_dense() {
    let circ = circular_two_atom();
    assert_eq!(circ.len(), 4);
    let f = circ.flags();
    // orthogonal atoms commute, so this one is even a CSL
    assert!(f.is_absl && f.is_csl);
    assert!(has_rank_one_density(&circ).unwrap());
    assert_eq!(alg_of(&circ).unwrap().dim(), 2);

    let skew = skew_two_atom();
    assert!(skew.flags().is_absl);
    assert!(!skew.flags().is_csl);
    assert!(has_rank_one_density(&skew).unwrap());
}

#[test]
fn theta_phi_and_perp_checks_pass_over_gaussian_field() {
    for m in [circular_two_atom(), skew_two_atom()] {
        let r = checks::theta_phi_inverse(&m, 2, &ctx(7, 12)).unwrap();
        assert_eq!(r.status, CheckStatus::Pass, "{:?}", r.counterexample);
        assert!(r.samples >= 12);

        let r = checks::perp_identity(&m, 2, &ctx(11, 16)).unwrap();
        assert_eq!(r.status, CheckStatus::Pass, "{:?}", r.counterexample);
    }
}

#[test]
fn isomorphism_and_atpf_hold_for_gaussian_factors() {
    let l = skew_two_atom();
    let m = circular_two_atom();
    let r = checks::isomorphism(&l, &m, &ctx(3, 16)).unwrap();
    assert_eq!(r.status, CheckStatus::Pass, "{:?}", r.counterexample);
    assert_eq!(r.samples, 16); // 4^2 maps, exhaustive

    let r = checks::atpf_dimension(&l, &m, &ctx(3, 16)).unwrap();
    assert_eq!(r.status, CheckStatus::Pass, "{:?}", r.counterexample);
    assert_eq!(r.details["alg_of_product_dim"], serde_json::json!(4));
}

#[test]
fn cyclic_decomposition_uses_the_conjugated_inner_product() {
    // ξ = e1 ⊗ (1, i): an elementary tensor with its H part inside the
    // atom span(1, i), so the map is supported on that atom alone
    let m = circular_two_atom();
    let xi = vec![Scalar::one(), i(), Scalar::zero(), Scalar::zero()];
    let f = cyclic_decomposition(&xi, &m, 2).unwrap();
    let atoms = m.atoms().unwrap();
    let p = Subspace::from_vectors(2, &[vec![Scalar::one(), i()]]).unwrap();
    for (atom, value) in atoms.iter().zip(f.values()) {
        if atom == &p {
            assert_eq!(
                value,
                &Subspace::from_vectors(2, &[vec![Scalar::one(), Scalar::zero()]]).unwrap()
            );
        } else {
            assert!(value.is_zero());
        }
    }

    // random vectors: theta of the decomposition is exactly the orbit span
    let alg = alg_of(&m).unwrap();
    let id2 = Matrix::identity(2);
    let mut rng = slt_core::rng::rng_for(23);
    for _ in 0..8 {
        let xi = slt_core::rng::random_vector(&mut rng, 4, Field::Gaussian);
        let f = cyclic_decomposition(&xi, &m, 2).unwrap();
        let orbit: Vec<Vec<Scalar>> = alg
            .basis()
            .iter()
            .map(|t| id2.kronecker(t).mul_vec(&xi))
            .collect();
        assert_eq!(theta(&f), Subspace::from_vectors(4, &orbit).unwrap());
    }
}

#[test]
fn gaussian_scenario_runs_end_to_end() {
    let s = Scenario::from_json(
        r#"{
            "name": "gaussian-mini",
            "field": "Qi",
            "seed": 9,
            "samples": 8,
            "lattices": {
                "m": {"dim": 2, "generators": [
                    {"basis": [["1", {"re": "0", "im": "1"}]]},
                    {"basis": [["1", {"re": "0", "im": "-1"}]]}
                ]}
            },
            "checks": [
                {"check": "theta-phi-inverse", "m": "m", "k_dim": 2},
                {"check": "perp-identity", "m": "m", "k_dim": 2},
                {"check": "phi-join-probe", "m": "m", "k_dim": 2}
            ]
        }"#,
    )
    .unwrap();
    let report = run_scenario(&s).unwrap();
    assert_eq!(report.summary.pass, 3, "{}", report.to_table());
    // determinism holds over Qi as well
    assert_eq!(
        report.to_json_string(),
        run_scenario(&s).unwrap().to_json_string()
    );
}
