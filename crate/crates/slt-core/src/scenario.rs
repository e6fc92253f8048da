//! Scenario loading, execution and reporting.
//!
//! A scenario names a field, a seed, caps, a set of lattices (bundled
//! fixtures, literals, generator sets or seeded random families) and an
//! ordered list of checks. Execution is deterministic: each check slot
//! derives its own seed from the scenario seed by index, so the produced
//! JSON report is byte-identical across runs of the same scenario.

use crate::checks::{self, CheckContext, CheckReport, CheckStatus};
use crate::error::{Error, Result};
use crate::fixtures::{self, Fixture};
use crate::json::{enforce_field_lattice, lattice_from_value};
use crate::lattice::DEFAULT_CLOSURE_CAP;
use crate::rng::sub_seed;
use crate::scalar::Field;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;

pub const REPORT_VERSION: u32 = 1;
pub const DEFAULT_SAMPLES: usize = 16;
pub const DEFAULT_MAX_PRODUCT_DIM: usize = 16;

/// How a scenario obtains one of its lattices.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LatticeSpec {
    /// A bundled fixture, e.g. `{"fixture": "twoatom2"}`.
    Fixture { fixture: String },
    /// A seeded random two-atom Boolean lattice.
    RandomTwoAtom { random_two_atom: RandomTwoAtomSpec },
    /// An inline lattice literal (`elements` or `generators` form),
    /// forwarded to the JSON loader.
    Literal(Value),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RandomTwoAtomSpec {
    pub dim: usize,
    pub atom_dim: usize,
    #[serde(default)]
    pub seed: Option<u64>,
}

/// One entry of the scenario's check list.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckSpec {
    pub check: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    #[serde(default = "default_field")]
    pub field: Field,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_max_lattice")]
    pub max_lattice: usize,
    #[serde(default = "default_max_product_dim")]
    pub max_product_dim: usize,
    #[serde(default = "default_k_dim")]
    pub k_dim: usize,
    #[serde(default)]
    pub lattices: BTreeMap<String, LatticeSpec>,
    pub checks: Vec<CheckSpec>,
}

fn default_field() -> Field {
    Field::Rational
}
fn default_samples() -> usize {
    DEFAULT_SAMPLES
}
fn default_max_lattice() -> usize {
    DEFAULT_CLOSURE_CAP
}
fn default_max_product_dim() -> usize {
    DEFAULT_MAX_PRODUCT_DIM
}
fn default_k_dim() -> usize {
    2
}

impl Scenario {
    pub fn from_json(s: &str) -> Result<Scenario> {
        Ok(serde_json::from_str(s)?)
    }

    /// The bundled core scenario exercising every check across the
    /// fixture corpus.
    pub fn paper_core() -> Scenario {
        Scenario::from_json(include_str!("../scenarios/paper-core.json"))
            .expect("bundled scenario parses")
    }

    /// Looks up a bundled scenario by name.
    pub fn bundled(name: &str) -> Option<Scenario> {
        match name {
            "paper-core" => Some(Scenario::paper_core()),
            _ => None,
        }
    }
}

/// The whole-run report. Field order is fixed by the struct; serde_json
/// maps are BTree-backed, so serialization is deterministic.
#[derive(Clone, Debug, Serialize)]
pub struct ScenarioReport {
    pub report_version: u32,
    pub scenario: String,
    pub field: Field,
    pub seed: u64,
    pub checks: Vec<CheckReport>,
    pub summary: Summary,
}

#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skip: usize,
}

impl ScenarioReport {
    pub fn exit_code(&self) -> i32 {
        if self.summary.fail > 0 {
            1
        } else {
            0
        }
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Fixed-width human table, one row per check (timing shown here and
    /// only here).
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "scenario {} (field {}, seed {})\n",
            self.scenario, self.field, self.seed
        ));
        out.push_str(&format!(
            "{:<22} {:<6} {:>8} {:>9}  {}\n",
            "CHECK", "STATUS", "SAMPLES", "TIME", "NOTE"
        ));
        for c in &self.checks {
            let status = match c.status {
                CheckStatus::Pass => "pass",
                CheckStatus::Fail => "FAIL",
                CheckStatus::Skip => "skip",
            };
            let note = match c.status {
                CheckStatus::Skip => c.skip_reason.clone().unwrap_or_default(),
                CheckStatus::Fail => c
                    .counterexample
                    .as_ref()
                    .and_then(|v| v.get("assertion"))
                    .and_then(Value::as_str)
                    .map(|a| format!("violated: {a}"))
                    .unwrap_or_default(),
                CheckStatus::Pass => String::new(),
            };
            out.push_str(&format!(
                "{:<22} {:<6} {:>8} {:>7}ms  {}\n",
                c.check_id,
                status,
                c.samples,
                c.elapsed.as_millis(),
                note
            ));
        }
        out.push_str(&format!(
            "{} passed, {} failed, {} skipped\n",
            self.summary.pass, self.summary.fail, self.summary.skip
        ));
        out
    }
}

/// Resolves every named lattice of the scenario up front.
fn resolve_lattices(s: &Scenario) -> Result<BTreeMap<String, Fixture>> {
    let mut out: BTreeMap<String, Fixture> = BTreeMap::new();
    for (name, spec) in &s.lattices {
        let fixture = match spec {
            LatticeSpec::Fixture { fixture } => {
                let mut f = fixtures::resolve(fixture, s.seed, s.field)?;
                f.name = name.clone();
                f
            }
            LatticeSpec::RandomTwoAtom { random_two_atom } => {
                let seed = random_two_atom.seed.unwrap_or(s.seed);
                let lattice = fixtures::generic_two_atom(
                    random_two_atom.dim,
                    random_two_atom.atom_dim,
                    seed,
                    s.field,
                )?;
                Fixture {
                    name: name.clone(),
                    lattice,
                    reflexive: true,
                }
            }
            LatticeSpec::Literal(value) => {
                let lattice = lattice_from_value(value, s.max_lattice)?;
                // literals carry no reflexivity metadata; checks fall back
                // to the invariance-style necessary conditions
                Fixture {
                    name: name.clone(),
                    lattice,
                    reflexive: false,
                }
            }
        };
        enforce_field_lattice(&fixture.lattice, s.field)?;
        if out.insert(name.clone(), fixture).is_some() {
            return Err(Error::invalid(format!("duplicate lattice name `{name}`")));
        }
    }
    Ok(out)
}

/// Executes the scenario's checks in declared order. Fails fast on
/// malformed references or cap overflow (those map to process exit codes
/// 2 and 3); check failures are recorded in the report instead.
pub fn run_scenario(s: &Scenario) -> Result<ScenarioReport> {
    let lattices = resolve_lattices(s)?;
    let lookup = |name: &Option<String>| -> Result<Option<&Fixture>> {
        match name {
            None => Ok(None),
            Some(n) => lattices
                .get(n)
                .map(Some)
                .ok_or_else(|| Error::invalid(format!("scenario does not define lattice `{n}`"))),
        }
    };

    let mut reports = Vec::with_capacity(s.checks.len());
    let mut summary = Summary::default();
    for (index, spec) in s.checks.iter().enumerate() {
        let ctx = CheckContext {
            seed: spec.seed.unwrap_or_else(|| sub_seed(s.seed, index as u64)),
            samples: spec.samples.unwrap_or(s.samples),
            max_lattice: s.max_lattice,
            max_product_dim: s.max_product_dim,
            field: s.field,
        };
        let l = lookup(&spec.l)?;
        let m = lookup(&spec.m)?;
        let k_dim = spec.k_dim.unwrap_or(s.k_dim);
        let report = checks::run_check(&spec.check, l, m, k_dim, &ctx)?;
        match report.status {
            CheckStatus::Pass => summary.pass += 1,
            CheckStatus::Fail => summary.fail += 1,
            CheckStatus::Skip => summary.skip += 1,
        }
        reports.push(report);
    }

    Ok(ScenarioReport {
        report_version: REPORT_VERSION,
        scenario: s.name.clone(),
        field: s.field,
        seed: s.seed,
        checks: reports,
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_scenario_runs() {
        let s = Scenario::from_json(
            r#"{
                "name": "mini",
                "seed": 3,
                "samples": 6,
                "lattices": {
                    "m": {"fixture": "twoatom2"},
                    "l": {"fixture": "nest2"}
                },
                "checks": [
                    {"check": "theta-phi-inverse", "m": "m", "k_dim": 2},
                    {"check": "atpf-dimension", "l": "l", "m": "m"}
                ]
            }"#,
        )
        .unwrap();
        let report = run_scenario(&s).unwrap();
        assert_eq!(report.summary.pass, 2);
        assert_eq!(report.exit_code(), 0);
    }

    #[test]
    fn empty_check_list_yields_empty_report() {
        let s = Scenario::from_json(r#"{"name": "empty", "checks": []}"#).unwrap();
        let report = run_scenario(&s).unwrap();
        assert!(report.checks.is_empty());
        assert_eq!(report.exit_code(), 0);
    }

    #[test]
    fn unknown_references_are_invalid() {
        let s = Scenario::from_json(
            r#"{"name": "bad", "checks": [{"check": "ltpf", "l": "nope", "m": "nope"}]}"#,
        )
        .unwrap();
        assert!(matches!(run_scenario(&s), Err(Error::Invalid(_))));
    }

    #[test]
    fn literal_lattices_resolve() {
        let s = Scenario::from_json(
            r#"{
                "name": "lit",
                "lattices": {
                    "m": {"dim": 2, "generators": [
                        {"basis": [["1","0"]]},
                        {"basis": [["1","1"]]}
                    ]},
                    "r": {"random_two_atom": {"dim": 4, "atom_dim": 2, "seed": 5}}
                },
                "checks": [{"check": "perp-identity", "m": "m", "k_dim": 2},
                           {"check": "perp-identity", "m": "r", "k_dim": 2}]
            }"#,
        )
        .unwrap();
        let report = run_scenario(&s).unwrap();
        assert_eq!(report.summary.pass, 2);
    }

    #[test]
    fn paper_core_passes_and_reports_identically() {
        let s = Scenario::paper_core();
        let report = run_scenario(&s).unwrap();
        assert_eq!(report.summary.fail, 0, "{}", report.to_table());
        // paper-core carries two deliberate hypothesis-failure entries
        // that pin SKIP semantics; everything else passes
        assert_eq!(report.summary.skip, 2, "{}", report.to_table());
        assert_eq!(report.exit_code(), 0);
        // identical (scenario, seed) reproduces the report byte for byte
        let again = run_scenario(&s).unwrap();
        assert_eq!(report.to_json_string(), again.to_json_string());
    }
}
