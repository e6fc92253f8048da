//! Command-line surface for the subspace-lattice toolkit.
//!
//! Data commands (`closure`, `alg`, `rankone`, `tensor`, `theta`, `phi`,
//! `cyclic`) read JSON files and print JSON. `check` runs one named
//! checker against fixtures or lattice files (or replays a recorded
//! counterexample payload); `run` executes a scenario file or a bundled
//! scenario by name.
//!
//! Exit codes: 0 success / all checks pass, 1 a check failed, 2 malformed
//! input, 3 cap overflow.

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use slt_core::checks::{self, CheckContext, CheckStatus};
use slt_core::error::Error as SltError;
use slt_core::fixtures;
use slt_core::json::{
    enforce_field_atom_map, enforce_field_lattice, enforce_field_scalars, enforce_field_subspace,
    lattice_from_str,
};
use slt_core::lattice::{ProjectionLattice, DEFAULT_CLOSURE_CAP};
use slt_core::opalg;
use slt_core::scalar::{Field, Scalar};
use slt_core::scenario::{self, Scenario, DEFAULT_MAX_PRODUCT_DIM, DEFAULT_SAMPLES};
use slt_core::subspace::Subspace;
use slt_core::tensor;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "slt",
    about = "Exact computations on subspace lattices, operator algebras and their tensor products",
    version
)]
struct Cli {
    /// Scalar field for inputs and sampling.
    #[arg(long, global = true, default_value = "Q")]
    field: FieldArg,

    /// Seed for all deterministic sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Sample count for the sampled checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,

    /// Lattice closure cap (overrides the SLT_MAX_LATTICE environment
    /// variable; default 512).
    #[arg(long, global = true)]
    max_lattice: Option<usize>,

    /// Write the primary JSON result to this path instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Output format for reports.
    #[arg(long, global = true, default_value = "table")]
    format: FormatArg,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FieldArg {
    #[value(name = "Q", alias = "q")]
    Q,
    #[value(name = "Qi", alias = "qi")]
    Qi,
}

impl From<FieldArg> for Field {
    fn from(f: FieldArg) -> Field {
        match f {
            FieldArg::Q => Field::Rational,
            FieldArg::Qi => Field::Gaussian,
        }
    }
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum FormatArg {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Close a lattice file (literal or generators form) under meet/join.
    Closure {
        /// Lattice JSON file.
        input: PathBuf,
    },
    /// Compute Alg L for a lattice file.
    Alg { input: PathBuf },
    /// Compute the rank one subspace of Alg L and the density verdict.
    Rankone { input: PathBuf },
    /// Close the tensor product of two lattice files.
    Tensor { left: PathBuf, right: PathBuf },
    /// Apply theta to an atom map file.
    Theta { map: PathBuf },
    /// Apply phi to a subspace on K⊗H over the atoms of a lattice file.
    Phi {
        /// Subspace JSON file for Q on the product space.
        q: PathBuf,
        /// Lattice file for M; its atoms index the result.
        m: PathBuf,
        /// full: maximal-subspace kernel solve; lattice: join over an
        /// explicit finite lattice on K (requires --lattice).
        #[arg(long, value_enum, default_value = "full")]
        mode: PhiMode,
        /// Coefficient lattice file on K for lattice mode.
        #[arg(long)]
        lattice: Option<PathBuf>,
    },
    /// Decompose the cyclic subspace of a vector on K⊗H under 1 ⊗ Alg M.
    Cyclic {
        /// JSON array of scalar literals for the vector ξ.
        xi: PathBuf,
        /// Lattice file for M (needs rank one density).
        m: PathBuf,
        /// Dimension of the K factor.
        #[arg(long)]
        k_dim: usize,
    },
    /// Run one named check against fixtures or lattice files.
    Check {
        /// Check id, e.g. theta-phi-inverse (see --list).
        name: Option<String>,
        /// Left lattice: a fixture name or a lattice file path.
        #[arg(long)]
        l: Option<String>,
        /// Right lattice (the M side): fixture name or file path.
        #[arg(long)]
        m: Option<String>,
        /// K dimension for the checks that enlarge the product.
        #[arg(long, default_value_t = 2)]
        k_dim: usize,
        /// Replay a recorded counterexample payload instead.
        #[arg(long)]
        payload: Option<PathBuf>,
        /// List available checks and fixtures.
        #[arg(long)]
        list: bool,
    },
    /// Run a scenario file (or a bundled scenario by name).
    Run {
        /// Path to a scenario JSON file, or a bundled name (paper-core).
        scenario: String,
        /// Override the scenario's seed.
        #[arg(long)]
        seed_override: Option<u64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PhiMode {
    Full,
    Lattice,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = e
                .downcast_ref::<SltError>()
                .map(SltError::exit_code)
                .unwrap_or(2);
            ExitCode::from(code as u8)
        }
    }
}

fn cap(cli: &Cli) -> usize {
    cli.max_lattice
        .or_else(|| {
            std::env::var("SLT_MAX_LATTICE")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(DEFAULT_CLOSURE_CAP)
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_lattice(cli: &Cli, path: &Path) -> anyhow::Result<ProjectionLattice> {
    let lat = lattice_from_str(&read(path)?, cap(cli))?;
    enforce_field_lattice(&lat, cli.field.into())?;
    Ok(lat)
}

fn load_subspace(cli: &Cli, path: &Path) -> anyhow::Result<Subspace> {
    let s: Subspace = serde_json::from_str(&read(path)?).map_err(SltError::from)?;
    enforce_field_subspace(&s, cli.field.into())?;
    Ok(s)
}

fn emit(cli: &Cli, json: String) -> anyhow::Result<()> {
    match &cli.output {
        Some(path) => {
            fs::write(path, json).with_context(|| format!("writing {}", path.display()))?
        }
        None => println!("{json}"),
    }
    Ok(())
}

fn pretty<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("toolkit types serialize");
    s.push('\n');
    s
}

/// Resolves a check lattice argument: fixture name first, file path second.
fn check_lattice(cli: &Cli, arg: &str) -> anyhow::Result<fixtures::Fixture> {
    match fixtures::resolve(arg, cli.seed, cli.field.into()) {
        Ok(f) => Ok(f),
        Err(SltError::UnknownFixture(_)) if Path::new(arg).exists() => {
            let lattice = load_lattice(cli, Path::new(arg))?;
            Ok(fixtures::Fixture {
                name: arg.to_string(),
                lattice,
                reflexive: false,
            })
        }
        Err(e) => Err(e.into()),
    }
}

fn dispatch(cli: &Cli) -> anyhow::Result<i32> {
    match &cli.command {
        Command::Closure { input } => {
            let lat = load_lattice(cli, input)?;
            let closed = if lat.is_closed() {
                lat
            } else {
                ProjectionLattice::closure(lat.ambient_dim(), lat.elements(), cap(cli))?
            };
            emit(cli, pretty(&closed))?;
            Ok(0)
        }
        Command::Alg { input } => {
            let lat = load_lattice(cli, input)?;
            emit(cli, pretty(&opalg::alg_of(&lat)?))?;
            Ok(0)
        }
        Command::Rankone { input } => {
            let lat = load_lattice(cli, input)?;
            let rank_one = opalg::rank_one_subspace(&lat)?;
            let alg = opalg::alg_of(&lat)?;
            let out = serde_json::json!({
                "rank_one": rank_one,
                "rank_one_dim": rank_one.dim(),
                "alg_dim": alg.dim(),
                "dense": rank_one.dim() == alg.dim(),
            });
            emit(cli, format!("{}\n", serde_json::to_string_pretty(&out)?))?;
            Ok(0)
        }
        Command::Tensor { left, right } => {
            let l = load_lattice(cli, left)?;
            let r = load_lattice(cli, right)?;
            let t = tensor::tensor_lattice(&l, &r, cap(cli))?;
            let out = serde_json::json!({
                "left": t.left(),
                "right": t.right(),
                "product": t.product(),
            });
            emit(cli, format!("{}\n", serde_json::to_string_pretty(&out)?))?;
            Ok(0)
        }
        Command::Theta { map } => {
            let f: tensor::AtomMap = serde_json::from_str(&read(map)?).map_err(SltError::from)?;
            enforce_field_atom_map(&f, cli.field.into())?;
            emit(cli, pretty(&tensor::theta(&f)))?;
            Ok(0)
        }
        Command::Phi {
            q,
            m,
            mode,
            lattice,
        } => {
            let q = load_subspace(cli, q)?;
            let m = load_lattice(cli, m)?;
            let atoms = m.atoms()?;
            if m.ambient_dim() == 0 || q.ambient_dim() % m.ambient_dim() != 0 {
                return Err(SltError::DimensionMismatch {
                    left: q.ambient_dim(),
                    right: m.ambient_dim(),
                }
                .into());
            }
            let k_dim = q.ambient_dim() / m.ambient_dim();
            let f = match mode {
                PhiMode::Full => tensor::phi_full(&q, &atoms, k_dim)?,
                PhiMode::Lattice => {
                    let path = lattice.as_ref().ok_or_else(|| {
                        SltError::invalid("--mode lattice requires --lattice FILE")
                    })?;
                    let coeff = load_lattice(cli, path)?;
                    tensor::phi_lattice(&q, &atoms, &coeff)?
                }
            };
            emit(cli, pretty(&f))?;
            Ok(0)
        }
        Command::Cyclic { xi, m, k_dim } => {
            let entries: Vec<Scalar> = serde_json::from_str(&read(xi)?).map_err(SltError::from)?;
            enforce_field_scalars(&entries, cli.field.into())?;
            let m = load_lattice(cli, m)?;
            let f = tensor::cyclic_decomposition(&entries, &m, *k_dim)?;
            emit(cli, pretty(&f))?;
            Ok(0)
        }
        Command::Check {
            name,
            l,
            m,
            k_dim,
            payload,
            list,
        } => {
            if *list {
                println!("checks:   {}", checks::CHECK_IDS.join(", "));
                println!("fixtures: {}", fixtures::FIXTURE_NAMES.join(", "));
                return Ok(0);
            }
            let ctx = CheckContext {
                seed: cli.seed,
                samples: cli.samples,
                max_lattice: cap(cli),
                max_product_dim: DEFAULT_MAX_PRODUCT_DIM,
                field: cli.field.into(),
            };
            let report = if let Some(path) = payload {
                let value: serde_json::Value =
                    serde_json::from_str(&read(path)?).map_err(SltError::from)?;
                checks::replay(&value, &ctx)?
            } else {
                let name = name
                    .as_ref()
                    .ok_or_else(|| SltError::invalid("check needs a NAME (or --list)"))?;
                let lf = l.as_ref().map(|a| check_lattice(cli, a)).transpose()?;
                let mf = m.as_ref().map(|a| check_lattice(cli, a)).transpose()?;
                checks::run_check(name, lf.as_ref(), mf.as_ref(), *k_dim, &ctx)?
            };
            let json = pretty(&report);
            match cli.format {
                FormatArg::Json => emit(cli, json)?,
                FormatArg::Table => {
                    if cli.output.is_some() {
                        emit(cli, json)?;
                    }
                    let status = match report.status {
                        CheckStatus::Pass => "pass",
                        CheckStatus::Fail => "FAIL",
                        CheckStatus::Skip => "skip",
                    };
                    println!(
                        "{:<22} {:<6} {:>8} samples  {:>6}ms",
                        report.check_id,
                        status,
                        report.samples,
                        report.elapsed.as_millis()
                    );
                    if let Some(reason) = &report.skip_reason {
                        println!("  skipped: {reason}");
                    }
                    if let Some(ce) = &report.counterexample {
                        println!("  counterexample: {}", serde_json::to_string(ce)?);
                    }
                }
            }
            Ok(match report.status {
                CheckStatus::Fail => 1,
                _ => 0,
            })
        }
        Command::Run {
            scenario: which,
            seed_override,
        } => {
            let mut s = match Scenario::bundled(which) {
                Some(s) => s,
                None => Scenario::from_json(&read(Path::new(which))?)?,
            };
            if let Some(seed) = seed_override {
                s.seed = *seed;
            }
            if let Some(cap) = cli.max_lattice {
                s.max_lattice = cap;
            } else if let Ok(v) = std::env::var("SLT_MAX_LATTICE") {
                if let Ok(cap) = v.parse() {
                    s.max_lattice = cap;
                }
            }
            let report = scenario::run_scenario(&s)?;
            let json = report.to_json_string();
            match cli.format {
                FormatArg::Json => emit(cli, json)?,
                FormatArg::Table => {
                    if cli.output.is_some() {
                        emit(cli, json)?;
                    }
                    print!("{}", report.to_table());
                }
            }
            Ok(report.exit_code())
        }
    }
}
