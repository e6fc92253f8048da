//! C ABI for the subspace-lattice toolkit.
//!
//! Lattices travel as opaque handles; everything else (subspaces, atom
//! maps, scenarios, reports) travels as JSON strings in the same formats
//! the `slt` CLI uses. Every function returns an [`SltStatus`]; on any
//! non-OK status a human-readable message is available from
//! [`slt_last_error`] until the next call on the same thread.
//!
//! Strings returned through `char **` out-parameters are owned by the
//! library and must be released with [`slt_string_free`]; lattice handles
//! with [`slt_lattice_free`].

use libc::c_char;
use slt_core::checks::{self, CheckContext, CheckStatus};
use slt_core::error::Error;
use slt_core::fixtures::{self, Fixture};
use slt_core::json::lattice_from_str;
use slt_core::opalg;
use slt_core::scalar::{Field, Scalar};
use slt_core::scenario::{run_scenario, Scenario};
use slt_core::subspace::Subspace;
use slt_core::tensor;
use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Status codes mirroring the CLI exit codes, plus FFI-specific ones.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum SltStatus {
    /// Success (for checks: passed or skipped).
    SltOk = 0,
    /// A check ran to completion and failed.
    SltCheckFailed = 1,
    /// Malformed input: bad JSON, bad literal, dimension mismatch,
    /// unknown name, violated precondition.
    SltInvalidInput = 2,
    /// A closure or enumeration cap was exceeded.
    SltCapExceeded = 3,
    /// A required pointer argument was null.
    SltNullPointer = 4,
    /// An internal invariant failed (bug); details via slt_last_error.
    SltInternal = 5,
}

/// Classification flags of a lattice.
#[repr(C)]
#[derive(Clone, Copy, Default)]
pub struct SltLatticeFlags {
    pub is_closed: bool,
    pub is_csl: bool,
    pub is_distributive: bool,
    pub is_complemented: bool,
    pub is_absl: bool,
}

/// Opaque lattice handle (a lattice plus fixture metadata).
pub struct SltLattice {
    fixture: Fixture,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let sanitized = msg.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(e: &Error) -> SltStatus {
    match e {
        Error::CapExceeded { .. } | Error::ProductDimExceeded { .. } => SltStatus::SltCapExceeded,
        Error::Internal(_) => SltStatus::SltInternal,
        _ => SltStatus::SltInvalidInput,
    }
}

/// Runs `body` behind a panic guard and error-message plumbing.
fn guarded(body: impl FnOnce() -> Result<SltStatus, Error>) -> SltStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(status)) => status,
        Ok(Err(e)) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| (*s).to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_error(&format!("internal panic: {msg}"));
            SltStatus::SltInternal
        }
    }
}

/// # Safety
/// `s` must be null or a valid NUL-terminated string.
unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, Error> {
    if s.is_null() {
        return Err(Error::invalid("null string argument"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Error::invalid("string argument is not valid UTF-8"))
}

fn write_string(out: *mut *mut c_char, value: String) -> Result<SltStatus, Error> {
    if out.is_null() {
        return Err(Error::invalid("null output pointer"));
    }
    let c = CString::new(value.replace('\0', " "))
        .map_err(|_| Error::Internal("string contains interior NUL".into()))?;
    unsafe { *out = c.into_raw() };
    Ok(SltStatus::SltOk)
}

unsafe fn lattice_ref<'a>(lat: *const SltLattice) -> Result<&'a SltLattice, Error> {
    lat.as_ref()
        .ok_or_else(|| Error::invalid("null lattice handle"))
}

fn boxed(out: *mut *mut SltLattice, fixture: Fixture) -> Result<SltStatus, Error> {
    if out.is_null() {
        return Err(Error::invalid("null output pointer"));
    }
    unsafe { *out = Box::into_raw(Box::new(SltLattice { fixture })) };
    Ok(SltStatus::SltOk)
}

/// Last error message for this thread; valid until the next library call.
/// Never null.
#[no_mangle]
pub extern "C" fn slt_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must have been returned by this library and not freed before.
#[no_mangle]
pub unsafe extern "C" fn slt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Frees a lattice handle. Null is ignored.
///
/// # Safety
/// `lat` must have been returned by this library and not freed before.
#[no_mangle]
pub unsafe extern "C" fn slt_lattice_free(lat: *mut SltLattice) {
    if !lat.is_null() {
        drop(Box::from_raw(lat));
    }
}

/// Parses a lattice literal (`elements` or `generators` form, the latter
/// closed under meet/join with the given cap).
///
/// # Safety
/// `json` must be a valid NUL-terminated string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn slt_lattice_parse(
    json: *const c_char,
    cap: usize,
    out: *mut *mut SltLattice,
) -> SltStatus {
    guarded(|| {
        let text = read_str(json)?;
        let lattice = lattice_from_str(text, cap)?;
        boxed(
            out,
            Fixture {
                name: "parsed".into(),
                lattice,
                reflexive: false,
            },
        )
    })
}

/// Resolves a bundled fixture by name (triv2, nest2, twoatom2, axes3,
/// axes4, nondist2, generic4, ...). Seeded fixtures consume `seed`.
///
/// # Safety
/// `name` must be a valid NUL-terminated string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn slt_fixture(
    name: *const c_char,
    seed: u64,
    out: *mut *mut SltLattice,
) -> SltStatus {
    guarded(|| {
        let name = read_str(name)?;
        let fixture = fixtures::resolve(name, seed, Field::Rational)?;
        boxed(out, fixture)
    })
}

/// Serializes a lattice in the `elements` literal form.
///
/// # Safety
/// `lat` must be a live handle; `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn slt_lattice_to_json(
    lat: *const SltLattice,
    out_json: *mut *mut c_char,
) -> SltStatus {
    guarded(|| {
        let lat = lattice_ref(lat)?;
        write_string(out_json, serde_json::to_string(&lat.fixture.lattice)?)
    })
}

/// # Safety
/// `lat` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn slt_lattice_size(lat: *const SltLattice, out: *mut usize) -> SltStatus {
    guarded(|| {
        let lat = lattice_ref(lat)?;
        if out.is_null() {
            return Err(Error::invalid("null output pointer"));
        }
        *out = lat.fixture.lattice.len();
        Ok(SltStatus::SltOk)
    })
}

/// # Safety
/// `lat` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn slt_lattice_ambient_dim(
    lat: *const SltLattice,
    out: *mut usize,
) -> SltStatus {
    guarded(|| {
        let lat = lattice_ref(lat)?;
        if out.is_null() {
            return Err(Error::invalid("null output pointer"));
        }
        *out = lat.fixture.lattice.ambient_dim();
        Ok(SltStatus::SltOk)
    })
}

/// # Safety
/// `lat` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn slt_lattice_flags(
    lat: *const SltLattice,
    out: *mut SltLatticeFlags,
) -> SltStatus {
    guarded(|| {
        let lat = lattice_ref(lat)?;
        if out.is_null() {
            return Err(Error::invalid("null output pointer"));
        }
        let f = lat.fixture.lattice.flags();
        *out = SltLatticeFlags {
            is_closed: f.is_closed,
            is_csl: f.is_csl,
            is_distributive: f.is_distributive,
            is_complemented: f.is_complemented,
            is_absl: f.is_absl,
        };
        Ok(SltStatus::SltOk)
    })
}

/// Computes Alg L as an operator-space JSON `{"dim", "basis"}`.
///
/// # Safety
/// `lat` must be a live handle; `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn slt_alg_to_json(
    lat: *const SltLattice,
    out_json: *mut *mut c_char,
) -> SltStatus {
    guarded(|| {
        let lat = lattice_ref(lat)?;
        let alg = opalg::alg_of(&lat.fixture.lattice)?;
        write_string(out_json, serde_json::to_string(&alg)?)
    })
}

/// Rank one density verdict for the lattice.
///
/// # Safety
/// `lat` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn slt_rank_one_density(lat: *const SltLattice, out: *mut bool) -> SltStatus {
    guarded(|| {
        let lat = lattice_ref(lat)?;
        if out.is_null() {
            return Err(Error::invalid("null output pointer"));
        }
        *out = opalg::has_rank_one_density(&lat.fixture.lattice)?;
        Ok(SltStatus::SltOk)
    })
}

/// Closes the tensor product of two lattices into a new handle.
///
/// # Safety
/// `l` and `m` must be live handles; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn slt_tensor_lattice(
    l: *const SltLattice,
    m: *const SltLattice,
    cap: usize,
    out: *mut *mut SltLattice,
) -> SltStatus {
    guarded(|| {
        let l = lattice_ref(l)?;
        let m = lattice_ref(m)?;
        let t = tensor::tensor_lattice(&l.fixture.lattice, &m.fixture.lattice, cap)?;
        let name = format!("{}⊗{}", l.fixture.name, m.fixture.name);
        boxed(
            out,
            Fixture {
                name,
                lattice: t.product().clone(),
                reflexive: false,
            },
        )
    })
}

/// theta of an atom-map JSON `{"atoms": [...], "values": [...]}`; the
/// result is a subspace JSON on the product space.
///
/// # Safety
/// `atom_map_json` must be a valid NUL-terminated string; `out_json` a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn slt_theta(
    atom_map_json: *const c_char,
    out_json: *mut *mut c_char,
) -> SltStatus {
    guarded(|| {
        let f: tensor::AtomMap = serde_json::from_str(read_str(atom_map_json)?)?;
        write_string(out_json, serde_json::to_string(&tensor::theta(&f))?)
    })
}

/// Full-mode phi of a subspace JSON over the atoms of `m`; K's dimension
/// is inferred from the ambient dimensions.
///
/// # Safety
/// `subspace_json` must be a valid NUL-terminated string; `m` a live
/// handle; `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn slt_phi(
    subspace_json: *const c_char,
    m: *const SltLattice,
    out_json: *mut *mut c_char,
) -> SltStatus {
    guarded(|| {
        let q: Subspace = serde_json::from_str(read_str(subspace_json)?)?;
        let m = &lattice_ref(m)?.fixture.lattice;
        let h = m.ambient_dim();
        if h == 0 || !q.ambient_dim().is_multiple_of(h) {
            return Err(Error::DimensionMismatch {
                left: q.ambient_dim(),
                right: h,
            });
        }
        let f = tensor::phi_full(&q, &m.atoms()?, q.ambient_dim() / h)?;
        write_string(out_json, serde_json::to_string(&f)?)
    })
}

/// Cyclic-subspace decomposition of a vector (JSON array of rational
/// literals) on K⊗H under 1 ⊗ Alg M.
///
/// # Safety
/// `xi_json` must be a valid NUL-terminated string; `m` a live handle;
/// `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn slt_cyclic_decomposition(
    xi_json: *const c_char,
    m: *const SltLattice,
    k_dim: usize,
    out_json: *mut *mut c_char,
) -> SltStatus {
    guarded(|| {
        let xi: Vec<Scalar> = serde_json::from_str(read_str(xi_json)?)?;
        let f = tensor::cyclic_decomposition(&xi, &lattice_ref(m)?.fixture.lattice, k_dim)?;
        write_string(out_json, serde_json::to_string(&f)?)
    })
}

/// Runs one named check (`theta-phi-inverse`, `isomorphism`,
/// `perp-identity`, `latalg-tensor`, `ltpf`, `atpf-dimension`,
/// `absl-tensor`, `reflexivity-transfer`, `phi-join-probe`). Lattice
/// arguments may be null where the check does not use them. The full
/// report JSON is written to `out_report_json`; the status is
/// `SltCheckFailed` exactly when the check failed.
///
/// # Safety
/// `check_id` must be a valid NUL-terminated string; `l`/`m` null or live
/// handles; `out_report_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn slt_run_check(
    check_id: *const c_char,
    l: *const SltLattice,
    m: *const SltLattice,
    k_dim: usize,
    seed: u64,
    samples: usize,
    out_report_json: *mut *mut c_char,
) -> SltStatus {
    guarded(|| {
        let id = read_str(check_id)?;
        let ctx = CheckContext {
            seed,
            samples,
            ..CheckContext::default()
        };
        let report = checks::run_check(
            id,
            l.as_ref().map(|h| &h.fixture),
            m.as_ref().map(|h| &h.fixture),
            k_dim,
            &ctx,
        )?;
        let failed = report.status == CheckStatus::Fail;
        write_string(out_report_json, serde_json::to_string(&report)?)?;
        Ok(if failed {
            SltStatus::SltCheckFailed
        } else {
            SltStatus::SltOk
        })
    })
}

/// Replays a counterexample payload recorded in a FAIL report. The
/// status is `SltCheckFailed` when the violation reproduces.
///
/// # Safety
/// `payload_json` must be a valid NUL-terminated string;
/// `out_report_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn slt_replay(
    payload_json: *const c_char,
    out_report_json: *mut *mut c_char,
) -> SltStatus {
    guarded(|| {
        let payload: serde_json::Value = serde_json::from_str(read_str(payload_json)?)?;
        let report = checks::replay(&payload, &CheckContext::default())?;
        let failed = report.status == CheckStatus::Fail;
        write_string(out_report_json, serde_json::to_string(&report)?)?;
        Ok(if failed {
            SltStatus::SltCheckFailed
        } else {
            SltStatus::SltOk
        })
    })
}

/// Runs a scenario: either a bundled name (`paper-core`) or a full
/// scenario JSON document. The report JSON is always written on success
/// of the run itself; the status is `SltCheckFailed` when any check
/// failed.
///
/// # Safety
/// `scenario_json_or_name` must be a valid NUL-terminated string;
/// `out_report_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn slt_run_scenario(
    scenario_json_or_name: *const c_char,
    out_report_json: *mut *mut c_char,
) -> SltStatus {
    guarded(|| {
        let text = read_str(scenario_json_or_name)?;
        let scenario = match Scenario::bundled(text.trim()) {
            Some(s) => s,
            None => Scenario::from_json(text)?,
        };
        let report = run_scenario(&scenario)?;
        let code = report.exit_code();
        write_string(out_report_json, report.to_json_string())?;
        Ok(if code == 1 {
            SltStatus::SltCheckFailed
        } else {
            SltStatus::SltOk
        })
    })
}
