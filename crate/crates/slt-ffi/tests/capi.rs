//! Exercises the C ABI from Rust: handle lifecycle, JSON round trips,
//! status codes, error messages and panic containment.

use slt_ffi::*;
use std::ffi::{CStr, CString};
use std::ptr;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take_string(p: *mut libc::c_char) -> String {
    assert!(!p.is_null());
    let s = CStr::from_ptr(p).to_str().unwrap().to_string();
    slt_string_free(p);
    s
}

fn last_error() -> String {
    unsafe {
        CStr::from_ptr(slt_last_error())
            .to_str()
            .unwrap()
            .to_string()
    }
}

const TWO_ATOM: &str =
    r#"{"dim": 2, "generators": [{"basis": [["1","0"]]}, {"basis": [["1","1"]]}]}"#;

#[test]
fn lattice_handle_lifecycle() {
    unsafe {
        let mut lat: *mut SltLattice = ptr::null_mut();
        let st = slt_lattice_parse(cstr(TWO_ATOM).as_ptr(), 512, &mut lat);
        assert!(matches!(st, SltStatus::SltOk));

        let mut size = 0usize;
        assert!(matches!(slt_lattice_size(lat, &mut size), SltStatus::SltOk));
        assert_eq!(size, 4);

        let mut dim = 0usize;
        assert!(matches!(
            slt_lattice_ambient_dim(lat, &mut dim),
            SltStatus::SltOk
        ));
        assert_eq!(dim, 2);

        let mut flags = SltLatticeFlags::default();
        assert!(matches!(
            slt_lattice_flags(lat, &mut flags),
            SltStatus::SltOk
        ));
        assert!(flags.is_closed && flags.is_absl && !flags.is_csl);

        let mut dense = false;
        assert!(matches!(
            slt_rank_one_density(lat, &mut dense),
            SltStatus::SltOk
        ));
        assert!(dense);

        let mut json: *mut libc::c_char = ptr::null_mut();
        assert!(matches!(
            slt_lattice_to_json(lat, &mut json),
            SltStatus::SltOk
        ));
        let text = take_string(json);
        let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed["elements"].as_array().unwrap().len(), 4);

        slt_lattice_free(lat);
    }
}

#[test]
fn fixtures_alg_and_tensor() {
    unsafe {
        let mut nest: *mut SltLattice = ptr::null_mut();
        assert!(matches!(
            slt_fixture(cstr("nest2").as_ptr(), 0, &mut nest),
            SltStatus::SltOk
        ));
        let mut ta: *mut SltLattice = ptr::null_mut();
        assert!(matches!(
            slt_fixture(cstr("twoatom2").as_ptr(), 0, &mut ta),
            SltStatus::SltOk
        ));

        let mut alg_json: *mut libc::c_char = ptr::null_mut();
        assert!(matches!(
            slt_alg_to_json(nest, &mut alg_json),
            SltStatus::SltOk
        ));
        let alg: serde_json::Value = serde_json::from_str(&take_string(alg_json)).unwrap();
        assert_eq!(alg["basis"].as_array().unwrap().len(), 3);

        let mut product: *mut SltLattice = ptr::null_mut();
        assert!(matches!(
            slt_tensor_lattice(nest, ta, 512, &mut product),
            SltStatus::SltOk
        ));
        let mut size = 0usize;
        assert!(matches!(
            slt_lattice_size(product, &mut size),
            SltStatus::SltOk
        ));
        assert_eq!(size, 9);

        let mut missing: *mut SltLattice = ptr::null_mut();
        let st = slt_fixture(cstr("nosuch").as_ptr(), 0, &mut missing);
        assert!(matches!(st, SltStatus::SltInvalidInput));
        assert!(last_error().contains("nosuch"));

        slt_lattice_free(product);
        slt_lattice_free(ta);
        slt_lattice_free(nest);
    }
}

#[test]
fn theta_phi_round_trip_through_the_abi() {
    unsafe {
        let map = r#"{"atoms": [{"dim":2,"basis":[["1","0"]]},{"dim":2,"basis":[["1","1"]]}],
                      "values": [{"dim":2,"basis":[["1","0"]]},{"dim":2,"basis":[["0","1"]]}]}"#;
        let mut q_json: *mut libc::c_char = ptr::null_mut();
        assert!(matches!(
            slt_theta(cstr(map).as_ptr(), &mut q_json),
            SltStatus::SltOk
        ));
        let q = take_string(q_json);

        let mut m: *mut SltLattice = ptr::null_mut();
        assert!(matches!(
            slt_lattice_parse(cstr(TWO_ATOM).as_ptr(), 512, &mut m),
            SltStatus::SltOk
        ));
        let mut f_json: *mut libc::c_char = ptr::null_mut();
        assert!(matches!(
            slt_phi(cstr(&q).as_ptr(), m, &mut f_json),
            SltStatus::SltOk
        ));
        let f: serde_json::Value = serde_json::from_str(&take_string(f_json)).unwrap();
        assert_eq!(f["values"][0]["basis"], serde_json::json!([["1", "0"]]));
        assert_eq!(f["values"][1]["basis"], serde_json::json!([["0", "1"]]));

        let mut cyc_json: *mut libc::c_char = ptr::null_mut();
        let xi = cstr(r#"["1","0","1","1"]"#);
        assert!(matches!(
            slt_cyclic_decomposition(xi.as_ptr(), m, 2, &mut cyc_json),
            SltStatus::SltOk
        ));
        let c: serde_json::Value = serde_json::from_str(&take_string(cyc_json)).unwrap();
        assert_eq!(c["values"][0]["basis"], serde_json::json!([["1", "0"]]));

        slt_lattice_free(m);
    }
}

#[test]
fn checks_and_replay_statuses() {
    unsafe {
        let mut l: *mut SltLattice = ptr::null_mut();
        let mut m: *mut SltLattice = ptr::null_mut();
        assert!(matches!(
            slt_fixture(cstr("nest2").as_ptr(), 0, &mut l),
            SltStatus::SltOk
        ));
        assert!(matches!(
            slt_fixture(cstr("twoatom2").as_ptr(), 0, &mut m),
            SltStatus::SltOk
        ));

        let mut report: *mut libc::c_char = ptr::null_mut();
        let st = slt_run_check(cstr("atpf-dimension").as_ptr(), l, m, 2, 7, 8, &mut report);
        assert!(matches!(st, SltStatus::SltOk));
        let r: serde_json::Value = serde_json::from_str(&take_string(report)).unwrap();
        assert_eq!(r["status"], serde_json::json!("pass"));

        // a recorded counterexample replays as a failure
        let payload = r#"{
            "check": "theta-phi-inverse",
            "assertion": "theta-phi-identity",
            "data": {
                "m": {"dim": 2, "generators": [{"basis": [["1","0"]]}, {"basis": [["1","1"]]}]},
                "k_dim": 2,
                "q": {"dim": 4, "basis": [["1","0","0","1"]]}
            }
        }"#;
        let mut replay_report: *mut libc::c_char = ptr::null_mut();
        let st = slt_replay(cstr(payload).as_ptr(), &mut replay_report);
        assert!(matches!(st, SltStatus::SltCheckFailed));
        let r: serde_json::Value = serde_json::from_str(&take_string(replay_report)).unwrap();
        assert_eq!(r["status"], serde_json::json!("fail"));

        slt_lattice_free(m);
        slt_lattice_free(l);
    }
}

#[test]
fn scenario_through_the_abi() {
    unsafe {
        let scenario = r#"{
            "name": "ffi-mini",
            "seed": 5,
            "samples": 6,
            "lattices": {"m": {"fixture": "twoatom2"}},
            "checks": [{"check": "perp-identity", "m": "m", "k_dim": 2}]
        }"#;
        let mut report: *mut libc::c_char = ptr::null_mut();
        let st = slt_run_scenario(cstr(scenario).as_ptr(), &mut report);
        assert!(matches!(st, SltStatus::SltOk));
        let r: serde_json::Value = serde_json::from_str(&take_string(report)).unwrap();
        assert_eq!(r["report_version"], serde_json::json!(1));
        assert_eq!(r["summary"]["pass"], serde_json::json!(1));
    }
}

#[test]
fn error_paths_set_messages_and_statuses() {
    unsafe {
        let mut out: *mut SltLattice = ptr::null_mut();
        assert!(matches!(
            slt_lattice_parse(ptr::null(), 512, &mut out),
            SltStatus::SltInvalidInput
        ));
        assert!(last_error().contains("null"));

        assert!(matches!(
            slt_lattice_parse(cstr("{not json").as_ptr(), 512, &mut out),
            SltStatus::SltInvalidInput
        ));

        // cap overflow surfaces as its own status
        let diamond = r#"{"dim": 2, "generators": [
            {"basis": [["1","0"]]}, {"basis": [["0","1"]]}, {"basis": [["1","1"]]}
        ]}"#;
        assert!(matches!(
            slt_lattice_parse(cstr(diamond).as_ptr(), 4, &mut out),
            SltStatus::SltCapExceeded
        ));
        assert!(last_error().contains("cap"));

        let mut size = 0usize;
        assert!(matches!(
            slt_lattice_size(ptr::null(), &mut size),
            SltStatus::SltInvalidInput
        ));
    }
}
