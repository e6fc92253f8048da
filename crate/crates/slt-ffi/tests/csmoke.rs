//! Compiles tests/c_smoke.c against the generated header and the static
//! library, then runs it. Verifies the ABI is consumable from real C.

use std::path::PathBuf;
use std::process::Command;

fn target_dir() -> PathBuf {
    // integration tests live in target/<profile>/deps; the staticlib is
    // one level up
    let mut exe = std::env::current_exe().expect("test exe path");
    exe.pop(); // strip test binary name
    if exe.ends_with("deps") {
        exe.pop();
    }
    exe
}

#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let include = manifest.join("include");
    let source = manifest.join("tests/c_smoke.c");
    let lib_dir = target_dir();
    assert!(
        lib_dir.join("libslt_ffi.a").exists(),
        "staticlib missing at {}",
        lib_dir.display()
    );

    let out_dir = tempfile::tempdir().unwrap();
    let exe = out_dir.path().join("c_smoke");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".to_string());
    let compile = Command::new(&cc)
        .arg(&source)
        .arg("-I")
        .arg(&include)
        .arg("-L")
        .arg(&lib_dir)
        .arg("-lslt_ffi")
        .arg("-lpthread")
        .arg("-ldl")
        .arg("-lm")
        .arg("-o")
        .arg(&exe)
        .output()
        .expect("C compiler runs");
    assert!(
        compile.status.success(),
        "compilation failed:\n{}",
        String::from_utf8_lossy(&compile.stderr)
    );

    let run = Command::new(&exe).output().expect("smoke binary runs");
    assert!(
        run.status.success(),
        "smoke test failed:\nstdout: {}\nstderr: {}",
        String::from_utf8_lossy(&run.stdout),
        String::from_utf8_lossy(&run.stderr)
    );
    assert!(String::from_utf8_lossy(&run.stdout).contains("c smoke ok"));
}
