//! Compiles `tests/smoke.c` against the generated header and the static library.

use std::path::{Path, PathBuf};
use std::process::Command;

fn static_lib() -> Option<PathBuf> {
    // Integration tests run from target/<profile>/deps.
    let exe = std::env::current_exe().ok()?;
    let dir = exe.parent()?.parent()?;
    let lib = dir.join("libruelle_ffi.a");
    lib.exists().then_some(lib)
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/ruelle.h")).unwrap();
    for name in [
        "typedef struct RuelleMatrix RuelleMatrix;",
        "typedef struct RuelleZeta RuelleZeta;",
        "RUELLE_STATUS_OK = 0",
        "ruelle_last_error(void)",
        "ruelle_zeta_from_sft(",
        "ruelle_zeta_counts(",
        "ruelle_toral_count(",
    ] {
        assert!(header.contains(name), "{name}");
    }
}

#[test]
fn c_program_links_and_runs() {
    let Some(lib) = static_lib() else {
        eprintln!("static library not built; skipping");
        return;
    };
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("no C compiler; skipping");
        return;
    }
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::temp_dir().join(format!("ruelle-smoke-{}", std::process::id()));
    let status = Command::new("cc")
        .arg(root.join("tests/smoke.c"))
        .arg("-I")
        .arg(root.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    let _ = std::fs::remove_file(&exe);
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "1/(1 - z - z^2)");
}
