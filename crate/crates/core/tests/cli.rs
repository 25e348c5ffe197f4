use std::path::PathBuf;
use std::process::{Command, Output};

fn configs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn ruelle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ruelle"))
        .args(args)
        .current_dir(configs())
        .output()
        .expect("run ruelle")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn every_subcommand_succeeds_on_its_configs() {
    let runs: &[(&str, &str)] = &[
        ("zeta", "fibonacci.toml"),
        ("zeta", "circle2.toml"),
        ("zeta", "cat.toml"),
        ("zeta", "golden_file.toml"),
        ("count", "circle3.toml"),
        ("count", "torus2.toml"),
        ("entropy", "fibonacci.toml"),
        ("entropy", "circle2.toml"),
        ("entropy", "circle3.toml"),
        ("entropy", "torus2.toml"),
        ("cover", "circle2.toml"),
        ("cover", "fibonacci.toml"),
        ("shadow", "circle2.toml"),
        ("shadow", "torus2.toml"),
    ];
    for (cmd, cfg) in runs {
        let o = ruelle(&[cmd, "--map", cfg]);
        assert_eq!(code(&o), 0, "{cmd} {cfg}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!o.stdout.is_empty());
    }
}

#[test]
fn errors_exit_two_with_a_message() {
    for args in [
        &["zeta", "--map", "missing.toml"][..],
        &["entropy", "--map", "cat.toml"],
        &["cover", "--map", "torus2.toml"],
        &["shadow", "--map", "fibonacci.toml"],
        &["zeta", "--map", "circle2.toml", "--mesh", "zero"],
    ] {
        let o = ruelle(args);
        assert_eq!(code(&o), 2, "{args:?}");
        assert!(String::from_utf8_lossy(&o.stderr).starts_with("ruelle "), "{args:?}");
    }
}

#[test]
fn failed_checks_exit_one() {
    let o = ruelle(&["cover", "--map", "circle2.toml", "--mesh", "1/4"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL"));
}

#[test]
fn json_is_byte_identical_across_runs() {
    for (cmd, cfg) in [("zeta", "circle2.toml"), ("count", "cat.toml"), ("entropy", "fibonacci.toml")] {
        let a = ruelle(&[cmd, "--map", cfg, "--json"]);
        let b = ruelle(&[cmd, "--map", cfg, "--json"]);
        assert_eq!(code(&a), 0);
        assert_eq!(a.stdout, b.stdout, "{cmd} {cfg}");
        let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
        assert_eq!(v["command"], cmd);
        for c in v["claims"].as_array().unwrap() {
            let m = c["method"].as_str().unwrap();
            assert!(["trace", "bruteforce", "cover", "toral", "estimate", "perron", "shadow"].contains(&m));
        }
    }
}

#[test]
fn csv_tables_have_headers() {
    let o = ruelle(&["zeta", "--map", "fibonacci.toml", "--csv", "--order", "6"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8(o.stdout).unwrap().starts_with("name,method,value\n"));
    let o = ruelle(&["count", "--map", "fibonacci.toml", "--csv", "--order", "6"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("n,trace:N_n,bruteforce:N_n,cover:N_n\n"), "{text}");
    assert_eq!(text.lines().count(), 7);
}

#[test]
fn flags_override_the_config() {
    let o = ruelle(&["zeta", "--map", "circle2.toml", "--order", "4", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let counts = v["tables"][0]["rows"].as_array().unwrap();
    assert_eq!(counts.len(), 4);
}
