use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_conemeans"));
    c.env_remove("CONEMEANS_SUPPORT_CAP");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("conemeans-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn same_config_gives_identical_bytes() {
    for args in [
        &["vp", "check", "--backend", "lex", "--space", "X6", "--samples", "300", "--seed", "7"][..],
        &["property", "check", "--kind", "invariance", "--backend", "density", "--samples", "40", "--seed", "3"][..],
        &["walk", "rho", "--group", "cyclic:6", "--N", "8", "--format", "csv"][..],
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let a = run(&["vp", "check", "--samples", "50", "--seed", "1"]);
    let b = run(&["vp", "check", "--samples", "50", "--seed", "2"]);
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn refutation_replays_in_a_separate_process() {
    let path = scratch("negate.json");
    let out = run(&["negate", "--group", "cyclic:6", "--g", "1", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("\"statement\": \"6 = 0\""));
    let replay = run(&["certificate", "replay", "--input", path.to_str().unwrap()]);
    assert_eq!(replay.status.code(), Some(0), "{}", String::from_utf8_lossy(&replay.stdout));

    // A corrupted step is rejected with exit code 2.
    let corrupted = text.replacen("\"value\": \"6\"", "\"value\": \"5\"", 1);
    assert_ne!(corrupted, text);
    let bad = scratch("negate-bad.json");
    std::fs::write(&bad, corrupted).unwrap();
    assert_eq!(run(&["certificate", "replay", "--input", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn obstruction_replays_in_a_separate_process() {
    let path = scratch("obstruct.json");
    let out =
        run(&["walk", "obstruct", "--group", "free:2", "--z", "9/8", "--N", "6", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let replay = run(&["certificate", "replay", "--input", path.to_str().unwrap()]);
    assert_eq!(replay.status.code(), Some(0), "{}", String::from_utf8_lossy(&replay.stdout));

    let text = std::fs::read_to_string(&path).unwrap();
    let tampered = text.replace("\"identity_holds\": true", "\"identity_holds\": false");
    let bad = scratch("obstruct-bad.json");
    std::fs::write(&bad, tampered).unwrap();
    assert_eq!(run(&["certificate", "replay", "--input", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn exit_codes_separate_math_from_input() {
    // Math failures.
    assert_eq!(run(&["harmonic", "check", "--group", "cyclic:5", "--t", "1/2"]).status.code(), Some(2));
    let inv = run(&[
        "property",
        "check",
        "--kind",
        "invariance",
        "--backend",
        "rightmost",
        "--window",
        "6",
        "--shifts",
        "2",
        "--samples",
        "20",
    ]);
    assert_eq!(inv.status.code(), Some(2));
    assert_eq!(
        run(&["walk", "obstruct", "--group", "z", "--z", "9/8", "--N", "4", "--rho", "1/2"]).status.code(),
        Some(2)
    );
    // Input errors.
    assert_eq!(run(&["walk", "power", "--group", "banana:3"]).status.code(), Some(1));
    assert_eq!(run(&["vp", "eval", "--space", "X3", "--u", "1,2", "--v", "1,1,1"]).status.code(), Some(1));
    assert_eq!(run(&["negate", "--group", "cyclic:6", "--g", "1", "--format", "csv"]).status.code(), Some(1));
}

#[test]
fn support_cap_from_environment() {
    let out = bin()
        .env("CONEMEANS_SUPPORT_CAP", "10")
        .args(["walk", "power", "--group", "free:2", "--N", "4"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("support cap"));
    // The flag wins over the environment.
    let out = bin()
        .env("CONEMEANS_SUPPORT_CAP", "10")
        .args(["walk", "power", "--group", "free:2", "--N", "4", "--support-cap", "1000"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn eval_and_chain_commands() {
    let out = run(&["vp", "eval", "--space", "X4", "--blocks", "0|1,2,3", "--u", "0,1,0,0", "--v", "1,0,0,0"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("\"r\": \"0\""));
    let out = run(&["vp", "eval", "--space", "X4", "--blocks", "0|1,2,3", "--u", "1,0,0,0", "--v", "0,1,0,0"]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("\"r\": \"inf\""));

    let valid = run(&["chain", "validate", "--backend", "density"]);
    assert_eq!(valid.status.code(), Some(0));
    // Two disjoint point masses are not Rényi comparable in one direction only.
    let chain = r#"{"space": {"kind": "finite_coord", "size": 2}, "elements": [
        {"label": "a", "domain": {"ideal": [{"space": {"kind": "finite_coord", "size": 2}, "entries": {"0": "1"}}]}, "functional": {"kind": "weighted", "weights": {"0": "1"}}},
        {"label": "b", "domain": {"ideal": [{"space": {"kind": "finite_coord", "size": 2}, "entries": {"1": "1"}}]}, "functional": {"kind": "weighted", "weights": {"1": "1"}}}
    ]}"#;
    let path = scratch("chain.json");
    std::fs::write(&path, chain).unwrap();
    let out = run(&["chain", "validate", "--backend", "chain", "--chain", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
}
