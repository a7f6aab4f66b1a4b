//! End-to-end command tests: output shapes, golden digits, exit codes,
//! and byte-for-byte determinism of the suite.

use std::path::PathBuf;
use std::process::Command;

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("corpus")
        .join(name)
}

fn run(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_regbounds"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code().unwrap_or(-1),
    )
}

#[test]
fn delta_vol_prints_exact_rational() {
    let (stdout, _, code) = run(&["delta", "vol", "3"]);
    assert_eq!(stdout, "VOL exact=10/3\n");
    assert_eq!(code, 0);
}

#[test]
fn delta_vol_mc_is_seed_deterministic() {
    let first = run(&["delta", "vol", "2", "--mc", "50000", "--seed", "11"]);
    let second = run(&["delta", "vol", "2", "--mc", "50000", "--seed", "11"]);
    let other = run(&["delta", "vol", "2", "--mc", "50000", "--seed", "12"]);
    assert_eq!(first.0, second.0);
    assert_ne!(first.0, other.0);
    assert!(first.0.starts_with("VOL exact=3 mc="));
    assert!(first.0.contains(" stderr="));
}

#[test]
fn schinzel_equality_case_passes() {
    let path = corpus("schinzel_equality.txt");
    let (stdout, _, code) = run(&["schinzel", "check", path.to_str().unwrap()]);
    assert_eq!(stdout, "SCHINZEL det=2 bound=2 PASS\n");
    assert_eq!(code, 0);
}

#[test]
fn minima_reports_profile_product_and_bound() {
    let path = corpus("lattice_diag23.txt");
    let (stdout, _, code) = run(&["minima", path.to_str().unwrap()]);
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines[0], "LAMBDA j=1 delta=2 coords=(1,0)");
    assert_eq!(lines[1], "LAMBDA j=2 delta=3 coords=(0,1)");
    assert_eq!(lines[2], "PRODUCT 6");
    assert_eq!(lines[3], "BOUND 8 const=4/3");
    assert_eq!(lines[4], "PASS");
    assert_eq!(code, 0);
}

#[test]
fn regulator_prints_thirty_plus_digits() {
    let path = corpus("sqrt2.json");
    let (stdout, _, code) = run(&["regulator", path.to_str().unwrap()]);
    assert!(stdout.starts_with("REGULATOR Q_sqrt2 0.881373587019543025232609324979792309"));
    assert_eq!(code, 0);
    let via_vhat = run(&["regulator", path.to_str().unwrap(), "--vhat", "w2"]);
    assert_eq!(stdout, via_vhat.0);
}

#[test]
fn height_prints_unit_height() {
    let path = corpus("q_s23.json");
    let (stdout, _, code) = run(&["height", path.to_str().unwrap(), "2"]);
    assert!(stdout.starts_with("HEIGHT Q_S23 2 0.693147180559945309417232121458176568"));
    assert_eq!(code, 0);
}

#[test]
fn unknown_unit_is_an_input_error() {
    let path = corpus("q_s23.json");
    let (_, stderr, code) = run(&["height", path.to_str().unwrap(), "7"]);
    assert_eq!(code, 2);
    assert!(stderr.starts_with("error:"));
}

#[test]
fn missing_file_is_an_input_error() {
    let (_, stderr, code) = run(&["regulator", "no_such_field.json"]);
    assert_eq!(code, 2);
    assert!(stderr.starts_with("error:"));
}

#[test]
fn verify_upper_emits_witnesses_check_and_floor() {
    let field = corpus("sqrt2.json");
    let sg = corpus("subgroup_identity_1.txt");
    let (stdout, _, code) = run(&[
        "verify",
        "upper",
        field.to_str().unwrap(),
        "--subgroup",
        sg.to_str().unwrap(),
    ]);
    assert!(stdout.contains("WITNESS fund "));
    assert!(stdout.contains("CHECK upper_Q_sqrt2_subgroup_identity_1 "));
    assert!(stdout.contains("CHECK floor_upper_Q_sqrt2_subgroup_identity_1 "));
    assert!(stdout.contains("const=0.2052"));
    assert!(!stdout.contains("FAIL"));
    assert_eq!(code, 0);
}

#[test]
fn verify_basis_emits_unimodular_witness() {
    let field = corpus("q_s23.json");
    let sg = corpus("subgroup_6_23.txt");
    let (stdout, _, code) = run(&[
        "verify",
        "basis",
        field.to_str().unwrap(),
        "--subgroup",
        sg.to_str().unwrap(),
    ]);
    assert!(stdout.contains("UNIMODULAR det="));
    assert!(stdout.contains("CHECK basis_Q_S23_subgroup_6_23 "));
    assert!(stdout.contains("const=4/3"));
    assert_eq!(code, 0);
}

#[test]
fn relative_reports_all_extension_checks() {
    let path = corpus("ext_sqrt2_over_q.json");
    let (stdout, _, code) = run(&["relative", path.to_str().unwrap()]);
    assert!(stdout.starts_with("RELATIVE_REGULATOR Q_sqrt2_over_Q 0.8813735870195430252326"));
    assert!(stdout.contains("CHECK norm_identity_Q_sqrt2_over_Q_sqrt2 "));
    assert!(stdout.contains("CHECK kernel_rank_Q_sqrt2_over_Q "));
    assert!(stdout.contains("CHECK relative_upper_Q_sqrt2_over_Q "));
    assert!(stdout.contains("CHECK costa_friedman_Q_sqrt2_over_Q "));
    assert!(!stdout.contains("FAIL"));
    assert_eq!(code, 0);
}

#[test]
fn bundled_suite_passes_and_is_byte_deterministic() {
    let first = run(&["suite", "--mc-samples", "20000"]);
    let second = run(&["suite", "--mc-samples", "20000"]);
    assert_eq!(first.2, 0, "suite failed:\n{}", first.0);
    assert_eq!(first.0, second.0);
    assert!(first.0.contains("CHECK ball_volume_5 "));
    assert!(first.0.contains("CHECK regulator_Q_sqrt2 "));
    assert!(first.0.contains("CHECK costa_friedman_Q_sqrt2_sqrt5_over_Q_sqrt5 "));
    let reseeded = run(&["suite", "--mc-samples", "20000", "--seed", "5"]);
    assert_eq!(reseeded.2, 0);
    assert_ne!(first.0, reseeded.0);
}

#[test]
fn empty_corpus_warns_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("manifest.json"), r#"{ "entries": [] }"#).unwrap();
    let (stdout, _, code) = run(&["suite", dir.path().to_str().unwrap()]);
    assert_eq!(stdout, "WARN empty corpus\n");
    assert_eq!(code, 0);
}

#[test]
fn failing_golden_value_fails_the_suite_but_not_the_run() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("manifest.json"),
        r#"{ "entries": [
            { "kind": "field", "path": "q.json", "expected": { "regulator": "0.7" } },
            { "kind": "matrix", "path": "ok.txt" }
        ] }"#,
    )
    .unwrap();
    std::fs::copy(corpus("q_s2.json"), dir.path().join("q.json")).unwrap();
    std::fs::write(dir.path().join("ok.txt"), "2 2\n1 1\n-1 1\n").unwrap();
    let (stdout, _, code) = run(&["suite", dir.path().to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(stdout.contains("CHECK regulator_Q_S2 "));
    assert!(stdout.contains(" FAIL"));
    assert!(stdout.contains("CHECK schinzel_ok "));
    assert!(stdout.contains("CHECK schinzel_ok lhs=2 rhs=2 const=1 margin=0 PASS"));
}

#[test]
fn corrupt_entry_is_reported_and_suite_continues() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("manifest.json"),
        r#"{ "entries": [
            { "kind": "matrix", "path": "bad.txt" },
            { "kind": "matrix", "path": "ok.txt" }
        ] }"#,
    )
    .unwrap();
    std::fs::write(dir.path().join("bad.txt"), "2 2\n1 x\n0 1\n").unwrap();
    std::fs::write(dir.path().join("ok.txt"), "1 1\n4\n").unwrap();
    let (stdout, _, code) = run(&["suite", dir.path().to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(stdout.contains("# bad.txt:"));
    assert!(stdout.contains("CHECK matrix_bad lhs=error rhs=error const=1 margin=0 FAIL"));
    assert!(stdout.contains("CHECK schinzel_ok lhs=4 rhs=4 const=1 margin=0 PASS"));
}
