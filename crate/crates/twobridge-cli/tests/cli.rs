//! End-to-end tests that run the compiled binary and inspect its exit
//! status, text output, and structured output.

use std::fs;
use std::path::PathBuf;
use std::process::Command;

use twobridge::cyclotomic::CycLaurent;
use twobridge::laurent::IntLaurent;
use twobridge::product::twisted_alexander_product;
use twobridge::two_bridge::TwoBridgeFraction;

fn run(args: &[&str]) -> (Option<i32>, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_twobridge"))
        .args(args)
        .output()
        .expect("binary launches");
    (
        out.status.code(),
        String::from_utf8(out.stdout).expect("stdout is utf-8"),
        String::from_utf8(out.stderr).expect("stderr is utf-8"),
    )
}

/// A scratch file that is cleaned up when the test ends.
fn scratch_file(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("twobridge-cli-{name}-{}", std::process::id()));
    fs::write(&path, contents).expect("scratch file writes");
    path
}

#[test]
fn alexander_prints_known_polynomial() {
    let (code, stdout, _) = run(&["alexander", "--p", "11", "--q", "19"]);
    assert_eq!(code, Some(0));
    assert!(stdout.contains("-1*t^-1 + 5 - 7*t^1 + 5*t^2 - 1*t^3"));
}

#[test]
fn precondition_violations_name_the_constraint() {
    let (code, _, stderr) = run(&["twisted", "--p", "5", "--q", "10", "--ell", "5"]);
    assert_eq!(code, Some(2));
    assert!(stderr.contains("q must be odd, got 10"));

    let (code, _, stderr) = run(&["twisted", "--p", "5", "--q", "9", "--ell", "5"]);
    assert_eq!(code, Some(2));
    assert!(stderr.contains("ell = 5 does not divide q = 9"));

    let (code, _, stderr) = run(&[
        "twisted", "--p", "5", "--q", "9", "--ell", "3", "--m", "3", "--method", "oracle",
    ]);
    assert_eq!(code, Some(2));
    assert!(stderr.contains("m = 3 out of range"));

    let (code, _, stderr) = run(&["alexander", "--p", "3", "--q", "9"]);
    assert_eq!(code, Some(2));
    assert!(stderr.contains("coprime"));
}

#[test]
fn twisted_both_pipelines_match() {
    let (code, stdout, _) = run(&[
        "twisted", "--p", "5", "--q", "13", "--ell", "13", "--method", "both",
    ]);
    assert_eq!(code, Some(0));
    assert!(stdout.contains("product formula"));
    assert!(stdout.contains("determinant oracle"));
    assert!(stdout.contains("cross-check: MATCH"));
}

#[test]
fn twisted_json_round_trips_to_identical_values() {
    let (code, stdout, _) = run(&["twisted", "--p", "5", "--q", "9", "--ell", "3", "--json"]);
    assert_eq!(code, Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout).expect("output is valid json");
    assert_eq!(doc["format-version"], 1);
    assert_eq!(doc["subcommand"], "twisted");

    let reference = twisted_alexander_product(TwoBridgeFraction::new(5, 9).unwrap(), 3).unwrap();
    let twisted: IntLaurent =
        serde_json::from_value(doc["result"]["twisted"].clone()).expect("term list parses");
    assert_eq!(twisted, reference.twisted);
    let delta: IntLaurent =
        serde_json::from_value(doc["result"]["delta"].clone()).expect("term list parses");
    assert_eq!(delta, reference.delta);
    let d_factors: Vec<CycLaurent> =
        serde_json::from_value(doc["result"]["d_factors"].clone()).expect("factors parse");
    assert_eq!(d_factors, reference.d_factors);
}

#[test]
fn epsilon_graph_prints_structure() {
    let (code, stdout, _) = run(&["epsilon-graph", "--p", "5", "--q", "9"]);
    assert_eq!(code, Some(0));
    assert!(stdout.contains("epsilons: +--++--+"));
    assert!(stdout.contains("sigma:    1 2 2 2 1"));
    assert!(stdout.contains("clusters: 1x1 2x3 1x1"));
    assert!(stdout.contains("chain:    q = 1*p + 4; p = 1*4 + 1; 4 = 4*1 + 0"));
    assert!(!stdout.contains("FAIL"));
}

#[test]
fn family_member_verifies_strong_form() {
    let (code, stdout, _) = run(&[
        "family", "--root", "5/9", "--ell", "3", "--k", "1", "--j", "1", "--verify",
    ]);
    assert_eq!(code, Some(0));
    assert!(stdout.contains("29/207"));
    assert!(stdout.contains("strong form:          holds"));
    assert!(stdout.contains("verdict: PASS"));
}

#[test]
fn family_j_restriction_is_enforced() {
    let (code, _, stderr) = run(&[
        "family", "--root", "5/33", "--ell", "3", "--j", "1", "--verify",
    ]);
    assert_eq!(code, Some(2));
    assert!(stderr.contains("only with j = 0"));
}

#[test]
fn appendix_quick_sweep_passes() {
    let (code, stdout, _) = run(&["appendix", "--verify", "--kmax", "1", "--jmax", "1"]);
    assert_eq!(code, Some(0));
    assert!(stdout.contains("checked 88 family points: 88 pass, 0 fail"));
}

#[test]
fn appendix_data_override_is_used() {
    let first_row = twobridge::families::BUNDLED_APPENDIX_TEXT
        .lines()
        .find(|line| !line.trim().is_empty() && !line.trim().starts_with('#'))
        .expect("bundled catalogue has rows");
    let path = scratch_file("catalogue", &format!("{first_row}\n"));
    let (code, stdout, _) = run(&["appendix", "--data", path.to_str().unwrap()]);
    fs::remove_file(&path).ok();
    assert_eq!(code, Some(0));
    assert!(stdout.contains("1 catalogue rows"));
}

#[test]
fn verify_conjecture_accepts_file_and_family_sources() {
    let path = scratch_file("f", r#"[[-1,"1"],[0,"1"]]"#);
    let (code, stdout, _) = run(&[
        "verify-conjecture", "--p", "5", "--q", "9", "--ell", "3", "--f",
        path.to_str().unwrap(),
    ]);
    fs::remove_file(&path).ok();
    assert_eq!(code, Some(0));
    assert!(stdout.contains("strong form:          holds"));

    let (code, stdout, _) = run(&[
        "verify-conjecture", "--p", "29", "--q", "33", "--ell", "3", "--family", "5/9",
        "--j", "1",
    ]);
    assert_eq!(code, Some(0));
    assert!(stdout.contains("verdict: PASS"));
}

#[test]
fn verify_conjecture_rejects_inconsistent_family_point() {
    let (code, _, stderr) = run(&[
        "verify-conjecture", "--p", "5", "--q", "13", "--ell", "3", "--family", "5/9",
        "--j", "1",
    ]);
    assert_eq!(code, Some(2));
    assert!(stderr.contains("is the knot 29/33, not 5/13"));
}

#[test]
fn verify_conjecture_requires_exactly_one_f_source() {
    let (code, _, stderr) = run(&["verify-conjecture", "--p", "5", "--q", "9", "--ell", "3"]);
    assert_eq!(code, Some(2));
    assert!(stderr.contains("--f") && stderr.contains("--family"));

    let path = scratch_file("f-conflict", r#"[[0,"1"]]"#);
    let (code, _, _) = run(&[
        "verify-conjecture", "--p", "5", "--q", "9", "--ell", "3", "--f",
        path.to_str().unwrap(), "--family", "5/9",
    ]);
    fs::remove_file(&path).ok();
    assert_eq!(code, Some(2));
}

#[test]
fn selftest_small_sweep_passes() {
    let (code, stdout, _) = run(&["selftest", "--qmax", "9"]);
    assert_eq!(code, Some(0));
    assert!(stdout.contains("denominator identity"));
    assert!(stdout.contains("all checks passed"));
}

#[test]
fn selftest_json_reports_rows() {
    let (code, stdout, _) = run(&["selftest", "--qmax", "5", "--json"]);
    assert_eq!(code, Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout).expect("valid json");
    assert_eq!(doc["format-version"], 1);
    assert_eq!(doc["pass"], true);
    assert!(doc["oracle-equivalence"].as_array().unwrap().len() >= 2);
}
