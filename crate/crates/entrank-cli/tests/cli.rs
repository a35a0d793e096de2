//! End-to-end tests of the `entrank` binary: JSON I/O, exit codes, and the
//! shapes of the emitted reports.

use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_entrank"))
}

fn write_temp(content: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(content.as_bytes()).unwrap();
    f
}

fn ghz_json(n: usize, d: usize) -> String {
    let amp = 1.0;
    let entries: Vec<String> = (0..d)
        .map(|i| {
            let idx: Vec<String> = (0..n).map(|_| i.to_string()).collect();
            format!(r#"{{"idx":[{}],"re":{amp},"im":0.0}}"#, idx.join(","))
        })
        .collect();
    let dims: Vec<String> = (0..n).map(|_| d.to_string()).collect();
    format!(
        r#"{{"dims":[{}],"amps":[{}]}}"#,
        dims.join(","),
        entries.join(",")
    )
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

#[test]
fn analyze_reports_ranks_and_minima() {
    let f = write_temp(&ghz_json(3, 3));
    let out = bin()
        .args(["analyze", f.path().to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["r1_min"], 3);
    assert_eq!(doc["r1_max"], 3);
    assert_eq!(doc["r2_min"], 3);
    assert_eq!(doc["ranks"]["1|23"], 3);
    assert_eq!(doc["ranks"]["12|3"], 3);
    assert_eq!(doc["tol"], 1e-10);
}

#[test]
fn analyze_reads_standard_input() {
    let mut child = bin()
        .args(["analyze", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(ghz_json(2, 2).as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["r1_min"], 2);
    assert_eq!(doc["r2_degenerate"], true);
}

#[test]
fn malformed_json_exits_2_with_position() {
    let f = write_temp(r#"{"dims":[2,2],"amps":[}"#);
    let out = bin()
        .args(["analyze", f.path().to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("parse error at line"), "stderr: {err}");
}

#[test]
fn invalid_state_exits_2() {
    let f = write_temp(r#"{"dims":[2,2],"amps":[{"idx":[0,5],"re":1.0,"im":0.0}]}"#);
    let out = bin()
        .args(["analyze", f.path().to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn certify_ghz4_budgets() {
    let f = write_temp(&ghz_json(3, 4));
    let out = bin()
        .args(["certify", f.path().to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["classification"], "GME");
    assert_eq!(doc["gme_budget"], 2);
    assert_eq!(doc["insep_budget"], 2);
    assert_eq!(doc["triple_budget"], 2);
    assert_eq!(doc["marginal"], false);
}

#[test]
fn construct_emits_verified_plan() {
    // 3-level bipartite state with distinct Schmidt coefficients
    let f = write_temp(
        r#"{"dims":[3,3],"amps":[
            {"idx":[0,0],"re":3.0,"im":0.0},
            {"idx":[1,1],"re":6.0,"im":0.0},
            {"idx":[2,2],"re":10.198039027185569,"im":0.0}
        ]}"#,
    );
    for (method, n_terms) in [("lemma2", 3u64), ("thm4", 2)] {
        let out = bin()
            .args(["construct", f.path().to_str().unwrap(), "--method", method])
            .output()
            .unwrap();
        assert!(out.status.success(), "method {method}");
        let doc = stdout_json(&out);
        assert_eq!(doc["verified"], "Separable", "method {method}");
        assert_eq!(doc["terms"].as_array().unwrap().len() as u64, n_terms);
        assert!(doc["lead"]["re"].as_f64().unwrap() > 0.0);
    }
}

#[test]
fn construct_thm5_full_product() {
    let f = write_temp(
        r#"{"dims":[3,3,3],"amps":[
            {"idx":[0,0,0],"re":3.0,"im":0.0},
            {"idx":[1,1,1],"re":6.0,"im":0.0},
            {"idx":[2,2,2],"re":10.198039027185569,"im":0.0}
        ]}"#,
    );
    let out = bin()
        .args(["construct", f.path().to_str().unwrap(), "--method", "thm5"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["verified"], "FullySeparableProduct");
    assert_eq!(doc["terms"].as_array().unwrap().len(), 5);
}

#[test]
fn construct_rejects_flat_spectrum_with_message() {
    let f = write_temp(&ghz_json(2, 2));
    let out = bin()
        .args(["construct", f.path().to_str().unwrap(), "--method", "thm4"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("Schmidt coefficients"), "stderr: {err}");
}

#[test]
fn search_exit_codes_follow_outcome() {
    // Rank-2 GME state: breakable with one term -> exit 0.
    let psi2 = r#"{"dims":[2,2,2],"amps":[
        {"idx":[0,0,0],"re":1.0,"im":0.0},
        {"idx":[1,0,0],"re":1.0,"im":0.0},
        {"idx":[1,1,1],"re":1.0,"im":0.0}
    ]}"#;
    let f = write_temp(psi2);
    let out = bin()
        .args([
            "search",
            f.path().to_str().unwrap(),
            "--objective",
            "break-gme",
            "-k",
            "1",
            "--seed",
            "7",
            "--restarts",
            "8",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = stdout_json(&out);
    assert_eq!(doc["succeeded"], true);
    assert!(doc["best_plan"].is_object());

    // GHZ level 3 resists one product term -> exit 1, no plan.
    let f = write_temp(&ghz_json(3, 3));
    let out = bin()
        .args([
            "search",
            f.path().to_str().unwrap(),
            "--objective",
            "break-gme",
            "-k",
            "1",
            "--seed",
            "7",
            "--restarts",
            "4",
            "--max-iters",
            "400",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let doc = stdout_json(&out);
    assert_eq!(doc["succeeded"], false);
    assert!(doc["best_plan"].is_null());
}

#[test]
fn verify_paper_passes_and_reports() {
    let out = bin().arg("verify-paper").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("PASS"));
    assert!(!text.contains("FAIL"));
    assert!(text.contains("0 failed"));

    let out = bin().args(["verify-paper", "--json"]).output().unwrap();
    assert!(out.status.success());
    let doc = stdout_json(&out);
    let rows = doc.as_array().unwrap();
    assert!(rows.len() >= 20);
    assert!(rows.iter().all(|r| r["passed"] == true));
    for fixture in ["intro", "example1", "example2", "example3", "example4", "example5"] {
        assert!(
            rows.iter().any(|r| r["fixture"] == fixture),
            "missing fixture {fixture}"
        );
    }
}
