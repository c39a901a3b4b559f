use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn descriptor(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../descriptors").join(name)
}

fn cremona(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cremona")).args(args).output().expect("run binary")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout));
    })
}

fn linearize(name: &str, extra: &[&str]) -> Output {
    let path = descriptor(name);
    let mut args = vec!["linearize", "-i", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    cremona(&args)
}

#[test]
fn linearize_statuses_and_exit_codes() {
    let expected = [
        ("quadric.json", "LowDegree", "certified", 0),
        ("quartic_monoid.json", "Monoid", "certified", 0),
        ("tangent_developable.json", "TwistedCubic", "certified", 0),
        ("dupin.json", "CyclideExtraNode", "certified", 0),
        ("double_line.json", "DoubleLine", "certified_by_corollary", 0),
        ("double_conic.json", "DoubleConic", "certified_by_corollary", 0),
        ("elliptic_type1.json", "EllipticType1", "certified_by_corollary", 0),
        ("cone.json", "Cone", "out_of_scope", 2),
    ];
    for (file, case, status, code) in expected {
        let out = linearize(file, &[]);
        let doc = json(&out);
        assert_eq!(doc["case"], case, "{file}");
        assert_eq!(doc["status"], status, "{file}");
        assert_eq!(out.status.code(), Some(code), "{file}");
    }
}

#[test]
fn exact_report_has_plane_and_provenance() {
    let doc = json(&linearize("dupin.json", &[]));
    assert_eq!(doc["field_mode"], "exact-Q");
    assert_eq!(doc["final"]["plane_form"], "y0 - 2*y3");
    assert_eq!(doc["steps"][0]["forms"].as_array().unwrap().len(), 4);
    assert_eq!(doc["provenance"]["prime"], 10007);
}

#[test]
fn same_seed_gives_identical_output() {
    let a = linearize("elliptic_type1.json", &["--seed", "17"]);
    let b = linearize("elliptic_type1.json", &["--seed", "17"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["provenance"]["seed"], 17);
}

#[test]
fn classify_reports_case() {
    let path = descriptor("tangent_developable.json");
    let out = cremona(&["classify", "-i", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["case"], "TwistedCubic");

    let path = descriptor("cone.json");
    let out = cremona(&["classify", "-i", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["status"], "out_of_scope");
}

#[test]
fn threshold_values() {
    for (model, class, rho) in [
        ("p3", "1", "1/4"),
        ("blowup-p3-pt", "1,-1", "0"),
        ("p1xp2", "3,2", "2/3"),
        ("wps1112", "4", "4/5"),
    ] {
        let out = cremona(&["threshold", "--model", model, "--class", class]);
        assert_eq!(out.status.code(), Some(0), "{model}");
        assert_eq!(json(&out)["rho"], rho, "{model}");
    }
    let out = cremona(&["threshold", "--model", "p7", "--class", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_saved_report() {
    let dir = std::env::temp_dir().join(format!("cremona-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let report = dir.join("report.json");
    let input = descriptor("tangent_developable.json");
    let out = cremona(&["linearize", "-i", input.to_str().unwrap(), "-o", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());

    let out = cremona(&["verify", "-i", input.to_str().unwrap(), "--report", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(json(&out)["verified"], true);

    // a report for another surface must not verify
    let other = descriptor("quadric.json");
    let out = cremona(&["verify", "-i", other.to_str().unwrap(), "--report", report.to_str().unwrap()]);
    assert_ne!(out.status.code(), Some(0));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(cremona(&["linearize"]).status.code(), Some(1));
    assert_eq!(cremona(&["linearize", "-i", "/nonexistent.json"]).status.code(), Some(1));
    let path = descriptor("dupin.json");
    assert_eq!(cremona(&["linearize", "-i", path.to_str().unwrap(), "--prime", "10"]).status.code(), Some(1));
    assert_eq!(cremona(&["--help"]).status.code(), Some(0));
}
