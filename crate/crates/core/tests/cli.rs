//! End-to-end runs of the `fixcircle` binary against exported gallery files.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn exported() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    let out = fixcircle(dir.path(), &["gallery", "--export", ".", "--format", "tsv"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    dir
}

fn fixcircle(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fixcircle"))
        .args(args)
        .current_dir(dir)
        .env_remove("FIXCIRCLE_EPSILON")
        .env_remove("FIXCIRCLE_RING_SAMPLES")
        .output()
        .unwrap()
}

/// Exit code and parsed JSON report.
fn run(dir: &Path, args: &[&str]) -> (i32, Value) {
    let out = fixcircle(dir, args);
    let code = out.status.code().unwrap();
    let report = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{args:?}: {e}\n{}", String::from_utf8_lossy(&out.stderr)));
    (code, report)
}

fn condition<'a>(report: &'a Value, id: &str) -> &'a Value {
    report["conditions"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["condition"] == id)
        .unwrap_or_else(|| panic!("no {id} in report"))
}

fn circle_list(report: &Value) -> Vec<(String, f64)> {
    report["circles"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| (c["center"].as_str().unwrap().to_string(), c["radius"].as_f64().unwrap()))
        .collect()
}

#[test]
fn validate_statuses() {
    let dir = exported();
    let d = dir.path();
    assert_eq!(run(d, &["validate", "EX_2_6.space.json"]).0, 0);

    std::fs::write(
        d.join("skew.json"),
        r#"{"carrier": {"type": "finite", "labels": ["a", "b"]},
            "metric": {"type": "matrix", "values": [[0, 1], [2, 0]]}}"#,
    )
    .unwrap();
    let (code, report) = run(d, &["validate", "skew.json"]);
    assert_eq!(code, 1);
    assert!(!report["validation"]["violations"].as_array().unwrap().is_empty());

    std::fs::write(d.join("broken.json"), "{\"carrier\": [").unwrap();
    let out = fixcircle(d, &["validate", "broken.json"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("broken.json") && err.contains("line"), "{err}");
}

#[test]
fn check_examples() {
    let dir = exported();
    let d = dir.path();
    let (code, r) = run(
        d,
        &["check", "EX_2_6.space.json", "EX_2_6.map.json", "--center", "0", "--radius", "2", "--conditions", "C1,C2"],
    );
    assert_eq!(code, 1);
    assert_eq!(condition(&r, "C1")["holds"], true);
    assert_eq!(condition(&r, "C2")["holds"], false);

    let (code, r) = run(
        d,
        &[
            "check", "EX_2_12.space.json", "EX_2_12.map.json", "--center", "0", "--radius", "1",
            "--conditions", "C1_STAR,C2_STAR",
        ],
    );
    assert_eq!(code, 0);
    assert_eq!(r["conditions"].as_array().unwrap().len(), 2);

    let (_, r) = run(d, &["check", "EX_2_6.space.json", "EX_2_6.map.json", "--center", "0", "--radius", "0"]);
    assert!(r["caveats"].as_array().unwrap().contains(&Value::from("degenerate_circle")));
    assert_eq!(r["conditions"].as_array().unwrap().len(), 12);

    let bad_id = fixcircle(
        d,
        &["check", "EX_2_6.space.json", "EX_2_6.map.json", "--center", "0", "--radius", "2", "--conditions", "C9"],
    );
    assert_eq!(bad_id.status.code(), Some(2));
    let off_carrier = fixcircle(d, &["check", "EX_2_6.space.json", "EX_2_6.map.json", "--center", "zz", "--radius", "2"]);
    assert_eq!(off_carrier.status.code(), Some(2));
}

#[test]
fn verify_examples() {
    let dir = exported();
    let d = dir.path();
    let (code, r) = run(
        d,
        &["verify", "EX_2_5.space.json", "EX_2_5.map.json", "--center", "0", "--radius", "2", "--theorem", "T_EXIST_C1C2"],
    );
    assert_eq!(code, 0);
    let t = &r["theorems"][0];
    assert_eq!((t["hypotheses_hold"].clone(), t["conclusion_holds"].clone()), (Value::from(true), Value::from(true)));

    let (code, r) = run(
        d,
        &["verify", "IDENTITY.space.json", "IDENTITY.map.json", "--center", "0", "--radius", "1", "--theorem", "T_IDENTITY"],
    );
    assert_eq!(code, 0);
    assert_eq!(r["theorems"][0]["conclusion_holds"], true);

    let (code, r) = run(
        d,
        &["verify", "PROP_3_1.space.json", "PROP_3_1.map.json", "--center", "0", "--radius", "1", "--theorem", "T_UNIQUE_C3"],
    );
    assert_eq!(code, 0);
    let t = &r["theorems"][0];
    assert_eq!(t["consistent"], true);
    let c3 = t["hypotheses"].as_array().unwrap().iter().find(|h| h["condition"] == "C3").unwrap();
    assert_eq!(c3["holds"], false);
    let fixed: Vec<(String, Vec<Value>)> = t["fixed_circles"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["members"].as_array().unwrap().len() == 2)
        .map(|c| (c["center"].as_str().unwrap().to_string(), c["members"].as_array().unwrap().clone()))
        .collect();
    assert!(fixed.contains(&("0".into(), vec!["-1".into(), "1".into()])));
    assert!(fixed.contains(&("3".into(), vec!["2".into(), "4".into()])));

    let (code, r) = run(d, &["verify", "EX_2_16.space.json", "EX_2_16.map.json", "--center", "0", "--radius", "1"]);
    assert_eq!(code, 0);
    assert_eq!(r["theorems"].as_array().unwrap().len(), 9);
    assert!(r["caveats"].as_array().unwrap().contains(&Value::from("sampled")));
}

#[test]
fn enumerate_examples() {
    let dir = exported();
    let d = dir.path();
    let (code, r) = run(d, &["enumerate", "EX_2_12.space.json", "EX_2_12.map.json"]);
    assert_eq!(code, 0);
    let circles = circle_list(&r);
    for c in [("0", 1.0), ("3", 2.0), ("2", 3.0)] {
        assert!(circles.contains(&(c.0.to_string(), c.1)), "{c:?} missing from {circles:?}");
    }

    let three = r#"{"carrier": {"type": "finite", "labels": ["a", "b", "c"]},
        "metric": {"type": "matrix", "values": [[0, 1, 2], [1, 0, 1.5], [2, 1.5, 0]]}}"#;
    std::fs::write(d.join("three.json"), three).unwrap();
    std::fs::write(d.join("id.json"), r#"{"rule": {"type": "identity"}}"#).unwrap();
    std::fs::write(d.join("const.json"), r#"{"rule": {"type": "constant", "value": "c"}}"#).unwrap();

    let (_, r) = run(d, &["enumerate", "three.json", "id.json", "--include-degenerate"]);
    // Three centers, each with the zero radius and two others.
    assert_eq!(circle_list(&r).len(), 9);

    // Any circle whose only member is `c` is fixed by the constant map, so the
    // fixed set shrinks to the degenerate circle only when no such circle exists.
    let (_, r) = run(d, &["enumerate", "three.json", "const.json", "--include-degenerate"]);
    assert_eq!(circle_list(&r), [("a", 2.0), ("b", 1.5), ("c", 0.0)].map(|(c, r)| (c.to_string(), r)));
    let equilateral = r#"{"carrier": {"type": "finite", "labels": ["a", "b", "c"]},
        "metric": {"type": "matrix", "values": [[0, 1, 1], [1, 0, 1], [1, 1, 0]]}}"#;
    std::fs::write(d.join("tri.json"), equilateral).unwrap();
    let (_, r) = run(d, &["enumerate", "tri.json", "const.json", "--include-degenerate"]);
    assert_eq!(circle_list(&r), vec![("c".to_string(), 0.0)]);
    let (_, r) = run(d, &["enumerate", "tri.json", "const.json"]);
    assert!(r.get("circles").is_none());
}

#[test]
fn search_examples() {
    let dir = exported();
    let d = dir.path();
    let args = ["search", "EX_2_6.space.json", "--center", "0", "--radius", "2", "--target", "C1&!C2"];
    let mut with_out = args.to_vec();
    with_out.extend(["--map-out", "found.map.json"]);
    let (code, r) = run(d, &with_out);
    assert_eq!(code, 0);
    assert_eq!(r["search"]["found"], true);
    assert_eq!(r["search"]["map"]["rule"]["type"], "table");

    // The echoed map reproduces the target.
    let (code, r) = run(
        d,
        &["check", "EX_2_6.space.json", "found.map.json", "--center", "0", "--radius", "2", "--conditions", "C1"],
    );
    assert_eq!(code, 0, "{r}");

    let mut zero = args.to_vec();
    zero.extend(["--budget", "0"]);
    let (code, r) = run(d, &zero);
    assert_eq!(code, 1);
    assert_eq!(r["search"]["found"], false);

    let out = fixcircle(d, &["search", "EX_2_6.space.json", "--center", "0", "--radius", "2", "--target", "C1 &"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gallery_and_generate() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let (code, r) = run(d, &["gallery"]);
    assert_eq!(code, 0);
    assert!(r["gallery"].as_array().unwrap().iter().all(|row| row["pass"] == true));

    let (code, r) = run(d, &["gallery", "--filter", "EX_2_1*"]);
    assert_eq!(code, 0);
    assert!(r["gallery"].as_array().unwrap().iter().all(|row| row["entry"].as_str().unwrap().starts_with("EX_2_1")));

    let (code, r) = run(d, &["generate", "--seed", "5", "--size", "6", "--levels", "3", "--out", "g.json"]);
    assert_eq!(code, 0);
    assert_eq!(r["validation"]["valid"], true);
    assert_eq!(run(d, &["validate", "g.json"]).0, 0);
    assert_eq!(fixcircle(d, &["generate", "--size", "0"]).status.code(), Some(2));
}

#[test]
fn epsilon_precedence_and_tsv() {
    let dir = exported();
    let d = dir.path();
    let args = ["validate", "EX_2_6.space.json"];
    assert_eq!(run(d, &args).1["epsilon"], 1e-9);

    let env = Command::new(env!("CARGO_BIN_EXE_fixcircle"))
        .args(args)
        .current_dir(d)
        .env("FIXCIRCLE_EPSILON", "1e-6")
        .output()
        .unwrap();
    let r: Value = serde_json::from_slice(&env.stdout).unwrap();
    assert_eq!(r["epsilon"], 1e-6);

    let mut flagged = args.to_vec();
    flagged.extend(["--epsilon", "0.001"]);
    assert_eq!(run(d, &flagged).1["epsilon"], 0.001);

    let tsv = fixcircle(d, &["validate", "EX_2_6.space.json", "--format", "tsv"]);
    let text = String::from_utf8(tsv.stdout).unwrap();
    assert!(text.starts_with("section\tid\tsubject\tverdict\tvalue\tdetail\n"));
    assert!(text.ends_with("status\t\t\t\t0\t\n"), "{text}");
}
