//! Every subcommand's JSON output validates against its published schema.

use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rg-lab"))
}

fn schema(name: &str) -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{name}.schema.json"));
    let text = std::fs::read_to_string(&path).unwrap();
    let value: Value = serde_json::from_str(&text).unwrap();
    jsonschema::validator_for(&value).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn run(args: &[&str]) -> Value {
    let out = bin().args(args).output().unwrap();
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn check(name: &str, doc: &Value) {
    let v = schema(name);
    let errors: Vec<String> = v.iter_errors(doc).map(|e| format!("{} at {}", e, e.instance_path)).collect();
    assert!(errors.is_empty(), "{name}: {errors:#?}");
}

fn z6(dir: &Path) -> PathBuf {
    let path = dir.join("z6.json");
    std::fs::write(&path, r#"{"degree":6,"images":{"a":[1,2,3,4,5,0]}}"#).unwrap();
    path
}

#[test]
fn single_group_reports_match_schemas() {
    let dir = tempfile::tempdir().unwrap();
    let q = z6(dir.path());
    let q = q.to_str().unwrap();
    check("parse", &run(&["parse", "--preset", "Z3Z3"]));
    check("enumerate", &run(&["enumerate", "--preset", "S3", "--subgroup", "a"]));
    check("cheeger", &run(&["cheeger", "--preset", "Z", "--quotient", q]));
    check("cheeger", &run(&["cheeger", "--preset", "Z", "--quotient", q, "--exact"]));
    check("spectrum", &run(&["spectrum", "--preset", "Z", "--quotient", q]));
    check("rs", &run(&["rs", "--preset", "F2", "--subgroup", "aa,b,aba"]));
    check("split", &run(&["split", "--preset", "Z", "--quotient", q, "--cut", "0,1,2"]));
    check("split", &run(&["split", "--preset", "Z", "--quotient", q, "--scan"]));
}

#[test]
fn family_reports_match_schemas() {
    let dir = tempfile::tempdir().unwrap();
    check("gradient", &run(&["gradient", "--family", "cyclic:n=2,4,8", "--chain-quotients"]));
    check("gradient", &run(&["gradient", "--family", "free_kernels:k=2,n=2..4"]));
    check("family", &run(&["family", "--family", "dihedral:n=3,4"]));

    let out_dir = dir.path().join("members");
    let out = bin().args(["family", "--family", "cyclic:n=3,4", "--out-dir"]).arg(&out_dir).output().unwrap();
    assert!(out.status.success());
    let mut members: Vec<PathBuf> = std::fs::read_dir(&out_dir).unwrap().map(|e| e.unwrap().path()).collect();
    members.sort();
    assert_eq!(members.len(), 2);
    for m in &members {
        let doc: Value = serde_json::from_slice(&std::fs::read(m).unwrap()).unwrap();
        check("member", &doc);
    }
    let out = bin().arg("report").args(&members).output().unwrap();
    assert!(out.status.success());
    check("merged", &serde_json::from_slice(&out.stdout).unwrap());
}

#[test]
fn schemas_reject_malformed_reports() {
    let dir = tempfile::tempdir().unwrap();
    let q = z6(dir.path());
    let mut doc = run(&["cheeger", "--preset", "Z", "--quotient", q.to_str().unwrap(), "--exact"]);
    doc["h"]["den"] = Value::from(0);
    assert!(!schema("cheeger").is_valid(&doc));

    let mut doc = run(&["gradient", "--family", "cyclic:n=3,4"]);
    doc["trichotomy"]["interpretation"] = Value::from("proved (3)");
    assert!(!schema("gradient").is_valid(&doc));
}
