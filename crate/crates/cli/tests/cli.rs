use std::path::Path;
use std::process::Command;

use lensform::ThetaFiltration;
use serde_json::Value;

fn run_env(args: &[&str], cache: Option<&Path>) -> (i32, String, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_lensform"));
    cmd.args(args).env_remove("LENSFORM_CACHE_DIR");
    if let Some(dir) = cache {
        cmd.env("LENSFORM_CACHE_DIR", dir);
    }
    let out = cmd.output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn run(args: &[&str]) -> (i32, String) {
    let (c, o, _) = run_env(args, None);
    (c, o)
}

fn validated(args: &[&str], code: i32) -> Value {
    let schema: Value = serde_json::from_str(include_str!("../schema/lensform-1.schema.json")).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let (c, out) = run(&full);
    assert_eq!(c, code, "{full:?}");
    let v: Value = serde_json::from_str(&out).unwrap();
    let errors: Vec<String> = validator.iter_errors(&v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{full:?}: {errors:?}");
    v
}

#[test]
fn every_command_emits_schema_valid_json() {
    validated(&["classify", "-p", "11", "--a", "1,1,1", "--b", "1,1,5"], 0);
    validated(&["classify", "-p", "5", "--a", "1,1", "--b", "1,1,1"], 1);
    validated(&["thickness", "-p", "11", "--a", "1,1,1", "--b", "1,1,5"], 0);
    validated(&["thickness", "-p", "7", "--a", "1,1,1", "--b", "1,2,4"], 1);
    validated(&["thickness", "-p", "5", "-n", "20"], 0);
    validated(&["rho", "-p", "7", "--a", "1,2,4"], 0);
    validated(&["rho", "-p", "7", "--a", "1,1,1", "--b", "1,2,4"], 0);
    validated(&["rho", "-p", "5", "--a", "1,1", "--b", "1,2"], 1);
    validated(&["ktheory", "-p", "23"], 0);
    validated(&["ktheory", "-p", "7", "-n", "12"], 0);
    validated(&["atlas", "-p", "3", "-n", "2"], 0);
}

#[test]
fn oracle_mode_agrees() {
    for args in [
        &["classify", "-p", "13", "--a", "1,1,2", "--b", "1,1,3", "--oracle"][..],
        &["thickness", "-p", "7", "-n", "12", "--oracle"],
        &["rho", "-p", "11", "--a", "1,3,5", "--oracle"],
        &["ktheory", "-p", "5", "-n", "4", "--oracle"],
        &["atlas", "-p", "7", "-n", "3", "--oracle"],
    ] {
        let v = validated(args, 0);
        let checks = v["oracle"].as_array().unwrap();
        assert!(!checks.is_empty());
        assert!(checks.iter().all(|c| c["agree"] == true), "{args:?}: {checks:?}");
    }
}

#[test]
fn weights_are_canonicalized_and_echoed() {
    let v = validated(&["classify", "-p", "7", "--a", "-1,8,13", "--b", "6,6,6"], 0);
    assert_eq!(v["canonical"]["first"], "L(7; 1,1,1)");
    assert_eq!(v["first"]["orientation"], 1);
    assert_eq!(v["input"]["a"], serde_json::json!([-1, 8, 13]));
    let (_, text) = run(&["classify", "-p", "7", "--a", "6,1,1", "--b", "1,1,1"]);
    assert!(text.contains("first: L(7; 1,1,1) (orientation reversed)"), "{text}");
}

#[test]
fn csv_is_a_flat_table() {
    let (code, out) = run(&["atlas", "-p", "7", "-n", "3", "--format", "csv"]);
    assert_eq!(code, 0);
    let mut r = csv::Reader::from_reader(out.as_bytes());
    let header = r.headers().unwrap().clone();
    let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
    assert!(rows.iter().all(|row| row.len() == header.len()));
    assert_eq!(rows.iter().filter(|row| &row[0] == "space").count(), 10);
    assert!(rows.iter().any(|row| &row[0] == "filtration"));

    let (code, out) = run(&["classify", "-p", "5", "--a", "1,1", "--b", "2,2", "--format", "csv"]);
    assert_eq!(code, 0);
    let mut r = csv::Reader::from_reader(out.as_bytes());
    let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 1);
    assert_eq!(&rows[0][5], "true");
    assert_eq!(&rows[0][6], "2");
}

#[test]
fn atlas_output_is_deterministic() {
    let a = run(&["atlas", "-p", "11", "-n", "3", "--format", "json"]);
    let b = run(&["atlas", "-p", "11", "-n", "3", "--format", "json"]);
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a.1).unwrap();
    let names: Vec<Vec<u64>> = v["spaces"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| serde_json::from_value(s["weights"].clone()).unwrap())
        .collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    // the tangential non-isometric pair below the stable range
    let pairs = v["pairs"].as_array().unwrap();
    let tangential: Vec<&Value> = pairs.iter().filter(|p| p["level"] == "tangential").collect();
    assert!(!tangential.is_empty());
    assert!(tangential.iter().all(|p| p["thickness"] == serde_json::json!({"lo": 3, "hi": 3})));
    let rows = v["matrix"]["rows"].as_array().unwrap();
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_str().unwrap().as_bytes();
        assert_eq!(row[i], b'I');
        for (j, &c) in row.iter().enumerate() {
            assert_eq!(rows[j].as_str().unwrap().as_bytes()[i], c);
        }
    }
}

#[test]
fn filtration_cache_is_written_and_reused() {
    let dir = tempfile::tempdir().unwrap();
    let (code, first, _) = run_env(&["thickness", "-p", "5", "-n", "8", "--format", "json"], Some(dir.path()));
    assert_eq!(code, 0);
    let path = dir.path().join("theta-p5-n8.json");
    let cached: ThetaFiltration = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(cached.m, 2);
    let (_, second, _) = run_env(&["thickness", "-p", "5", "-n", "8", "--format", "json"], Some(dir.path()));
    assert_eq!(first, second);
    // entries that do not parse or do not match (p, n) are recomputed
    std::fs::write(&path, "{ broken").unwrap();
    let (code, third, err) = run_env(&["thickness", "-p", "5", "-n", "8", "--format", "json"], Some(dir.path()));
    assert_eq!(code, 0);
    assert_eq!(first, third);
    assert!(err.contains("ignoring"));
    assert!(serde_json::from_slice::<ThetaFiltration>(&std::fs::read(&path).unwrap()).is_ok());
    // concurrent readers and writers never observe partial files
    let handles: Vec<_> = (0..6)
        .map(|i| {
            let d = dir.path().to_path_buf();
            std::thread::spawn(move || {
                let n = (20 + i % 2).to_string();
                run_env(&["thickness", "-p", "7", "-n", &n], Some(&d))
            })
        })
        .collect();
    for h in handles {
        let (code, _, err) = h.join().unwrap();
        assert_eq!(code, 0);
        assert!(!err.contains("ignoring"), "{err}");
    }
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["classify", "-p", "7", "--a", "1,1"][..],
        &["classify", "-p", "7", "--a", "7", "--b", "1"],
        &["classify", "-p", "7", "-n", "3", "--a", "1,1", "--b", "1,1"],
        &["thickness", "-p", "7"],
        &["thickness", "-p", "7", "-n", "2"],
        &["atlas", "-p", "5"],
        &["atlas", "-p", "13", "-n", "9"],
        &["ktheory", "-p", "211"],
        &["rho", "-p", "9", "--a", "1"],
        &["bogus"],
    ] {
        assert_eq!(run(args).0, 2, "{args:?}");
    }
}
