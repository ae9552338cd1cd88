use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn versal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_versal"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn finite_field_point_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("point.json");
    let out = versal(&["galois-point", "--finite-field", "2,1,3", "--out", path(&file)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let out = versal(&["verify-point", path(&file)]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    assert!(report["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn corrupted_point_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("point.json");
    versal(&["galois-point", "--finite-field", "3,1,2", "--out", path(&file)]);
    let mut pt: Value = serde_json::from_str(&fs::read_to_string(&file).unwrap()).unwrap();
    pt["h"][1] = serde_json::json!([1, 1]);
    fs::write(&file, pt.to_string()).unwrap();
    let out = versal(&["verify-point", path(&file)]);
    assert_eq!(code(&out), 1);
    let report = json(&out);
    assert!(report["checks"].as_array().unwrap().iter().any(|c| c["passed"] == false));
}

#[test]
fn rational_point() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("q.json");
    let out = versal(&[
        "galois-point",
        "--rational",
        "--f=1,1,1",
        "--conjugates=0,1;-1,-1",
        "--group",
        "Z2",
        "--out",
        path(&file),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(code(&versal(&["verify-point", path(&file)])), 0);
    // the identity does not fix a root of x^2 + x + 1 when swapped
    let out = versal(&[
        "galois-point",
        "--rational",
        "--f=1,1,1",
        "--conjugates=0,1;-1,-1",
        "--group",
        "Z2",
        "--assignment",
        "1,0",
    ]);
    assert_eq!(code(&out), 1);
}

#[test]
fn presentation_sizes_and_cutoff() {
    let out = versal(&["presentation", "--group", "Z2"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["base"]["variables"].as_array().unwrap().len(), 9);
    assert_eq!(v["base"]["relations"].as_array().unwrap().len(), 15);
    assert_eq!(code(&versal(&["presentation", "--group", "Z5"])), 2);
}

#[test]
fn root_data_aut_and_index_set() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("rank2.json");
    let out = versal(&["enumerate-root-data", "--rank", "2", "--out", path(&file)]);
    assert_eq!(code(&out), 0);
    let data: Vec<Value> = serde_json::from_str(&fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(data.len(), 13);
    let find = |label: &str| data.iter().find(|d| d["label"] == label).unwrap().clone();
    let sl3 = dir.path().join("sl3.json");
    fs::write(&sl3, find("SL3").to_string()).unwrap();
    let out = versal(&["aut", "--datum", path(&sl3)]);
    assert_eq!(json(&out)["order"], 2);
    let out = versal(&["index-set", "--datum", path(&sl3), "--bound", "2"]);
    assert_eq!(json(&out)["count"], 3);
    // radical rank 2 has an infinite automorphism group
    let gm2 = dir.path().join("gm2.json");
    fs::write(&gm2, find("Gm^2").to_string()).unwrap();
    assert_eq!(code(&versal(&["aut", "--datum", path(&gm2)])), 3);
    assert_eq!(code(&versal(&["enumerate-root-data", "--rank", "9"])), 3);
}

#[test]
fn z1_table_and_matrix_coefficients() {
    let out = versal(&["z1", "--gamma", "Z2", "--coeffs", "S3"]);
    let v = json(&out);
    assert_eq!((v["count"].as_u64(), v["classes"].as_u64()), (Some(4), Some(2)));
    let out = versal(&["z1", "--group", "sl2", "--p", "2", "--ext-degree", "2"]);
    let v = json(&out);
    assert_eq!((v["count"].as_u64(), v["classes"].as_u64()), (Some(10), Some(1)));
}

#[test]
fn su3_twist() {
    let out = versal(&["twist", "--spec", "sl3", "--p", "2", "--ext-degree", "2", "--alpha", "flip", "--cocycle", "trivial"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["order"], 216);
    assert_eq!(v["center_order"], 3);
    assert_eq!(v["quasi_split"], true);
    assert_eq!(v["witness_borel_order"], 24);
}

#[test]
fn twist_with_cocycle_file() {
    let dir = tempfile::tempdir().unwrap();
    let z1 = json(&versal(&["z1", "--group", "sl2", "--p", "2", "--ext-degree", "2"]));
    let file = dir.path().join("c.json");
    for c in z1["cocycles"].as_array().unwrap() {
        fs::write(&file, c.to_string()).unwrap();
        let v = json(&versal(&["twist", "--spec", "sl2", "--p", "2", "--ext-degree", "2", "--cocycle", path(&file)]));
        assert_eq!(v["order"], 6);
        assert_eq!(v["quasi_split_class"], true);
    }
    fs::write(&file, "[[1,0,0,1],[1,2,0,1]]").unwrap();
    let out = versal(&["twist", "--spec", "sl2", "--p", "2", "--ext-degree", "2", "--cocycle", path(&file)]);
    assert_eq!(code(&out), 1);
}

#[test]
fn size_cutoff_and_unsupported_exit_codes() {
    assert_eq!(code(&versal(&["twist", "--spec", "sl3", "--p", "3", "--ext-degree", "2"])), 2);
    assert_eq!(code(&versal(&["z1", "--group", "sl3", "--p", "3", "--ext-degree", "2"])), 2);
    assert_eq!(code(&versal(&["galois-point", "--finite-field", "2,1,0"])), 1);
    assert_eq!(code(&versal(&["twist", "--spec", "so5", "--p", "2", "--ext-degree", "2"])), 1);
    assert_eq!(code(&versal(&["no-such-command"])), 1);
    assert_eq!(code(&versal(&["--help"])), 0);
}

#[test]
fn catalog_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for f in [&a, &b] {
        let out = versal(&["catalog", "--rank", "1", "--p", "3", "--k", "1", "--out", path(f)]);
        assert_eq!(code(&out), 0);
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["version"], 1);
    assert_eq!(v["fingerprints"].as_array().unwrap().len(), 4);
    let out = versal(&["catalog", "--rank", "1", "--p", "2", "--cocycles", "exhaustive", "--out", path(&a)]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["fingerprints"].as_array().unwrap().len(), 3);
}
