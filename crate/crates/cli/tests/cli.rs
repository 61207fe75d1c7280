use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn voltsurf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_voltsurf")).args(args).current_dir(root()).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn classify_torus_bouquet() {
    let out = voltsurf(&["classify", "fixtures/torus_bouquet.json"]);
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8_lossy(&out.stdout).trim().replace([' ', '\n'], ""),
        r#"{"orientable":true,"chi":0,"genus":1}"#
    );
}

#[test]
fn derive_barbell_gives_petersen() {
    let out = voltsurf(&["derive", "fixtures/barbell_z5.json"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["generalized_petersen"]["n"], 5);
    assert_eq!(v["generalized_petersen"]["k"], 2);
    assert_eq!(v["vertices"], 10);
    assert_eq!(v["free_action"], true);
}

#[test]
fn faces_homology_intersect() {
    let faces = json(&voltsurf(&["faces", "fixtures/torus_bouquet.json"]));
    assert_eq!(faces["count"], 1);
    let h = json(&voltsurf(&["homology", "fixtures/torus_bouquet.json", "--cycle", "a"]));
    assert_eq!(h["betti1"], 2);
    assert_eq!(h["cycle_trivial"], false);
    let i = json(&voltsurf(&["intersect", "fixtures/torus_bouquet.json", "--z", "a", "--w", "b"]));
    assert_eq!(i["pairing"], 1);
    let g = json(&voltsurf(&["intersect", "fixtures/torus_bouquet.json"]));
    assert_eq!(g["independent_by_rank"], true);
}

#[test]
fn rh_and_coset_checks() {
    let out = voltsurf(&["rh-check", "fixtures/sphere_p5.json"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["derived_chi"], 2);
    let out = voltsurf(&["coset-check", "fixtures/torus_bouquet.json", "--vertex", "v", "--walk", "a+,b+"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["all_match"], true);
}

#[test]
fn search_is_byte_deterministic() {
    let a = voltsurf(&["search", "--p", "3", "--jobs", "1"]);
    let b = voltsurf(&["search", "--p", "3", "--jobs", "3"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(json(&a)["total_torus_witnesses"].as_u64().unwrap() > 0);
}

#[test]
fn fixtures_are_current() {
    let out = voltsurf(&["gp", "--dir", "fixtures", "--check"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn exit_codes() {
    assert_eq!(voltsurf(&["classify", "no/such/file.json"]).status.code(), Some(2));
    assert_eq!(voltsurf(&["search", "--p", "4"]).status.code(), Some(2));
    assert_eq!(voltsurf(&["frobnicate"]).status.code(), Some(2));
    let dir = std::env::temp_dir().join(format!("voltsurf-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{\"vertices\": [\"v\"], \"edges\": [], \"rotations\": {\"v\": [\"x+\"]}}").unwrap();
    assert_eq!(voltsurf(&["classify", bad.to_str().unwrap()]).status.code(), Some(2));
    // a stale fixture directory is a failed verification
    assert_eq!(voltsurf(&["gp", "--dir", dir.to_str().unwrap(), "--check"]).status.code(), Some(1));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn output_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("voltsurf-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("c.json");
    let out = voltsurf(&["classify", "fixtures/torus_bouquet.json", "--output", path.to_str().unwrap()]);
    assert!(out.status.success() && out.stdout.is_empty());
    assert!(std::fs::read_to_string(&path).unwrap().contains("\"genus\": 1"));
    std::fs::remove_dir_all(&dir).unwrap();
}
