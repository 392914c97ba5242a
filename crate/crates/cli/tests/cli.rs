use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use quasibool::formats::{BundleFile, GroupFile, ProblemFile, RingFile, SnapshotFile, SpaceFile};
use quasibool::stone::BooleanRing;
use serde_json::{json, Value};
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quasibool")).args(args).output().unwrap()
}

fn ok(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

/// Exit code and the `error` tag from stderr.
fn fails(args: &[&str]) -> (i32, String) {
    let out = run(args);
    let err: Value = serde_json::from_slice(&out.stderr).unwrap_or_else(|_| panic!("{args:?}: stderr is not JSON"));
    (out.status.code().unwrap(), err["error"].as_str().unwrap().to_string())
}

fn write(dir: &Path, name: &str, v: &Value) -> String {
    let p: PathBuf = dir.join(name);
    std::fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p.to_str().unwrap().to_string()
}

fn builtin(dir: &Path, name: &str) -> String {
    let v = ok(&["group", "builtin", name]);
    write(dir, &format!("{}.json", name.replace(['^', ':'], "_")), &v)
}

fn z4_problem() -> Value {
    json!({
        "G": {"order": 2, "table": [[0, 1], [1, 0]]},
        "A": {"order": 2, "table": [[0, 1], [1, 0]]},
        "B": {"order": 4, "table": [[0, 1, 2, 3], [1, 2, 3, 0], [2, 3, 0, 1], [3, 0, 1, 2]]},
        "phi": [0, 1],
        "alpha": [0, 1, 0, 1],
    })
}

#[test]
fn z4_problem_is_obstructed() {
    let dir = TempDir::new().unwrap();
    let p = write(dir.path(), "z4.json", &z4_problem());
    let r = ok(&["embed", "solve", &p]);
    assert_eq!(r["verdict"], "obstructed");
    assert_eq!(r["class"]["coset_id"], json!([1]));
    assert_eq!(ok(&["embed", "obstruct", &p])["zero"], false);
    assert_eq!(ok(&["embed", "classify", &p])["real"], false);
    assert_eq!(fails(&["embed", "liftdata", &p]), (1, "not_real".into()));
}

#[test]
fn emitted_files_revalidate() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    for name in ["D8", "Q8", "Z4xZ2", "F2^3", "Pauli"] {
        let v = ok(&["group", "builtin", name]);
        serde_json::from_value::<GroupFile>(v).unwrap().into_group().unwrap();
    }

    // D8 over its F2^2 quotient, and canonical lifting data fed back to the solver
    let d8 = builtin(d, "D8");
    let q = ok(&["group", "quotient", &d8, "--normal", "0,2"]);
    serde_json::from_value::<GroupFile>(q["quotient"].clone()).unwrap().into_group().unwrap();
    let d8v: Value = serde_json::from_str(&std::fs::read_to_string(&d8).unwrap()).unwrap();
    let problem = json!({"G": d8v, "A": q["quotient"], "B": d8v, "phi": q["map"], "alpha": q["map"]});
    let p = write(d, "d8.json", &problem);
    let lifted = ok(&["embed", "liftdata", &p]);
    let file: ProblemFile = serde_json::from_value(lifted.clone()).unwrap();
    assert!(file.into_problem().unwrap().1.is_some());
    let lp = write(d, "d8l.json", &lifted);
    assert_eq!(ok(&["embed", "solve", &lp])["verdict"], "solved");
    let reduced = ok(&["embed", "reduce", &p]);
    serde_json::from_value::<ProblemFile>(reduced["problem"].clone()).unwrap().into_problem().unwrap();

    let ring = write(d, "ring.json", &serde_json::to_value(RingFile::from_ring(&BooleanRing::standard(3))).unwrap());
    let spec = ok(&["stone", "spec", &ring]);
    let space = serde_json::from_value::<SpaceFile>(spec["space"].clone()).unwrap();
    assert_eq!(space.into_space().unwrap().points(), 3);
    let sp = write(d, "space.json", &spec["space"]);
    assert_eq!(ok(&["stone", "complete", &sp])["matches_spectrum"], true);
    let cert = ok(&["stone", "dual", &ring, "--space", &sp]);
    assert_eq!(cert["sigma"]["bijective"], true);

    let bundle = json!({
        "group": {"order": 2, "table": [[0, 1], [1, 0]]},
        "Y": 4, "X": 2, "proj": [0, 0, 1, 1], "action": [[0, 1, 2, 3], [1, 0, 3, 2]],
    });
    let b = write(d, "bundle.json", &bundle);
    assert_eq!(ok(&["bundle", "section", &b])["section"], json!([0, 2]));
    let qb = ok(&["bundle", "quotient", &b, "--normal", "0,1"]);
    let qb: BundleFile = serde_json::from_value(qb["bundle"].clone()).unwrap();
    assert_eq!(qb.into_bundle().unwrap().total(), 2);

    let snap = ok(&["coh", "cup", &d8, "--nmax", "3"]);
    let s: SnapshotFile = serde_json::from_value(snap).unwrap();
    assert_eq!(s.dims, vec![1, 2, 3, 4]);
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let d16 = builtin(dir.path(), "D16");
    let serial = run(&["coh", "quillen", &d16, "--nmax", "3"]);
    let parallel = run(&["coh", "quillen", &d16, "--nmax", "3", "--jobs", "3"]);
    assert!(serial.status.success());
    assert_eq!(serial.stdout, parallel.stdout);

    let args = ["reconstruct", "roundtrip", "--d1", "2", "--dimb", "3", "--seed", "7"];
    let a = run(&args);
    assert_eq!(a.stdout, run(&args).stdout);
    let r: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(r["report"]["recovered"], json!([2, 3]));

    let out = dir.path().join("out.json");
    let out = out.to_str().unwrap();
    run(&["coh", "basis", &d16, "-o", out]);
    let first = std::fs::read(out).unwrap();
    run(&["coh", "basis", &d16, "-o", out]);
    assert_eq!(first, std::fs::read(out).unwrap());
}

#[test]
fn reconstruct_run_verifies_against_the_tower() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    // the stable subring of the dihedral tower presents two involutions
    let p = write(d, "p.json", &json!({"Y": [], "X": ["a", "b"]}));
    let tower = ok(&["coh", "tower", &p, "--depth", "3", "--nmax", "3"]);
    assert_eq!(tower["stage_orders"], json!([4, 8, 16]));
    let s = write(d, "snap.json", &tower["snapshot"]);
    assert_eq!(ok(&["reconstruct", "classify", &s])["classification"], "boolean");
    let r = ok(&["reconstruct", "run", &s, "--verify-depth", "3"]);
    assert_eq!(r["result"], json!({"free_rank": 0, "X_points": 2}));
    assert_eq!(r["verification"]["all_match"], true);

    let z2 = builtin(d, "Z2");
    let s = write(d, "z2.json", &ok(&["coh", "cup", &z2, "--nmax", "4"]));
    let r = ok(&["reconstruct", "run", &s, "--verify-depth", "3"]);
    assert_eq!(r["presentation"], json!({"Y": [], "X": ["x1"]}));
    assert_eq!(r["verification"]["all_match"], true);
}

#[test]
fn words_and_evaluation() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let p = write(d, "p.json", &json!({"Y": ["y"], "X": ["a"]}));
    let w = ok(&["word", "normalize", &p, "y a a y^-1 a"]);
    assert_eq!(w, json!({"word": "a", "length": 1}));
    let d8 = builtin(d, "D8");
    let images = write(d, "im.json", &json!({"images": {"y": 1, "a": 4}}));
    let e = ok(&["word", "eval", &p, &d8, &images, "y y"]);
    assert_eq!(e["element"], 2);
    assert_eq!(e["trace"]["classes"], json!([1]));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let missing = d.join("missing.json");
    assert_eq!(fails(&["group", "info", missing.to_str().unwrap()]), (2, "io".into()));
    let junk = write(d, "junk.json", &json!({"order": 2}));
    assert_eq!(fails(&["group", "info", &junk]), (2, "parse".into()));
    let bad = write(d, "bad.json", &json!({"order": 2, "table": [[0, 1], [1, 1]]}));
    assert_eq!(fails(&["group", "info", &bad]).0, 2);
    let d8 = builtin(d, "D8");
    assert_eq!(fails(&["group", "quotient", &d8, "--normal", "0,4"]), (1, "not_normal".into()));
    assert_eq!(fails(&["coh", "basis", &d8, "--nmax", "9"]), (2, "option".into()));
    assert_eq!(fails(&["group", "builtin", "Z0x"]).0, 2);
    assert_eq!(fails(&["nonsense"]), (2, "usage".into()));
    let s3 = builtin(d, "S3");
    assert_eq!(fails(&["coh", "profile", &s3, "--degree", "0"]).0, 2);
    assert!(run(&["--help"]).status.success());
}
