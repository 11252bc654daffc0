use std::fs;
use std::path::Path;

use loop_agreement::cli::{run, EXIT_NEGATIVE, EXIT_OK, EXIT_UNKNOWN, EXIT_USAGE};
use loop_agreement::complex::Complex;
use serde_json::{json, Value};

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("loopagree").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn call_json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let (code, out, _) = call(&full);
    (code, serde_json::from_str(&out).expect("json output"))
}

fn write(dir: &Path, name: &str, v: &Value) -> String {
    let p = dir.join(name);
    fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn signature_text() {
    let (code, out, _) = call(&["signature", "@set"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("factors: [] free_rank: 1 element: [1]\n"), "{out}");
    let (_, out, _) = call(&["signature", "@rp2"]);
    assert!(out.starts_with("factors: [2] free_rank: 0 element: [1]"), "{out}");
}

#[test]
fn check_exit_codes() {
    assert_eq!(call(&["check", "@set", "--target", "@torus"]).0, EXIT_OK);
    assert_eq!(call(&["check", "@simplex", "--target", "@set"]).0, EXIT_NEGATIVE);
    assert_eq!(call(&["check", "@set", "@set", "--target", "@set*set"]).0, EXIT_OK);
    let (_, v) = call_json(&["check", "@set", "--target", "@torus"]);
    let flags = v["result"]["certified"].as_array().unwrap();
    assert_eq!(flags.len(), 2);
    assert!(flags.iter().all(|f| f["abelian"] == true));
    let (code, v) = call_json(&["check", "@simplex", "--target", "@set"]);
    assert_eq!(code, EXIT_NEGATIVE);
    assert_eq!(v["result"]["verdict"], "NOT_IMPLEMENTS");
    assert_eq!(v["exit_code"], EXIT_NEGATIVE);
}

#[test]
fn uncertified_file_task_is_unknown() {
    let dir = tempfile::tempdir().unwrap();
    let (_, torus, _) = call(&["catalog", "torus"]);
    let mut torus: Value = serde_json::from_str(&torus).unwrap();
    // a vertex renaming keeps the group but loses the catalog identity
    let text = serde_json::to_string(&torus).unwrap().replace("\"0\"", "\"zero\"");
    torus = serde_json::from_str(&text).unwrap();
    let path = write(dir.path(), "torus.json", &torus);
    let (code, out, _) = call(&["check", "@set", "--target", &path]);
    assert_eq!(code, EXIT_UNKNOWN, "{out}");
    assert!(out.starts_with("UNKNOWN"), "{out}");
}

#[test]
fn usage_errors() {
    assert_eq!(call(&[]).0, EXIT_USAGE);
    assert_eq!(call(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(call(&["signature", "@nope"]).0, EXIT_USAGE);
    assert_eq!(call(&["signature", "/does/not/exist.json"]).0, EXIT_USAGE);
    assert_eq!(call(&["bary", "@set", "-n", "0"]).0, EXIT_USAGE);
    assert_eq!(call(&["--help"]).0, EXIT_OK);
}

#[test]
fn json_output_is_deterministic() {
    let a = call(&["--format", "json", "compose", "@torus", "@rp2"]).1;
    let b = call(&["--format", "json", "compose", "@torus", "@rp2"]).1;
    assert_eq!(a, b);
    let c = call(&["--format", "json", "check", "@torus", "--target", "@rp2"]).1;
    let d = call(&["--format", "json", "check", "@torus", "--target", "@rp2"]).1;
    assert_eq!(c, d);
}

#[test]
fn compose_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ss.json");
    let p = path.to_str().unwrap();
    let (code, out, _) = call(&["compose", "@set", "@set", "-o", p]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("vertices: 9"), "{out}");
    let (code, out, _) = call(&["signature", p]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("factors: [] free_rank: 2"), "{out}");
    // read back from disk the product is no longer known to be abelian
    assert_eq!(call(&["check", p, "--target", "@set"]).0, EXIT_UNKNOWN);
    assert_eq!(call(&["check", "@set*set", "--target", "@set"]).0, EXIT_OK);
    assert_eq!(call(&["check", p, "--target", "@simplex"]).0, EXIT_UNKNOWN);
}

#[test]
fn bary_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b.json");
    let p = path.to_str().unwrap();
    assert_eq!(call(&["bary", "@simplex", "-n", "2", "-o", p]).0, EXIT_OK);
    let c: Complex = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(c.vertex_count(), 25);
    assert_eq!(c.simplexes_of_dim(2).count(), 36);
    let (code, v) = call_json(&["bary", p]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["command"], format!("bary {p} -n 1"));
    let again: Complex = serde_json::from_value(v["result"]["complex"].clone()).unwrap();
    // one vertex per simplex of the input
    assert_eq!(again.vertex_count(), c.len());
}

#[test]
fn verify_pass_and_fail() {
    let dir = tempfile::tempdir().unwrap();
    let id = write(dir.path(), "id.json", &json!({"N": 0, "assignment": {"0": "0", "1": "1", "2": "2"}}));
    let (code, out, _) = call(&["verify", "@set", "@set", &id]);
    assert_eq!((code, out.as_str()), (EXIT_OK, "PASS\n"));

    let constant =
        write(dir.path(), "c.json", &json!({"N": 0, "assignment": {"0": "0", "1": "0", "2": "0"}}));
    let (code, v) = call_json(&["verify", "@set", "@set", &constant]);
    assert_eq!(code, EXIT_NEGATIVE);
    assert_eq!(v["result"]["outcome"], "FAIL");
    assert_eq!(v["result"]["input"], "{1}");

    let bad = write(dir.path(), "bad.json", &json!({"N": 0, "assignment": {"0": "0", "x": "1"}}));
    assert_eq!(call(&["verify", "@set", "@set", &bad]).0, EXIT_USAGE);
}

#[test]
fn joint_verify_with_projection() {
    let dir = tempfile::tempdir().unwrap();
    let mut assignment = serde_json::Map::new();
    for a in ["0", "1", "2"] {
        for b in ["0", "1", "2"] {
            assignment.insert(format!("{a}|{b}"), Value::from(a));
        }
    }
    let map = write(dir.path(), "p.json", &json!({"N": 0, "assignment": assignment}));
    let (code, out, _) = call(&["verify", "--joint", "@set", "@set", "@set", &map]);
    assert_eq!((code, out.as_str()), (EXIT_OK, "PASS\n"));
}

#[test]
fn catalog_lists_tasks() {
    let (code, out, _) = call(&["catalog"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.lines().any(|l| l == "set-agreement"));
    assert!(out.lines().any(|l| l == "torus"));
}

#[test]
fn composing_with_a_point_keeps_three_vertices() {
    let (code, out, _) = call(&["compose", "@set", "@point"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("vertices: 3"), "{out}");
    assert_eq!(call(&["check", "@set*point", "--target", "@set"]).0, EXIT_OK);
    assert_eq!(call(&["check", "@set", "--target", "@set*point"]).0, EXIT_OK);
}

#[test]
fn emitted_tasks_load_back_identically() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["set-agreement", "simplex-agreement", "torus", "projective-plane", "point"] {
        let (_, text, _) = call(&["catalog", name]);
        let path = dir.path().join(format!("{name}.json"));
        fs::write(&path, &text).unwrap();
        let loaded = loop_agreement::cli::load_task(path.to_str().unwrap()).unwrap();
        assert_eq!(loaded, loop_agreement::task::catalog(name).unwrap());
        let again = serde_json::to_string_pretty(&loop_agreement::task::TaskJson::from(&loaded)).unwrap();
        assert_eq!(again.trim_end(), text.trim_end());
    }
}
