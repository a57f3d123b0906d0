use std::path::PathBuf;
use std::process::Command;

fn jetcone(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_jetcone")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn problem(r: f64) -> PathBuf {
    let path = scratch(&format!("laplacian-{r}.json"));
    let body = format!(
        r#"{{"entry": "constrained-laplacian", "params": {{"r": {r:?}}},
            "domain": {{"kind": "rect", "x0": 0.0, "x1": 1.0, "y0": 0.0, "y1": 1.0}},
            "nodes": 33, "phi": "x^2 - y^2"}}"#
    );
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn classify_prints_the_type() {
    let (code, out) = jetcone(&["classify", "constrained-laplacian", "--r", "1"]);
    assert_eq!(code, 0);
    assert!(out.contains("type II"), "{out}");
    let (_, out) = jetcone(&["classify", "elementary", "--pair", "ptilde,p"]);
    assert!(out.contains("type III"), "{out}");
}

#[test]
fn solve_exit_codes_follow_the_verdict() {
    let (code, out) = jetcone(&["solve", problem(3.0).to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    let csv = scratch("r1.csv");
    let (code, out) = jetcone(&["solve", problem(1.0).to_str().unwrap(), "--csv", csv.to_str().unwrap()]);
    assert_eq!(code, 2, "{out}");
    let rows = std::fs::read_to_string(csv).unwrap();
    assert_eq!(rows.lines().count(), 1 + 33 * 33);
}

#[test]
fn replay_reproduces_manifests() {
    let first = scratch("figure.json");
    let svg = scratch("figure.svg");
    let (code, _) = jetcone(&[
        "figure",
        "segment",
        "--json-out",
        first.to_str().unwrap(),
        "--svg-out",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let (code, replayed) = jetcone(&["replay", first.to_str().unwrap(), "--json-out", "-", "--svg-out", svg.to_str().unwrap()]);
    assert_eq!(code, 0);
    let original = std::fs::read_to_string(&first).unwrap();
    assert!(replayed.ends_with(&original));
}

#[test]
fn bad_input_is_an_error() {
    let (code, _) = jetcone(&["classify", "no-such-entry"]);
    assert_eq!(code, 1);
}
