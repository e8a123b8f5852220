use std::path::Path;
use std::process::{Command, Output};

use cluster_slices::quiver::Quiver;

fn cts(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cts")).current_dir(dir).args(args).output().expect("run cts")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn setup() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("d4.json"), serde_json::to_string(&Quiver::d_type(4)).unwrap()).unwrap();
    let o = cts(dir.path(), &["derived", "build", "--quiver", "d4.json", "--out", "m.json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    dir
}

#[test]
fn algebra_pipeline() {
    let dir = setup();
    let d = dir.path();
    let tilts: Vec<serde_json::Value> =
        serde_json::from_str(&stdout(&cts(d, &["cluster", "tilting-enumerate", "--model", "m.json"]))).unwrap();
    assert_eq!(tilts.len(), 50);
    std::fs::write(d.join("t.json"), tilts[0].to_string()).unwrap();
    assert!(cts(d, &["ct", "build", "--model", "m.json", "--tilting", "t.json", "--out", "alg.json"]).status.success());
    let slices: Vec<Vec<String>> = serde_json::from_str(&stdout(&cts(d, &["ct", "slices", "alg.json"]))).unwrap();
    assert!(!slices.is_empty());
    std::fs::write(d.join("s.json"), serde_json::to_string(&slices[0]).unwrap()).unwrap();
    let tq: serde_json::Value =
        serde_json::from_str(&stdout(&cts(d, &["ct", "tilted", "alg.json", "--slice", "s.json"]))).unwrap();
    assert_eq!(tq["routes_agree"], true);
    let real: serde_json::Value = serde_json::from_str(&stdout(&cts(d, &["ct", "realize", "alg.json"]))).unwrap();
    assert!(!real["presentations"].as_array().unwrap().is_empty());
}

#[test]
fn outputs_are_deterministic() {
    let dir = setup();
    let d = dir.path();
    let a = cts(d, &["mesh", "table", "--model", "m.json"]);
    let b = cts(d, &["mesh", "table", "--model", "m.json"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("source,target,dim\n"));
    let r1 = cts(d, &["render", "m.json", "--kind", "model"]);
    let r2 = cts(d, &["render", "m.json", "--kind", "model"]);
    assert_eq!(r1.stdout, r2.stdout);
}

#[test]
fn homdim_between_projective_and_injective() {
    let dir = setup();
    let o = cts(dir.path(), &["mesh", "homdim", "--model", "m.json", "--from", "P:1", "--to", "I:1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["dim"], 1);
}

#[test]
fn exit_codes() {
    let dir = setup();
    let d = dir.path();
    assert_eq!(cts(d, &["verify", "nonsense"]).status.code(), Some(2));
    std::fs::write(d.join("bad.json"), r#"{"vertices": ["1"], "arrows": [{"id": "a", "from": "1", "to": 5}]}"#).unwrap();
    let o = cts(d, &["derived", "build", "--quiver", "bad.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("/arrows/0/to"));
    let o = cts(d, &["--cap-paths", "1", "mesh", "homdim", "--model", "m.json", "--from", "P:1", "--to", "I:1"]);
    assert_eq!(o.status.code(), Some(3));
    let v = r#"{"format": "cluster-slices/9", "kind": "quiver", "data": {"vertices": [], "arrows": []}}"#;
    std::fs::write(d.join("old.json"), v).unwrap();
    assert_eq!(cts(d, &["derived", "build", "--quiver", "old.json"]).status.code(), Some(2));
}

#[test]
fn shipped_window_renders_four_boxes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.json");
    std::fs::write(&path, cluster_slices::golden::D4_CYCLIC_WINDOW).unwrap();
    let o = cts(dir.path(), &["render", "w.json"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).matches("shape=box").count(), 4);
}

#[test]
fn failing_suite_exits_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.json"), cluster_slices::golden::RANK_FIVE_WINDOW.replace("\"321\"\n    ]", "\"531\"\n    ]"))
        .unwrap();
    let o = cts(dir.path(), &["verify", "axioms", "--quiver", "bad.json", "--samples", "50"]);
    assert_eq!(o.status.code(), Some(1));
    let rep: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rep["passed"], false);
}
