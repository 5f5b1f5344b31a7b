//! End-to-end CLI coverage: every subcommand, the documented exit codes, and
//! the on-disk formats.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn binary() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_simplicial-nn"))
}

fn run(args: &[&str]) -> Output {
    Command::new(binary())
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_tetrahedron(dir: &Path) -> PathBuf {
    let path = dir.join("tetra.json");
    std::fs::write(
        &path,
        r#"{"ambient_dim": 3,
            "vertices": [[0,0,0],[1,0,0],[0,1,0],[0,0,1]],
            "maximal_simplices": [[0,1,2,3]]}"#,
    )
    .unwrap();
    path
}

fn write_triangle(dir: &Path) -> PathBuf {
    let path = dir.join("tri.json");
    std::fs::write(
        &path,
        r#"{"ambient_dim": 2,
            "vertices": [[0,0],[1,0],[0,1]],
            "maximal_simplices": [[0,1,2]]}"#,
    )
    .unwrap();
    path
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn validate_accepts_good_complex() {
    let dir = tempfile::tempdir().unwrap();
    let tetra = write_tetrahedron(dir.path());
    let out = run(&["complex", "validate", tetra.to_str().unwrap()]);
    assert!(out.status.success(), "{out:?}");
    let value = stdout_json(&out);
    assert_eq!(value["dim"], 3);
    assert_eq!(value["maximal_simplices"], 1);
}

#[test]
fn validate_rejects_degenerate_complex_with_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"ambient_dim": 2,
            "vertices": [[0,0],[1,1],[2,2]],
            "maximal_simplices": [[0,1,2]]}"#,
    )
    .unwrap();
    let out = run(&["complex", "validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("affinely dependent"), "{err}");
}

#[test]
fn usage_errors_exit_2() {
    let out = run(&["complex", "validate"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn subdivide_and_mesh_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let tri = write_triangle(dir.path());
    let sd = dir.path().join("tri-sd.json");
    let out = run(&[
        "complex",
        "subdivide",
        tri.to_str().unwrap(),
        "--t",
        "1",
        "--out",
        sd.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");
    let value = stdout_json(&out);
    assert_eq!(value["maximal_simplices"], 6);
    assert_eq!(value["vertices"], 7);

    let out = run(&["complex", "mesh", sd.to_str().unwrap()]);
    assert!(out.status.success());
    let mesh = stdout_json(&out)["mesh"].as_f64().unwrap();
    assert!((mesh - 5.0_f64.sqrt() / 3.0).abs() < 1e-9);
}

#[test]
fn full_pipeline_build_map_synth_eval_verify() {
    let dir = tempfile::tempdir().unwrap();
    let tetra = write_tetrahedron(dir.path());
    let tri = write_triangle(dir.path());
    let map = dir.path().join("map.json");
    let out = run(&[
        "approx",
        "build-map",
        "--source",
        tetra.to_str().unwrap(),
        "--target",
        tri.to_str().unwrap(),
        "--fn",
        "ball-projection",
        "--max-t",
        "0",
        "--resolution",
        "4",
        "--out",
        map.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");
    let map_value: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&map).unwrap()).unwrap();
    assert_eq!(map_value["assignment"].as_array().unwrap().len(), 4);

    let net = dir.path().join("net.json");
    let out = run(&[
        "net",
        "synth",
        "--source",
        tetra.to_str().unwrap(),
        "--target",
        tri.to_str().unwrap(),
        "--map",
        map.to_str().unwrap(),
        "--out",
        net.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");
    let value = stdout_json(&out);
    assert_eq!(value["first_hidden_width"], 4);
    assert_eq!(value["second_hidden_width"], 3);

    let out = run(&[
        "net",
        "eval",
        "--net",
        net.to_str().unwrap(),
        "--point",
        "0.25,0.25,0.25",
    ]);
    assert!(out.status.success(), "{out:?}");
    let value = stdout_json(&out);
    let output = value["output"].as_array().unwrap();
    assert_eq!(output.len(), 2);

    let out = run(&[
        "verify",
        "equivalence",
        "--net",
        net.to_str().unwrap(),
        "--source",
        tetra.to_str().unwrap(),
        "--target",
        tri.to_str().unwrap(),
        "--map",
        map.to_str().unwrap(),
        "--samples",
        "200",
        "--seed",
        "7",
    ]);
    assert!(out.status.success(), "{out:?}");
    let value = stdout_json(&out);
    assert_eq!(value["pass"], true);
    assert!(value["sup_error_estimate"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn eval_outside_domain_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let tetra = write_tetrahedron(dir.path());
    let tri = write_triangle(dir.path());
    let map = dir.path().join("map.json");
    std::fs::write(
        &map,
        format!(
            r#"{{"source": "{}", "target": "{}", "assignment": [0, 1, 2, 2]}}"#,
            tetra.display(),
            tri.display()
        ),
    )
    .unwrap();
    let net = dir.path().join("net.json");
    let out = run(&[
        "net",
        "synth",
        "--source",
        tetra.to_str().unwrap(),
        "--target",
        tri.to_str().unwrap(),
        "--map",
        map.to_str().unwrap(),
        "--out",
        net.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let out = run(&[
        "net",
        "eval",
        "--net",
        net.to_str().unwrap(),
        "--point",
        "1,1,1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("outside"));
}

#[test]
fn example_ball_writes_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let out = run(&[
        "example",
        "ball",
        "--t1",
        "0",
        "--t2",
        "0",
        "--samples",
        "64",
        "--seed",
        "1",
        "--report",
        report.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");
    let contents = std::fs::read(&report).unwrap();
    assert_eq!(contents, out.stdout);
    let value: serde_json::Value = serde_json::from_slice(&contents).unwrap();
    assert_eq!(value["assignment"], serde_json::json!([0, 1, 2, 2]));
}

#[test]
fn build_map_rejects_unknown_builtin() {
    let dir = tempfile::tempdir().unwrap();
    let tri = write_triangle(dir.path());
    let out = run(&[
        "approx",
        "build-map",
        "--source",
        tri.to_str().unwrap(),
        "--target",
        tri.to_str().unwrap(),
        "--fn",
        "no-such-function",
        "--max-t",
        "0",
        "--resolution",
        "3",
        "--out",
        dir.path().join("m.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown builtin"));
}
