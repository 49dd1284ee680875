//! The `ghost` binary end to end.

use std::process::{Command, Output};

fn ghost(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ghost")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn dims_table() {
    let o = ghost(&["dims", "--model", "gamma0:5,1,0", "--range", "0..6", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("n,k,d,dnew,dp"));
    assert!(text.lines().any(|l| l == "3,12,1,3,5"));
    assert_eq!(text.lines().count(), 8);
}

#[test]
fn slopes_formats() {
    let o = ghost(&[
        "slopes",
        "--model",
        "gamma0:5,1,0",
        "--weight",
        "int:12",
        "--count",
        "5",
        "--format",
        "csv",
    ]);
    assert_eq!(stdout(&o), "i,slope\n1,1\n2,5\n3,5\n4,5\n5,10\n");
    let o = ghost(&["slopes", "--model", "gamma0:5,1,0", "--weight", "int:13", "--count", "5"]);
    assert_eq!(o.status.code(), Some(2));
    let o =
        ghost(&["np", "--model", "gamma0:5,1,0", "--weight", "int:12", "--count", "5", "--format", "csv"]);
    assert_eq!(stdout(&o), "x,y\n0,0\n1,1\n4,16\n5,26\n");
}

#[test]
fn output_is_deterministic() {
    let args =
        ["slopes", "--model", "gamma0:7,1,2", "--weight", "near:14,5/2", "--count", "60", "--format", "json"];
    let a = ghost(&args);
    let b = ghost(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn thread_count_does_not_change_output() {
    let args = ["coeffs", "--model", "gamma0:5,1,0", "--up-to", "40", "--format", "json"];
    let one =
        Command::new(env!("CARGO_BIN_EXE_ghost")).args(args).env("GHOST_THREADS", "1").output().unwrap();
    let many =
        Command::new(env!("CARGO_BIN_EXE_ghost")).args(args).env("GHOST_THREADS", "4").output().unwrap();
    assert!(one.status.success());
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn ap_reports() {
    let o = ghost(&["ap", "--model", "gamma0:5,1,0", "--weight", "boundary:1/2", "--count", "200"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("Q = 5  Q_r = 5  r = 0  D = 4"));
    let o = ghost(&["ap", "--model", "gamma0:5,1,0", "--weight", "int:12"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("does not apply"));
}

#[test]
fn analysis_commands() {
    let o = ghost(&["dist", "--model", "gamma0:5,1,0", "--n", "100", "--format", "csv"]);
    assert!(stdout(&o).lines().last().unwrap().starts_with("limit,-,1/6,2/3,1/6"));
    let o = ghost(&["gouvea", "--model", "gamma0:5,1,0", "--n", "3", "--format", "csv"]);
    assert!(stdout(&o).contains("3,12,1/12,5/6,1/6,1,true"));
    let o = ghost(&["ss", "--model", "gamma0:5,1,0", "--range", "10..20"]);
    assert!(o.status.success());
    let o = ghost(&["axioms", "--model", "rhobar:13,12,nonsplit,1,0,0,0"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("all axioms hold"));
}

#[test]
fn model_errors_exit_two() {
    let o = ghost(&["dims", "--model", "rhobar:13,3,nonsplit,1,0,0,0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("base window required"));
    assert_eq!(ghost(&["dims", "--model", "gamma0:5,1,0", "--range", "5..1"]).status.code(), Some(2));
    assert_eq!(ghost(&["dims", "--model", "/nonexistent.json"]).status.code(), Some(2));
}

#[test]
fn compare_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    let o = ghost(&[
        "slopes",
        "--model",
        "gamma0:5,1,0",
        "--weight",
        "boundary:1/3",
        "--count",
        "30",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert_eq!(ghost(&["compare", "--file", path.to_str().unwrap()]).status.code(), Some(0));

    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    v["slopes"].as_array_mut().unwrap().reverse();
    let shuffled = dir.path().join("shuffled.json");
    std::fs::write(&shuffled, v.to_string()).unwrap();
    assert_eq!(ghost(&["compare", "--file", shuffled.to_str().unwrap()]).status.code(), Some(0));

    v["slopes"][0] = "1000".into();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, v.to_string()).unwrap();
    let o = ghost(&["compare", "--file", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("first mismatch at index"));

    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{\"p\": 5, \"slopes\": [\"1/0\"]}").unwrap();
    assert_eq!(ghost(&["compare", "--file", broken.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn model_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    std::fs::write(
        &path,
        r#"{"type": "quasilinear", "p": 5, "k_base": 0,
            "d": {"base": [0, 0, 0], "period": 3, "defect": 1},
            "dnew": {"base": [-1, 1, 3], "period": 3, "defect": 4}}"#,
    )
    .unwrap();
    let o = ghost(&[
        "slopes",
        "--model",
        path.to_str().unwrap(),
        "--weight",
        "int:12",
        "--count",
        "5",
        "--format",
        "csv",
    ]);
    assert_eq!(stdout(&o), "i,slope\n1,1\n2,5\n3,5\n4,5\n5,10\n");
}
