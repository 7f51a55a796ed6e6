use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_graphhom"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

const TRIANGLE: &str = "3 3 0\n0 1\n1 2\n0 2\n";
const EULERIAN: &str = r#"{"d": 2, "alpha": ["1/2","1/2"], "beta": [["1","-1"],["-1","1"]]}"#;

#[test]
fn hom_of_triangle_into_eulerian_target() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "triangle.graph", TRIANGLE);
    write(dir.path(), "eulerian-target.json", EULERIAN);
    let o = run(&["hom", "triangle.graph", "eulerian-target.json"], dir.path());
    assert!(o.status.success());
    assert_eq!(stdout(&o), "1\n");
}

#[test]
fn matchings_slice_is_not_psd() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["connmat", "psd", "--param", "matchings", "--k", "1", "--rows", "K1,K2"], dir.path());
    assert_eq!(o.status.code(), Some(3));
    let out = stdout(&o);
    assert!(out.starts_with("not_psd\n"), "{out}");
    assert!(out.contains("witness\t(1,-1)"), "{out}");
}

#[test]
fn enumerate_counts() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["enumerate", "--labels", "1", "--max-nodes", "2", "--max-edges", "1"], dir.path());
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 3);
}

#[test]
fn loops_are_parse_errors() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "loop.graph", "1 1 0\n0 0\n");
    let o = run(&["param", "eval", "eulerian", "loop.graph"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("0 0"), "{err}");
}

#[test]
fn unknown_parameter_and_flag() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "t.graph", TRIANGLE);
    let o = run(&["param", "eval", "nope", "t.graph"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("nope"));
    let o = run(&["enumerate", "--bogus"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn param_eval_chromatic() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "t.graph", TRIANGLE);
    let o = run(&["param", "eval", "chromatic@3", "t.graph"], dir.path());
    assert_eq!(stdout(&o), "6\n");
    let o = run(&["param", "eval", "chromatic@5/2", "t.graph"], dir.path());
    // x(x-1)(x-2) at 5/2
    assert_eq!(stdout(&o), "15/8\n");
}

#[test]
fn flows_count_and_target() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "z3.flow", "group 3\nS 1 2\n");
    write(dir.path(), "t.graph", TRIANGLE);
    let o = run(&["flows", "count", "z3.flow", "t.graph"], dir.path());
    assert_eq!(stdout(&o), "2\n");
    let o = run(&["flows", "target", "z3.flow"], dir.path());
    assert!(o.status.success());
    write(dir.path(), "h.json", &stdout(&o));
    let o = run(&["hom", "t.graph", "h.json"], dir.path());
    assert_eq!(stdout(&o), "2\n");
}

#[test]
fn reconstruct_writes_target_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["reconstruct", "--param", "eulerian", "--seed", "3", "--out", "h.json"];
    let a = run(&args, dir.path());
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    let first = std::fs::read_to_string(dir.path().join("h.json")).unwrap();
    let b = run(&args, dir.path());
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(first, std::fs::read_to_string(dir.path().join("h.json")).unwrap());
    write(dir.path(), "t.graph", TRIANGLE);
    let o = run(&["hom", "t.graph", "h.json"], dir.path());
    assert_eq!(stdout(&o), "1\n");
}

#[test]
fn reconstruct_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["reconstruct", "--param", "matchings"], dir.path());
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("\"not_psd\""));
    let o = run(&["reconstruct", "--param", "simple-support"], dir.path());
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn profile_and_rank_json() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["connmat", "profile", "--param", "chromatic@2", "--k", "2"], dir.path());
    let ranks: Vec<String> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split('\t').nth(1).unwrap().to_string())
        .collect();
    assert_eq!(ranks, ["1", "1", "2"]);
    let o = run(&["--format", "json", "connmat", "rank", "--param", "matchings", "--k", "1", "--rows", "K1,K2"], dir.path());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rank"], 2);
}

#[test]
fn claims_pass_for_eulerian() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["claims", "--param", "eulerian"], dir.path());
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).lines().skip(1).all(|l| l.contains("\tpass\t")));
}

#[test]
fn build_tsv_has_header_of_codes() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["connmat", "build", "--param", "matchings", "--k", "1", "--rows", "K1,K2"], dir.path());
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 3, "{out}");
}
