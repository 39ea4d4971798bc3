use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const FIVE_STOP_LINE: &str = "\
# s a b c z
temporal 5 6
arc 0 1 3 1
arc 1 2 4 1
arc 1 2 8 1
arc 2 3 5 1
arc 2 3 9 1
arc 3 4 11 1
name 0 s
name 1 a
name 2 b
name 3 c
name 4 z
";

fn drp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_drp")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn five_stop_line(dir: &TempDir) -> String {
    write(dir, "line.tg", FIVE_STOP_LINE)
}

#[test]
fn verify_robust_route() {
    let dir = TempDir::new().unwrap();
    let g = five_stop_line(&dir);
    let out = drp(&["verify", &g, "s", "a", "b", "c", "z", "-x", "1", "-d", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "robust");
}

#[test]
fn verify_broken_route() {
    let dir = TempDir::new().unwrap();
    let g = five_stop_line(&dir);
    let out = drp(&["verify", &g, "0", "1", "2", "3", "4", "-x", "1", "-d", "5"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out).trim(), "broken at prefix 3, budget 1");
}

#[test]
fn verify_table() {
    let dir = TempDir::new().unwrap();
    let g = five_stop_line(&dir);
    let out = drp(&["verify", &g, "s", "a", "b", "c", "z", "-x", "1", "-d", "3", "--table"]);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines, ["s\t(0, 0)", "a\t(4, 7)", "b\t(5, 9)", "c\t(6, 10)", "z\t(12, 15)", "robust"]);
}

#[test]
fn starting_table_is_never_later() {
    let dir = TempDir::new().unwrap();
    let g = five_stop_line(&dir);
    let args = ["verify", &g, "s", "a", "b", "c", "z", "-x", "1", "-d", "3", "--table"];
    let traversal = stdout(&drp(&args));
    let starting = drp(&[&args[..], &["--kind", "starting"]].concat());
    assert_eq!(starting.status.code(), Some(0));
    let last = |s: &str| s.lines().nth(4).unwrap().to_owned();
    assert_eq!(last(&stdout(&starting)), "z\t(12, 15)");
    assert_eq!(last(&traversal), "z\t(12, 15)");
}

#[test]
fn verify_rejects_repeated_vertex() {
    let dir = TempDir::new().unwrap();
    let g = five_stop_line(&dir);
    let out = drp(&["verify", &g, "s", "a", "b", "a", "z", "-x", "1", "-d", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error: route repeats vertex"));
    assert_eq!(stderr(&out).lines().count(), 1);
}

#[test]
fn malformed_file_reports_line() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "bad.tg", "temporal 2 2\narc 0 1 1 1\narc 0 7 1 1\n");
    let out = drp(&["verify", &g, "0", "1", "-x", "0", "-d", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));
}

#[test]
fn missing_file_is_usage_error() {
    let out = drp(&["verify", "/nonexistent/graph.tg", "0", "-x", "0", "-d", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn solve_prints_witness() {
    let dir = TempDir::new().unwrap();
    let g = five_stop_line(&dir);
    for algo in ["pareto", "fes", "tfvs", "brute", "auto"] {
        let out = drp(&["solve", &g, "s", "z", "-x", "1", "-d", "3", "--algo", algo]);
        assert_eq!(out.status.code(), Some(0), "{algo}");
        assert_eq!(stdout(&out).trim(), "s a b c z", "{algo}");
    }
    let out = drp(&["solve", &g, "s", "z", "-x", "1", "-d", "5"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn all_check_agrees() {
    let dir = TempDir::new().unwrap();
    let g = five_stop_line(&dir);
    let out = drp(&["solve", &g, "s", "z", "-x", "1", "-d", "3", "--all-check", "--jobs", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| l.ends_with("yes s a b c z")).count(), 4, "{text}");
    assert_eq!(text.lines().last(), Some("all algorithms agree: yes"));
}

#[test]
fn solve_single_vertex_route() {
    let dir = TempDir::new().unwrap();
    let g = five_stop_line(&dir);
    let out = drp(&["solve", &g, "b", "b", "-x", "2", "-d", "9"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "b");
}

#[test]
fn label_budget_exit_code() {
    let dir = TempDir::new().unwrap();
    let g = five_stop_line(&dir);
    let out = drp(&["solve", &g, "s", "z", "-x", "1", "-d", "3", "--algo", "pareto", "--budget", "1"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn unknown_algorithm_is_usage_error() {
    let dir = TempDir::new().unwrap();
    let g = five_stop_line(&dir);
    let out = drp(&["solve", &g, "s", "z", "-x", "1", "-d", "3", "--algo", "magic"]);
    assert_eq!(out.status.code(), Some(2));
}

fn sidecar(path: &str) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(format!("{path}.json")).unwrap()).unwrap()
}

fn solve_generated(path: &str) -> Option<i32> {
    let meta = sidecar(path);
    let field = |k: &str| meta[k].as_u64().unwrap().to_string();
    drp(&["solve", path, &field("s"), &field("z"), "-x", &field("x"), "-d", &field("delta"), "--algo", "pareto"])
        .status
        .code()
}

#[test]
fn generate_from_satisfiable_cnf() {
    let dir = TempDir::new().unwrap();
    let cnf = write(&dir, "sat.cnf", "c (x1) and (not x1 or x2)\np cnf 2 2\n1 0\n-1 2 0\n");
    let out_path = dir.path().join("sat.tg");
    let out = out_path.to_str().unwrap();
    let status = drp(&["generate", "--from-cnf", &cnf, out]);
    assert_eq!(status.status.code(), Some(0), "{}", stderr(&status));
    let meta = sidecar(out);
    assert_eq!(meta["expected"], serde_json::Value::Bool(true));
    assert_eq!(meta["delta"], 1);
    assert_eq!(meta["x"], 3);
    assert_eq!(solve_generated(out), Some(0));
}

#[test]
fn generate_from_unsatisfiable_cnf() {
    let dir = TempDir::new().unwrap();
    let cnf = write(&dir, "unsat.cnf", "p cnf 1 2\n1 0\n-1 0\n");
    let out_path = dir.path().join("unsat.tg");
    let out = out_path.to_str().unwrap();
    assert_eq!(drp(&["generate", "--from-cnf", &cnf, out]).status.code(), Some(0));
    assert_eq!(sidecar(out)["expected"], serde_json::Value::Bool(false));
    assert_eq!(solve_generated(out), Some(1));
}

#[test]
fn generate_from_mcc() {
    let dir = TempDir::new().unwrap();
    let mcc = write(&dir, "k2.mcc", "mcc 2\nsizes 2 1\nedge 0 1 1 0\n");
    let out_path = dir.path().join("k2.tg");
    let out = out_path.to_str().unwrap();
    let status = drp(&["generate", "--from-mcc", &mcc, out]);
    assert_eq!(status.status.code(), Some(0), "{}", stderr(&status));
    assert_eq!(sidecar(out)["expected"], serde_json::Value::Bool(true));
    assert_eq!(solve_generated(out), Some(0));
}

#[test]
fn generate_random_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let paths: Vec<String> = ["a.tg", "b.tg"]
        .iter()
        .map(|name| dir.path().join(name).to_str().unwrap().to_owned())
        .collect();
    for p in &paths {
        assert_eq!(drp(&["generate", "--random", "n=20 arcs=60 seed=7", p]).status.code(), Some(0));
    }
    assert_eq!(fs::read(&paths[0]).unwrap(), fs::read(&paths[1]).unwrap());
    let json = |p: &str| fs::read_to_string(format!("{p}.json")).unwrap();
    assert_eq!(json(&paths[0]).replace("a.tg", ""), json(&paths[1]).replace("b.tg", ""));
    assert!(fs::read_to_string(&paths[0]).unwrap().starts_with("temporal 20 60\n"));
}

#[test]
fn generate_parse_error() {
    let dir = TempDir::new().unwrap();
    let cnf = write(&dir, "bad.cnf", "p cnf 1 1\n1 x 0\n");
    let out = dir.path().join("o.tg");
    let res = drp(&["generate", "--from-cnf", &cnf, out.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(2));
    assert!(!Path::new(&out).exists());
}

#[test]
fn bench_empty_suite() {
    let out = drp(&["bench", "--suite", "count=0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "algo,n,m,x,delta,answer,micros\n");
}

fn answers(csv: &str) -> Vec<String> {
    csv.lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            format!("{} {}", f[0], f[5])
        })
        .collect()
}

#[test]
fn bench_rows_and_determinism() {
    let suite = "count=10 n=6 arcs=14 seed=11";
    let first = stdout(&drp(&["bench", "--suite", suite, "--algos", "pareto,fes,brute", "--jobs", "3"]));
    assert_eq!(first.lines().count(), 1 + 10 * 3);
    let second = stdout(&drp(&["bench", "--suite", suite, "--algos", "pareto,fes,brute"]));
    assert_eq!(answers(&first), answers(&second));
    // solvers agree per instance
    for chunk in answers(&first).chunks(3) {
        let verdicts: Vec<&str> = chunk.iter().map(|a| a.split(' ').nth(1).unwrap()).collect();
        assert!(verdicts.iter().all(|v| *v == verdicts[0]), "{chunk:?}");
    }
}

#[test]
fn bench_writes_csv_file() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("out.csv");
    let out = drp(&["bench", "--suite", "count=2 n=5 arcs=8", "--algos", "pareto", "--csv", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("algo"));
    assert_eq!(fs::read_to_string(&csv).unwrap().lines().count(), 3);
}
