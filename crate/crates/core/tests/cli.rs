use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn sethforge(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sethforge")).args(args).current_dir(dir).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn workspace(cnf: &str) -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("phi.cnf"), cnf).unwrap();
    dir
}

#[test]
fn reduce_then_solve_with_witness() {
    let dir = workspace("p cnf 2 2\n1 -2 0\n2 0\n");
    let out = sethforge(&["reduce", "phi.cnf", "--problem", "ds", "-o", "b", "--dot"], dir.path());
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).starts_with("phi DominatingSet:"), "{}", stdout(&out));
    for ext in ["gr", "td", "json", "dot"] {
        assert!(dir.path().join("b").join(format!("phi.{ext}")).exists(), "{ext}");
    }
    let out = sethforge(&["solve", "b/phi.json", "--witness"], dir.path());
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).starts_with("yes "));
    let w = fs::read_to_string(dir.path().join("b/phi.witness.json")).unwrap();
    assert!(w.starts_with(r#"{"vertex_set":["#), "{w}");
}

#[test]
fn unsatisfiable_formula_is_a_no_instance() {
    let dir = workspace("p cnf 1 2\n1 0\n-1 0\n");
    assert!(sethforge(&["reduce", "phi.cnf", "--problem", "maxcut"], dir.path()).status.success());
    let out = sethforge(&["solve", "phi"], dir.path());
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).starts_with("no "), "{}", stdout(&out));
    // The brute-force oracle refuses anything this large.
    let out = sethforge(&["solve", "phi", "--oracle", "brute"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error: size-cap:"), "{}", stderr(&out));
}

#[test]
fn verify_is_deterministic_and_writes_json() {
    let dir = workspace("p cnf 2 1\n1 -2 0\n");
    let args = ["verify", "phi.cnf", "--problem", "is,maxcut,packing,partition", "--json", "r.json"];
    let a = sethforge(&args, dir.path());
    let b = sethforge(&args, dir.path());
    assert!(a.status.success(), "{}{}", stdout(&a), stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(report["pass"], true);
    assert_eq!(report["rows"].as_array().unwrap().len(), 4);
    assert!(stdout(&a).lines().all(|l| l == l.trim_end()));
    assert!(!stdout(&a).contains("elapsed"));
    let timed = sethforge(&["verify", "phi.cnf", "--problem", "is", "--timings"], dir.path());
    assert!(stdout(&timed).contains("elapsed"));
}

#[test]
fn selftest_single_suite() {
    let dir = tempfile::tempdir().unwrap();
    let out = sethforge(&["selftest", "--only", "arrow,partition-check", "--json", "s.json"], dir.path());
    assert!(out.status.success(), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("PASS arrow"));
    assert!(text.contains("partition-check"));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("s.json")).unwrap()).unwrap();
    assert_eq!(report["suites"].as_array().unwrap().len(), 2);
    assert!(report["partition"]["equivalence_holds"].is_boolean());
}

#[test]
fn exit_codes_follow_error_categories() {
    let dir = workspace("p cnf 0 0\n");
    fs::write(dir.path().join("bad.cnf"), "p cnf 1 1\n5 0\n").unwrap();

    let out = sethforge(&["reduce", "phi.cnf", "--problem", "is"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error: degenerate-input:"), "{}", stderr(&out));

    let out = sethforge(&["reduce", "bad.cnf", "--problem", "is"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error: parse:"), "{}", stderr(&out));

    let out = sethforge(&["solve", "missing"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error: io:"), "{}", stderr(&out));

    fs::write(dir.path().join("ok.cnf"), "p cnf 2 1\n1 2 0\n").unwrap();
    assert!(sethforge(&["reduce", "ok.cnf", "--problem", "is"], dir.path()).status.success());
    fs::write(dir.path().join("ok.td"), "s td 1 1 3\nb 1 1\n").unwrap();
    let out = sethforge(&["solve", "ok"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error: invalid-bundle:"), "{}", stderr(&out));

    let out = Command::new(env!("CARGO_BIN_EXE_sethforge"))
        .args(["solve", "ok"])
        .env("SETHFORGE_STATE_CAP", "zero")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = sethforge(&["reduce", "ok.cnf", "--problem", "clique"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn state_cap_is_a_runtime_failure() {
    let dir = workspace("p cnf 2 1\n1 -2 0\n");
    assert!(sethforge(&["reduce", "phi.cnf", "--problem", "ds"], dir.path()).status.success());
    let out = Command::new(env!("CARGO_BIN_EXE_sethforge"))
        .args(["solve", "phi"])
        .env("SETHFORGE_STATE_CAP", "1")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error: state-cap:"), "{}", stderr(&out));
}
