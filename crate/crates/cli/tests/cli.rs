use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const PATH4: &str = r#"{"n": 4, "d": [[0,1,2,3],[1,0,1,2],[3,1,0,1],[5,3,1,0]]}"#;
const BAD_PATH: &str = r#"{"n": 3, "d": [[0,1,2],[1,0,1],[2,1,0]]}"#;
const TWO_CLAUSES: &str = "p nae 4 2\n1 -2 3 0\n1 2 4 0\n";

fn ptgr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ptgr")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn realize_tree_then_verify() {
    let dir = TempDir::new().unwrap();
    let m = write(dir.path(), "m.json", PATH4);
    let w = dir.path().join("w.json");
    let o = ptgr(&["realize", "--matrix", s(&m), "--delta", "3", "--out", s(&w)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());
    let o = ptgr(&["verify", "--graph", s(&w), "--matrix", s(&m)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\"equal\":true"));

    let o = ptgr(&["oracle", "--graph", s(&w)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("[5, 3, 1, 0]"));
}

#[test]
fn realize_all_shifts() {
    let dir = TempDir::new().unwrap();
    let m = write(dir.path(), "m.json", PATH4);
    let o = ptgr(&["realize", "--matrix", s(&m), "--delta", "3", "--all-shifts"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 3);

    let tri = write(dir.path(), "t.json", r#"{"n":3,"d":[[0,1,1],[1,0,1],[1,1,0]]}"#);
    let o = ptgr(&["realize", "--matrix", s(&tri), "--delta", "3", "--all-shifts"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn realize_infeasible_and_malformed() {
    let dir = TempDir::new().unwrap();
    let bad = write(dir.path(), "bad.json", BAD_PATH);
    let o = ptgr(&["realize", "--matrix", s(&bad), "--delta", "3"]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("delay-conflict") || err.contains("certify-mismatch"), "{err}");

    let garbage = write(dir.path(), "g.json", "not json at all");
    assert_eq!(ptgr(&["realize", "--matrix", s(&garbage), "--delta", "3"]).status.code(), Some(2));
    let asym = write(dir.path(), "a.json", r#"{"n":2,"d":[[0,1],[2,0]]}"#);
    assert_eq!(ptgr(&["realize", "--matrix", s(&asym), "--delta", "3"]).status.code(), Some(2));
    let m = write(dir.path(), "m.json", PATH4);
    assert_eq!(ptgr(&["realize", "--matrix", s(&m), "--delta", "3", "--method", "cycle"]).status.code(), Some(2));
}

#[test]
fn exact_budget_and_stats() {
    let dir = TempDir::new().unwrap();
    // a 4-cycle with a chord is neither a tree nor a cycle
    let g = write(
        dir.path(),
        "g.json",
        r#"{"n":4,"delta":3,"edges":[{"u":0,"v":1,"label":1},{"u":1,"v":2,"label":3},{"u":2,"v":3,"label":2},{"u":0,"v":3,"label":2},{"u":0,"v":2,"label":3}]}"#,
    );
    let m = dir.path().join("m.json");
    assert_eq!(ptgr(&["oracle", "--graph", s(&g), "--out", s(&m)]).status.code(), Some(0));
    let st = dir.path().join("st.json");
    let o = ptgr(&["realize", "--matrix", s(&m), "--delta", "3", "--stats", s(&st)]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&st).unwrap()).unwrap();
    assert_eq!(v["verdict"], "realized");
    assert!(v["expanded"].as_u64().unwrap() > 0);

    let o = ptgr(&["realize", "--matrix", s(&m), "--delta", "3", "--budget", "1"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn verify_reports_mismatch_and_dimension() {
    let dir = TempDir::new().unwrap();
    let m = write(dir.path(), "m.json", PATH4);
    let w = dir.path().join("w.json");
    ptgr(&["realize", "--matrix", s(&m), "--delta", "3", "--out", s(&w)]);
    let off = write(dir.path(), "off.json", r#"{"n": 4, "d": [[0,1,2,3],[1,0,1,2],[3,1,0,1],[6,3,1,0]]}"#);
    let o = ptgr(&["verify", "--graph", s(&w), "--matrix", s(&off)]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["mismatchCount"], 1);
    assert_eq!(v["mismatches"][0], serde_json::json!({"actual": 5, "expected": 6, "i": 3, "j": 0}));

    let small = write(dir.path(), "s.json", BAD_PATH);
    assert_eq!(ptgr(&["verify", "--graph", s(&w), "--matrix", s(&small)]).status.code(), Some(2));
}

#[test]
fn path_duration_command() {
    let dir = TempDir::new().unwrap();
    let g =
        write(dir.path(), "g.json", r#"{"n":3,"delta":5,"edges":[{"u":0,"v":1,"label":1},{"u":1,"v":2,"label":2}]}"#);
    let o = ptgr(&["path-duration", "--graph", s(&g), "--path", "0,1,2"]);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), "2\n"));
    let o = ptgr(&["path-duration", "--graph", s(&g), "--path", "2,1,0"]);
    assert_eq!(stdout(&o), "5\n");
    assert_eq!(ptgr(&["path-duration", "--graph", s(&g), "--path", "0,2"]).status.code(), Some(2));
}

#[test]
fn gen_nae_commands() {
    let dir = TempDir::new().unwrap();
    let cnf = write(dir.path(), "f.cnf", TWO_CLAUSES);
    let o = ptgr(&["gen-nae", "--cnf", s(&cnf), "--delta", "3", "--witness"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["vertexMap"]["v"], 14);
    assert_eq!(v["matrix"]["n"], 15);
    assert_eq!(v["witness"]["delta"], 3);

    let prefix = dir.path().join("inst");
    let o = ptgr(&["gen-nae", "--cnf", s(&cnf), "--delta", "3", "--witness", "--out", s(&prefix)]);
    assert_eq!(o.status.code(), Some(0));
    let m = dir.path().join("inst.matrix.json");
    let w = dir.path().join("inst.witness.json");
    assert!(dir.path().join("inst.vertexmap.json").exists());
    assert_eq!(ptgr(&["verify", "--graph", s(&w), "--matrix", s(&m)]).status.code(), Some(0));

    assert_eq!(ptgr(&["gen-nae", "--cnf", s(&cnf), "--delta", "2"]).status.code(), Some(2));
    let junk = write(dir.path(), "j.cnf", "p nae 3 1\n1 2 0\n");
    assert_eq!(ptgr(&["gen-nae", "--cnf", s(&junk), "--delta", "3"]).status.code(), Some(2));

    let mut unsat = String::from("p nae 3 8\n");
    for mask in 0..8 {
        let lit = |b: i32, v: i32| if mask >> b & 1 == 1 { -v } else { v };
        unsat.push_str(&format!("{} {} {} 0\n", lit(0, 1), lit(1, 2), lit(2, 3)));
    }
    let unsat = write(dir.path(), "u.cnf", &unsat);
    assert_eq!(ptgr(&["gen-nae", "--cnf", s(&unsat), "--delta", "3", "--witness"]).status.code(), Some(1));
    assert_eq!(ptgr(&["gen-nae", "--cnf", s(&unsat), "--delta", "3"]).status.code(), Some(0));
}
