use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use tempfile::TempDir;

struct Sandbox {
    dir: TempDir,
}

impl Sandbox {
    fn new() -> Self {
        let s = Sandbox { dir: tempfile::tempdir().unwrap() };
        s.write("seg.json", r#"{"dim":1,"shape":{"type":"box","min":[0],"max":[1]}}"#);
        s.write("ball.json", r#"{"dim":2,"shape":{"type":"ball","center":[0,0],"radius":1}}"#);
        s.write("small.json", r#"{"dim":2,"shape":{"type":"box","min":[-0.5,-0.5],"max":[0.5,0.5]}}"#);
        s.write("big.json", r#"{"dim":2,"shape":{"type":"box","min":[-1,-1],"max":[1,1]}}"#);
        s.write("tri.json", r#"{"dim":2,"shape":{"type":"hpolytope","vertices":[[0,0],[1,0],[0,1]]}}"#);
        s
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn write(&self, name: &str, text: &str) -> PathBuf {
        let p = self.path(name);
        std::fs::write(&p, text).unwrap();
        p
    }

    fn run(&self, args: &[&str]) -> Output {
        Command::new(env!("CARGO_BIN_EXE_nlperim")).current_dir(self.dir.path()).env("NLPERIM_CACHE", self.path("cache.json")).args(args).output().unwrap()
    }

    fn json(&self, args: &[&str]) -> Value {
        let out = self.run(args);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        serde_json::from_slice(&out.stdout).unwrap()
    }
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn unit_segment_has_the_closed_form_perimeter() {
    let s = Sandbox::new();
    let v = s.json(&["perimeter", "--body", "seg.json", "--kernel", "frac:1:0.5", "--seed", "17"]);
    assert_eq!(v["result"]["perimeter"]["value"].as_f64(), Some(8.0));
    assert_eq!(v["seed"].as_u64(), Some(17));
    assert_eq!(v["command"], "perimeter");
}

#[test]
fn disc_agrees_with_the_line_sampler() {
    let s = Sandbox::new();
    let slice = s.json(&["perimeter", "--body", "ball.json", "--kernel", "frac:2:0.5", "--rel-tol", "1e-3"]);
    let mc = s.json(&["perimeter", "--body", "ball.json", "--kernel", "frac:2:0.5", "--rel-tol", "3e-3", "--backend", "montecarlo"]);
    let (a, b) = (&slice["result"]["perimeter"], &mc["result"]["perimeter"]);
    let diff = (a["value"].as_f64().unwrap() - b["value"].as_f64().unwrap()).abs();
    let sigma = a["error"].as_f64().unwrap().hypot(b["error"].as_f64().unwrap());
    assert!(diff <= 3.0 * sigma, "{diff} vs {sigma}");
    assert_eq!(b["method"], "montecarlo");
}

#[test]
fn malformed_body_names_the_field() {
    let s = Sandbox::new();
    s.write("bad.json", r#"{"dim":2,"shape":{"type":"box","min":[0,0],"maxx":[1,1]}}"#);
    let o = s.run(&["perimeter", "--body", "bad.json", "--kernel", "frac:2:0.5"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("maxx"));
    let o = s.run(&["perimeter", "--body", "seg.json", "--kernel", "frac:1:1.5"]);
    assert_eq!(o.status.code(), Some(3));
    let o = s.run(&["perimeter", "--body", "seg.json", "--kernel", "gauss:1"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn deficit_of_equal_bodies_is_degenerate() {
    let s = Sandbox::new();
    let v = s.json(&["deficit", "--inner", "small.json", "--outer", "small.json", "--kernel", "frac:2:0.5", "--method", "cor14"]);
    let r = &v["result"]["reports"]["cor14"];
    assert_eq!(r["bound_value"].as_f64(), Some(0.0));
    assert_eq!(r["provenance"]["degenerate"], true);
}

#[test]
fn nested_squares_give_ordered_bounds() {
    let s = Sandbox::new();
    let v = s.json(&["deficit", "--inner", "small.json", "--outer", "big.json", "--kernel", "frac:2:0.5", "--method", "all"]);
    let r = &v["result"]["reports"];
    let b = |k: &str| (r[k]["bound_value"].as_f64().unwrap(), r[k]["bound_error"].as_f64().unwrap());
    let (c15, c14, opt) = (b("cor15"), b("cor14"), b("thm13_optimized"));
    assert!(c15.0 <= c14.0 + 3.0 * c15.1.hypot(c14.1));
    assert!(c14.0 <= opt.0 + 3.0 * c14.1.hypot(opt.1));
    for k in ["cor15", "cor14", "thm13_optimized"] {
        assert_eq!(r[k]["satisfied"], true, "{k}");
    }
    assert!(s.path("cache.json").exists());
}

#[test]
fn reversed_pair_is_not_nested() {
    let s = Sandbox::new();
    let o = s.run(&["deficit", "--inner", "big.json", "--outer", "small.json", "--kernel", "frac:2:0.5"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("NotNested"));
    let o = s.run(&["monotonicity", "--inner", "big.json", "--outer", "small.json", "--kernel", "frac:2:0.5"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn unreachable_accuracy_is_a_budget_failure() {
    let s = Sandbox::new();
    let o = s.run(&["perimeter", "--body", "ball.json", "--kernel", "frac:2:0.5", "--backend", "montecarlo", "--rel-tol", "1e-9", "--max-samples", "1000"]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn config_file_rejects_unknown_keys() {
    let s = Sandbox::new();
    s.write("ok.json", r#"{"seed": 99, "format": "csv"}"#);
    let o = s.run(&["perimeter", "--body", "seg.json", "--kernel", "frac:1:0.5", "--config", "ok.json"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let seed = header.iter().position(|h| *h == "seed").unwrap();
    assert_eq!(row[seed], "99");
    assert!(header.contains(&"result.perimeter.value"));

    s.write("bad.json", r#"{"seed": 1, "tolerance": 2}"#);
    let o = s.run(&["perimeter", "--body", "seg.json", "--kernel", "frac:1:0.5", "--config", "bad.json"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("tolerance"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let s = Sandbox::new();
    let args = ["perimeter", "--body", "tri.json", "--kernel", "frac:2:0.4", "--backend", "montecarlo", "--rel-tol", "2e-2", "--seed", "5"];
    let a = s.run(&args);
    let b = s.run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = s.run(&["perimeter", "--body", "tri.json", "--kernel", "frac:2:0.4", "--backend", "montecarlo", "--rel-tol", "2e-2", "--seed", "6"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn remaining_commands_report() {
    let s = Sandbox::new();
    let h = s.json(&["hausdorff", "--inner", "small.json", "--outer", "big.json"]);
    assert!((h["result"]["h"].as_f64().unwrap() - 0.5f64.sqrt()).abs() < 1e-12);

    let v = s.json(&["symmetrize", "--body", "tri.json", "--nu", "0,1", "--nodes", "256"]);
    let (a, b) = (v["result"]["volume"].as_f64().unwrap(), v["result"]["symmetral_volume"].as_f64().unwrap());
    assert!((a - b).abs() < 1e-3 * a);
    assert_eq!(v["result"]["symmetral"]["shape"]["type"], "profile");
    let o = s.run(&["symmetrize", "--body", "tri.json", "--nu", "0,1", "--nodes", "4"]);
    assert_eq!(o.status.code(), Some(3));

    s.write("far.json", r#"{"dim":2,"shape":{"type":"hpolytope","vertices":[[1,1],[2,1],[1,2]]}}"#);
    let i = s.json(&["interaction", "--body", "small.json", "--other", "far.json", "--kernel", "frac:2:0.5"]);
    assert!(i["result"]["interaction"]["value"].as_f64().unwrap() > 0.0);
    let o = s.run(&["interaction", "--body", "small.json", "--other", "tri.json", "--kernel", "frac:2:0.5"]);
    assert_eq!(o.status.code(), Some(3));
    let m = s.json(&["monotonicity", "--inner", "small.json", "--outer", "big.json", "--kernel", "frac:2:0.5"]);
    assert_eq!(m["result"]["pass"], true);

    let d = s.json(&["oned", "--kernel", "frac:1:0.3", "--inner-length", "1", "--outer-length", "2"]);
    let exact = d["result"]["closed_form"].as_f64().unwrap();
    assert!((d["result"]["deficit"]["value"].as_f64().unwrap() - exact).abs() < 1e-9 * exact);
    assert_eq!(d["result"]["two_decreasing"]["satisfied"], true);
}

#[test]
fn optimize_f_writes_a_trace() {
    let s = Sandbox::new();
    let v = s.json(&["optimize-f", "--kernel", "frac:2:0.5", "--radius", "1", "--height", "1", "--volume", "1", "--trace", "trace.jsonl"]);
    let r = &v["result"];
    let (f, pc, m) = (r["f"]["value"].as_f64().unwrap(), r["cone_perimeter"]["value"].as_f64().unwrap(), r["m"]["value"].as_f64().unwrap());
    assert!(f > 0.0);
    assert!((f - (pc - 2.0 * m)).abs() < 1e-9 * pc);
    let trace = std::fs::read_to_string(s.path("trace.jsonl")).unwrap();
    let rows: Vec<Value> = trace.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(rows.len() > 10);
    assert!(rows.iter().all(|r| r["objective"].as_f64().unwrap() <= m * 1.01));
}

fn tamper(path: &Path) {
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let entries = v["entries"].as_object_mut().unwrap();
    let first = entries.keys().next().unwrap().clone();
    let x = entries[&first]["value"].as_f64().unwrap();
    entries.get_mut(&first).unwrap()["value"] = Value::from(x * 1.05);
    std::fs::write(path, serde_json::to_string(&v).unwrap()).unwrap();
}

#[test]
fn selftest_detects_a_tampered_cache() {
    let s = Sandbox::new();
    s.json(&["deficit", "--inner", "small.json", "--outer", "big.json", "--kernel", "frac:2:0.5", "--method", "cor15"]);
    let o = s.run(&["selftest", "--criteria", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    tamper(&s.path("cache.json"));
    let o = s.run(&["selftest", "--criteria", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("failed validation"));
}

#[test]
fn full_selftest_emits_csv() {
    let s = Sandbox::new();
    let o = s.run(&["selftest", "--suite", "full", "--criteria", "1,2,11"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = String::from_utf8(o.stdout.clone()).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    let header: Vec<&str> = lines[0].split(',').collect();
    for k in ["id", "passed", "worst", "threshold", "seed", "suite"] {
        assert!(header.contains(&k), "{k}");
    }
    assert!(stderr(&o).contains("criterion  1"));
    let o = s.run(&["selftest", "--criteria", "12"]);
    assert_eq!(o.status.code(), Some(3));
}
