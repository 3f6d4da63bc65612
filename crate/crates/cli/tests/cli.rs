use std::path::PathBuf;
use std::process::Command;

use serde_json::{json, Value};

fn tmp(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write(name: &str, v: &Value) -> String {
    let p = tmp(name);
    std::fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p.to_string_lossy().into_owned()
}

fn run_raw(args: &[&str], env: &[(&str, &str)]) -> (i32, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ctxlab"));
    cmd.args(args).env_remove("CTXLAB_GUARDRAIL");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn run(args: &[&str]) -> Value {
    let (code, stdout) = run_raw(args, &[]);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(code, 0, "{stdout}");
    assert_eq!(v["schema"], "ctxlab/1");
    assert_eq!(v["status"], "ok");
    v["payload"].clone()
}

fn saved(name: &str, args: &[&str]) -> String {
    let (code, stdout) = run_raw(args, &[]);
    assert_eq!(code, 0);
    let p = tmp(name);
    std::fs::write(&p, stdout).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn chsh_vertices_and_rows() {
    let chsh = saved("chsh.json", &["scenario", "circle", "--n", "4"]);
    let v = run(&["vertices", "enumerate", &chsh]);
    assert_eq!(v["count"], 24);
    assert_eq!(v["deterministic"], 16);
    let rows = run(&["ineq", "circle", "--n", "4"]);
    assert_eq!(rows.as_array().unwrap().len(), 8);
    let hrep = run(&["ineq", "hrep", &chsh]);
    assert_eq!(hrep.as_array().unwrap().len(), 16);
}

#[test]
fn circle_method_agrees_with_lp_on_a_flower() {
    let s = saved("flower.json", &["scenario", "flower", "--sizes", "2,2"]);
    let generated = run(&["generate", "vertices", &s, "--certify", "full"]);
    let all = run(&["vertices", "enumerate", &s]);
    let mut points: Vec<Value> = generated["vertices"].as_array().unwrap().iter().map(|v| v["values"].clone()).collect();
    points.extend(all["vertices"].as_array().unwrap().iter().map(|v| v["values"].clone()));
    let mut contextual = 0;
    for (i, values) in points.iter().enumerate() {
        let p = write(&format!("flower-p{i}.json"), &json!({"values": values}));
        let auto = run(&["check", "contextual", &s, &p, "--method", "auto"]);
        let lp = run(&["check", "contextual", &s, &p, "--method", "lp"]);
        assert_eq!(auto["method"], "circles");
        assert_eq!(auto["verdict"], lp["verdict"]);
        if lp["verdict"] == "contextual" {
            contextual += 1;
        }
    }
    assert_eq!(contextual, 2 * generated["count"].as_u64().unwrap());
}

#[test]
fn output_is_reproducible() {
    let a = run_raw(&["generate", "pr", "--n", "4"], &[]);
    let b = run_raw(&["generate", "pr", "--n", "4"], &[]);
    assert_eq!(a, b);
}

#[test]
fn exit_codes() {
    assert_eq!(run_raw(&["frobnicate"], &[]).0, 1);
    assert_eq!(run_raw(&["vertices", "enumerate", "/nonexistent.json"], &[]).0, 1);
    let big = saved("c7.json", &["scenario", "circle", "--n", "7"]);
    let (code, out) = run_raw(&["vertices", "enumerate", &big], &[]);
    assert_eq!(code, 2);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["status"], "error");
    assert_eq!(v["payload"]["kind"], "guardrail");
    let chsh = saved("chsh-g.json", &["scenario", "circle", "--n", "4"]);
    let p = write("uniform4.json", &json!({"scenario": chsh, "values": {
        "t1": "1/2", "t2": "1/2", "t3": "1/2", "t4": "1/2",
        "(c,v0)": "1/2", "(c,v1)": "1/2", "(c,v2)": "1/2", "(c,v3)": "1/2"}}));
    let (code, out) = run_raw(&["check", "contextual", &p, "--method", "lp"], &[("CTXLAB_GUARDRAIL", "8")]);
    assert_eq!(code, 2, "{out}");
    let ok = run(&["check", "contextual", &p, "--method", "lp"]);
    assert_eq!(ok["verdict"], "noncontextual");
}

#[test]
fn diamond_elimination_with_trace() {
    let mut rows = Vec::new();
    for (a, b) in [("s01", "s12"), ("r01", "r12")] {
        for (x, y) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
            rows.push(json!({"coeffs": {a: x.to_string(), b: y.to_string(), "s02": (x * y).to_string()}, "rhs": "-1", "sense": "geq"}));
        }
    }
    let sys = write(
        "diamond.json",
        &json!({"mode": "expectation", "variables": ["s01", "s12", "s02", "r01", "r12"], "rows": rows}),
    );
    let trace = tmp("diamond-trace.json");
    let out = run(&["fm", "eliminate", &sys, "--vars", "s02", "--trace", &trace.to_string_lossy()]);
    assert_eq!(out["rows"].as_array().unwrap().len(), 8);
    for r in out["rows"].as_array().unwrap() {
        assert_eq!(r["rhs"], "-2");
    }
    let steps: Value = serde_json::from_str(&std::fs::read_to_string(trace).unwrap()).unwrap();
    assert_eq!(steps[0]["variable"], "s02");
}

#[test]
fn disk_extension() {
    let half = write("disk-half.json", &json!({"values": {"b1": "1/2", "b2": "1/2", "b3": "1/2", "b4": "1/2"}}));
    let out = run(&["extend", "disk", "--n", "4", &half]);
    assert_eq!(out["status"], "extended");
    assert_eq!(out["values"]["z1"], "1/2");
    let bad = write("disk-bad.json", &json!({"values": {"b1": "1", "b2": "1", "b3": "1", "b4": "0"}}));
    let out = run(&["extend", "disk", "--n", "4", &bad]);
    assert_eq!(out["status"], "violated");
    let bouquet = write(
        "bouquet.json",
        &json!({"values": {"d1.b2": "1", "d1.b3": "1", "d2.b2": "1", "d2.b3": "0"}}),
    );
    let out = run(&["extend", "bouquet", "--sizes", "3,3", &bouquet]);
    assert_eq!(out["extends"], false);
}

#[test]
fn collapse_and_bell_rows() {
    let c4 = saved("c4.json", &["scenario", "circle", "--n", "4"]);
    let cm = run(&["collapse", "graph", &c4, "--edges", "t4"]);
    assert_eq!(cm["target"]["edges"].as_array().unwrap().len(), 3);
    let chsh = saved("chsh-rows.json", &["ineq", "circle", "--n", "4"]);
    let rows = run(&["collapse", "inequality", &c4, "--edges", "t4", &chsh]);
    let nontrivial: Vec<&Value> = rows
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| {
            let low: i64 = r["coeffs"].as_object().unwrap().values().map(|c| c.as_str().unwrap().parse::<i64>().unwrap().min(0)).sum();
            low < r["rhs"].as_str().unwrap().parse::<i64>().unwrap()
        })
        .collect();
    assert_eq!(nontrivial.len(), 4);
    let c3 = saved("c3.json", &["scenario", "circle", "--n", "3"]);
    let p = write("c3-det.json", &json!({"scenario": c3, "values": {
        "t1": "1", "t2": "1", "t3": "1", "(c,v0)": "1", "(c,v1)": "1", "(c,v2)": "1"}}));
    let pushed = run(&["collapse", "distribution", &c4, "--edges", "t4", &p]);
    assert_eq!(pushed["values"]["t4"], "1");
}

#[test]
fn orbits_and_probe() {
    let k22 = saved("k22.json", &["scenario", "bipartite", "--m", "2", "--n", "2"]);
    let ineq = write(
        "sample-bell.json",
        &json!({"coeffs": {"t00": "1", "t10": "1", "t11": "1", "t01": "-1"}, "rhs": "2", "sense": "leq"}),
    );
    let out = run(&["orbit", "inequality", &k22, &ineq]);
    assert_eq!(out["size"], 8);
    let pr = run(&["generate", "pr", "--n", "4"]);
    let p = write("pr0.json", &json!({"values": pr["vertices"][0]}));
    let c4 = saved("c4-orbit.json", &["scenario", "circle", "--n", "4"]);
    assert_eq!(run(&["orbit", "distribution", &c4, &p])["size"], 8);
    let chsh = saved("chsh-probe.json", &["ineq", "circle", "--n", "4"]);
    let probe = run(&["probe", "loop-support", &c4, &chsh]);
    assert!(probe.as_array().unwrap().iter().all(|r| r["closed_walks"] == true));
}

#[test]
fn envelopes_feed_back_in() {
    let disk = saved("disk5.json", &["scenario", "disk", "--n", "5"]);
    let values: serde_json::Map<String, Value> = ["b1", "b2", "b3", "b4", "b5", "z1", "z2"]
        .iter()
        .map(|e| (e.to_string(), json!("1/2")))
        .collect();
    let p = write("disk5-p.json", &json!({"values": values}));
    let out = run(&["check", "validate", &disk, &p]);
    assert_eq!(out["valid"], true);
    let vertex = run(&["check", "vertex", &disk, &p]);
    assert_eq!(vertex["vertex"], false);
}
