use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cgstp-cli-{}-{name}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn cgstp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cgstp")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn json(path: &PathBuf) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

const SQUARE: &str = r#"{"n": 4, "coords": [[0,0],[0,10],[10,10],[10,0]], "lengths": [10,14,10,10,14,10]}"#;

#[test]
fn solve_square_json_instance() {
    let dir = scratch("square");
    let inst = dir.join("sq.json");
    fs::write(&inst, SQUARE).unwrap();
    let report = dir.join("r.json");
    let svg = dir.join("r.svg");
    let out = cgstp(&[
        "solve",
        "--instance",
        inst.to_str().unwrap(),
        "--out",
        report.to_str().unwrap(),
        "--svg-out",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&report);
    assert_eq!(r["status"], "optimal");
    assert_eq!(r["objective"], -40);
    assert_eq!(r["best_K"], serde_json::json!([[0, 1, 2], [0, 2, 3]]));
    assert_eq!(r["best_tour"], serde_json::json!([0, 1, 2, 3]));
    assert!(fs::read_to_string(&svg).unwrap().contains("<polygon"));
}

#[test]
fn gen_solve_matches_oracle_and_is_deterministic() {
    let dir = scratch("gen");
    let inst = dir.join("i.tsp");
    assert_eq!(code(&cgstp(&["gen", "--n", "7", "--seed", "5", "--out", inst.to_str().unwrap()])), 0);
    let solve = cgstp(&["solve", "--instance", inst.to_str().unwrap()]);
    let again = cgstp(&["solve", "--instance", inst.to_str().unwrap(), "--bound"]);
    assert_eq!(solve.stdout, again.stdout);
    let r: Value = serde_json::from_slice(&solve.stdout).unwrap();
    let o: Value = serde_json::from_slice(&cgstp(&["oracle", "--instance", inst.to_str().unwrap()]).stdout).unwrap();
    assert_eq!(r["tour_length"], o["length"]);
    let hk = cgstp(&["oracle", "--instance", inst.to_str().unwrap(), "--method", "held-karp"]);
    assert_eq!(serde_json::from_slice::<Value>(&hk.stdout).unwrap()["length"], o["length"]);

    let unbounded: Value =
        serde_json::from_slice(&cgstp(&["solve", "--instance", inst.to_str().unwrap(), "--no-bound"]).stdout).unwrap();
    assert_eq!(unbounded["objective"], r["objective"]);
    assert_eq!(unbounded["prunes"]["bound"], 0);

    let json_inst = dir.join("i.json");
    cgstp(&["gen", "--n", "7", "--seed", "5", "--out", json_inst.to_str().unwrap()]);
    assert_eq!(json(&json_inst)["n"], 7);
    let from_json = cgstp(&["solve", "--instance", json_inst.to_str().unwrap()]);
    assert_eq!(from_json.stdout, solve.stdout);
}

#[test]
fn infeasible_complex_exits_one_with_report() {
    let dir = scratch("infeasible");
    let inst = dir.join("sq.json");
    fs::write(&inst, SQUARE).unwrap();
    let cands = dir.join("c.txt");
    fs::write(&cands, "# one triangle\n0 1 2\n").unwrap();
    let mode = format!("file:{}", cands.display());
    let out = cgstp(&["solve", "--instance", inst.to_str().unwrap(), "--complex", &mode]);
    assert_eq!(code(&out), 1);
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["status"], "infeasible");
    assert_eq!(r["best_tour"], Value::Null);
}

#[test]
fn encode_verify_decode() {
    let dir = scratch("encode");
    let inst = dir.join("i.tsp");
    cgstp(&["gen", "--n", "6", "--seed", "2", "--out", inst.to_str().unwrap()]);
    let tour = dir.join("t.txt");
    fs::write(&tour, "3 1 4 0 5 2\n").unwrap();
    let sel = dir.join("sel.json");
    let i = inst.to_str().unwrap();
    let out = cgstp(&[
        "encode",
        "--instance",
        i,
        "--tour",
        tour.to_str().unwrap(),
        "--apex",
        "1",
        "--out",
        sel.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let s = json(&sel);
    assert_eq!(s["canonical"], true);
    assert_eq!(s["K"].as_array().unwrap().len(), 4);

    let v = cgstp(&["verify", "--instance", i, "--selection", sel.to_str().unwrap()]);
    assert_eq!(code(&v), 0);
    let v: Value = serde_json::from_slice(&v.stdout).unwrap();
    assert_eq!(v["verdict"]["admissible"], true);
    assert_eq!(v["boundary_identity"], true);
    assert_eq!(v["objective"]["net"].as_i64().unwrap(), -v["objective"]["boundary_length"].as_i64().unwrap());

    let d = cgstp(&["decode", "--instance", i, "--selection", sel.to_str().unwrap()]);
    assert_eq!(code(&d), 0);
    assert_eq!(String::from_utf8(d.stdout).unwrap(), "0 4 1 3 2 5\n");
}

#[test]
fn inadmissible_selection_exits_one() {
    let dir = scratch("inadmissible");
    let inst = dir.join("i.tsp");
    cgstp(&["gen", "--n", "5", "--seed", "1", "--out", inst.to_str().unwrap()]);
    let sel = dir.join("bad.json");
    // three triangles on edge {0,1}
    fs::write(&sel, r#"{"K": [[0,1,2],[0,1,3],[0,1,4]], "canonical": true}"#).unwrap();
    let i = inst.to_str().unwrap();
    let v = cgstp(&["verify", "--instance", i, "--selection", sel.to_str().unwrap()]);
    assert_eq!(code(&v), 1);
    let v: Value = serde_json::from_slice(&v.stdout).unwrap();
    assert_eq!(v["verdict"]["admissible"], false);
    assert_eq!(v["boundary_identity"], Value::Null);
    let constraints: Vec<&str> =
        v["verdict"]["violations"].as_array().unwrap().iter().map(|x| x["constraint"].as_str().unwrap()).collect();
    assert!(constraints.contains(&"C2"));
    assert_eq!(code(&cgstp(&["decode", "--instance", i, "--selection", sel.to_str().unwrap()])), 1);
}

#[test]
fn emit_lp_and_validate() {
    let dir = scratch("lp");
    let inst = dir.join("sq.json");
    fs::write(&inst, SQUARE).unwrap();
    let i = inst.to_str().unwrap();
    let lp = cgstp(&["emit-lp", "--instance", i]);
    assert_eq!(code(&lp), 0);
    let text = String::from_utf8(lp.stdout).unwrap();
    assert!(text.contains("MAXIMIZE") && text.contains("SUBJECT TO") && text.contains("BINARY"));
    assert!(text.trim_end().ends_with("END"));

    let assign = dir.join("a.txt");
    let ones = ["x_0_1_2", "x_0_2_3", "y_0_1", "y_0_2", "y_0_3", "y_1_2", "y_2_3"];
    let zs = ["z_0_1_2__0_1", "z_0_1_2__0_2", "z_0_1_2__1_2", "z_0_2_3__0_2", "z_0_2_3__0_3", "z_0_2_3__2_3"];
    let mut body = String::new();
    for var in text.split("BINARY").nth(1).unwrap().split_whitespace().filter(|v| *v != "END") {
        let v = i32::from(ones.contains(&var) || zs.contains(&var));
        body.push_str(&format!("{var} {v}\n"));
    }
    fs::write(&assign, &body).unwrap();
    let out = cgstp(&["validate", "--instance", i, "--assignment", assign.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["lp_objective"], -40);
    assert_eq!(r["tour"], serde_json::json!([0, 1, 2, 3]));

    fs::write(&assign, "x_0_1_2 1\n").unwrap();
    assert_eq!(code(&cgstp(&["validate", "--instance", i, "--assignment", assign.to_str().unwrap()])), 2);
}

#[test]
fn render_needs_coordinates() {
    let dir = scratch("render");
    let inst = dir.join("sq.json");
    fs::write(&inst, SQUARE).unwrap();
    let tour = dir.join("t.txt");
    fs::write(&tour, "0 1 2 3").unwrap();
    let svg = dir.join("t.svg");
    let out = cgstp(&[
        "render",
        "--instance",
        inst.to_str().unwrap(),
        "--tour",
        tour.to_str().unwrap(),
        "--svg-out",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(fs::read_to_string(&svg).unwrap().contains("<line"));

    let explicit = dir.join("e.json");
    fs::write(&explicit, r#"{"n": 3, "coords": null, "lengths": [3, 4, 5]}"#).unwrap();
    assert_eq!(code(&cgstp(&["render", "--instance", explicit.to_str().unwrap()])), 2);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&cgstp(&["solve"])), 2);
    assert_eq!(code(&cgstp(&["frobnicate"])), 2);
    let dir = scratch("usage");
    let inst = dir.join("sq.json");
    fs::write(&inst, SQUARE).unwrap();
    assert_eq!(code(&cgstp(&["solve", "--instance", inst.to_str().unwrap(), "--complex", "sparse"])), 2);
    assert_eq!(code(&cgstp(&["solve", "--instance", "/nonexistent/x.tsp"])), 2);
}
