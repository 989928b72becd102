use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn twotree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twotree")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: stdout {:?}, stderr {:?}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

fn gen_to(dir: &TempDir, name: &str, args: &[&str]) -> String {
    let out = twotree(&[&["gen"], args].concat());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let path = dir.path().join(name);
    std::fs::write(&path, &out.stdout).unwrap();
    path.to_str().unwrap().to_string()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn synthesized_k4_verifies() {
    let dir = TempDir::new().unwrap();
    let g = gen_to(&dir, "k4.json", &["k4"]);
    let out = twotree(&["synthesize", &g, "--s", "0", "--t", "3", "--edge", "0", "--side", "in"]);
    assert_eq!(out.status.code(), Some(0));
    let res = json(&out);
    assert_eq!(res["order"][0], 0);
    assert_eq!(res["order"][3], 3);
    assert!(res["in_branching"].as_array().unwrap().contains(&Value::from(0)));
    let res = write(&dir, "res.json", &String::from_utf8_lossy(&out.stdout));
    let out = twotree(&["verify", &g, "--ordering", &res]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["verdict"], "good");
}

#[test]
fn bad_ordering_exits_3_with_a_violator() {
    let dir = TempDir::new().unwrap();
    // the obstacle star has no good ordering at all
    let g = gen_to(&dir, "star.json", &["obstacle-star"]);
    let ord = write(&dir, "o.json", r#"{"format":1,"order":[0,1,2,3,4,5]}"#);
    let out = twotree(&["verify", &g, "--ordering", &ord]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["verdict"], "bad");
}

#[test]
fn obstacle_star_is_refuted() {
    let dir = TempDir::new().unwrap();
    let g = gen_to(&dir, "star.json", &["obstacle-star"]);
    let out = twotree(&["analyze", &g, "--refute"]);
    assert_eq!(out.status.code(), Some(3));
    let doc = json(&out);
    assert!(doc["refutation"]["kind"].is_string());
    assert!(!doc["obstacles"].as_array().unwrap().is_empty());
}

#[test]
fn auto_strategy_handles_matching_instances() {
    let dir = TempDir::new().unwrap();
    let g = gen_to(&dir, "m.json", &["matching", "6", "--seed", "5"]);
    let dot = dir.path().join("m.dot");
    let out = twotree(&["synthesize", &g, "--dot", dot.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let res = write(&dir, "res.json", &String::from_utf8_lossy(&out.stdout));
    assert_eq!(twotree(&["verify", &g, "--ordering", &res]).status.code(), Some(0));
    let dot = std::fs::read_to_string(&dot).unwrap();
    assert!(dot.contains("style=dashed") && dot.contains("style=solid"));
}

#[test]
fn auto_strategy_uses_spanning_circuits() {
    let dir = TempDir::new().unwrap();
    let g = gen_to(&dir, "oct.json", &["octahedron"]);
    assert_eq!(twotree(&["synthesize", &g]).status.code(), Some(0));
}

#[test]
fn exit_codes_for_bad_input_and_unmet_preconditions() {
    let dir = TempDir::new().unwrap();
    let broken = write(&dir, "broken.json", r#"{"n":2,"edges":[[0,5]]}"#);
    assert_eq!(twotree(&["analyze", &broken]).status.code(), Some(2));
    assert_eq!(twotree(&["analyze", "/no/such/file.json"]).status.code(), Some(2));
    let path = gen_to(&dir, "path.json", &["digon-path", "3"]);
    let out = twotree(&["synthesize", &path, "--strategy", "matching"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not-matching"));
}

#[test]
fn generation_is_deterministic_and_canonical() {
    let a = twotree(&["gen", "henneberg", "10", "--seed", "7"]);
    let b = twotree(&["gen", "henneberg", "10", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    let doc = json(&a);
    assert_eq!(doc["format"], 1);
    let edges: Vec<(u64, u64)> =
        doc["edges"].as_array().unwrap().iter().map(|e| (e[0].as_u64().unwrap(), e[1].as_u64().unwrap())).collect();
    let mut sorted = edges.clone();
    sorted.sort_unstable();
    assert_eq!(edges, sorted);
    assert!(edges.iter().all(|(u, v)| u <= v));

    let dir = TempDir::new().unwrap();
    let g = write(&dir, "h.json", &String::from_utf8_lossy(&a.stdout));
    let atlas = json(&twotree(&["analyze", &g, "--atlas"]));
    assert_eq!(atlas["circuits"].as_array().unwrap().len(), 1);
    assert_eq!(atlas["circuits"][0].as_array().unwrap().len(), 10);
}

#[test]
fn analyze_reports_violators() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.json", r#"{"n":3,"edges":[[0,1],[0,1],[0,1],[1,2]]}"#);
    let out = twotree(&["analyze", &g]);
    assert_eq!(out.status.code(), Some(3));
    let doc = json(&out);
    assert_eq!(doc["is_2T"], false);
    assert!(doc["violator"].is_object());
}

#[test]
fn betweenness_gadget_round_trip() {
    let dir = TempDir::new().unwrap();
    let yes = write(&dir, "yes.json", r#"{"elements":3,"triples":[[0,1,2]]}"#);
    let no = write(&dir, "no.json", r#"{"elements":3,"triples":[[0,1,2],[1,0,2],[0,2,1]]}"#);
    for (inst, code) in [(&yes, 0), (&no, 3)] {
        let out = twotree(&["oracle", "betweenness", inst]);
        assert_eq!(out.status.code(), Some(code));
        let gadget = twotree(&["reduce", "betweenness", inst]);
        assert_eq!(gadget.status.code(), Some(0));
        let d = write(&dir, "d.json", &String::from_utf8_lossy(&gadget.stdout));
        assert_eq!(twotree(&["oracle", "st", &d]).status.code(), Some(code));
    }
}

#[test]
fn cover_reduction_chain() {
    let dir = TempDir::new().unwrap();
    let x3c = write(&dir, "x3c.json", r#"{"universe":3,"blocks":[[0,1,2]]}"#);
    let out = twotree(&["reduce", "x3c", &x3c]);
    assert_eq!(out.status.code(), Some(0));
    let x4c = write(&dir, "x4c.json", &String::from_utf8_lossy(&out.stdout));
    assert_eq!(json(&out)["universe"], 4);
    assert_eq!(twotree(&["oracle", "cover", &x4c]).status.code(), Some(0));
    let out = twotree(&["reduce", "x4c", &x4c]);
    let g = write(&dir, "g.json", &String::from_utf8_lossy(&out.stdout));
    assert_eq!(twotree(&["oracle", "partition", &g]).status.code(), Some(0));
}
