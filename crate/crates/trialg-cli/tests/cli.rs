use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn trialg(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_trialg"));
    c.args(args).env_remove("TRIALG_FIELD_CONDUCTOR").env_remove("TRIALG_SEED").env_remove("TRIALG_OUT");
    for (k, v) in env {
        c.env(k, v);
    }
    c.output().unwrap()
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("trialg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    let p = d.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(trialg(&["verify", "everything"], &[]).status.code(), Some(2));
    assert_eq!(trialg(&[], &[]).status.code(), Some(2));
    let bad = scratch("bad.json", "[1, 2");
    let o = trialg(&["invariants", bad.to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&o)["status"], "error");
}

#[test]
fn invalid_parameters_exit_two() {
    // h of order 3 is required
    let p = scratch("r8.json", r#"{"r":8,"group":{"free_rank":0,"torsion":[3,3]},"h":[0,0],"t":"p"}"#);
    assert_eq!(trialg(&["invariants", p.to_str().unwrap()], &[]).status.code(), Some(2));
    // no third root of unity in Q(i)
    assert_eq!(trialg(&["verify", "cyclic", "--field-conductor", "4"], &[]).status.code(), Some(2));
}

#[test]
fn rank_eight_models_are_not_similar() {
    let p = scratch("p.json", r#"{"r":8,"group":{"free_rank":0,"torsion":[3]},"h":[1],"t":"p"}"#);
    let o = scratch("o.json", r#"{"r":8,"group":{"free_rank":0,"torsion":[3]},"h":[1],"t":"o"}"#);
    let out = trialg(&["similar", p.to_str().unwrap(), o.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["data"]["similar"], false);
    assert_eq!(v["data"]["trace"]["rule"], "model");
}

#[test]
fn env_overrides_and_out_file() {
    let out = scratch("report.json", "");
    let o = trialg(&["catalog", "fine-typeIII"], &[("TRIALG_FIELD_CONDUCTOR", "24"), ("TRIALG_OUT", out.to_str().unwrap())]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["conductor"], 24);
    assert_eq!(v["status"], "pass");
    let rows = v["data"]["rows"].as_array().unwrap();
    let groups: Vec<&str> = rows.iter().map(|r| r["universal_group"].as_str().unwrap()).collect();
    assert_eq!(groups, ["Z^2 x Z3", "Z2^3 x Z3", "Z3^3"]);
}

#[test]
fn invariants_of_the_okubo_grading() {
    let p = scratch("r0.json", r#"{"r":0,"group":{"free_rank":0,"torsion":[3,3,3]},"k":[[1,0,0],[0,1,0]],"h":[0,0,1],"delta":"+"}"#);
    let v = json(&trialg(&["invariants", p.to_str().unwrap()], &[]));
    assert_eq!(v["data"]["rank"], 0);
    assert_eq!(v["data"]["universal_group"], "Z3^3");
    // 24 one-dimensional components on V
    assert_eq!(v["data"]["type_vector"], serde_json::json!([24]));
}
