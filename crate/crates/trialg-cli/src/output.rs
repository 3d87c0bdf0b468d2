use serde_json::{json, Map, Value};
use std::path::Path;
use thiserror::Error;
use trialg::grading::{Grading, Structure};
use trialg::{Cyc, Report};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Param(String),
    #[error("cannot read {path}: {err}")]
    Io { path: String, err: std::io::Error },
    #[error("malformed JSON in {path}: {err}")]
    Json { path: String, err: serde_json::Error },
}

impl CliError {
    pub fn param(e: impl std::fmt::Display) -> CliError {
        CliError::Param(e.to_string())
    }
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let name = path.display().to_string();
    let text = if name == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|err| CliError::Io { path: name.clone(), err })?
    } else {
        std::fs::read_to_string(path).map_err(|err| CliError::Io { path: name.clone(), err })?
    };
    serde_json::from_str(&text).map_err(|err| CliError::Json { path: name, err })
}

/// The report under construction. serde_json keeps object keys sorted, so
/// the output does not depend on insertion order.
pub struct Out {
    conductor: u32,
    seed: u64,
    checks: Map<String, Value>,
    data: Map<String, Value>,
    ok: bool,
}

impl Out {
    pub fn new(conductor: u32, seed: u64) -> Out {
        Out { conductor, seed, checks: Map::new(), data: Map::new(), ok: true }
    }

    pub fn passed(&self) -> bool {
        self.ok
    }

    pub fn report(&mut self, name: &str, r: &Report) {
        self.ok &= r.ok();
        self.checks.insert(name.into(), json!({"ok": r.ok(), "checks": r.checks, "violations": r.violations}));
    }

    pub fn check(&mut self, name: &str, cond: bool, detail: Value) {
        self.ok &= cond;
        self.checks.insert(name.into(), json!({"ok": cond, "detail": detail}));
    }

    pub fn data(&mut self, key: &str, v: Value) {
        self.data.insert(key.into(), v);
    }

    fn header(&self, status: &str) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("conductor".into(), json!(self.conductor));
        m.insert("seed".into(), json!(self.seed));
        m.insert("version".into(), json!(trialg::VERSION));
        m.insert("status".into(), json!(status));
        m
    }

    pub fn finish(self) -> Value {
        let mut m = self.header(if self.ok { "pass" } else { "fail" });
        m.insert("checks".into(), Value::Object(self.checks));
        m.insert("data".into(), Value::Object(self.data));
        Value::Object(m)
    }

    pub fn error(self, e: &CliError) -> Value {
        let mut m = self.header("error");
        m.insert("error".into(), json!(e.to_string()));
        Value::Object(m)
    }
}

pub fn scalar(c: &Cyc) -> Value {
    json!(c.to_strings())
}

/// Nonzero structure constants as [i, j, k, coefficients].
pub fn structure(s: &Structure) -> Value {
    let sorts: Vec<Value> = s.sorts.iter().map(|so| json!({"name": so.name, "labels": so.labels})).collect();
    let maps: Vec<Value> = s
        .maps
        .iter()
        .map(|m| {
            let mut entries = Vec::new();
            for (i, row) in m.table.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    for (k, c) in v {
                        entries.push(json!([i, j, k, scalar(c)]));
                    }
                }
            }
            json!({"name": m.name, "left": m.left, "right": m.right, "out": m.out, "entries": entries})
        })
        .collect();
    json!({"kind": format!("{:?}", s.kind).to_lowercase(), "sorts": sorts, "maps": maps})
}

pub fn grading(g: &Grading) -> Value {
    json!({"group": g.group.to_string(), "degrees": g.degrees})
}
