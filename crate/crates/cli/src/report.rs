//! Canonical JSON: sorted keys, rationals as `"p/q"` strings.

use hypertoric::exact::format_rat;
use hypertoric::{Int, IntMatrix, MultiPoly, Rat};
use serde_json::{json, Map, Value};

pub struct Report {
    pub command: String,
    pub digest: String,
    pub results: Map<String, Value>,
    pub checks: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str, digest: String) -> Self {
        Report {
            command: command.to_string(),
            digest,
            results: Map::new(),
            checks: Map::new(),
        }
    }

    pub fn put(&mut self, key: &str, v: impl Into<Value>) {
        self.results.insert(key.to_string(), v.into());
    }

    pub fn check(&mut self, name: &str, ok: bool) {
        self.checks.insert(name.to_string(), Value::Bool(ok));
    }

    pub fn failures(&self) -> Vec<String> {
        self.checks
            .iter()
            .filter(|(_, v)| v == &&Value::Bool(false))
            .map(|(k, _)| k.clone())
            .collect()
    }

    pub fn to_value(&self) -> Value {
        json!({
            "command": self.command,
            "input_digest": self.digest,
            "results": Value::Object(self.results.clone()),
            "verification": Value::Object(self.checks.clone()),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("serializable")
    }

    pub fn to_table(&self) -> String {
        let mut out = format!("command       {}\ninput_digest  {}\n", self.command, self.digest);
        for (k, v) in &self.results {
            out.push_str(&format!("{k:<28} {}\n", compact(v)));
        }
        for (k, v) in &self.checks {
            out.push_str(&format!("check {k:<22} {}\n", compact(v)));
        }
        out
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn rats(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(|r| Value::String(format_rat(r))).collect())
}

pub fn ints(v: &[Int]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect())
}

pub fn matrix(m: &IntMatrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| ints(r)).collect())
}

pub fn sets(v: &[Vec<usize>]) -> Value {
    json!(v)
}

pub fn poly(p: &MultiPoly, names: &[String]) -> Value {
    let terms: Vec<Value> = p
        .to_pairs()
        .into_iter()
        .map(|(e, c)| json!([e, c]))
        .collect();
    json!({ "terms": terms, "text": p.display_with(names) })
}
