//! Consolidated run reports: a config echo plus step reports in order.
//!
//! Wall-clock timings live only in fields named `elapsed_ms`, so two runs
//! of the same config compare equal after [`strip_timings`].

use std::time::Instant;

use serde_json::{json, Map, Value};

#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub name: String,
    pub elapsed_ms: f64,
    pub report: Value,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub config: Value,
    pub steps: Vec<Step>,
    started: Option<Instant>,
}

impl RunReport {
    pub fn new(config: Value) -> Self {
        RunReport {
            config,
            steps: Vec::new(),
            started: Some(Instant::now()),
        }
    }

    pub fn push(&mut self, name: impl Into<String>, elapsed_ms: f64, report: Value) {
        self.steps.push(Step {
            name: name.into(),
            elapsed_ms,
            report,
        });
    }

    /// Run `f`, time it, and record its report under `name`.
    pub fn timed<T>(&mut self, name: &str, f: impl FnOnce() -> (T, Value)) -> T {
        let t = Instant::now();
        let (out, report) = f();
        self.push(name, t.elapsed().as_secs_f64() * 1e3, report);
        out
    }

    pub fn to_json(&self) -> Value {
        emit_report(&self.config, &self.steps, self.started.map(|s| s.elapsed().as_secs_f64() * 1e3))
    }
}

pub fn emit_report(config: &Value, steps: &[Step], total_ms: Option<f64>) -> Value {
    let steps: Vec<Value> = steps
        .iter()
        .map(|s| json!({"name": s.name, "report": s.report, "elapsed_ms": s.elapsed_ms}))
        .collect();
    let mut out = Map::new();
    out.insert("type".into(), json!("run_report"));
    out.insert("config".into(), config.clone());
    out.insert("steps".into(), Value::Array(steps));
    out.insert("elapsed_ms".into(), json!(total_ms.unwrap_or(0.0)));
    Value::Object(out)
}

/// Copy of `v` with every `elapsed_ms` field removed, at any depth.
pub fn strip_timings(v: &Value) -> Value {
    match v {
        Value::Object(m) => Value::Object(
            m.iter()
                .filter(|(k, _)| k.as_str() != "elapsed_ms")
                .map(|(k, x)| (k.clone(), strip_timings(x)))
                .collect(),
        ),
        Value::Array(a) => Value::Array(a.iter().map(strip_timings).collect()),
        other => other.clone(),
    }
}
