//! Rendering reports. Both modes are deterministic: JSON objects keep a
//! fixed key order and nothing depends on wall-clock time unless timing was
//! requested.

use std::fmt::Write;

use serde_json::{json, Value};

use crate::run::{Report, TaskStatus};

pub const SCHEMA: &str = "v1";

pub fn json(report: &Report) -> String {
    let v = json!({"schema": SCHEMA, "tasks": report.tasks});
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    s
}

/// Arrays longer than this are summarized in human output.
const LONG: usize = 24;

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

fn flatten(out: &mut String, path: &str, v: &Value) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let p = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                flatten(out, &p, x);
            }
        }
        Value::Array(xs) => {
            if xs.is_empty() {
                let _ = writeln!(out, "  {path:<40} []");
            } else if let Some(items) = xs.iter().map(scalar_text).collect::<Option<Vec<_>>>() {
                if items.len() > LONG {
                    let _ = writeln!(out, "  {path:<40} [{} items: {} ...]", items.len(), items[..LONG].join(", "));
                } else {
                    let _ = writeln!(out, "  {path:<40} [{}]", items.join(", "));
                }
            } else if xs.len() > LONG {
                let _ = writeln!(out, "  {path:<40} [{} entries]", xs.len());
            } else {
                for (i, x) in xs.iter().enumerate() {
                    flatten(out, &format!("{path}[{i}]"), x);
                }
            }
        }
        _ => {
            let _ = writeln!(out, "  {path:<40} {}", scalar_text(v).expect("scalar"));
        }
    }
}

fn status_word(s: TaskStatus) -> &'static str {
    match s {
        TaskStatus::Ok => "OK",
        TaskStatus::Fail => "FAIL",
        TaskStatus::Error => "ERROR",
    }
}

/// Suite reports get a per-check table instead of the flattened dump.
fn suite_table(out: &mut String, v: &Value) {
    let _ = writeln!(out, "  seed {}  triples {}  ok {}", v["seed"], v["triples"], v["ok"]);
    let _ = writeln!(
        out,
        "  {:<30} {:>9} {:>9} {:>9} {:>6} {:>9} {:>8}",
        "check", "instances", "satisfied", "passed", "failed", "skipped", "vacuous"
    );
    for c in v["checks"].as_array().into_iter().flatten() {
        let _ = writeln!(
            out,
            "  {:<30} {:>9} {:>9} {:>9} {:>6} {:>9} {:>8}",
            c["check"].as_str().unwrap_or_default(),
            c["instances"],
            c["satisfied"],
            c["passed"],
            c["failed"],
            c["skipped"],
            c["vacuous"]
        );
    }
    let cor = &v["semigroups"]["corollary"];
    if !cor.is_null() {
        let _ = writeln!(
            out,
            "  canonical-trace sweep: genus <= {}, {} semigroups, {}/{} passed, {} invariant violations",
            cor["max_genus"], cor["semigroups"], cor["passed"], cor["instances"], cor["invariant_violations"]
        );
    }
    let hw = &v["semigroups"]["torsion"];
    if !hw.is_null() {
        let _ = writeln!(
            out,
            "  torsion sweep: genus <= {}, {} ideals, {} unstable, chain {}/{}, symmetric non-principal with torsion {}/{}, candidates {}",
            hw["max_genus"],
            hw["instances"],
            hw["unstable"],
            hw["equiv_consistent"],
            hw["equiv_checked"],
            hw["symmetric_nonprincipal_torsion"],
            hw["symmetric_nonprincipal"],
            hw["candidates"].as_array().map_or(0, Vec::len)
        );
    }
    for (f, replay) in v["failures"].as_array().into_iter().flatten().zip(v["replays"].as_array().into_iter().flatten()) {
        let _ = writeln!(out, "  FAILURE {} {}", f["check"].as_str().unwrap_or_default(), f["instance"].as_str().unwrap_or_default());
        for line in replay.as_str().unwrap_or_default().lines() {
            let _ = writeln!(out, "    | {line}");
        }
    }
}

pub fn human(report: &Report) -> String {
    let mut out = String::new();
    if report.tasks.is_empty() {
        out.push_str("no tasks\n");
    }
    for t in &report.tasks {
        let _ = writeln!(out, "== {} [{}] {}", t.name, t.op, status_word(t.status));
        if let Some(ms) = t.elapsed_ms {
            let _ = writeln!(out, "  {:<40} {ms}", "elapsed_ms");
        }
        if let Some(e) = &t.error {
            let _ = writeln!(out, "  error: {e}");
        }
        if t.op == "suite" && t.result.is_object() {
            suite_table(&mut out, &t.result);
        } else {
            flatten(&mut out, "", &t.result);
        }
    }
    out
}
