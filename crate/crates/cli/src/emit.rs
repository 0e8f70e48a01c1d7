//! Result emission: a byte-deterministic JSON document or aligned text
//! tables. Wall times are excluded unless explicitly requested, so that
//! identical scripts always produce identical bytes.

use crate::exec::ResultRecord;

pub const FORMAT_VERSION: &str = "mfcat/1";

pub fn emit_json(results: &[ResultRecord], timings: bool) -> String {
    let records: Vec<serde_json::Value> = results
        .iter()
        .map(|r| {
            let mut obj = serde_json::Map::new();
            obj.insert("command".into(), serde_json::json!(r.command));
            obj.insert("status".into(), serde_json::json!(r.status));
            obj.insert(
                "payload".into(),
                r.payload.clone().unwrap_or(serde_json::Value::Null),
            );
            if let Some(e) = &r.error {
                obj.insert("error".into(), serde_json::json!(e));
            }
            if timings {
                obj.insert("wall_ms".into(), serde_json::json!(r.wall_ms as u64));
            }
            serde_json::Value::Object(obj)
        })
        .collect();
    let doc = serde_json::json!({
        "version": FORMAT_VERSION,
        "results": records,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
    s.push('\n');
    s
}

pub fn emit_text(results: &[ResultRecord], timings: bool) -> String {
    let mut out = String::new();
    out.push_str(&format!("mfcat results ({FORMAT_VERSION})\n"));
    for r in results {
        out.push('\n');
        out.push_str(&format!("== {}\n", r.command));
        if timings {
            out.push_str(&format!("status: {} ({} ms)\n", r.status, r.wall_ms));
        } else {
            out.push_str(&format!("status: {}\n", r.status));
        }
        if let Some(e) = &r.error {
            out.push_str(&format!("error: {e}\n"));
        }
        if let Some(p) = &r.payload {
            render_value(&mut out, p, 0);
        }
    }
    out
}

/// A stable plain-text rendering: objects as sorted `key: value` lines,
/// matrices (arrays of arrays) as aligned grids.
fn render_value(out: &mut String, v: &serde_json::Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        serde_json::Value::Object(map) => {
            for (k, val) in map {
                match val {
                    serde_json::Value::Array(rows) if is_grid(rows) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_grid(out, rows, indent + 1);
                    }
                    serde_json::Value::Object(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_value(out, val, indent + 1);
                    }
                    _ => {
                        out.push_str(&format!("{pad}{k}: {}\n", scalar_text(val)));
                    }
                }
            }
        }
        serde_json::Value::Array(rows) if is_grid(rows) => {
            render_grid(out, rows, indent);
        }
        other => out.push_str(&format!("{pad}{}\n", scalar_text(other))),
    }
}

fn is_grid(rows: &[serde_json::Value]) -> bool {
    !rows.is_empty() && rows.iter().all(|r| r.is_array())
}

fn render_grid(out: &mut String, rows: &[serde_json::Value], indent: usize) {
    let pad = "  ".repeat(indent);
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            r.as_array()
                .unwrap()
                .iter()
                .map(scalar_text)
                .collect::<Vec<_>>()
        })
        .collect();
    let ncols = cells.iter().map(|r| r.len()).max().unwrap_or(0);
    let mut widths = vec![0usize; ncols];
    for row in &cells {
        for (j, c) in row.iter().enumerate() {
            widths[j] = widths[j].max(c.len());
        }
    }
    for row in &cells {
        let mut line = String::new();
        for (j, c) in row.iter().enumerate() {
            if j > 0 {
                line.push_str("  ");
            }
            line.push_str(&format!("{:>width$}", c, width = widths[j]));
        }
        out.push_str(&format!("{pad}[{}]\n", line));
    }
}

fn scalar_text(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s.clone(),
        serde_json::Value::Array(items) => {
            let inner: Vec<String> = items.iter().map(scalar_text).collect();
            format!("[{}]", inner.join(", "))
        }
        other => other.to_string(),
    }
}
