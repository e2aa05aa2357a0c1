//! Plain-text rendering of a JSON report.

use serde_json::Value;

pub fn text(report: &Value) -> String {
    let mut out = String::new();
    write(&mut out, report, 0);
    out
}

/// Scalars, and arrays of nothing but scalars, fit on one line.
fn inline(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.iter().all(|x| inline(x).is_some() && !x.is_object()) => {
            Some(serde_json::to_string(v).expect("values serialize"))
        }
        Value::Object(_) | Value::Array(_) => None,
        _ => Some(v.to_string()),
    }
}

fn write(out: &mut String, v: &Value, indent: usize) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match inline(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        write(out, x, indent + 2);
                    }
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                match inline(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        write(out, x, indent + 2);
                    }
                }
            }
        }
        _ => out.push_str(&format!("{pad}{}\n", inline(v).unwrap_or_default())),
    }
}
