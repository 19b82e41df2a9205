//! Human-readable rendering of command output.

use serde_json::Value;

/// Largest matrix printed as an aligned grid.
const MAX_GRID: usize = 12;

pub fn render(value: &Value) -> String {
    let mut out = String::new();
    match value {
        Value::Object(map) if is_matrix(value) => out.push_str(&grid(map)),
        Value::Object(map) => {
            for (key, v) in map {
                if is_matrix(v) {
                    out.push_str(&format!("{key}:\n"));
                    out.push_str(&indent(&grid(v.as_object().unwrap())));
                } else if let Some(items) = v.as_array().filter(|a| a.iter().any(|x| x.is_array() || x.is_object())) {
                    out.push_str(&format!("{key}:\n"));
                    for item in items {
                        out.push_str(&indent(&render(item)));
                    }
                } else {
                    out.push_str(&format!("{key}: {}\n", inline(v)));
                }
            }
        }
        other => out.push_str(&format!("{}\n", inline(other))),
    }
    out
}

fn is_matrix(v: &Value) -> bool {
    v.get("order").is_some_and(Value::is_u64) && v.get("entries").is_some_and(Value::is_array)
}

fn grid(map: &serde_json::Map<String, Value>) -> String {
    let rows: Vec<Vec<String>> = map["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r.as_array().map(|c| c.iter().map(cell).collect()).unwrap_or_default())
        .collect();
    if rows.len() > MAX_GRID {
        return format!("{}\n", serde_json::to_string(&Value::Object(map.clone())).unwrap());
    }
    let width = rows.iter().flatten().map(String::len).max().unwrap_or(0);
    rows.iter()
        .map(|r| {
            let cells: Vec<String> = r.iter().map(|c| format!("{c:>width$}")).collect();
            format!("{}\n", cells.join("  ").trim_end())
        })
        .collect()
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn inline(v: &Value) -> String {
    match v {
        Value::Array(items) => format!("[{}]", items.iter().map(inline).collect::<Vec<_>>().join(", ")),
        other => cell(other),
    }
}

fn indent(text: &str) -> String {
    text.lines().map(|l| format!("  {l}\n")).collect()
}
