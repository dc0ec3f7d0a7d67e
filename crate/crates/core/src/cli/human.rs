//! Plain-text rendering of JSON reports: scalars as `key: value`, arrays
//! of flat records as aligned tables, everything else indented.

use serde_json::Value;

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.iter().all(|i| !i.is_object() && !i.is_array()) => {
            Some(items.iter().filter_map(scalar).collect::<Vec<_>>().join(", "))
        }
        Value::Array(items) if items.iter().all(|i| matches!(i, Value::Array(inner) if inner.iter().all(|x| !x.is_object() && !x.is_array()))) => {
            Some(items.iter().filter_map(|i| scalar(i).map(|s| format!("({s})"))).collect::<Vec<_>>().join(" "))
        }
        _ => None,
    }
}

fn flat_records(items: &[Value]) -> Option<Vec<String>> {
    let mut columns: Vec<String> = Vec::new();
    for item in items {
        let Value::Object(map) = item else { return None };
        for (k, v) in map {
            scalar(v)?;
            if !columns.contains(k) {
                columns.push(k.clone());
            }
        }
    }
    Some(columns)
}

fn table(items: &[Value], columns: &[String], indent: &str, out: &mut String) {
    let cells: Vec<Vec<String>> = items
        .iter()
        .map(|item| columns.iter().map(|c| item.get(c).and_then(scalar).unwrap_or_default()).collect())
        .collect();
    let widths: Vec<usize> = columns
        .iter()
        .enumerate()
        .map(|(i, c)| cells.iter().map(|r| r[i].chars().count()).chain([c.chars().count()]).max().unwrap_or(0))
        .collect();
    let line = |row: &[String]| {
        let padded: Vec<String> = row.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        format!("{indent}{}\n", padded.join("  ").trim_end())
    };
    out.push_str(&line(columns));
    out.push_str(&line(&widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>()));
    for row in &cells {
        out.push_str(&line(row));
    }
}

fn render_into(value: &Value, indent: &str, out: &mut String) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                if let Some(s) = scalar(v) {
                    out.push_str(&format!("{indent}{k}: {s}\n"));
                    continue;
                }
                out.push_str(&format!("{indent}{k}:\n"));
                let deeper = format!("{indent}  ");
                match v {
                    Value::Array(items) => match flat_records(items) {
                        Some(columns) => table(items, &columns, &deeper, out),
                        None => {
                            for (i, item) in items.iter().enumerate() {
                                out.push_str(&format!("{deeper}[{i}]\n"));
                                render_into(item, &format!("{deeper}  "), out);
                            }
                        }
                    },
                    other => render_into(other, &deeper, out),
                }
            }
        }
        other => {
            if let Some(s) = scalar(other) {
                out.push_str(&format!("{indent}{s}\n"));
            } else if let Value::Array(items) = other {
                for item in items {
                    render_into(item, indent, out);
                }
            }
        }
    }
}

pub fn render(value: &Value) -> String {
    let mut out = String::new();
    render_into(value, "", &mut out);
    out
}
