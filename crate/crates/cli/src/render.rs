//! Plain-text summary of a report: one row per scalar, arrays shown by length
//! unless they are short lists of scalars.

use serde_json::Value;

const MAX_DEPTH: usize = 3;
const SHORT_LIST: usize = 8;

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.len() <= SHORT_LIST && a.iter().all(|x| !x.is_array() && !x.is_object()) => {
            Some(format!("[{}]", a.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn rows(prefix: &str, v: &Value, depth: usize, out: &mut Vec<(String, String)>) {
    if let Some(s) = scalar(v) {
        out.push((prefix.to_string(), s));
        return;
    }
    match v {
        Value::Object(m) if depth < MAX_DEPTH => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                rows(&key, x, depth + 1, out);
            }
        }
        Value::Array(a) if a.iter().all(Value::is_object) && a.len() <= 2 * SHORT_LIST && depth < MAX_DEPTH => {
            for (i, x) in a.iter().enumerate() {
                rows(&format!("{prefix}[{i}]"), x, depth + 1, out);
            }
        }
        Value::Array(a) => out.push((prefix.to_string(), format!("<{} entries>", a.len()))),
        _ => out.push((prefix.to_string(), "<...>".into())),
    }
}

pub fn table(report: &Value) -> String {
    let mut out = Vec::new();
    rows("", report, 0, &mut out);
    let width = out.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    out.iter().map(|(k, v)| format!("{k:<width$}  {v}\n")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn nested_scalars_become_rows() {
        let t = table(&json!({ "a": { "b": 1, "c": [1, 2] }, "d": "x" }));
        assert_eq!(t, "a.b  1\na.c  [1, 2]\nd    x\n");
    }
}
