use serde::Serialize;
use serde_json::{Map, Value};

/// Ordered key/value report printed as text or JSON.
#[derive(Debug)]
pub struct Report {
    fields: Map<String, Value>,
    /// Some(false) for a mathematical "no".
    pub verdict: Option<bool>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut fields = Map::new();
        fields.insert("command".into(), Value::String(command.into()));
        Report { fields, verdict: None }
    }

    pub fn put(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        let v = serde_json::to_value(value).expect("report values serialize");
        self.fields.insert(key.into(), v);
        self
    }

    pub fn verdict(&mut self, holds: bool) -> &mut Self {
        self.verdict = Some(holds);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&Value::Object(self.fields.clone())).expect("valid JSON")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.fields {
            if k == "command" {
                continue;
            }
            write_field(&mut out, k, v, 0);
        }
        out
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => "none".into(),
        Value::String(s) => s.clone(),
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            format!("[{}]", parts.join(", "))
        }
        Value::Object(m) => {
            let parts: Vec<String> = m.iter().map(|(k, v)| format!("{k}={}", scalar(v))).collect();
            parts.join(" ")
        }
        other => other.to_string(),
    }
}

fn write_field(out: &mut String, key: &str, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Array(items) if items.iter().any(|x| x.is_object() || x.is_string()) => {
            out.push_str(&format!("{pad}{key}:{}\n", if items.is_empty() { " none" } else { "" }));
            for item in items {
                out.push_str(&format!("{pad}  {}\n", scalar(item)));
            }
        }
        Value::Object(m) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (k, x) in m {
                write_field(out, k, x, depth + 1);
            }
        }
        _ => out.push_str(&format!("{pad}{key}: {}\n", scalar(v))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_layout() {
        let mut r = Report::new("demo");
        r.put("dim", 3).put("labels", ["a", "b"]).put("values", [1, 2]).put("unit", Option::<String>::None);
        assert_eq!(r.to_text(), "dim: 3\nlabels:\n  a\n  b\nvalues: [1, 2]\nunit: none\n");
        assert!(r.to_json().starts_with("{\n  \"command\": \"demo\""));
    }
}
