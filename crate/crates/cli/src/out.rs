//! Output assembly: text or versioned JSON, and the error envelope.

use serde_json::{json, Map, Number, Value};

pub const SCHEMA_VERSION: u32 = 1;

/// What a subcommand produced: human text and the JSON equivalent.
pub struct Report {
    pub text: String,
    pub json: Value,
}

impl Report {
    /// `kind` names the payload; the version is added here.
    pub fn new(kind: &str, json: Value, text: String) -> Self {
        let mut obj = Map::new();
        obj.insert("schema_version".into(), json!(SCHEMA_VERSION));
        obj.insert("kind".into(), json!(kind));
        match json {
            Value::Object(m) => obj.extend(m),
            other => {
                obj.insert("result".into(), other);
            }
        }
        Report { text, json: Value::Object(obj) }
    }

    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            to_json_string(&self.json)
        } else {
            self.text.clone()
        }
    }
}

/// Pretty JSON with every float cut to 12 significant digits.
pub fn to_json_string(v: &Value) -> String {
    serde_json::to_string_pretty(&round_floats(v.clone())).expect("values are serializable")
}

pub fn round_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or(f64::NAN);
            let r: f64 = format!("{x:.11e}").parse().unwrap_or(x);
            Number::from_f64(r).map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_floats).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, round_floats(v))).collect()),
        other => other,
    }
}

/// Snake-case variant name of a library error, for the `kind` field.
pub fn error_kind(e: &kleinian::Error) -> String {
    let dbg = format!("{e:?}");
    let name: String = dbg.chars().take_while(|c| c.is_alphanumeric()).collect();
    let mut out = String::new();
    for (i, ch) in name.chars().enumerate() {
        if ch.is_uppercase() {
            if i > 0 {
                out.push('_');
            }
            out.extend(ch.to_lowercase());
        } else {
            out.push(ch);
        }
    }
    out
}

pub fn error_json(kind: &str, message: &str) -> String {
    let v = json!({
        "schema_version": SCHEMA_VERSION,
        "error": { "kind": kind, "message": message },
    });
    serde_json::to_string(&v).expect("static shape")
}

/// Fixed-width complex formatting for text output.
pub fn fmt_c(z: kleinian::C64) -> String {
    if z.im >= 0.0 {
        format!("{:.12}+{:.12}i", z.re, z.im)
    } else {
        format!("{:.12}-{:.12}i", z.re, -z.im)
    }
}

pub fn c_json(z: kleinian::C64) -> Value {
    json!({ "re": z.re, "im": z.im })
}
