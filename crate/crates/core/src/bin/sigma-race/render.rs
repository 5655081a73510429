//! Output rendering: `key: value` lines for humans, CSV, pretty JSON.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use sigma_race::codec::parse_ratio;
use sigma_race::numerics::ScalarValue;
use sigma_race::{OutputFormat, Result};

/// Scalars serialize as `{"exact": ..}` or `{"approx": .., "lo": .., ..}`;
/// humans get the single number.
fn scalar_text(map: &serde_json::Map<String, Value>, exact: bool) -> Option<String> {
    if let Some(Value::String(e)) = map.get("exact") {
        if map.len() == 1 {
            return Some(if exact { e.clone() } else { readable(e) });
        }
    }
    match (map.get("approx"), map.get("prec")) {
        (Some(Value::String(a)), Some(p)) => Some(format!("{a} (ball, {p} bits)")),
        _ => None,
    }
}

fn flatten(prefix: &str, v: &Value, exact: bool, out: &mut String) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(map) => {
            if let Some(t) = scalar_text(map, exact) {
                let _ = writeln!(out, "{prefix}: {t}");
                return;
            }
            for (k, v) in map {
                flatten(&key(k), v, exact, out);
            }
        }
        Value::Array(items) if items.iter().all(|i| !i.is_object() && !i.is_array()) => {
            let joined: Vec<String> = items.iter().map(|i| plain(i, exact)).collect();
            let _ = writeln!(out, "{prefix}: [{}]", joined.join(", "));
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&key(&i.to_string()), v, exact, out);
            }
        }
        other => {
            let _ = writeln!(out, "{prefix}: {}", plain(other, exact));
        }
    }
}

/// Long exact rationals (and real exponents, stored as `real:p/q`) read
/// better as decimals; JSON output keeps them exact.
fn readable(s: &str) -> String {
    let body = s.strip_prefix("real:").unwrap_or(s);
    if s.len() <= 40 && body.len() == s.len() {
        return s.to_string();
    }
    match parse_ratio(body) {
        Some(r) if body.contains('/') => format!("{} (approx.)", ScalarValue::Exact(r).display(24)),
        _ => s.to_string(),
    }
}

fn plain(v: &Value, exact: bool) -> String {
    match v {
        Value::String(s) if exact => s.clone(),
        Value::String(s) => readable(s),
        Value::Null => "none".into(),
        other => other.to_string(),
    }
}

fn lines<T: Serialize>(v: &T, exact: bool) -> Result<String> {
    let mut out = String::new();
    flatten("", &serde_json::to_value(v)?, exact, &mut out);
    Ok(out)
}

pub fn human<T: Serialize>(v: &T) -> Result<String> {
    lines(v, false)
}

pub fn json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

pub fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| sigma_race::Error::Io(std::io::Error::other(e));
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(&r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| sigma_race::Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// Renders a record in the requested format; CSV gets one `field,value` row
/// per flattened key.
pub fn record<T: Serialize>(v: &T, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Json => json(v),
        OutputFormat::Human => human(v),
        OutputFormat::Csv => {
            let text = lines(v, true)?;
            let rows = text.lines().filter_map(|l| {
                l.split_once(": ").map(|(k, v)| vec![k.to_string(), v.to_string()])
            });
            csv_table(&["field", "value"], rows)
        }
    }
}
