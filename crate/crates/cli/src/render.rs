//! Text, JSON and CSV renderings of a command's JSON result.

use std::fmt::Write;

use serde_json::Value;
use twistchar::TruncatedSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

pub fn render(value: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(value).expect("JSON values serialize") + "\n",
        Format::Text => text(value),
        Format::Csv => csv(value),
    }
}

fn as_series(value: &Value) -> Option<TruncatedSeries> {
    if value.get("spec").is_some() && value.get("terms").is_some() {
        TruncatedSeries::from_json(&value.to_string()).ok()
    } else {
        None
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// Flatten nested objects into `a.b` keys, keeping arrays of scalars as `[x, y]`.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Array(items) if items.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), x, out);
            }
        }
        Value::Array(items) => out.push((prefix.to_string(), items.iter().map(scalar).collect::<Vec<_>>().join(" "))),
        other => out.push((prefix.to_string(), scalar(other))),
    }
}

/// Header and rows of the `rows` table, if the value has one.
fn table(value: &Value) -> Option<(Vec<String>, Vec<Vec<String>>)> {
    let rows = value.get("rows")?.as_array()?;
    let header: Vec<String> = match rows.first() {
        Some(Value::Object(first)) => first.keys().cloned().collect(),
        _ => Vec::new(),
    };
    let body = rows
        .iter()
        .map(|r| header.iter().map(|h| r.get(h).map(scalar).unwrap_or_default()).collect())
        .collect();
    Some((header, body))
}

fn series_rows(s: &TruncatedSeries) -> (Vec<String>, Vec<Vec<String>>) {
    let mut header: Vec<String> = s.spec().variables().iter().map(|v| v.name().to_string()).collect();
    header.push("coeff".into());
    let rows = s
        .terms()
        .map(|(exps, c)| {
            let mut row: Vec<String> = exps.iter().map(twistchar::rational::format_r64).collect();
            row.push(twistchar::rational::format_q(c));
            row
        })
        .collect();
    (header, rows)
}

fn text(value: &Value) -> String {
    if let Some(s) = as_series(value) {
        return format!("{s}\n");
    }
    let mut out = String::new();
    let mut fields = Vec::new();
    if let Value::Object(map) = value {
        // nested record lists stay in the JSON output; text shows the summary and the table
        let is_records = |v: &Value| v.as_array().is_some_and(|a| a.iter().any(Value::is_object));
        for (k, v) in map.iter().filter(|(k, v)| *k != "rows" && !is_records(v)) {
            flatten(k, v, &mut fields);
        }
    }
    for (k, v) in &fields {
        writeln!(out, "{k}: {v}").unwrap();
    }
    if let Some((header, rows)) = table(value) {
        let widths: Vec<usize> = (0..header.len())
            .map(|i| rows.iter().map(|r| r[i].len()).chain([header[i].len()]).max().unwrap_or(0))
            .collect();
        let line = |cells: &[String]| {
            cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect::<Vec<_>>().join("  ")
        };
        writeln!(out, "{}", line(&header)).unwrap();
        for r in &rows {
            writeln!(out, "{}", line(r)).unwrap();
        }
    }
    out
}

fn quote(cell: &str) -> String {
    if cell.contains([',', '"', '\n']) {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_string()
    }
}

fn csv(value: &Value) -> String {
    let (header, rows) = if let Some(s) = as_series(value) {
        series_rows(&s)
    } else if let Some(t) = table(value) {
        t
    } else {
        let mut fields = Vec::new();
        flatten("", value, &mut fields);
        let (h, r): (Vec<_>, Vec<_>) = fields.into_iter().unzip();
        (h, vec![r])
    };
    let mut out = String::new();
    let join = |cells: &[String]| cells.iter().map(|c| quote(c)).collect::<Vec<_>>().join(",");
    writeln!(out, "{}", join(&header)).unwrap();
    for r in &rows {
        writeln!(out, "{}", join(r)).unwrap();
    }
    out
}
