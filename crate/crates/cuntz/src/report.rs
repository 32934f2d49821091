//! Experiment reports: a fixed-schema document emitted as JSON or CSV.
//!
//! Serialization is hand-rolled so the byte stream is deterministic: field
//! order is fixed, floats print with 17 significant digits, complex values
//! as `[re, im]` pairs. Identical config and seed therefore produce
//! byte-identical output apart from the `timestamp` and `runtime_ms`
//! fields.

use std::fmt::Write as _;

use crate::C64;

/// A JSON-compatible value with deterministic rendering.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Bool(bool),
    Int(i64),
    Num(f64),
    Str(String),
    Complex(C64),
    List(Vec<Value>),
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}
impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::Int(v)
    }
}
impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as i64)
    }
}
impl From<u32> for Value {
    fn from(v: u32) -> Self {
        Value::Int(v as i64)
    }
}
impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Num(v)
    }
}
impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Str(v.to_string())
    }
}
impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Str(v)
    }
}
impl From<C64> for Value {
    fn from(v: C64) -> Self {
        Value::Complex(v)
    }
}

/// 17 significant digits, the shortest form that is still exact for f64.
fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        // JSON has no infinities; report the IEEE name as a string
        format!("\"{x}\"")
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out
}

impl Value {
    fn render_json(&self, out: &mut String) {
        match self {
            Value::Bool(b) => {
                let _ = write!(out, "{b}");
            }
            Value::Int(i) => {
                let _ = write!(out, "{i}");
            }
            Value::Num(x) => out.push_str(&fmt_f64(*x)),
            Value::Str(s) => {
                let _ = write!(out, "\"{}\"", escape(s));
            }
            Value::Complex(z) => {
                let _ = write!(out, "[{},{}]", fmt_f64(z.re), fmt_f64(z.im));
            }
            Value::List(vs) => {
                out.push('[');
                for (k, v) in vs.iter().enumerate() {
                    if k > 0 {
                        out.push(',');
                    }
                    v.render_json(out);
                }
                out.push(']');
            }
        }
    }

    fn render_csv(&self) -> String {
        match self {
            Value::Bool(b) => b.to_string(),
            Value::Int(i) => i.to_string(),
            Value::Num(x) => fmt_f64(*x).trim_matches('"').to_string(),
            Value::Str(s) => {
                if s.contains([',', '"', '\n']) {
                    format!("\"{}\"", s.replace('"', "\"\""))
                } else {
                    s.clone()
                }
            }
            Value::Complex(z) => format!("{}+{}i", fmt_f64(z.re), fmt_f64(z.im)),
            Value::List(vs) => {
                let inner: Vec<String> = vs.iter().map(|v| v.render_csv()).collect();
                format!("\"{}\"", inner.join(";"))
            }
        }
    }
}

/// An ordered key/value row.
pub type Row = Vec<(String, Value)>;

/// The report document:
/// `{experiment, config, results[], measured{}, bounds{}, pass, runtime_ms,
/// timestamp}`.
#[derive(Clone, Debug)]
pub struct Report {
    pub experiment: String,
    pub config: Row,
    pub results: Vec<Row>,
    pub measured: Vec<(String, f64)>,
    pub bounds: Vec<(String, f64)>,
    pub pass: bool,
    pub runtime_ms: u64,
    pub timestamp: u64,
}

impl Report {
    pub fn new(experiment: impl Into<String>) -> Self {
        Report {
            experiment: experiment.into(),
            config: Vec::new(),
            results: Vec::new(),
            measured: Vec::new(),
            bounds: Vec::new(),
            pass: true,
            runtime_ms: 0,
            timestamp: 0,
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = String::new();
        out.push_str("{\"experiment\":");
        Value::Str(self.experiment.clone()).render_json(&mut out);
        out.push_str(",\"config\":");
        render_obj(&mut out, &self.config);
        out.push_str(",\"results\":[");
        for (k, row) in self.results.iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            render_obj(&mut out, row);
        }
        out.push_str("],\"measured\":");
        render_obj(
            &mut out,
            &self
                .measured
                .iter()
                .map(|(k, v)| (k.clone(), Value::Num(*v)))
                .collect::<Vec<_>>(),
        );
        out.push_str(",\"bounds\":");
        render_obj(
            &mut out,
            &self
                .bounds
                .iter()
                .map(|(k, v)| (k.clone(), Value::Num(*v)))
                .collect::<Vec<_>>(),
        );
        let _ = write!(
            out,
            ",\"pass\":{},\"runtime_ms\":{},\"timestamp\":{}}}",
            self.pass, self.runtime_ms, self.timestamp
        );
        out.push('\n');
        out
    }

    /// CSV with a header row matching the result field names, UTF-8, LF.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> = self
            .results
            .first()
            .map(|row| row.iter().map(|(k, _)| k.clone()).collect())
            .unwrap_or_default();
        out.push_str(&header.join(","));
        out.push('\n');
        for row in &self.results {
            let cells: Vec<String> = row.iter().map(|(_, v)| v.render_csv()).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

fn render_obj(out: &mut String, row: &Row) {
    out.push('{');
    for (k, (key, value)) in row.iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        let _ = write!(out, "\"{}\":", escape(key));
        value.render_json(out);
    }
    out.push('}');
}
