use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};

pub const SCHEMA_VERSION: u32 = 1;

/// Result of one command: human text, machine results, and whether every
/// checked equality held.
pub struct Outcome {
    pub text: String,
    pub inputs: Value,
    pub results: Value,
    pub ok: bool,
}

impl Outcome {
    pub fn envelope(&self, command: &str) -> Value {
        json!({
            "schema_version": SCHEMA_VERSION,
            "command": command,
            "inputs": self.inputs,
            "results": self.results,
        })
    }
}

pub fn verdict_word(ok: bool) -> &'static str {
    if ok {
        "OK"
    } else {
        "MISMATCH"
    }
}

pub fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable value")
}

pub fn join<T: ToString>(items: impl IntoIterator<Item = T>, sep: &str) -> String {
    items.into_iter().map(|t| t.to_string()).collect::<Vec<_>>().join(sep)
}

/// Left-aligned first column, right-aligned rest.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let mut line = |cells: &mut dyn Iterator<Item = &str>| {
        let parts: Vec<String> = cells
            .zip(&widths)
            .enumerate()
            .map(|(k, (c, &w))| if k == 0 { format!("{c:<w$}") } else { format!("{c:>w$}") })
            .collect();
        let _ = writeln!(out, "{}", parts.join("  ").trim_end());
    };
    line(&mut header.iter().copied());
    for row in rows {
        line(&mut row.iter().map(String::as_str));
    }
    out
}

pub fn pass(b: bool) -> String {
    if b { "pass" } else { "fail" }.to_string()
}

pub fn signed(s: i8) -> String {
    match s {
        1 => "+1".into(),
        -1 => "-1".into(),
        _ => "0".into(),
    }
}
