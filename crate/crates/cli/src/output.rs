use std::fs;
use std::io::{self, Write};
use std::path::Path;

use clap::ValueEnum;
use clique_spectra::report::round_sig;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// A command result in all three renderings.
pub struct Rendered {
    pub json: Value,
    pub csv: String,
    pub text: String,
    pub pass: bool,
}

/// Rounds every float in `v` to ten significant digits. Integers are left
/// alone.
pub fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64() {
                if let Some(r) = serde_json::Number::from_f64(round_sig(x)) {
                    *n = r;
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

pub fn to_json(mut v: Value) -> String {
    round_floats(&mut v);
    let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
    s.push('\n');
    s
}

pub fn emit(r: &Rendered, format: Format, out: Option<&Path>) -> io::Result<()> {
    let body = match format {
        Format::Json => to_json(r.json.clone()),
        Format::Csv => r.csv.clone(),
        Format::Text => r.text.clone(),
    };
    match out {
        Some(path) => fs::write(path, body),
        None => io::stdout().lock().write_all(body.as_bytes()),
    }
}
