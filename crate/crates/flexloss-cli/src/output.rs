//! Output plumbing shared by every subcommand: the three output formats,
//! RFC-4180 CSV encoding, and a single-record emitter.
//!
//! Formats:
//! * `table` — two-column `key, value` lines for human reading;
//! * `csv` — RFC-4180 (quoting only where needed, CRLF record ends), a
//!   header record followed by one data record;
//! * `json` — a single top-level object carrying `"schema_version": "1"`,
//!   the command name, and one member per field, with numbers rounded to 12
//!   significant digits.
//!
//! Missing values (`None`) render as `-` in tables, an empty field in CSV,
//! and `null` in JSON.

use clap::ValueEnum;
use flexloss::fmt::{round12, sig12};
use serde_json::{json, Map, Value as Json};
use std::io::{self, ErrorKind, Write};

/// Writes `text` to stdout and flushes it.
///
/// A closed pipe (the reader has gone away, e.g. `flexloss ... | head`) ends
/// the process quietly with status 0, matching conventional filter behavior;
/// any other stdout failure is reported on stderr with status 3.
pub fn emit(text: &str) {
    let mut out = io::stdout().lock();
    if let Err(error) = out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        if error.kind() == ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: cannot write to stdout: {error}");
        std::process::exit(3);
    }
}

/// Serialization format selected by `--format`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    /// Two-column `key, value` lines.
    Table,
    /// RFC-4180 CSV: header record plus data record(s).
    Csv,
    /// One JSON object with `"schema_version": "1"`.
    Json,
}

/// One typed output field of a command result.
pub enum Value {
    /// A real number, printed at 12 significant digits.
    Num(f64),
    /// A real number that may be undefined for these inputs.
    MaybeNum(Option<f64>),
    /// An exact count.
    Int(u64),
    /// A count that may be undefined (e.g. no regime at a boundary).
    MaybeInt(Option<u8>),
    /// A fixed identifier.
    Str(&'static str),
    /// A value that is only sometimes present (e.g. tie descriptions).
    MaybeText(Option<String>),
    /// A yes/no outcome.
    Bool(bool),
}

impl Value {
    fn to_json(&self) -> Json {
        match self {
            Value::Num(x) => json!(round12(*x)),
            Value::MaybeNum(o) => o.map_or(Json::Null, |x| json!(round12(x))),
            Value::Int(n) => json!(n),
            Value::MaybeInt(o) => o.map_or(Json::Null, |n| json!(n)),
            Value::Str(s) => json!(s),
            Value::MaybeText(o) => o.as_deref().map_or(Json::Null, |s| json!(s)),
            Value::Bool(b) => json!(b),
        }
    }

    fn render(&self, missing: &str) -> String {
        match self {
            Value::Num(x) => sig12(*x),
            Value::MaybeNum(o) => o.map_or_else(|| missing.to_string(), sig12),
            Value::Int(n) => n.to_string(),
            Value::MaybeInt(o) => o.map_or_else(|| missing.to_string(), |n| n.to_string()),
            Value::Str(s) => (*s).to_string(),
            Value::MaybeText(o) => o.clone().unwrap_or_else(|| missing.to_string()),
            Value::Bool(b) => b.to_string(),
        }
    }
}

/// Quotes one CSV field per RFC 4180, only when it contains a separator,
/// quote, or line break.
pub fn csv_field(field: &str) -> String {
    if field.contains([',', '"', '\r', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// One CRLF-terminated CSV record.
pub fn csv_record<I>(fields: I) -> String
where
    I: IntoIterator,
    I::Item: AsRef<str>,
{
    let joined: Vec<String> = fields
        .into_iter()
        .map(|f| csv_field(f.as_ref()))
        .collect();
    format!("{}\r\n", joined.join(","))
}

/// Prints one result record to stdout in the chosen format.
pub fn emit_record(format: OutputFormat, command: &str, fields: &[(&str, Value)]) {
    match format {
        OutputFormat::Json => {
            let mut object = Map::new();
            object.insert("schema_version".to_string(), json!("1"));
            object.insert("command".to_string(), json!(command));
            for (name, value) in fields {
                object.insert((*name).to_string(), value.to_json());
            }
            emit(&format!("{}\n", Json::Object(object)));
        }
        OutputFormat::Csv => {
            let mut records = csv_record(fields.iter().map(|(name, _)| *name));
            records.push_str(&csv_record(
                fields.iter().map(|(_, value)| value.render("")),
            ));
            emit(&records);
        }
        OutputFormat::Table => {
            use std::fmt::Write as _;
            let mut lines = String::new();
            for (name, value) in fields {
                let _ = writeln!(lines, "{name}, {}", value.render("-"));
            }
            emit(&lines);
        }
    }
}
