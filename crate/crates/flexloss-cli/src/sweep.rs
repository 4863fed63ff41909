//! The `sweep` command: read a plain-text grid config, evaluate every
//! `(ρ, k, γ)` triple, and write one CSV report.
//!
//! Config format (UTF-8): `key = value` lines; `#` starts a comment; blank
//! lines ignored. Required keys:
//!
//! ```text
//! rho_list   = 0.5, 1, 2      # comma-separated positive loads
//! k_list     = 0.25, 0.5      # comma-separated fractions in [0, 1]
//! gamma_list = 0.2, 0.45, 0.9 # comma-separated coefficients in [0, 1]
//! output     = sweep.csv      # where the report is written
//! ```
//!
//! A duplicated key keeps the last value and warns on stderr. Malformed
//! lines, unknown or missing keys, and empty lists are usage errors (exit
//! 2) reported with their line number where one exists. Rows are emitted in
//! deterministic grid order: `rho` outermost, then `k`, then `gamma`.

use crate::output::csv_record;
use crate::report::ComparisonRow;
use crate::Failure;
use flexloss::SystemParams;
use std::path::{Path, PathBuf};

/// A parsed sweep config.
struct SweepConfig {
    rho_list: Vec<f64>,
    k_list: Vec<f64>,
    gamma_list: Vec<f64>,
    output: PathBuf,
}

/// One `key = value` assignment with its 1-based line number.
struct Assignment {
    line: usize,
    value: String,
}

const KEYS: [&str; 4] = ["rho_list", "k_list", "gamma_list", "output"];

fn parse_config(text: &str) -> Result<SweepConfig, Failure> {
    let mut assignments: [Option<Assignment>; 4] = [None, None, None, None];

    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(Failure::Usage(format!(
                "config line {line}: expected `key = value`, got `{content}`"
            )));
        };
        let key = key.trim();
        let value = value.trim();
        let Some(slot) = KEYS.iter().position(|&k| k == key) else {
            return Err(Failure::Usage(format!(
                "config line {line}: unknown key `{key}` (expected one of {})",
                KEYS.join(", ")
            )));
        };
        if let Some(previous) = &assignments[slot] {
            eprintln!(
                "warning: config line {line}: duplicate key `{key}` overrides line {}",
                previous.line
            );
        }
        assignments[slot] = Some(Assignment {
            line,
            value: value.to_string(),
        });
    }

    let mut take = |slot: usize| -> Result<Assignment, Failure> {
        assignments[slot].take().ok_or_else(|| {
            Failure::Usage(format!("config: missing required key `{}`", KEYS[slot]))
        })
    };
    let rho = take(0)?;
    let k = take(1)?;
    let gamma = take(2)?;
    let output = take(3)?;

    Ok(SweepConfig {
        rho_list: parse_list(&rho, "rho_list", |v| v.is_finite() && v > 0.0, "positive")?,
        k_list: parse_list(
            &k,
            "k_list",
            |v| v.is_finite() && (0.0..=1.0).contains(&v),
            "in [0, 1]",
        )?,
        gamma_list: parse_list(
            &gamma,
            "gamma_list",
            |v| v.is_finite() && (0.0..=1.0).contains(&v),
            "in [0, 1]",
        )?,
        output: PathBuf::from(output.value),
    })
}

/// Parses a comma-separated number list, rejecting empty lists and values
/// outside the admissible range.
fn parse_list(
    assignment: &Assignment,
    key: &str,
    admissible: impl Fn(f64) -> bool,
    range: &str,
) -> Result<Vec<f64>, Failure> {
    let line = assignment.line;
    let items: Vec<&str> = assignment
        .value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    if items.is_empty() {
        return Err(Failure::Usage(format!(
            "config line {line}: `{key}` must contain at least one value"
        )));
    }
    let mut values = Vec::with_capacity(items.len());
    for item in items {
        let value: f64 = item.parse().map_err(|_| {
            Failure::Usage(format!(
                "config line {line}: `{key}` contains `{item}`, which is not a number"
            ))
        })?;
        if !admissible(value) {
            return Err(Failure::Usage(format!(
                "config line {line}: `{key}` value {value} must be {range}"
            )));
        }
        values.push(value);
    }
    Ok(values)
}

/// Reads the config and writes the sweep report.
pub(crate) fn run(config_path: &Path) -> Result<(), Failure> {
    let text = std::fs::read_to_string(config_path)
        .map_err(|err| Failure::Io(format!("cannot read {}: {err}", config_path.display())))?;
    let config = parse_config(&text)?;

    let mut out = csv_record(ComparisonRow::CSV_HEADER);
    let mut rows = 0_usize;
    for &rho in &config.rho_list {
        for &k in &config.k_list {
            for &gamma in &config.gamma_list {
                let row = ComparisonRow::compute(SystemParams::new(rho, k, gamma)?)?;
                out.push_str(&csv_record(row.csv_fields()));
                rows += 1;
            }
        }
    }

    std::fs::write(&config.output, out)
        .map_err(|err| Failure::Io(format!("cannot write {}: {err}", config.output.display())))?;
    eprintln!("wrote {rows} rows to {}", config.output.display());
    Ok(())
}
