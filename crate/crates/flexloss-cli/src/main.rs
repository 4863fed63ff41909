//! `flexloss` — analysis of a two-server loss system where customers may
//! overflow to a non-dedicated server that serves them at a prolonged
//! (slower) rate.
//!
//! Subcommands: `solve` (stationary distribution), `throughput` (compare
//! the three flexibility designs), `thresholds` (the pairwise-crossing
//! values of `γ`), `levelset` (SVG/CSV of the threshold curves over `k`),
//! `simulate` (discrete-event estimate with CI and analytic comparison),
//! and `sweep` (batch evaluation of a parameter grid from a config file).
//!
//! Exit codes: 0 success, 2 usage or domain error, 3 file I/O error.
//! Results go to stdout; all diagnostics go to stderr.

mod output;
mod report;
mod sweep;

use clap::{Parser, Subcommand, ValueEnum};
use flexloss::fmt::{round12, sig12};
use flexloss::{analysis, closed_form, ctmc, simulate, FlexibilityDesign, SystemParams};
use output::{csv_record, emit, emit_record, OutputFormat, Value};
use report::ComparisonRow;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// A command failure mapped to a process exit code.
#[derive(Debug)]
pub(crate) enum Failure {
    /// Bad flags, bad config, or parameters outside the model's domain
    /// (exit 2).
    Usage(String),
    /// A file could not be read or written (exit 3).
    Io(String),
}

impl From<flexloss::Error> for Failure {
    fn from(err: flexloss::Error) -> Self {
        Failure::Usage(err.to_string())
    }
}

type CmdResult = Result<(), Failure>;

#[derive(Parser)]
#[command(
    name = "flexloss",
    version,
    about = "Two-server loss system with prolonged non-dedicated service: \
             exact solves, design comparison, thresholds, level sets, and simulation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// `--design` flag values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DesignArg {
    /// No overflow: two independent loss servers.
    Independent,
    /// Only type-1 customers may overflow to server 2.
    Partial,
    /// Both customer types may overflow.
    Full,
}

impl From<DesignArg> for FlexibilityDesign {
    fn from(arg: DesignArg) -> Self {
        match arg {
            DesignArg::Independent => FlexibilityDesign::Independent,
            DesignArg::Partial => FlexibilityDesign::Partial,
            DesignArg::Full => FlexibilityDesign::Full,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Solve the stationary distribution of a design's Markov chain
    Solve {
        /// Flexibility design to solve (full or partial; independent has a
        /// product form — use `throughput`)
        #[arg(long, value_enum)]
        design: DesignArg,
        /// Type-1 offered load (> 0)
        #[arg(long, allow_negative_numbers = true)]
        rho: f64,
        /// Type-2 arrival-rate fraction (in [0, 1])
        #[arg(long, allow_negative_numbers = true)]
        k: f64,
        /// Prolonged service coefficient at a non-dedicated server (in [0, 1])
        #[arg(long, allow_negative_numbers = true)]
        gamma: f64,
        /// Output format
        #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
        format: OutputFormat,
    },
    /// Compare the three designs' throughputs and report the best
    Throughput {
        /// Type-1 offered load (> 0)
        #[arg(long, allow_negative_numbers = true)]
        rho: f64,
        /// Type-2 arrival-rate fraction (in [0, 1])
        #[arg(long, allow_negative_numbers = true)]
        k: f64,
        /// Prolonged service coefficient (in [0, 1])
        #[arg(long, allow_negative_numbers = true)]
        gamma: f64,
        /// Output format
        #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
        format: OutputFormat,
    },
    /// The gamma thresholds where pairs of designs swap ranking
    Thresholds {
        /// Type-1 offered load (> 0)
        #[arg(long, allow_negative_numbers = true)]
        rho: f64,
        /// Type-2 arrival-rate fraction (in [0, 1])
        #[arg(long, allow_negative_numbers = true)]
        k: f64,
        /// Output format
        #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
        format: OutputFormat,
    },
    /// Trace the three threshold curves over k and write SVG and CSV files
    Levelset {
        /// Type-1 offered load (> 0)
        #[arg(long, allow_negative_numbers = true)]
        rho: f64,
        /// Smallest k of the grid (0 < k-min < k-max)
        #[arg(long, default_value_t = 0.02, allow_negative_numbers = true)]
        k_min: f64,
        /// Largest k of the grid (k-max < 1)
        #[arg(long, default_value_t = 0.98, allow_negative_numbers = true)]
        k_max: f64,
        /// Number of grid points (>= 2)
        #[arg(long, default_value_t = 49)]
        steps: usize,
        /// Path for the SVG plot
        #[arg(long)]
        out_svg: PathBuf,
        /// Path for the CSV table
        #[arg(long)]
        out_csv: PathBuf,
    },
    /// Estimate a design's throughput by discrete-event simulation
    Simulate {
        /// Flexibility design to simulate
        #[arg(long, value_enum)]
        design: DesignArg,
        /// Type-1 offered load (> 0)
        #[arg(long, allow_negative_numbers = true)]
        rho: f64,
        /// Type-2 arrival-rate fraction (in [0, 1])
        #[arg(long, allow_negative_numbers = true)]
        k: f64,
        /// Prolonged service coefficient (in [0, 1]; never drawn by the
        /// independent design, which does not overflow)
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        gamma: f64,
        /// Run length in arrivals (both types)
        #[arg(long, default_value_t = 1_000_000)]
        horizon: u64,
        /// Random seed
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Arrivals discarded before measurement (default: 5% of horizon)
        #[arg(long)]
        warmup: Option<u64>,
        /// Batch count for the batch-means interval (>= 10, default 20)
        #[arg(long)]
        batches: Option<u32>,
        /// Output format
        #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
        format: OutputFormat,
    },
    /// Evaluate a parameter grid from a config file into a CSV report
    Sweep {
        /// Config file: UTF-8 `key = value` lines with `#` comments; keys
        /// rho_list, k_list, gamma_list (comma-separated numbers), output
        /// (CSV path)
        config: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // --help/--version land here too; those exit 0
            let code = if err.use_stderr() { 2 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(Failure::Io(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(3)
        }
    }
}

fn run(command: Command) -> CmdResult {
    match command {
        Command::Solve {
            design,
            rho,
            k,
            gamma,
            format,
        } => cmd_solve(design.into(), rho, k, gamma, format),
        Command::Throughput {
            rho,
            k,
            gamma,
            format,
        } => cmd_throughput(rho, k, gamma, format),
        Command::Thresholds { rho, k, format } => cmd_thresholds(rho, k, format),
        Command::Levelset {
            rho,
            k_min,
            k_max,
            steps,
            out_svg,
            out_csv,
        } => cmd_levelset(rho, k_min, k_max, steps, &out_svg, &out_csv),
        Command::Simulate {
            design,
            rho,
            k,
            gamma,
            horizon,
            seed,
            warmup,
            batches,
            format,
        } => cmd_simulate(design.into(), rho, k, gamma, horizon, seed, warmup, batches, format),
        Command::Sweep { config } => sweep::run(&config),
    }
}

fn cmd_solve(
    design: FlexibilityDesign,
    rho: f64,
    k: f64,
    gamma: f64,
    format: OutputFormat,
) -> CmdResult {
    if design == FlexibilityDesign::Independent {
        return Err(Failure::Usage(
            "the independent design has a product-form solution and no joint chain; \
             use `flexloss throughput` for its throughput"
                .to_string(),
        ));
    }
    let params = SystemParams::new(rho, k, gamma)?;
    let generator = ctmc::build_generator(design, params)?;
    // gamma = 0 decomposes the chain; route to the exact limit distribution
    let distribution = if gamma == 0.0 {
        closed_form::stationary_gamma_zero(design, params)?
    } else {
        ctmc::stationary_distribution(&generator)?
    };
    let residual = ctmc::balance_residual(&generator, &distribution);

    match format {
        OutputFormat::Json => {
            let states: Vec<serde_json::Value> = distribution
                .iter()
                .map(|(state, probability)| {
                    serde_json::json!({
                        "state": state.to_string(),
                        "probability": round12(probability),
                    })
                })
                .collect();
            emit(&format!(
                "{}\n",
                serde_json::json!({
                    "schema_version": "1",
                    "command": "solve",
                    "design": design.name(),
                    "rho": round12(rho),
                    "k": round12(k),
                    "gamma": round12(gamma),
                    "states": states,
                    "residual_inf": round12(residual),
                })
            ));
        }
        OutputFormat::Csv => {
            let mut out = csv_record(["state", "probability"]);
            for (state, probability) in distribution.iter() {
                out.push_str(&csv_record([state.to_string(), sig12(probability)]));
            }
            out.push_str(&csv_record(["residual_inf".to_string(), sig12(residual)]));
            emit(&out);
        }
        OutputFormat::Table => {
            use std::fmt::Write as _;
            let mut lines = String::new();
            for (state, probability) in distribution.iter() {
                let _ = writeln!(lines, "{state}, {}", sig12(probability));
            }
            let _ = writeln!(lines, "residual_inf, {}", sig12(residual));
            emit(&lines);
        }
    }
    Ok(())
}

fn cmd_throughput(rho: f64, k: f64, gamma: f64, format: OutputFormat) -> CmdResult {
    let params = SystemParams::new(rho, k, gamma)?;
    let row = ComparisonRow::compute(params)?;
    emit_record(
        format,
        "throughput",
        &[
            ("rho", Value::Num(rho)),
            ("k", Value::Num(k)),
            ("gamma", Value::Num(gamma)),
            ("t_is", Value::Num(row.t_is)),
            ("t_ps", Value::Num(row.t_ps)),
            ("t_fs", Value::Num(row.t_fs)),
            ("regime_index", Value::MaybeInt(row.regime_index)),
            ("optimal", Value::Str(row.optimal.name())),
            ("tie", Value::MaybeText(row.tie)),
        ],
    );
    Ok(())
}

fn cmd_thresholds(rho: f64, k: f64, format: OutputFormat) -> CmdResult {
    let report = analysis::threshold_report(rho, k, analysis::DEFAULT_TOL)?;
    let (kind, gamma_g, gamma_b, gamma_r, note): (_, _, _, Option<f64>, Option<String>) =
        match report {
            analysis::ThresholdReport::Interior(set) => (
                "interior",
                Some(set.gamma_g),
                Some(set.gamma_b),
                Some(set.gamma_r),
                None,
            ),
            analysis::ThresholdReport::Degenerate { .. } => (
                "degenerate_k_zero",
                Some(0.0),
                Some(0.0),
                None,
                Some(
                    "no type-2 stream: full and partial have identical throughput at \
                     every gamma (no full-vs-partial crossing), and both level sets \
                     against independent collapse to gamma = 0"
                        .to_string(),
                ),
            ),
            analysis::ThresholdReport::Coincident { gamma, .. } => (
                "coincident_k_one",
                Some(gamma),
                Some(gamma),
                Some(gamma),
                Some("symmetric system: all three thresholds coincide at rho/(rho+1)".to_string()),
            ),
        };
    emit_record(
        format,
        "thresholds",
        &[
            ("rho", Value::Num(rho)),
            ("k", Value::Num(k)),
            ("kind", Value::Str(kind)),
            ("gamma_g", Value::MaybeNum(gamma_g)),
            ("gamma_b", Value::MaybeNum(gamma_b)),
            ("gamma_r", Value::MaybeNum(gamma_r)),
            ("note", Value::MaybeText(note)),
        ],
    );
    Ok(())
}

fn cmd_levelset(
    rho: f64,
    k_min: f64,
    k_max: f64,
    steps: usize,
    out_svg: &Path,
    out_csv: &Path,
) -> CmdResult {
    if !(k_min.is_finite() && k_max.is_finite() && 0.0 < k_min && k_min < k_max && k_max < 1.0) {
        return Err(Failure::Usage(format!(
            "the k grid must satisfy 0 < k-min < k-max < 1, got [{k_min}, {k_max}]"
        )));
    }
    if steps < 2 {
        return Err(Failure::Usage(format!(
            "steps must be at least 2 to span [{k_min}, {k_max}], got {steps}"
        )));
    }
    let span = k_max - k_min;
    let grid: Vec<f64> = (0..steps)
        .map(|i| k_min + span * i as f64 / (steps - 1) as f64)
        .collect();
    let curves = analysis::trace_level_sets(rho, &grid, analysis::DEFAULT_TOL)?;
    write_file(out_svg, &flexloss::plot::levelset_svg(&curves))?;
    write_file(out_csv, &flexloss::plot::levelset_csv(&curves))?;
    eprintln!(
        "wrote {} and {} ({} grid points)",
        out_svg.display(),
        out_csv.display(),
        steps
    );
    Ok(())
}

fn write_file(path: &Path, content: &str) -> CmdResult {
    std::fs::write(path, content)
        .map_err(|err| Failure::Io(format!("cannot write {}: {err}", path.display())))
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    design: FlexibilityDesign,
    rho: f64,
    k: f64,
    gamma: f64,
    horizon: u64,
    seed: u64,
    warmup: Option<u64>,
    batches: Option<u32>,
    format: OutputFormat,
) -> CmdResult {
    let params = SystemParams::new(rho, k, gamma)?;
    let mut config = simulate::SimConfig::new(design, params, horizon, seed);
    if let Some(warmup_events) = warmup {
        config.warmup_events = warmup_events;
    }
    if let Some(batches) = batches {
        config.batches = batches;
    }
    let report = simulate::validate_against_analytic(&config)?;
    let estimate = report.estimate;
    emit_record(
        format,
        "simulate",
        &[
            ("design", Value::Str(design.name())),
            ("rho", Value::Num(rho)),
            ("k", Value::Num(k)),
            ("gamma", Value::Num(gamma)),
            ("horizon", Value::Int(horizon)),
            ("warmup", Value::Int(config.warmup_events)),
            ("batches", Value::Int(u64::from(config.batches))),
            ("seed", Value::Int(seed)),
            ("mean", Value::Num(estimate.mean)),
            ("half_width_95", Value::Num(estimate.half_width_95)),
            ("accepted", Value::Int(estimate.accepted)),
            ("offered", Value::Int(estimate.offered)),
            ("accepted_fraction_type1", Value::Num(estimate.by_type.0)),
            ("accepted_fraction_type2", Value::Num(estimate.by_type.1)),
            ("analytic", Value::Num(report.analytic)),
            ("z_score", Value::Num(report.z_score)),
            ("tolerance", Value::Num(report.tolerance)),
            ("pass", Value::Bool(report.pass)),
        ],
    );
    Ok(())
}
