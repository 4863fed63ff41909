//! Browser-facing bindings over the flexloss library.
//!
//! Every export takes plain numbers/strings and returns a `String` — JSON
//! for data, SVG markup for the chart — so the page needs no shared-memory
//! plumbing. Errors come back as `{"error": "..."}` instead of exceptions.
//!
//! Build with `wasm-pack build --target web` (see the workspace README);
//! the crate also compiles natively so the bindings are unit-tested on the
//! host.

use serde_json::json;
use wasm_bindgen::prelude::wasm_bindgen;

use flexloss::analysis::{self, DEFAULT_TOL};
use flexloss::ctmc;
use flexloss::fmt::round12;
use flexloss::plot::levelset_svg;
use flexloss::{FlexibilityDesign, SystemParams};

fn error_json(message: impl std::fmt::Display) -> String {
    json!({ "error": message.to_string() }).to_string()
}

/// Compares the three designs at one parameter point.
///
/// Returns JSON with the three throughputs, the thresholds for `(rho, k)`
/// where they exist, the ordering regime (1–4, or null on a boundary or
/// tie), the optimal design, and any tied design pairs.
#[wasm_bindgen]
pub fn throughput_report(rho: f64, k: f64, gamma: f64) -> String {
    let params = match SystemParams::new(rho, k, gamma) {
        Ok(p) => p,
        Err(e) => return error_json(e),
    };
    let throughput = |design| ctmc::throughput(design, params).map(round12);
    let (t_is, t_ps, t_fs) = match (
        throughput(FlexibilityDesign::Independent),
        throughput(FlexibilityDesign::Partial),
        throughput(FlexibilityDesign::Full),
    ) {
        (Ok(a), Ok(b), Ok(c)) => (a, b, c),
        (Err(e), ..) | (_, Err(e), _) | (.., Err(e)) => return error_json(e),
    };

    // value-side ties within the same window the CLI uses
    let mut ties: Vec<&str> = Vec::new();
    if (t_fs - t_ps).abs() <= 1e-9 {
        ties.push("full=partial");
    }
    if (t_fs - t_is).abs() <= 1e-9 {
        ties.push("full=independent");
    }
    if (t_ps - t_is).abs() <= 1e-9 {
        ties.push("partial=independent");
    }

    let regime = match analysis::classify_regime(params) {
        Ok(r) => Some(r.regime_index),
        Err(_) => None, // boundary parameters or a threshold tie: no regime
    };
    let best = t_is.max(t_ps).max(t_fs);
    let optimal = if t_is >= best - 1e-9 {
        FlexibilityDesign::Independent
    } else if t_ps >= best - 1e-9 {
        FlexibilityDesign::Partial
    } else {
        FlexibilityDesign::Full
    };

    let thresholds = match analysis::threshold_report(rho, k, DEFAULT_TOL) {
        Ok(analysis::ThresholdReport::Interior(set)) => json!({
            "gamma_g": round12(set.gamma_g),
            "gamma_b": round12(set.gamma_b),
            "gamma_r": round12(set.gamma_r),
        }),
        Ok(analysis::ThresholdReport::Degenerate { .. }) => json!({
            "gamma_g": 0.0, "gamma_b": 0.0, "gamma_r": serde_json::Value::Null,
        }),
        Ok(analysis::ThresholdReport::Coincident { gamma, .. }) => json!({
            "gamma_g": round12(gamma), "gamma_b": round12(gamma), "gamma_r": round12(gamma),
        }),
        Err(_) => serde_json::Value::Null,
    };

    json!({
        "rho": rho,
        "k": k,
        "gamma": gamma,
        "t_is": t_is,
        "t_ps": t_ps,
        "t_fs": t_fs,
        "regime_index": regime,
        "optimal": optimal.name(),
        "tie": if ties.is_empty() { serde_json::Value::Null } else { ties.join(";").into() },
        "thresholds": thresholds,
    })
    .to_string()
}

/// Renders the three threshold curves over `k ∈ [0.02, 0.98]` at the given
/// load as a standalone SVG string (`steps` grid points, at least 2).
#[wasm_bindgen]
pub fn levelset_chart(rho: f64, steps: u32) -> String {
    if !(2..=2000).contains(&steps) {
        return error_json("steps must be between 2 and 2000");
    }
    let span = 0.98 - 0.02;
    let grid: Vec<f64> = (0..steps)
        .map(|i| 0.02 + span * f64::from(i) / f64::from(steps - 1))
        .collect();
    match analysis::trace_level_sets(rho, &grid, DEFAULT_TOL) {
        Ok(curves) => levelset_svg(&curves),
        Err(e) => error_json(e),
    }
}

/// Solves one chain and returns its stationary distribution as JSON:
/// `{"states": [{"state": "(0,0)", "probability": …}, …],
///   "residual_inf": …}`.
///
/// `design` is `"partial"` or `"full"`; the independent design has a
/// product-form solution and no joint chain, so it is rejected like any
/// other unknown name.
#[wasm_bindgen]
pub fn stationary_table(design: &str, rho: f64, k: f64, gamma: f64) -> String {
    let design: FlexibilityDesign = match design.parse() {
        Ok(FlexibilityDesign::Independent) => {
            return error_json(
                "the independent design has a product-form solution and no joint chain",
            )
        }
        Ok(d) => d,
        Err(e) => return error_json(e),
    };
    let params = match SystemParams::new(rho, k, gamma) {
        Ok(p) => p,
        Err(e) => return error_json(e),
    };
    let gen = match ctmc::build_generator(design, params) {
        Ok(g) => g,
        Err(e) => return error_json(e),
    };
    // gamma = 0 decomposes the chain; answer with the closed-form limit
    let dist = match if params.gamma() == 0.0 {
        flexloss::closed_form::stationary_gamma_zero(design, params)
    } else {
        ctmc::stationary_distribution(&gen)
    } {
        Ok(d) => d,
        Err(e) => return error_json(e),
    };
    let states: Vec<serde_json::Value> = dist
        .iter()
        .map(|(state, p)| json!({ "state": state.to_string(), "probability": round12(p) }))
        .collect();
    json!({
        "design": design.name(),
        "states": states,
        "residual_inf": round12(ctmc::balance_residual(&gen, &dist)),
    })
    .to_string()
}
