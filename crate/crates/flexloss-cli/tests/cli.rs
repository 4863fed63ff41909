//! End-to-end tests of the `flexloss` binary: flag handling, output
//! formats, exit codes, and byte-level determinism.

use std::path::Path;
use std::process::Command;

/// Runs the binary and returns (exit code, stdout, stderr).
fn run(args: &[&str]) -> (i32, String, String) {
    let output = Command::new(env!("CARGO_BIN_EXE_flexloss"))
        .args(args)
        .output()
        .expect("binary should spawn");
    (
        output.status.code().expect("no signal expected"),
        String::from_utf8(output.stdout).expect("stdout is UTF-8"),
        String::from_utf8(output.stderr).expect("stderr is UTF-8"),
    )
}

fn run_json(args: &[&str]) -> serde_json::Value {
    let (code, stdout, stderr) = run(args);
    assert_eq!(code, 0, "stderr: {stderr}");
    serde_json::from_str(&stdout).expect("stdout is a single JSON object")
}

#[test]
fn solve_full_identical_rates_prints_the_known_distribution() {
    let (code, stdout, _) = run(&[
        "solve", "--design", "full", "--rho", "1", "--k", "1", "--gamma", "1",
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("(0,0), 0.200000000000"), "{stdout}");
    assert!(stdout.contains("residual_inf, "), "{stdout}");
    // canonical order: states listed row-major from (0,0) to (2,2)
    let first_two: Vec<&str> = stdout.lines().take(2).collect();
    assert!(first_two[0].starts_with("(0,0), "));
    assert!(first_two[1].starts_with("(0,1), "));
}

#[test]
fn solve_partial_with_frozen_overflow_service_hits_the_two_state_limit() {
    let (code, stdout, _) = run(&[
        "solve", "--design", "partial", "--rho", "2", "--k", "1", "--gamma", "0",
        "--format", "csv",
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("\"(0,1)\",0.333333333333"), "{stdout}");
    assert!(stdout.contains("\"(1,1)\",0.666666666667"), "{stdout}");
    assert!(stdout.ends_with("\r\n"), "CSV records end with CRLF");
    assert_eq!(stdout.lines().next().unwrap().trim_end(), "state,probability");
}

#[test]
fn solve_rejects_the_independent_design_with_a_pointer() {
    let (code, stdout, stderr) = run(&[
        "solve", "--design", "independent", "--rho", "1", "--k", "1", "--gamma", "1",
    ]);
    assert_eq!(code, 2);
    assert!(stdout.is_empty());
    assert!(stderr.contains("product-form"), "{stderr}");
    assert!(stderr.contains("throughput"), "{stderr}");
}

#[test]
fn solve_domain_errors_name_the_offending_flag() {
    let (code, _, stderr) = run(&[
        "solve", "--design", "full", "--rho", "-1", "--k", "1", "--gamma", "1",
    ]);
    assert_eq!(code, 2);
    assert!(stderr.contains("`rho`"), "{stderr}");

    let (code, _, stderr) = run(&[
        "solve", "--design", "full", "--rho", "1", "--k", "3", "--gamma", "1",
    ]);
    assert_eq!(code, 2);
    assert!(stderr.contains("`k`"), "{stderr}");
}

#[test]
fn solve_json_is_a_versioned_object_with_all_states() {
    let value = run_json(&[
        "solve", "--design", "full", "--rho", "0.8", "--k", "0.6", "--gamma", "0.7",
        "--format", "json",
    ]);
    assert_eq!(value["schema_version"], "1");
    assert_eq!(value["command"], "solve");
    let states = value["states"].as_array().unwrap();
    assert_eq!(states.len(), 9);
    let total: f64 = states
        .iter()
        .map(|s| s["probability"].as_f64().unwrap())
        .sum();
    assert!((total - 1.0).abs() < 1e-9);
    assert!(value["residual_inf"].as_f64().unwrap() < 1e-12);
}

#[test]
fn throughput_picks_the_optimal_design_per_regime() {
    let value = run_json(&[
        "throughput", "--rho", "1", "--k", "0.5", "--gamma", "0.9", "--format", "json",
    ]);
    assert_eq!(value["optimal"], "full");
    assert_eq!(value["regime_index"], 4);
    assert_eq!(value["tie"], serde_json::Value::Null);

    let value = run_json(&[
        "throughput", "--rho", "1", "--k", "0.5", "--gamma", "0.45", "--format", "json",
    ]);
    assert_eq!(value["optimal"], "partial");
    assert_eq!(value["regime_index"], 3);
}

#[test]
fn throughput_symmetric_identical_rates_matches_closed_forms() {
    let value = run_json(&[
        "throughput", "--rho", "1", "--k", "1", "--gamma", "1", "--format", "json",
    ]);
    assert_eq!(value["t_is"].as_f64().unwrap(), 1.0);
    assert!((value["t_ps"].as_f64().unwrap() - 12.0 / 11.0).abs() < 1e-9);
    assert!((value["t_fs"].as_f64().unwrap() - 1.2).abs() < 1e-9);
    // boundary k: the four-regime classification doesn't apply
    assert_eq!(value["regime_index"], serde_json::Value::Null);
    assert_eq!(value["optimal"], "full");
}

#[test]
fn throughput_on_a_threshold_reports_the_tie() {
    // 0.3333333333333333 parses to exactly 1/3 = gamma_g(1, 0.5)
    let value = run_json(&[
        "throughput", "--rho", "1", "--k", "0.5", "--gamma", "0.3333333333333333",
        "--format", "json",
    ]);
    assert_eq!(value["tie"], "partial=independent");
    assert_eq!(value["regime_index"], serde_json::Value::Null);
    assert_eq!(value["optimal"], "independent");
}

#[test]
fn thresholds_interior_values_match_the_analysis() {
    let value = run_json(&["thresholds", "--rho", "1", "--k", "0.5", "--format", "json"]);
    assert_eq!(value["kind"], "interior");
    assert!((value["gamma_g"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-12);
    assert!((value["gamma_b"].as_f64().unwrap() - 0.392014449286).abs() < 1e-6);
    assert!((value["gamma_r"].as_f64().unwrap() - 0.476832956171).abs() < 1e-6);
}

#[test]
fn thresholds_report_the_boundary_degeneracies() {
    let value = run_json(&["thresholds", "--rho", "1", "--k", "0", "--format", "json"]);
    assert_eq!(value["kind"], "degenerate_k_zero");
    assert_eq!(value["gamma_g"].as_f64().unwrap(), 0.0);
    assert_eq!(value["gamma_b"].as_f64().unwrap(), 0.0);
    assert_eq!(value["gamma_r"], serde_json::Value::Null);
    assert!(value["note"].as_str().unwrap().contains("identical"));

    let value = run_json(&["thresholds", "--rho", "1", "--k", "1", "--format", "json"]);
    assert_eq!(value["kind"], "coincident_k_one");
    for key in ["gamma_g", "gamma_b", "gamma_r"] {
        assert_eq!(value[key].as_f64().unwrap(), 0.5);
    }
}

#[test]
fn levelset_files_are_correct_and_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let svg_a = dir.path().join("a.svg");
    let csv_a = dir.path().join("a.csv");
    let svg_b = dir.path().join("b.svg");
    let csv_b = dir.path().join("b.csv");
    let render = |svg: &Path, csv: &Path| {
        let (code, _, stderr) = run(&[
            "levelset", "--rho", "1", "--k-min", "0.02", "--k-max", "0.98",
            "--steps", "49",
            "--out-svg", svg.to_str().unwrap(),
            "--out-csv", csv.to_str().unwrap(),
        ]);
        assert_eq!(code, 0, "stderr: {stderr}");
    };
    render(&svg_a, &csv_a);
    render(&svg_b, &csv_b);
    assert_eq!(
        std::fs::read(&svg_a).unwrap(),
        std::fs::read(&svg_b).unwrap(),
        "identical flags must reproduce identical SVG bytes"
    );
    assert_eq!(
        std::fs::read(&csv_a).unwrap(),
        std::fs::read(&csv_b).unwrap(),
        "identical flags must reproduce identical CSV bytes"
    );

    let csv = std::fs::read_to_string(&csv_a).unwrap();
    let rows: Vec<&str> = csv.split("\r\n").filter(|l| !l.is_empty()).collect();
    assert_eq!(rows[0], "k,gamma_g,gamma_b,gamma_r");
    assert_eq!(rows.len(), 50);
    for row in &rows[1..] {
        let cols: Vec<f64> = row.split(',').map(|c| c.parse().unwrap()).collect();
        let (k, g, b, r) = (cols[0], cols[1], cols[2], cols[3]);
        // the green curve is the exact closed form k*rho/(k*rho + 1)
        assert!((g - k / (k + 1.0)).abs() < 1e-12);
        // curve ordering from the threshold chain
        assert!(g < b && b < r && r < 1.0 / 2.0 + 1e-9);
    }
    // the red curve recovers the plotted anchor at k = 0.5
    let mid: Vec<f64> = rows[25].split(',').map(|c| c.parse().unwrap()).collect();
    assert_eq!(mid[0], 0.5);
    assert!((mid[3] - 0.476957).abs() < 1e-3);
    assert!((mid[2] - 0.392203).abs() < 1e-3);

    let svg = std::fs::read_to_string(&svg_a).unwrap();
    for needle in ["stroke=\"green\"", "stroke=\"blue\"", "stroke=\"red\"", "&lt;"] {
        assert!(svg.contains(needle), "missing {needle}");
    }
}

#[test]
fn levelset_validates_flags_and_maps_io_failures() {
    let (code, _, stderr) = run(&[
        "levelset", "--rho", "1", "--k-min", "0.9", "--k-max", "0.1",
        "--out-svg", "x.svg", "--out-csv", "x.csv",
    ]);
    assert_eq!(code, 2);
    assert!(stderr.contains("k-min"), "{stderr}");

    let (code, _, stderr) = run(&[
        "levelset", "--rho", "1", "--steps", "1",
        "--out-svg", "x.svg", "--out-csv", "x.csv",
    ]);
    assert_eq!(code, 2);
    assert!(stderr.contains("steps"), "{stderr}");

    let dir = tempfile::tempdir().unwrap();
    let (code, _, stderr) = run(&[
        "levelset", "--rho", "1", "--steps", "2",
        "--out-svg", "/this/path/does/not/exist/x.svg",
        "--out-csv", dir.path().join("x.csv").to_str().unwrap(),
    ]);
    assert_eq!(code, 3);
    assert!(stderr.contains("cannot write"), "{stderr}");
}

#[test]
fn simulate_reproduces_bytes_and_validates_against_the_analytic_value() {
    let args = [
        "simulate", "--design", "full", "--rho", "1", "--k", "1", "--gamma", "1",
        "--horizon", "300000", "--seed", "42", "--format", "json",
    ];
    let (code_a, stdout_a, _) = run(&args);
    let (code_b, stdout_b, _) = run(&args);
    assert_eq!(code_a, 0);
    assert_eq!(code_b, 0);
    assert_eq!(stdout_a, stdout_b, "same seed must reproduce identical bytes");

    let value: serde_json::Value = serde_json::from_str(&stdout_a).unwrap();
    assert_eq!(value["analytic"].as_f64().unwrap(), 1.2);
    assert_eq!(value["pass"], true);
    assert!(value["z_score"].as_f64().unwrap() < 3.0);

    let value = run_json(&[
        "simulate", "--design", "independent", "--rho", "1", "--k", "1",
        "--horizon", "300000", "--format", "json",
    ]);
    assert_eq!(value["analytic"].as_f64().unwrap(), 1.0);
    assert_eq!(value["pass"], true);
}

#[test]
fn simulate_rejects_bad_parameters_and_configs() {
    let (code, _, stderr) = run(&[
        "simulate", "--design", "full", "--rho", "1", "--k", "1", "--gamma", "2",
    ]);
    assert_eq!(code, 2);
    assert!(stderr.contains("`gamma`"), "{stderr}");

    let (code, _, stderr) = run(&[
        "simulate", "--design", "full", "--rho", "1", "--k", "1", "--batches", "3",
    ]);
    assert_eq!(code, 2);
    assert!(stderr.contains("batches"), "{stderr}");
}

#[test]
fn sweep_emits_the_grid_in_order_with_threshold_consistent_optima() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.csv");
    let config_path = dir.path().join("grid.conf");
    std::fs::write(
        &config_path,
        format!(
            "# three-by-three grid at unit load\n\
             rho_list = 1\n\
             k_list = 0.25, 0.5, 0.75\n\
             gamma_list = 0.2, 0.45, 0.9\n\
             output = {}\n",
            out.display()
        ),
    )
    .unwrap();
    let (code, _, stderr) = run(&["sweep", config_path.to_str().unwrap()]);
    assert_eq!(code, 0, "stderr: {stderr}");
    assert!(stderr.contains("9 rows"), "{stderr}");

    let report = std::fs::read_to_string(&out).unwrap();
    let rows: Vec<&str> = report.split("\r\n").filter(|l| !l.is_empty()).collect();
    assert_eq!(rows[0], "rho,k,gamma,t_is,t_ps,t_fs,regime_index,optimal,tie");
    assert_eq!(rows.len(), 10);

    // grid order: k outer loops before gamma; optima follow the regimes
    let optima: Vec<&str> = rows[1..].iter().map(|r| r.split(',').nth(7).unwrap()).collect();
    assert_eq!(
        optima,
        [
            "independent", "partial", "full", // k = 0.25
            "independent", "partial", "full", // k = 0.5
            "independent", "partial", "full", // k = 0.75
        ]
    );
    // (k=0.25, gamma=0.2) sits exactly on gamma_g: tied, no regime index
    let first: Vec<&str> = rows[1].split(',').collect();
    assert_eq!(first[6], "");
    assert_eq!(first[8], "partial=independent");

    // every interior row's optimal agrees with the regime prediction
    for row in &rows[2..] {
        let cols: Vec<&str> = row.split(',').collect();
        let expected = match cols[6] {
            "1" => "independent",
            "2" | "3" => "partial",
            "4" => "full",
            other => panic!("unexpected regime {other}"),
        };
        assert_eq!(cols[7], expected, "row {row}");
    }
}

#[test]
fn sweep_rejects_bad_configs_with_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let write_config = |name: &str, content: &str| {
        let path = dir.path().join(name);
        std::fs::write(&path, content).unwrap();
        path
    };

    let missing = dir.path().join("missing.conf");
    let (code, _, stderr) = run(&["sweep", missing.to_str().unwrap()]);
    assert_eq!(code, 3);
    assert!(stderr.contains("cannot read"), "{stderr}");

    let path = write_config(
        "empty-gamma.conf",
        "rho_list = 1\nk_list = 0.5\ngamma_list =\noutput = o.csv\n",
    );
    let (code, _, stderr) = run(&["sweep", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(stderr.contains("line 3"), "{stderr}");

    let path = write_config("malformed.conf", "rho_list = 1\nwhat is this\n");
    let (code, _, stderr) = run(&["sweep", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(stderr.contains("line 2"), "{stderr}");

    let path = write_config(
        "unknown.conf",
        "rho_list = 1\nk_list = 0.5\ngamma_list = 0.5\nspeed = 9\noutput = o.csv\n",
    );
    let (code, _, stderr) = run(&["sweep", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(stderr.contains("line 4") && stderr.contains("speed"), "{stderr}");
}

#[test]
fn sweep_duplicate_keys_warn_and_last_wins() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("dup.csv");
    let config_path = dir.path().join("dup.conf");
    std::fs::write(
        &config_path,
        format!(
            "rho_list = 5\nrho_list = 1\nk_list = 0.5\ngamma_list = 0.9\noutput = {}\n",
            out.display()
        ),
    )
    .unwrap();
    let (code, _, stderr) = run(&["sweep", config_path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(
        stderr.contains("warning") && stderr.contains("duplicate key `rho_list`"),
        "{stderr}"
    );
    let report = std::fs::read_to_string(&out).unwrap();
    // the later rho_list = 1 is the one evaluated
    assert!(report.contains("\r\n1.00000000000,"), "{report}");
}

#[test]
fn bare_invocation_is_a_usage_error_and_help_succeeds() {
    let (code, _, stderr) = run(&[]);
    assert_eq!(code, 2);
    assert!(stderr.to_lowercase().contains("usage"), "{stderr}");

    let (code, stdout, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("solve"));
    assert!(stdout.contains("levelset"));

    let (code, _, _) = run(&["--version"]);
    assert_eq!(code, 0);
}
