//! End-to-end checks of the command-line contract: exit codes, CSV shape,
//! and determinism.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qudit-grover"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf8 output")
}

#[test]
fn verify_ternary_passes() {
    let out = run(&["verify", "--d", "3", "--n", "2"]);
    assert!(out.status.success(), "exit: {:?}", out.status);
    let text = stdout(&out);
    assert!(text.contains("lemma_1_1 PASS"), "{text}");
    assert!(text.contains("theorem_2_invariance PASS"), "{text}");
    assert!(text.contains("lemma_3_2 PASS"), "{text}");
    assert!(!text.contains("FAIL"), "{text}");
}

#[test]
fn verify_binary_includes_circuit_theorem() {
    let out = run(&["verify", "--d", "2", "--n", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("binary_circuit_theorem PASS"), "{text}");
}

#[test]
fn verify_composite_arity_runs() {
    let out = run(&["verify", "--d", "4", "--n", "2"]);
    assert!(out.status.success(), "composite arity should verify cleanly");
    assert!(!stdout(&out).contains("FAIL"));
}

#[test]
fn flag_errors_exit_two() {
    assert_eq!(run(&["verify", "--d", "1", "--n", "2"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--d", "3", "--n", "9"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--d", "3"]).status.code(), Some(2)); // missing --n
    assert_eq!(
        run(&["scan-r", "--d", "3", "--n", "2", "--tau", "9"]).status.code(),
        Some(2)
    );
}

#[test]
fn scan_r_binary_peak() {
    let out = run(&["scan-r", "--d", "2", "--n", "10", "--r-max", "60"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "r,probability,analytic_envelope");
    // r = 0 row carries probability 1/N
    let first: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(first[0], "0");
    let p0: f64 = first[1].parse().unwrap();
    assert!((p0 - 1.0 / 1024.0).abs() < 1e-15, "p0={p0}");
    // peak row
    let peak: Vec<&str> = lines[26].split(',').collect();
    assert_eq!(peak[0], "25");
    let p25: f64 = peak[1].parse().unwrap();
    assert!(p25 >= 0.999, "p25={p25}");
    assert_eq!(lines.last().unwrap(), &"# r_opt=25");
}

#[test]
fn scan_r_ternary_peak_near_analytic() {
    let out = run(&["scan-r", "--d", "3", "--n", "6", "--r-max", "40"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let footer = text.lines().last().unwrap();
    let r_opt: f64 = footer.trim_start_matches("# r_opt=").parse().unwrap();
    assert!((r_opt - 17.3).abs() <= 1.0, "{footer}");
}

#[test]
fn complexity_curves_converge_for_binary() {
    let out = run(&["complexity", "--d", "2", "--n-max", "14"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let last = text.lines().last().unwrap();
    let fields: Vec<&str> = last.split(',').collect();
    assert_eq!(fields[0], "16384");
    let analytic: f64 = fields[2].parse().unwrap();
    let quarter: f64 = fields[3].parse().unwrap();
    assert!((analytic - quarter).abs() / 16384f64.sqrt() <= 1e-2);
}

#[test]
fn complexity_ternary_boundary_row() {
    let out = run(&["complexity", "--d", "3", "--n-max", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let first: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(first[0], "3");
    let analytic: f64 = first[2].parse().unwrap();
    assert!((analytic / 3f64.sqrt() - 1.0 / 3f64.sqrt()).abs() <= 1e-12);
}

#[test]
fn expected_runs_reports_the_constants() {
    let out = run(&["expected-runs", "--d", "3"]);
    assert!(out.status.success());
    let mut hat = None;
    let mut star = None;
    let mut constant = None;
    for line in stdout(&out).lines().skip(1) {
        let (name, value) = line.split_once(',').unwrap();
        let value: f64 = value.parse().unwrap();
        match name {
            "expected_calls_per_sqrt_n_at_rho_hat" => hat = Some(value),
            "expected_calls_per_sqrt_n_at_rho_star" => star = Some(value),
            "universal_constant_x_over_sin2x" => constant = Some(value),
            _ => {}
        }
    }
    assert!((hat.unwrap() - 2.565).abs() <= 1e-3);
    assert!((star.unwrap() - 2.253).abs() <= 1e-3);
    assert!((constant.unwrap() - 1.380).abs() <= 1e-3);

    let out2 = run(&["expected-runs", "--d", "2"]);
    let text = stdout(&out2);
    let p_line = text
        .lines()
        .find(|l| l.starts_with("p_at_rho_hat"))
        .unwrap();
    let p: f64 = p_line.split_once(',').unwrap().1.parse().unwrap();
    assert!((p - 1.0).abs() <= 1e-9);
}

#[test]
fn simulate_is_deterministic_and_reliable() {
    let args = [
        "simulate", "--d", "3", "--n", "6", "--trials", "300", "--seed", "7",
    ];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout, "seeded runs must be byte-identical");
    let text = stdout(&first);
    let footer = text.lines().last().unwrap();
    let rate: f64 = footer
        .split_whitespace()
        .find_map(|f| f.strip_prefix("success_rate="))
        .unwrap()
        .parse()
        .unwrap();
    assert!(rate >= 0.98, "{footer}");
    // every row accounts oracle_calls = runs * r
    let mut rows = 0;
    for line in text.lines().skip(1) {
        if line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let runs: usize = fields[2].parse().unwrap();
        let calls: usize = fields[3].parse().unwrap();
        assert_eq!(calls % runs, 0);
        rows += 1;
    }
    assert_eq!(rows, 300);
}

#[test]
fn simulate_mean_tracks_the_analytic_expectation() {
    let out = run(&[
        "simulate", "--d", "3", "--n", "6", "--trials", "500", "--seed", "3",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let footer = text.lines().last().unwrap();
    let field = |key: &str| -> f64 {
        footer
            .split_whitespace()
            .find_map(|f| f.strip_prefix(key))
            .unwrap()
            .parse()
            .unwrap()
    };
    let mean = field("mean_oracle_calls=");
    let analytic = field("analytic_expected_calls=");
    assert!((mean - analytic).abs() / analytic <= 0.10, "{footer}");
}

#[test]
fn dimension_cap_env_var_is_honoured() {
    // a 64-entry budget caps operators at 8x8, so d^n = 9 must be rejected
    let out = Command::new(env!("CARGO_BIN_EXE_qudit-grover"))
        .args(["verify", "--d", "3", "--n", "2"])
        .env("QUDIT_GROVER_MAX_DIM", "64")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(2));
    let ok = Command::new(env!("CARGO_BIN_EXE_qudit-grover"))
        .args(["verify", "--d", "2", "--n", "3"])
        .env("QUDIT_GROVER_MAX_DIM", "64")
        .output()
        .expect("binary runs");
    assert!(ok.status.success(), "8x8 operators fit a 64-entry budget");
}

#[test]
fn tsv_format_switches_the_separator() {
    let out = run(&["expected-runs", "--d", "3", "--format", "tsv"]);
    assert!(out.status.success());
    assert!(stdout(&out).lines().next().unwrap().contains('\t'));
}

#[test]
fn unwritable_output_exits_three() {
    let out = run(&[
        "scan-r", "--d", "2", "--n", "2", "--out", "/nonexistent-dir/scan.csv",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn output_file_matches_stdout() {
    let dir = std::env::temp_dir().join("qudit-grover-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("scan.csv");
    let piped = run(&["scan-r", "--d", "3", "--n", "2", "--r-max", "5"]);
    let filed = run(&[
        "scan-r", "--d", "3", "--n", "2", "--r-max", "5", "--out",
        path.to_str().unwrap(),
    ]);
    assert!(filed.status.success());
    assert_eq!(std::fs::read(&path).unwrap(), piped.stdout);
}
