//! Command-line front door for the qudit Grover toolkit.
//!
//! Exit codes: 0 success, 1 verification failure, 2 flag error, 3 I/O error.

use clap::{Parser, Subcommand, ValueEnum};
use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;

use qudit_grover::{
    exact_complexity, expected_calls, general_optimal_iterations, half_tangent_root,
    optimal_scaling, run_trials, tau_probability_curve, verify, Arity, GroverConfig,
    ScalingCriterion,
};

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_FLAG_ERROR: u8 = 2;
const EXIT_IO_ERROR: u8 = 3;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Tsv,
}

impl Format {
    fn separator(self) -> char {
        match self {
            Format::Csv => ',',
            Format::Tsv => '\t',
        }
    }
}

#[derive(Parser)]
#[command(
    name = "qudit-grover",
    about = "d-ary Grover search: verification, probability scans, complexity curves, Monte Carlo",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every named residual check at one arity/width pair
    Verify {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
    },
    /// Success probability against iteration count (CSV)
    ScanR {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
        /// Marked index; defaults to N-1
        #[arg(long)]
        tau: Option<usize>,
        #[arg(long = "r-max", default_value_t = 60)]
        r_max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Optimal iteration counts against codomain size (CSV)
    Complexity {
        #[arg(long)]
        d: usize,
        #[arg(long = "n-max")]
        n_max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Iteration scalings, peak probability, and expected oracle calls
    ExpectedRuns {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Monte Carlo of the repeated-run measurement protocol (CSV)
    Simulate {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
        /// Marked index; defaults to N-1
        #[arg(long)]
        tau: Option<usize>,
        /// Iteration scaling; defaults to the peak-probability scaling
        #[arg(long)]
        rho: Option<f64>,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

/// Fixed 12-significant-digit formatting, locale independent.
fn sig(x: f64) -> String {
    format!("{x:.11e}")
}

fn flag_error(message: &str) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(EXIT_FLAG_ERROR)
}

fn emit(out: Option<&PathBuf>, body: &str) -> ExitCode {
    match out {
        None => {
            print!("{body}");
            ExitCode::SUCCESS
        }
        Some(path) => match std::fs::write(path, body) {
            Ok(()) => ExitCode::SUCCESS,
            Err(err) => {
                eprintln!("error: cannot write {}: {err}", path.display());
                ExitCode::from(EXIT_IO_ERROR)
            }
        },
    }
}

fn parse_arity(d: usize) -> Result<Arity, ExitCode> {
    Arity::new(d).map_err(|err| flag_error(&err.to_string()))
}

fn parse_config(d: usize, n: usize, tau: Option<usize>) -> Result<GroverConfig, ExitCode> {
    let arity = parse_arity(d)?;
    if n == 0 {
        return Err(flag_error("--n must be at least 1"));
    }
    let size = (d as u128).pow(n as u32);
    let tau = tau.unwrap_or((size - 1) as usize);
    GroverConfig::new(arity, n, tau).map_err(|err| flag_error(&err.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify { d, n } => cmd_verify(d, n),
        Command::ScanR {
            d,
            n,
            tau,
            r_max,
            out,
            format,
        } => cmd_scan_r(d, n, tau, r_max, out, format),
        Command::Complexity {
            d,
            n_max,
            out,
            format,
        } => cmd_complexity(d, n_max, out, format),
        Command::ExpectedRuns { d, out, format } => cmd_expected_runs(d, out, format),
        Command::Simulate {
            d,
            n,
            tau,
            rho,
            trials,
            seed,
            out,
            format,
        } => cmd_simulate(d, n, tau, rho, trials, seed, out, format),
    }
}

fn cmd_verify(d: usize, n: usize) -> ExitCode {
    let arity = match parse_arity(d) {
        Ok(a) => a,
        Err(code) => return code,
    };
    if n == 0 {
        return flag_error("--n must be at least 1");
    }
    let size = (d as u128).pow(n as u32);
    let cap = qudit_grover::max_operator_dim() as u128;
    if size > cap {
        return flag_error(&format!(
            "d^n = {size} exceeds the full-space verification bound of {cap}"
        ));
    }
    let checks = match verify(arity, n) {
        Ok(checks) => checks,
        Err(err) => return flag_error(&err.to_string()),
    };
    let mut all_pass = true;
    for check in &checks {
        println!(
            "{} {} residual={:.1e}",
            check.name,
            if check.pass { "PASS" } else { "FAIL" },
            check.residual
        );
        all_pass &= check.pass;
    }
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VERIFY_FAILED)
    }
}

fn cmd_scan_r(
    d: usize,
    n: usize,
    tau: Option<usize>,
    r_max: usize,
    out: Option<PathBuf>,
    format: Format,
) -> ExitCode {
    let config = match parse_config(d, n, tau) {
        Ok(config) => config,
        Err(code) => return code,
    };
    let sep = format.separator();
    let probabilities = tau_probability_curve(&config, r_max);
    let big_t = (1.0 - d as f64 / config.size() as f64).acos();
    let peak = (1.0 - (2.0 * PI / d as f64).cos()) / d as f64;
    let mut body = format!("r{sep}probability{sep}analytic_envelope\n");
    for (r, p) in probabilities.iter().enumerate() {
        let envelope = peak * ((r as f64 + 0.5) * big_t).sin().powi(2);
        body.push_str(&format!("{r}{sep}{}{sep}{}\n", sig(*p), sig(envelope)));
    }
    let r_opt = exact_complexity(&config, r_max).r_opt;
    body.push_str(&format!("# r_opt={r_opt}\n"));
    emit(out.as_ref(), &body)
}

fn cmd_complexity(d: usize, n_max: usize, out: Option<PathBuf>, format: Format) -> ExitCode {
    let arity = match parse_arity(d) {
        Ok(a) => a,
        Err(code) => return code,
    };
    if n_max == 0 {
        return flag_error("--n-max must be at least 1");
    }
    if (d as u128).pow(n_max as u32) > u64::MAX as u128 {
        return flag_error("--n-max overflows the codomain size");
    }
    let sep = format.separator();
    let mut body = format!("N{sep}r_opt{sep}pi_over_2T{sep}quarter_pi_sqrtN\n");
    for n in 1..=n_max {
        let size = d.pow(n as u32);
        let config = GroverConfig::new(arity, n, size - 1).expect("valid scan point");
        let analytic = general_optimal_iterations(arity, size);
        let report = exact_complexity(&config, analytic.ceil() as usize + 10);
        body.push_str(&format!(
            "{size}{sep}{}{sep}{}{sep}{}\n",
            report.r_opt,
            sig(analytic),
            sig(PI / 4.0 * (size as f64).sqrt())
        ));
    }
    emit(out.as_ref(), &body)
}

fn cmd_expected_runs(d: usize, out: Option<PathBuf>, format: Format) -> ExitCode {
    let arity = match parse_arity(d) {
        Ok(a) => a,
        Err(code) => return code,
    };
    let sep = format.separator();
    let (rho_hat, p_hat) = optimal_scaling(arity, ScalingCriterion::PeakProbability);
    let calls_hat = expected_calls(arity, rho_hat).expect("peak scaling has nonzero sine");
    let (rho_star, calls_star) = optimal_scaling(arity, ScalingCriterion::ExpectedCalls);
    let x = half_tangent_root();
    let mut body = format!("quantity{sep}value\n");
    for (name, value) in [
        ("rho_hat", rho_hat),
        ("p_at_rho_hat", p_hat),
        ("expected_calls_per_sqrt_n_at_rho_hat", calls_hat),
        ("rho_star", rho_star),
        ("expected_calls_per_sqrt_n_at_rho_star", calls_star),
        ("half_tangent_root", x),
        ("universal_constant_x_over_sin2x", x / x.sin().powi(2)),
    ] {
        body.push_str(&format!("{name}{sep}{}\n", sig(value)));
    }
    emit(out.as_ref(), &body)
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    d: usize,
    n: usize,
    tau: Option<usize>,
    rho: Option<f64>,
    trials: usize,
    seed: u64,
    out: Option<PathBuf>,
    format: Format,
) -> ExitCode {
    let config = match parse_config(d, n, tau) {
        Ok(config) => config,
        Err(code) => return code,
    };
    let rho = rho.unwrap_or_else(|| {
        optimal_scaling(config.arity(), ScalingCriterion::PeakProbability).0
    });
    if !(rho > 0.0) {
        return flag_error("--rho must be positive");
    }
    if trials == 0 {
        return flag_error("--trials must be at least 1");
    }
    let analytic = expected_calls(config.arity(), rho)
        .map(|per_sqrt| per_sqrt * (config.size() as f64).sqrt())
        .unwrap_or(f64::NAN);

    let sep = format.separator();
    let results = run_trials(&config, rho, trials, seed);
    let mut body = format!("trial{sep}answer{sep}runs{sep}oracle_calls{sep}success\n");
    let mut total_calls = 0usize;
    let mut successes = 0usize;
    let mut completed = 0usize;
    for (trial, result) in results.iter().enumerate() {
        match result {
            Ok(stats) => {
                body.push_str(&format!(
                    "{trial}{sep}{}{sep}{}{sep}{}{sep}{}\n",
                    stats.answer,
                    stats.runs,
                    stats.oracle_calls,
                    u8::from(stats.success)
                ));
                total_calls += stats.oracle_calls;
                successes += usize::from(stats.success);
                completed += 1;
            }
            Err(err) => {
                eprintln!("trial {trial} failed: {err}");
                body.push_str(&format!("{trial}{sep}-1{sep}0{sep}0{sep}0\n"));
            }
        }
    }
    let mean = if completed > 0 {
        total_calls as f64 / completed as f64
    } else {
        f64::NAN
    };
    body.push_str(&format!(
        "# success_rate={} mean_oracle_calls={} analytic_expected_calls={}\n",
        sig(successes as f64 / trials as f64),
        sig(mean),
        sig(analytic)
    ));
    emit(out.as_ref(), &body)
}
