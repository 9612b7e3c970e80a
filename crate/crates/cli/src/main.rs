//! opstab: batch experiments on the stability landscape of Hilbert-space
//! contractions — spec validation, correlation orbits, approximation
//! constructions, structural decompositions, stability verdicts, metric
//! distances, and the category demonstrations.
//!
//! Exit codes: 0 on success, 1 for validation or usage failures, 2 when a
//! numerical certificate could not be established.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use opstab_core::spectral::WOLD_HORIZON;
use opstab_core::stability::{DEFAULT_EPS, DEFAULT_HORIZON, DEFAULT_TRUNCATION_J};
use opstab_core::Error;

mod cmd_approximate;
mod cmd_build;
mod cmd_classify;
mod cmd_decompose;
mod cmd_demo;
mod cmd_metric;
mod cmd_orbit;
mod csvout;
mod output;
mod presets;
mod probes;
mod sources;
mod svg;

use cmd_approximate::ApproxMode;
use cmd_decompose::DecomposeMode;
use cmd_metric::MetricMode;

#[derive(Parser)]
#[command(name = "opstab", version, about = "Stability experiments for Hilbert-space contractions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse, validate, classify, and canonically re-serialize an operator spec
    Build {
        /// Operator source: a spec file path, or preset:NAME
        #[arg(long)]
        spec: String,
        /// Write the canonical serialization to this file
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate c_n = ⟨Tⁿx, y⟩ with running density and Wiener averages
    Orbit {
        /// Operator source: a spec file path, or preset:NAME
        #[arg(long)]
        spec: String,
        /// One probe (x = y) or two (x then y): eK, one, random:K, @file, inline tree
        #[arg(long, num_args = 1..)]
        probes: Vec<String>,
        /// Largest exponent N
        #[arg(long, default_value_t = DEFAULT_HORIZON)]
        horizon: u64,
        /// Density threshold ε
        #[arg(long, default_value_t = DEFAULT_EPS)]
        epsilon: f64,
        /// Seed for random: probes
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the CSV here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write an SVG plot of |c_n| and D(n) to this file
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Run an approximation construction and report its certificate
    Approximate {
        /// Operator source (periodic and aws-periodic modes only)
        #[arg(long)]
        spec: Option<String>,
        #[arg(long, value_enum)]
        mode: ApproxMode,
        /// Period floor (periodic), order n (aws-identity), or cycle length (shift)
        #[arg(long, default_value_t = 10)]
        period_min: u64,
        /// Approximation tolerance ε
        #[arg(long, default_value_t = DEFAULT_EPS)]
        epsilon: f64,
        /// Probe vectors for the probe-based modes
        #[arg(long, num_args = 1..)]
        probes: Vec<String>,
        /// Seed for random: probes
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the approximant's spec to this file
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Structural decompositions: Wold, reversible/stable, measure split
    Decompose {
        /// Operator source: a spec file path, or preset:NAME
        #[arg(long)]
        spec: String,
        #[arg(long, value_enum, default_value_t = DecomposeMode::Wold)]
        mode: DecomposeMode,
        /// Shift-detection horizon for the Wold split
        #[arg(long, default_value_t = WOLD_HORIZON)]
        horizon: u64,
        /// Write the report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Stability verdict from point spectrum and correlation decay
    Classify {
        /// Operator source: a spec file path, or preset:NAME
        #[arg(long)]
        spec: String,
        /// Probe vectors, paired with themselves
        #[arg(long, num_args = 1..)]
        probes: Vec<String>,
        /// Largest exponent N
        #[arg(long, default_value_t = DEFAULT_HORIZON)]
        horizon: u64,
        /// Density threshold ε
        #[arg(long, default_value_t = DEFAULT_EPS)]
        epsilon: f64,
        /// Seed for random: probes
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Truncated metric distance between two operators
    Metric {
        /// The two operator sources (give --spec twice)
        #[arg(long = "spec")]
        spec: Vec<String>,
        #[arg(long, value_enum, default_value_t = MetricMode::StrongStar)]
        mode: MetricMode,
        /// Truncation depth J of the test-vector series
        #[arg(long = "truncation-J", default_value_t = DEFAULT_TRUNCATION_J)]
        truncation_j: u32,
        /// Write the report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The three category-argument computations, verified end to end
    CategoryDemo {
        /// Write the report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn dispatch(cli: Cli) -> opstab_core::Result<()> {
    match cli.command {
        Command::Build { spec, out } => cmd_build::run(&spec, out.as_deref()),
        Command::Orbit { spec, probes, horizon, epsilon, seed, out, plot } => cmd_orbit::run(
            &spec,
            &probes,
            horizon,
            epsilon,
            seed,
            out.as_deref(),
            plot.as_deref(),
        ),
        Command::Approximate { spec, mode, period_min, epsilon, probes, seed, out } => {
            cmd_approximate::run(
                spec.as_deref(),
                mode,
                period_min,
                epsilon,
                &probes,
                seed,
                out.as_deref(),
            )
        }
        Command::Decompose { spec, mode, horizon, out } => {
            cmd_decompose::run(&spec, mode, horizon, out.as_deref())
        }
        Command::Classify { spec, probes, horizon, epsilon, seed, out } => {
            cmd_classify::run(&spec, &probes, horizon, epsilon, seed, out.as_deref())
        }
        Command::Metric { spec, mode, truncation_j, out } => match spec.as_slice() {
            [left, right] => cmd_metric::run(left, right, mode, truncation_j, out.as_deref()),
            other => Err(Error::domain(format!(
                "metric compares exactly two operators; got {} --spec values",
                other.len()
            ))),
        },
        Command::CategoryDemo { out } => cmd_demo::run(out.as_deref()),
    }
}

/// 2 for failed numerical certificates, 1 for everything else.
fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::CertificateFailure(_) | Error::NoConvergence { .. } => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn certificate_and_convergence_failures_exit_with_two() {
        assert_eq!(exit_code_for(&Error::CertificateFailure("x".into())), 2);
        let e = Error::NoConvergence {
            what: "power iteration".into(),
            iterations: 10,
            estimate: 1.0,
            residual: 0.5,
        };
        assert_eq!(exit_code_for(&e), 2);
    }

    #[test]
    fn ordinary_failures_exit_with_one() {
        assert_eq!(exit_code_for(&Error::domain("bad")), 1);
        assert_eq!(exit_code_for(&Error::validation("bad")), 1);
        assert_eq!(
            exit_code_for(&Error::Parse { line: 3, col: 7, msg: "unbalanced".into() }),
            1
        );
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
