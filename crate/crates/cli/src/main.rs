//! `nosig` — runs the impossible-machine experiments, sweeps their
//! parameters, and checks the whole stack against its acceptance suite.
//!
//! Exit codes: 0 success (the physics verdict lives in the payload, not the
//! exit code), 1 self-test failure, 2 usage error, 3 invalid configuration,
//! 4 runtime failure inside a scenario.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use nosig::config::{resolve, ConfigFile, Overrides};
use nosig::csv::render_csv;
use nosig::report::{render_json, render_json_array, render_text, ReportDoc};
use nosig::selftest;
use nosig_core::scenario::{run_scenario, ScenarioKind};
use nosig_core::sweep::{Axis, SweepSpec};
use nosig_core::Error;

#[derive(Parser)]
#[command(
    name = "nosig",
    version,
    about = "Quantifies how much signal hypothetical single- and two-qubit machines \
             would leak through a shared entangled pair"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment (or `all`) and print its report.
    Run {
        /// Experiment kind (`cloning`, `general_op`, `deletion`, `not_gate`,
        /// `y_gate`, `z_gate`, `hadamard`, `cnot`) or `all`.
        kind: String,
        /// JSON configuration file applied on top of the defaults.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Report format.
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Sweep parameters over an inclusive grid and emit one CSV row per cell.
    Sweep {
        /// Experiment kind.
        kind: String,
        /// Grid axes, `NAME=MIN:MAX:STEPS` separated by commas.
        #[arg(long)]
        axes: String,
        /// Comma-separated parameters minimized over at every grid cell.
        #[arg(long)]
        minimize: Option<String>,
        /// Grid points per minimized parameter.
        #[arg(long, default_value_t = 16)]
        minimize_points: usize,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// JSON configuration file applied on top of the defaults.
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Run the acceptance self-tests and print one PASS/FAIL line per check.
    Selftest {
        /// Seed for the randomized checks.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// A terminal failure: message for stderr plus the process exit code.
struct Failure {
    message: String,
    code: u8,
}

impl Failure {
    fn usage(message: String) -> Failure {
        Failure { message, code: 2 }
    }

    fn config(message: String) -> Failure {
        Failure { message, code: 3 }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Failure {
        let code = match err {
            Error::BadConfig { .. }
            | Error::OutOfRange { .. }
            | Error::NotAQubit { .. }
            | Error::NotNormalized { .. } => 3,
            _ => 4,
        };
        Failure {
            message: err.to_string(),
            code,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Run {
            kind,
            config,
            format,
            overrides,
        } => {
            run_command(&kind, config.as_deref(), format, &overrides)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep {
            kind,
            axes,
            minimize,
            minimize_points,
            out,
            config,
            overrides,
        } => {
            sweep_command(
                &kind,
                &axes,
                minimize.as_deref(),
                minimize_points,
                out.as_deref(),
                config.as_deref(),
                &overrides,
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Selftest { seed } => Ok(selftest_command(seed)),
    }
}

fn load_config(path: &Path) -> Result<ConfigFile, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::config(format!("{}: {e}", path.display())))
}

fn run_command(
    kind: &str,
    config_path: Option<&Path>,
    format: Format,
    overrides: &Overrides,
) -> Result<(), Failure> {
    let file = config_path.map(load_config).transpose()?;
    let kinds: Vec<ScenarioKind> = if kind == "all" {
        ScenarioKind::ALL.to_vec()
    } else {
        vec![ScenarioKind::from_key(kind)?]
    };
    let mut docs = Vec::with_capacity(kinds.len());
    for kind in kinds {
        let config = resolve(kind, file.as_ref(), overrides)?;
        let report = run_scenario(&config)?;
        docs.push(ReportDoc::assemble(&config, &report));
    }
    match format {
        Format::Json => {
            if docs.len() == 1 {
                println!("{}", render_json(&docs[0]));
            } else {
                println!("{}", render_json_array(&docs));
            }
        }
        Format::Text => {
            for (i, doc) in docs.iter().enumerate() {
                if i > 0 {
                    println!();
                }
                print!("{}", render_text(doc));
            }
        }
    }
    Ok(())
}

fn parse_axes(text: &str) -> Result<Vec<Axis>, Failure> {
    let mut axes = Vec::new();
    for part in text.split(',') {
        let bad = || Failure::usage(format!("axis '{part}' is not NAME=MIN:MAX:STEPS"));
        let (name, range) = part.split_once('=').ok_or_else(bad)?;
        let pieces: Vec<&str> = range.split(':').collect();
        if pieces.len() != 3 {
            return Err(bad());
        }
        let min: f64 = pieces[0].parse().map_err(|_| bad())?;
        let max: f64 = pieces[1].parse().map_err(|_| bad())?;
        let steps: usize = pieces[2].parse().map_err(|_| bad())?;
        axes.push(Axis {
            name: name.trim().to_string(),
            min,
            max,
            steps,
        });
    }
    Ok(axes)
}

fn sweep_command(
    kind: &str,
    axes: &str,
    minimize: Option<&str>,
    minimize_points: usize,
    out: Option<&Path>,
    config_path: Option<&Path>,
    overrides: &Overrides,
) -> Result<(), Failure> {
    let file = config_path.map(load_config).transpose()?;
    let kind = ScenarioKind::from_key(kind)?;
    let base = resolve(kind, file.as_ref(), overrides)?;
    let spec = SweepSpec {
        base,
        axes: parse_axes(axes)?,
        minimize: minimize
            .map(|m| m.split(',').map(|s| s.trim().to_string()).collect())
            .unwrap_or_default(),
        minimize_points,
    };
    let result = nosig_core::sweep::run_sweep(&spec)?;
    let csv = render_csv(&result);
    match out {
        Some(path) => fs::write(path, csv).map_err(|e| Failure {
            message: format!("cannot write {}: {e}", path.display()),
            code: 4,
        })?,
        None => print!("{csv}"),
    }
    Ok(())
}

fn selftest_command(seed: u64) -> ExitCode {
    let outcomes = selftest::run_all(seed);
    let mut all_passed = true;
    for outcome in &outcomes {
        println!("{}", outcome.line());
        all_passed &= outcome.passed;
    }
    if all_passed {
        println!("selftest: {} checks passed", outcomes.len());
        ExitCode::SUCCESS
    } else {
        println!(
            "selftest: {} of {} checks failed",
            outcomes.iter().filter(|o| !o.passed).count(),
            outcomes.len()
        );
        ExitCode::from(1)
    }
}
