//! Command-line front end: configuration-driven verification suites over
//! p-Lévy kernels and Orlicz norms.
//!
//! Subcommands: run, describe, norm, seminorm, critical.
//! Exit codes for `run`: 0 when every check passes, 1 when any inequality
//! check fails (or is indeterminate), 2 on input errors.

mod config;
mod describe;
mod output;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

const USAGE: &str = "usage: nonlocal <run|describe|norm|seminorm|critical> --config PATH
  [--out DIR] [--suite NAME] [--mode a|mr2] [--resolution N] [--tolerance X] [--workers N]

suites: gns | fractional-gns | poincare | friedrichs | bbm | lemmas | inverse | all";

struct Args {
    command: String,
    config: PathBuf,
    overrides: Vec<(String, String)>,
}

fn parse_args() -> Result<Args, String> {
    let mut argv = std::env::args().skip(1);
    let command = argv.next().ok_or_else(|| USAGE.to_string())?;
    if !["run", "describe", "norm", "seminorm", "critical"].contains(&command.as_str()) {
        return Err(format!("unknown subcommand `{command}`\n{USAGE}"));
    }
    let mut config = None;
    let mut overrides = Vec::new();
    while let Some(flag) = argv.next() {
        let key = match flag.as_str() {
            "--config" => {
                config = Some(PathBuf::from(
                    argv.next().ok_or("--config needs a path")?,
                ));
                continue;
            }
            "--out" => "out",
            "--suite" => "suite",
            "--mode" => "mode",
            "--resolution" => "resolution",
            "--tolerance" => "tolerance",
            "--workers" => "workers",
            other => return Err(format!("unknown flag `{other}`\n{USAGE}")),
        };
        let value = argv.next().ok_or_else(|| format!("--{key} needs a value"))?;
        overrides.push((key.to_string(), value));
    }
    Ok(Args {
        command,
        config: config.ok_or_else(|| format!("--config is required\n{USAGE}"))?,
        overrides,
    })
}

fn load_config(args: &Args) -> Result<config::ExperimentConfig, String> {
    config::load(&args.config, &args.overrides).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let args = match parse_args() {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("{msg}");
            return ExitCode::from(2);
        }
    };
    let cfg = match load_config(&args) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("{msg}");
            return ExitCode::from(2);
        }
    };
    match args.command.as_str() {
        "run" => match suites::run(&cfg) {
            Ok(outcome) => {
                let mut curves = outcome.curves.clone();
                curves.extend(suites::kernel_curves(&cfg));
                if let Err(e) = output::write_all(&cfg.out_dir, &outcome.reports, &curves) {
                    eprintln!("cannot write artifacts: {e}");
                    return ExitCode::from(2);
                }
                let total = outcome.reports.len();
                let passed = outcome.reports.iter().filter(|(_, r)| r.passed()).count();
                println!(
                    "suite {}: {passed}/{total} checks pass; artifacts in {}",
                    cfg.suite.name(),
                    cfg.out_dir.display()
                );
                for (id, report) in &outcome.reports {
                    if !report.passed() {
                        println!("  not passing: {id} ({})", report.notes);
                    }
                }
                if outcome.all_pass() {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(1)
                }
            }
            Err(input) => {
                eprintln!("{input}");
                ExitCode::from(2)
            }
        },
        "describe" => {
            describe::describe(&cfg);
            ExitCode::SUCCESS
        }
        "norm" => match describe::norm(&cfg) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("{e}");
                ExitCode::from(2)
            }
        },
        "seminorm" => match describe::seminorm(&cfg) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("{e}");
                ExitCode::from(2)
            }
        },
        "critical" => match describe::critical(&cfg) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("{e}");
                ExitCode::from(2)
            }
        },
        _ => unreachable!(),
    }
}
