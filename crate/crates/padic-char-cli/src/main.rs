//! `padic-char`: command-line driver for the exact character computations.
//!
//! Exit status: `0` when every asserted identity holds, `1` when one fails
//! (the failing cases are listed with expected and computed values) or a
//! computation cannot be completed, `2` for invalid parameters.

mod args;
mod commands;
mod report;
mod suites;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::*;

fn run(cli: &Cli) -> CliResult<report::Report> {
    match &cli.command {
        Command::SmoothTrace(a) => smooth_trace_cmd(a),
        Command::EpsR(a) => eps_r_cmd(a, cli.trunc),
        Command::Snf(a) => snf_cmd(a),
        Command::Powerful(a) => powerful_cmd(a, cli.trunc),
        Command::BinomId(a) => binom_cmd(a),
        Command::Dominance(a) => dominance_cmd(a, cli.trunc),
        Command::Amice(a) => amice_cmd(a, cli.trunc),
        Command::Straighten(a) => straighten_cmd(a, cli.seed),
        Command::Sl2Trace(a) => sl2_trace_cmd(a),
        Command::Sl2Theta(a) => sl2_theta_cmd(a),
        Command::IwahoriTheta(a) => iwahori_theta_cmd(a),
        Command::Sweep(a) => sweep_cmd(a),
        Command::Verify(a) => suites::verify(&a.suite, cli.seed),
    }
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors.
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let mut out = io::stdout().lock();
            if report
                .render(cli.format, &mut out)
                .and_then(|_| out.flush())
                .is_err()
            {
                return ExitCode::from(1);
            }
            if report.ok() {
                ExitCode::SUCCESS
            } else {
                if cli.format != report::Format::Table {
                    for f in &report.failures {
                        eprintln!("FAIL {}: expected {}, got {}", f.case, f.expected, f.got);
                    }
                }
                ExitCode::from(1)
            }
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
