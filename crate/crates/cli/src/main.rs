mod commands;
mod config;
mod report;

use std::process::ExitCode;

use clap::Parser;
use sendovlab::{Error, ErrorClass};

use config::{Cli, CliCommand, RunConfig};
use report::append_findings;

const EXIT_CONTRACT: u8 = 1;
const EXIT_NUMERIC: u8 = 2;
const EXIT_FINDING: u8 = 3;

fn exit_code(err: &Error) -> u8 {
    match err.class() {
        ErrorClass::Contract => EXIT_CONTRACT,
        ErrorClass::Numeric => EXIT_NUMERIC,
    }
}

fn fail(err: &Error) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(exit_code(err))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Usage errors are contract errors; --help and --version succeed.
            return ExitCode::from(if e.use_stderr() { EXIT_CONTRACT } else { 0 });
        }
    };

    if let Some(threads) = cli.global.threads {
        if threads == 0 {
            return fail(&Error::contract("SENDOVLAB_THREADS must be at least 1"));
        }
        // Fails only if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }

    let config = match cli.command {
        CliCommand::Experiment(command) => RunConfig::from_cli(command, &cli.global),
        CliCommand::Run { config } => match RunConfig::from_toml_file(&config) {
            Ok(mut c) => {
                c.override_with(&cli.global);
                c
            }
            Err(e) => return fail(&e),
        },
    };

    let outcome = match commands::run(&config) {
        Ok(o) => o,
        Err(e) => return fail(&e),
    };
    let report = &outcome.report;

    let json = report.to_json() + "\n";
    let written = match &config.io.output {
        Some(path) => commands::write_file(path, &json),
        None => {
            print!("{json}");
            Ok(())
        }
    };
    if let Err(e) = written {
        return fail(&e);
    }
    if let Some(path) = &config.io.findings {
        if let Err(e) = append_findings(path, &report.findings) {
            return fail(&Error::contract(format!("cannot append to {}: {e}", path.display())));
        }
    }

    if let Some(err) = &outcome.error {
        return fail(err);
    }
    if report.has_counterexample() {
        eprintln!("counterexample finding recorded");
        return ExitCode::from(EXIT_FINDING);
    }
    ExitCode::SUCCESS
}
