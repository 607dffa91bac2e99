//! Batch entry point: parse flags, pin the thread pool, dispatch, print.

mod args;
mod commands;
mod io;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use graphboot::inference::Scheme;

use args::{BootstrapCmd, Cli, Command};
use io::{CliError, Output};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help/--version are successes; anything else is a usage
            // error rendered in the machine-readable envelope.
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            return fail(&CliError::new("usage", e.to_string()));
        }
    };

    if cli.threads > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global();
        if let Err(e) = pool {
            return fail(&CliError::new("threads", e.to_string()));
        }
    }

    let result = match &cli.command {
        Command::Distances(a) => commands::distances(a),
        Command::Denseness(a) => commands::denseness_cmd(a),
        Command::Hac(a) => commands::hac(a),
        Command::Bootstrap(BootstrapCmd::Block(a)) => commands::bootstrap(Scheme::Block, a),
        Command::Bootstrap(BootstrapCmd::Dwb(a)) => {
            commands::bootstrap(Scheme::DependentWild, a)
        }
        Command::Diagnose(a) => commands::diagnose(a),
        Command::Quantiles(a) => commands::quantiles(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Coverage(a) => commands::coverage(a),
    };

    match result {
        Ok(Output::Json(doc)) => {
            let text = serde_json::to_string_pretty(&doc).expect("JSON value serializes");
            println!("{text}");
            ExitCode::SUCCESS
        }
        Ok(Output::Text(text)) => {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
            ExitCode::SUCCESS
        }
        Err(e) => fail(&e),
    }
}

/// Print the error envelope on standard error and return exit code 2.
fn fail(e: &CliError) -> ExitCode {
    let doc = serde_json::json!({"error": {"code": e.code, "message": e.message}});
    eprintln!("{doc}");
    ExitCode::from(2)
}
