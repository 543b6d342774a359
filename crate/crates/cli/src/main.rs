use std::process::ExitCode;

use clap::Parser;
use serde_json::json;
use sigma_equid::parallel::with_workers;
use sigma_equid::Error;

mod cli;
mod commands;
mod output;

use cli::Cli;
use commands::Context;

const EXIT_ASSERTION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded { .. } | Error::ModulusTooLarge { .. } => EXIT_RESOURCE,
        _ => EXIT_USAGE,
    }
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors and 0 for --help / --version.
    let cli = Cli::parse();
    let format = cli.format.unwrap_or_else(|| cli.command.default_format());
    let ctx = Context { mem_cap: cli.mem_cap };

    let result = with_workers(cli.workers, || commands::run(&cli.command, &ctx));
    let artifact = match result {
        Ok(a) => a,
        Err(e) => {
            eprintln!("sigma-equid {}: {e}", cli.command.name());
            return ExitCode::from(exit_code(&e));
        }
    };

    let config = json!({
        "command": cli.command,
        "format": format,
        "mem_cap": cli.mem_cap,
    });
    let bytes = output::render(&artifact, &config, format);
    if let Err(e) = output::write_to(cli.out.as_deref(), &bytes) {
        eprintln!("sigma-equid: cannot write output: {e}");
        return ExitCode::from(EXIT_ASSERTION);
    }

    if artifact.failures.is_empty() {
        ExitCode::SUCCESS
    } else {
        for f in &artifact.failures {
            eprintln!("FAILED: {f}");
        }
        ExitCode::from(EXIT_ASSERTION)
    }
}
