mod commands;
mod output;

use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use crate::commands::{Cli, Globals};
use crate::output::CommandResult;

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let started = Instant::now();
    let globals: Globals = cli.globals.clone();
    match commands::run(&cli) {
        Ok(out) => {
            let mut result = CommandResult::new(argv[1..].join(" "), out);
            if globals.timings {
                result.set_elapsed(started.elapsed());
            }
            if let Err(e) = result.emit(globals.json, globals.out.as_deref()) {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_FAILURE);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match &e {
                pseudomagic::Error::SizeLimit { .. } => EXIT_BUDGET,
                pseudomagic::Error::InvalidInput(_) | pseudomagic::Error::Arity { .. } => {
                    EXIT_USAGE
                }
                _ => EXIT_FAILURE,
            })
        }
    }
}
