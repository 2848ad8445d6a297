use std::process::ExitCode;

use clap::Parser;
use pfsm::cli::{run, Cli};

fn main() -> ExitCode {
    run(Cli::parse())
}
