use std::process::ExitCode;

use clap::Parser;
use entroflow_cli::{run, Cli};

fn main() -> ExitCode {
    run(Cli::parse()).into()
}
