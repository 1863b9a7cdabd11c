use std::io;
use std::process::ExitCode;

use clap::Parser;

use gsc_cli::args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = gsc_cli::run(&cli, &mut io::stdout(), &mut io::stderr());
    ExitCode::from(code)
}
