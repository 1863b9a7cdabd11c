//! Command-line front end for the `gsc` library.

pub mod args;
pub mod commands;
pub mod manifest;
pub mod verify;

use std::io::Write;

use args::{Cli, Command};
use commands::Exit;

fn dispatch(cli: &Cli, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> gsc::Result<Exit> {
    match &cli.command {
        Command::Dims(a) => commands::dims(a, out),
        Command::VerifyPaper(a) => commands::verify_paper(a, out, err),
        Command::Axioms(a) => commands::axioms(a, out),
        Command::Reduce(a) => commands::reduce(a, out),
        Command::Export(a) => commands::export(a, out),
    }
}

fn threads(cli: &Cli) -> Option<u64> {
    match &cli.command {
        Command::Dims(a) => a.common.threads,
        Command::VerifyPaper(a) => a.common.threads,
        Command::Reduce(a) => a.common.threads,
        Command::Export(a) => a.common.threads,
        Command::Axioms(_) => None,
    }
}

/// Runs a parsed command and returns the process exit status.
pub fn run(cli: &Cli, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> u8 {
    let result = match threads(cli) {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n as usize).build() {
            Ok(pool) => pool.install(|| dispatch(cli, out, err)),
            Err(e) => {
                let _ = writeln!(err, "error: cannot start {n} threads: {e}");
                return Exit::Failure as u8;
            }
        },
        None => dispatch(cli, out, err),
    };
    match result {
        Ok(code) => code as u8,
        Err(gsc::Error::Io { source, .. }) if source.kind() == std::io::ErrorKind::BrokenPipe => Exit::Ok as u8,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            Exit::Failure as u8
        }
    }
}
