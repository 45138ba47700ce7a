use std::io;
use std::process::ExitCode;

use clap::Parser;
use healthmon::{exit, run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors are invalid input, not non-convergence
            return ExitCode::from(if e.use_stderr() { exit::INVALID as u8 } else { 0 });
        }
    };
    let mut stdout = io::stdout().lock();
    let code = match run(cli, &mut stdout) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
