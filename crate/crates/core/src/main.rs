use std::io;
use std::process::ExitCode;

use clap::Parser;
use qgames::cli::{self, Cli};

fn main() -> ExitCode {
    let args = Cli::parse();
    let mut stdout = io::stdout().lock();
    let code = match cli::run(&args, &mut stdout) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
