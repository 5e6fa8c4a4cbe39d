use std::io::Write;
use std::process::ExitCode;

use qkin_cli::{parse_config, run, CliError};

fn main() -> ExitCode {
    let stdout = std::io::stdout();
    let result = parse_config(std::env::args_os()).and_then(|cfg| run(&cfg, &mut stdout.lock()));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Help(text)) => {
            let _ = write!(stdout.lock(), "{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("qkin: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
