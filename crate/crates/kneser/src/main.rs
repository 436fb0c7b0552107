use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use kneser::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let written = match &cli.output {
                Some(path) => std::fs::write(path, &out.json),
                None if out.text.is_none() => std::io::stdout().write_all(out.json.as_bytes()),
                None => Ok(()),
            };
            if let Err(e) = written {
                eprintln!("{}", serde_json::json!({ "error": "io_error", "message": e.to_string() }));
                return ExitCode::from(2);
            }
            if let Some(text) = out.text {
                print!("{text}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", serde_json::json!({ "error": e.code(), "message": e.to_string() }));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
