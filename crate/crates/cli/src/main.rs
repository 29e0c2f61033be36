mod args;
mod commands;
mod source;

use clap::error::ErrorKind;
use clap::Parser;
use mackey::Error;
use std::process::ExitCode;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::CapExceeded(_) => 2,
        Error::IllDefined(_)
        | Error::NotAutomorphism(_)
        | Error::SlotCollision(_)
        | Error::DepthGuard
        | Error::Consistency(_) => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match args::Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let out = match commands::run(&cli.command, &cli.flags) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    print!("{}", out.text);
    if let Some(path) = &cli.flags.json {
        let body = serde_json::to_string_pretty(&out.json).expect("json values serialize");
        if let Err(e) = std::fs::write(path, body + "\n") {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(1);
        }
    }
    if out.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(3)
    }
}
