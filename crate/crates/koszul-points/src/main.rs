use std::process::ExitCode;

use clap::Parser;

use koszul_points::cli::{Cli, Command};
use koszul_points::render::render_text;
use koszul_points::{run, Output};

fn json_requested(c: &Command) -> bool {
    match c {
        Command::Flats(a) => a.json,
        Command::Certify(a) => a.json,
        Command::Descent(a) => a.json,
        Command::Oracle(a) => a.json,
        Command::Scan(a) => a.json,
        Command::Gen(_) => true,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli.command) {
        Ok(Output::Json(text)) => {
            println!("{text}");
            ExitCode::SUCCESS
        }
        Ok(Output::Report(r)) => {
            if json_requested(&cli.command) {
                println!("{}", r.to_json());
            } else {
                print!("{}", render_text(&r));
            }
            ExitCode::from(r.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
