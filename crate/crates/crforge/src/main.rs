use std::process::ExitCode;

use clap::Parser;
use crforge::commands::{run, Cli};
use crforge::{Config, Failure, Input, EXIT_INPUT};

fn read(path: &str) -> Result<Input, Failure> {
    std::fs::read_to_string(path)
        .map(|text| Input { name: path.to_string(), text })
        .map_err(|e| Failure::input(format!("{path}: {e}")))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { 0 });
        }
    };
    let config = Config { seed: cli.seed, degree: cli.degree };
    match run(&cli.command, &config, &read) {
        Ok(out) => {
            eprintln!("{}", out.summary);
            match &cli.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &out.report) {
                        eprintln!("error: {}: {e}", path.display());
                        return ExitCode::from(EXIT_INPUT);
                    }
                }
                None => print!("{}", out.report),
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
