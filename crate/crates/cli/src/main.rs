use std::process::ExitCode;

use cartan_cli::{execute, Cli, EXIT_MALFORMED};
use clap::Parser;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse_from(&argv);
    let outcome = execute(&cli, &argv);
    let report = serde_json::to_string_pretty(&outcome.report).expect("report serializes");

    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, format!("{report}\n")) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(EXIT_MALFORMED as u8);
        }
    }
    let status = outcome.exit_status();
    if cli.json {
        println!("{report}");
        if status == EXIT_MALFORMED {
            eprintln!("{}", outcome.text);
        }
    } else if status == EXIT_MALFORMED {
        eprintln!("{}", outcome.text);
    } else {
        print!("{}", outcome.text);
    }
    ExitCode::from(status as u8)
}
