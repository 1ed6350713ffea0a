use std::process::ExitCode;

use clap::Parser;
use gln_branching_cli::{execute, run_batch, Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (code, out) = match &cli.command {
        Command::Batch { file } => match std::fs::read_to_string(file) {
            Ok(src) => {
                let (code, lines) = run_batch(&src);
                (code, lines.join("\n"))
            }
            Err(e) => {
                eprintln!("cannot read {}: {e}", file.display());
                return ExitCode::from(2);
            }
        },
        cmd => execute(cmd, cli.format),
    };
    if code == 0 {
        println!("{out}");
    } else if !out.is_empty() {
        if matches!(cli.command, Command::Batch { .. }) {
            println!("{out}");
        } else {
            eprintln!("{out}");
        }
    }
    ExitCode::from(code as u8)
}
