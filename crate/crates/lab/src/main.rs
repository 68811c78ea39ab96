use std::process::ExitCode;

use clap::Parser;
use qcompound_lab::cli::Cli;
use qcompound_lab::error::LabError;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match qcompound_lab::run(&cli) {
        Ok(out) => {
            let r = &out.record;
            for c in &r.checks {
                println!("{:<5} {}: {}", if c.pass { "ok" } else { "FAIL" }, c.name, c.detail);
            }
            println!("{} -> {}", r.command, out.path.display());
            if r.pass {
                ExitCode::SUCCESS
            } else {
                let names: Vec<&str> = r.failed_checks().iter().map(|c| c.name.as_str()).collect();
                let e = LabError::Assertion(names.join(", "));
                eprintln!("{e}");
                ExitCode::from(e.exit_code())
            }
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
