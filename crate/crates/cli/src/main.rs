mod args;
mod output;
mod simulate;
mod tally;

use std::process::ExitCode;

use anyhow::Result;
use clap::Parser;

use args::{Cli, Command};
use output::{write_file, Outcome};

/// Exit status for a run that finished but flagged an anomaly.
const ANOMALY: u8 = 3;

fn examples(args: &args::ExamplesArgs) -> Result<Outcome> {
    for (name, text) in electlab::fixtures::ballot_files() {
        let path = write_file(&args.output_dir, name, text.as_bytes())?;
        println!("{}", path.display());
    }
    Ok(Outcome::default())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Tally(a) => tally::run(a),
        Command::Simulate(a) => simulate::run(a),
        Command::Examples(a) => examples(a),
    };
    match outcome {
        Ok(o) if o.anomalies.is_empty() => ExitCode::SUCCESS,
        Ok(o) => {
            for a in &o.anomalies {
                eprintln!("anomaly: {a}");
            }
            ExitCode::from(ANOMALY)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
