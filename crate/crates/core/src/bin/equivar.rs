use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use equivar::scenario::{self, EmitKind, Scenario, CHECKS};

#[derive(Parser)]
#[command(name = "equivar", about = "Verification harness for group actions on finite-dimensional algebras")]
struct Cli {
    /// Print every check id with the statement it verifies.
    #[arg(long)]
    list_checks: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks of a scenario; exits 0 if all pass, 1 on a failure, 2 on bad input.
    Verify {
        scenario: PathBuf,
        /// Write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Defaults to $EQUIVAR_SEED, then 0.
        #[arg(long)]
        seed: Option<u64>,
        /// Record wall-clock time per check (makes reports non-reproducible).
        #[arg(long)]
        timings: bool,
    },
    /// Write an artifact derived from a scenario's inputs: skew, irr, characters or blocks.
    Emit {
        kind: String,
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn input_error(e: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(2)
}

fn write(out: Option<&PathBuf>, text: &str) -> Result<(), ExitCode> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| input_error(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.list_checks {
        let width = CHECKS.iter().map(|c| c.id.len()).max().unwrap_or(0);
        for c in CHECKS {
            println!("{:<width$}  {}", c.id, c.statement);
        }
        return ExitCode::SUCCESS;
    }
    let seed = |given: Option<u64>| given.map_or_else(scenario::default_seed, Ok);
    match cli.command {
        None => input_error("nothing to do; use `verify`, `emit` or --list-checks"),
        Some(Command::Verify { scenario: path, out, format, seed: s, timings }) => {
            let report =
                match seed(s).and_then(|s| Ok((Scenario::load(&path)?, s))).and_then(|(sc, s)| scenario::run_scenario(&sc, s, timings)) {
                    Ok(r) => r,
                    Err(e) => return input_error(e),
                };
            let json = report.to_json();
            let shown = match format {
                Format::Json if out.is_none() => Some(json.clone()),
                Format::Json => None,
                Format::Text => Some(report.to_text()),
            };
            if let Some(path) = &out {
                if let Err(code) = write(Some(path), &json) {
                    return code;
                }
            }
            if let Some(text) = shown {
                print!("{text}");
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Some(Command::Emit { kind, input, out, seed: s }) => {
            let result = kind
                .parse::<EmitKind>()
                .and_then(|k| Ok((k, Scenario::load(&input)?, seed(s)?)))
                .and_then(|(k, sc, s)| scenario::emit(k, &sc, s));
            match result {
                Ok(v) => match write(out.as_ref(), &(serde_json::to_string_pretty(&v).expect("json") + "\n")) {
                    Ok(()) => ExitCode::SUCCESS,
                    Err(code) => code,
                },
                Err(e) => input_error(e),
            }
        }
    }
}
