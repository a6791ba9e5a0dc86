use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use homalg::io::{emit, Artifact, EmitOptions, Format};
use homalg::verify::{run_exercise, Options};

#[derive(Parser)]
#[command(name = "homalg", version, about = "Exact homological algebra over prime fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Guards {
    /// Prime field (exercise default 101; classification exercises and emit use 2 unless given).
    #[arg(long, global = true)]
    prime: Option<u64>,
    /// Seed for random complexes and maps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Degree window as LO,HI.
    #[arg(long, global = true, default_value = "-6,6", value_parser = parse_window, allow_hyphen_values = true)]
    window: (i64, i64),
    /// Resolution length cap.
    #[arg(long, global = true, default_value_t = 12)]
    cap: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Run an exercise suite, or `all`, and print its JSON report.
    Verify {
        id: String,
        /// Include wall time in the report.
        #[arg(long)]
        timing: bool,
        #[command(flatten)]
        guards: Guards,
    },
    /// Write a quiver or table.
    Emit {
        /// ar-quiver, stable-ar-quiver, ext-table or tilting-report.
        what: String,
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        out: PathBuf,
        /// dot or json.
        #[arg(long, default_value = "json")]
        format: String,
        #[command(flatten)]
        guards: Guards,
    },
}

fn parse_window(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s
        .trim_matches(|c| c == '[' || c == ']')
        .split_once(',')
        .ok_or_else(|| format!("expected LO,HI, got `{s}`"))?;
    let lo = a.trim().parse::<i64>().map_err(|e| e.to_string())?;
    let hi = b.trim().parse::<i64>().map_err(|e| e.to_string())?;
    if lo > hi {
        return Err(format!("empty window [{lo}, {hi}]"));
    }
    Ok((lo, hi))
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Verify { id, timing, guards } => {
            let opts = Options {
                prime: guards.prime,
                seed: guards.seed,
                window: guards.window,
                cap: guards.cap,
                timing,
            };
            match run_exercise(&id, &opts) {
                Ok(report) => {
                    print!("{}", report.to_json());
                    if report.pass {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::FAILURE
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            }
        }
        Command::Emit {
            what,
            algebra,
            out,
            format,
            guards,
        } => {
            let opts = EmitOptions {
                prime: guards.prime,
                window: guards.window,
                cap: guards.cap,
            };
            let run = || -> homalg::Result<()> {
                let what: Artifact = what.parse()?;
                let format: Format = format.parse()?;
                emit(what, &algebra, &out, format, &opts)
            };
            match run() {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            }
        }
    }
}
