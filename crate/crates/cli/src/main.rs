use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use istruct::report::Status;
use istruct_cli::run::{run_suite, worst, Overrides};
use istruct_cli::scenario::Scenario;
use istruct_cli::{configure_threads, CliError};

#[derive(Parser)]
#[command(name = "istruct", version, about = "Run verification suites from a scenario file")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute every claim of one suite and write a JSON report array.
    Run {
        file: PathBuf,
        #[arg(long)]
        suite: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long = "tol-alg")]
        tol_alg: Option<f64>,
        #[arg(long = "tol-iso")]
        tol_iso: Option<f64>,
    },
    /// Print suite names, one per line, sorted.
    ListSuites { file: PathBuf },
}

fn fail(err: impl std::fmt::Display) -> ExitCode {
    eprintln!("istruct: {err}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Err(e) = configure_threads(std::env::var("ISTRUCT_THREADS").ok().as_deref()) {
        return fail(e);
    }
    match cli.command {
        Command::ListSuites { file } => match Scenario::load(&file) {
            Ok(s) => {
                for name in s.suite_names() {
                    println!("{name}");
                }
                ExitCode::SUCCESS
            }
            Err(e) => fail(e),
        },
        Command::Run {
            file,
            suite,
            out,
            seed,
            tol_alg,
            tol_iso,
        } => {
            let result = Scenario::load(&file).and_then(|s| {
                run_suite(
                    &s,
                    &suite,
                    Overrides {
                        seed,
                        tol_alg,
                        tol_iso,
                    },
                )
            });
            let entries = match result {
                Ok(entries) => entries,
                Err(e) => return fail(e),
            };
            let text = serde_json::to_string_pretty(&entries).expect("reports serialize");
            if let Err(source) = std::fs::write(&out, text + "\n") {
                return fail(CliError::Io {
                    path: out.display().to_string(),
                    source,
                });
            }
            for e in &entries {
                eprintln!("{:>12?}  {}#{} {}", e.report.status, e.suite, e.index, e.report.claim);
            }
            match worst(&entries) {
                Status::Verified => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            }
        }
    }
}
