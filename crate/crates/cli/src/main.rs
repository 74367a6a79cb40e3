use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use supertower_cli::{
    batch_document, batch_exit_code, batch_summary, cmd_analyze, cmd_normalize, report, run_batch, Outcome, RunOptions,
    EXIT_PARSE,
};
use supertower_core::UnitConvention;

#[derive(Parser)]
#[command(name = "supertower", version, about = "Torsion-field audit of superelliptic curves y^(l^n) = lambda f(x)")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Treat the splitting of f over the target field as known.
    #[arg(long, global = true)]
    assert_splits_over_ten: bool,

    /// Meaning of "unit" in the arithmetic checks.
    #[arg(long, global = true, value_enum, default_value_t = Convention::EllAdic)]
    unit_convention: Convention,
}

#[derive(Clone, Copy, ValueEnum)]
enum Convention {
    EllAdic,
    AwayFromEll,
}

#[derive(Subcommand)]
enum Command {
    /// Print the normalized model and the change of coordinates.
    Normalize { file: PathBuf },
    /// Run the full pipeline on one curve file.
    Analyze {
        file: PathBuf,
        /// Write the report here instead of standard output.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Analyze every file of a directory.
    Batch {
        dir: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Also write the summary to this file.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
}

fn write_file(path: &Path, text: &str) -> Result<(), String> {
    fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn emit(outcome: Outcome) -> ExitCode {
    print!("{}", outcome.stdout);
    if let Some(diag) = outcome.stderr {
        eprintln!("{diag}");
    }
    ExitCode::from(outcome.code as u8)
}

fn io_failure(message: String) -> ExitCode {
    eprintln!("{}", serde_json::json!({ "error": "io", "message": message }));
    ExitCode::from(EXIT_PARSE as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let options = RunOptions {
        assert_splits_over_ten: cli.assert_splits_over_ten,
        convention: match cli.unit_convention {
            Convention::EllAdic => UnitConvention::EllAdic,
            Convention::AwayFromEll => UnitConvention::AwayFromEll,
        },
    };
    match cli.command {
        Command::Normalize { file } => emit(cmd_normalize(&file)),
        Command::Analyze { file, report: None } => emit(cmd_analyze(&file, options)),
        Command::Analyze { file, report: Some(out) } => {
            let mut outcome = cmd_analyze(&file, options);
            if !outcome.stdout.is_empty() {
                if let Err(e) = write_file(&out, &outcome.stdout) {
                    return io_failure(e);
                }
                outcome.stdout.clear();
            }
            emit(outcome)
        }
        Command::Batch { dir, jobs, summary } => {
            let entries = match run_batch(&dir, jobs, options) {
                Ok(e) => e,
                Err(e) => {
                    eprintln!("{}", e.diagnostic(&dir));
                    return ExitCode::from(e.exit_code() as u8);
                }
            };
            if let Some(out) = summary {
                if let Err(e) = write_file(&out, &report::render(&batch_summary(&entries))) {
                    return io_failure(e);
                }
            }
            print!("{}", report::render(&batch_document(&entries)));
            ExitCode::from(batch_exit_code(&entries) as u8)
        }
    }
}
