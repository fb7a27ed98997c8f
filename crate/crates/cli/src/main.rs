use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use toric_defect_cli::render::{render_batch_table, render_report};
use toric_defect_cli::run::{analyze_document, batch, exit_code_for, AnalyzeFlags};
use toric_defect_cli::{parse_input, DocError};

/// Exact dual-defect and discriminant-triviality analysis of lattice point
/// configurations.
#[derive(Parser)]
#[command(name = "toric-defect", version, about, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a single input document
    Analyze {
        /// path to the input JSON document
        path: PathBuf,
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Analyze every .json document in a directory and print a summary table
    Batch {
        /// directory of input documents
        dir: PathBuf,
        /// number of worker threads (default: all cores)
        #[arg(long)]
        jobs: Option<usize>,
        /// also print each per-file report
        #[arg(long)]
        reports: bool,
        #[command(flatten)]
        common: CommonFlags,
    },
}

#[derive(clap::Args)]
struct CommonFlags {
    /// replace the configuration by all lattice points of its hull
    #[arg(long)]
    hull_points: bool,
    /// skip the Hessian oracle
    #[arg(long)]
    no_oracle: bool,
    /// oracle trial count (overrides the document options)
    #[arg(long)]
    trials: Option<u32>,
    /// oracle seed (overrides the document options)
    #[arg(long)]
    seed: Option<u64>,
    /// machine-readable JSON output
    #[arg(long)]
    json: bool,
    /// maximum accepted ambient dimension
    #[arg(long, default_value_t = 8)]
    max_dim: usize,
    /// include wall-clock timing in the report (breaks byte determinism)
    #[arg(long)]
    timings: bool,
}

impl CommonFlags {
    fn to_analyze_flags(&self) -> AnalyzeFlags {
        AnalyzeFlags {
            hull_points: self.hull_points,
            no_oracle: self.no_oracle,
            trials: self.trials,
            seed: self.seed,
            max_dim: self.max_dim,
            timings: self.timings,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints help/version on stdout with status 0 via display
            let is_help = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return if is_help {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            };
        }
    };

    match cli.command {
        Command::Analyze { path, common } => {
            let flags = common.to_analyze_flags();
            let bytes = match std::fs::read(&path) {
                Ok(b) => b,
                Err(e) => {
                    eprintln!("error: cannot read {}: {}", path.display(), e);
                    return ExitCode::from(3);
                }
            };
            let doc = match parse_input(&bytes) {
                Ok(d) => d,
                Err(e @ (DocError::Parse(_) | DocError::Invalid(_))) => {
                    eprintln!("error: {}: {}", path.display(), e);
                    return ExitCode::from(3);
                }
            };
            match analyze_document(&doc, &flags) {
                Ok(report) => {
                    if common.json {
                        print!("{}", report.to_json());
                    } else {
                        print!("{}", render_report(&report));
                    }
                    if common.timings {
                        if let Some(ms) = report.timing_ms {
                            eprintln!("analyzed {} in {} ms", doc.name, ms);
                        }
                    }
                    ExitCode::from(exit_code_for(&report.verdict) as u8)
                }
                Err(e) => {
                    eprintln!("error: {}: {}", path.display(), e);
                    ExitCode::from(3)
                }
            }
        }
        Command::Batch {
            dir,
            jobs,
            reports,
            common,
        } => {
            let flags = common.to_analyze_flags();
            let rows = match batch(&dir, &flags, jobs) {
                Ok(rows) => rows,
                Err(e) => {
                    eprintln!("error: cannot read {}: {}", dir.display(), e);
                    return ExitCode::from(3);
                }
            };
            if common.json {
                let ok: Vec<_> = rows
                    .iter()
                    .map(|r| match &r.outcome {
                        Ok(report) => serde_json::json!({
                            "file": r.file.file_name().map(|f| f.to_string_lossy().into_owned()),
                            "report": serde_json::to_value(report).expect("report serializes"),
                        }),
                        Err(e) => serde_json::json!({
                            "file": r.file.file_name().map(|f| f.to_string_lossy().into_owned()),
                            "error": e,
                        }),
                    })
                    .collect();
                println!(
                    "{}",
                    serde_json::to_string_pretty(&serde_json::Value::Array(ok))
                        .expect("rows serialize")
                );
            } else {
                if reports {
                    for row in &rows {
                        if let Ok(report) = &row.outcome {
                            print!("{}", render_report(report));
                            println!();
                        }
                    }
                }
                print!("{}", render_batch_table(&rows));
            }
            for row in &rows {
                if let Err(e) = &row.outcome {
                    eprintln!("error: {}: {}", row.file.display(), e);
                }
            }
            if rows.iter().any(|r| r.outcome.is_err()) {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            }
        }
    }
}
