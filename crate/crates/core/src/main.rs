use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use exterior_euler::cli::{error_json, run_scenario, run_study_file, Scenario, StudySpec};
use exterior_euler::{Error, Result};

#[derive(Parser)]
#[command(version, about = "Vortex blobs outside obstacles")]
struct Args {
    #[command(subcommand)]
    command: Command,
    /// Output directory (overrides the scenario's `output_dir`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Suppress the summary on stdout.
    #[arg(long, global = true)]
    quiet: bool,
    /// Worker threads; falls back to SIM_THREADS, then to all cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file.
    Run { scenario: PathBuf },
    /// Run a study file.
    Study { study: PathBuf },
}

fn threads(flag: Option<usize>) -> Result<Option<usize>> {
    if let Some(n) = flag {
        return Ok(Some(n));
    }
    match std::env::var("SIM_THREADS") {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| Error::Validation {
            field: "SIM_THREADS".into(),
            reason: format!("expected a thread count, got `{v}`"),
        }),
        Err(_) => Ok(None),
    }
}

fn execute(args: &Args) -> Result<()> {
    if let Some(n) = threads(args.threads)? {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Error::Validation {
            field: "threads".into(),
            reason: e.to_string(),
        })?;
    }
    match &args.command {
        Command::Run { scenario } => {
            let s = Scenario::from_file(scenario)?;
            let out = args.out.clone().or_else(|| s.output_dir.clone()).unwrap_or_else(|| PathBuf::from("out"));
            let res = run_scenario(&s, &out)?;
            if !args.quiet {
                for f in &res.files {
                    println!("{}", f.display());
                }
            }
        }
        Command::Study { study } => {
            let spec = StudySpec::from_json(&std::fs::read_to_string(study)?)?;
            let out = args.out.clone().unwrap_or_else(|| PathBuf::from("out"));
            let (report, path) = run_study_file(&spec, &out)?;
            if !args.quiet {
                println!("{}", path.display());
                for c in &report.checks {
                    println!("{}: {} ({})", c.name, if c.pass { "pass" } else { "FAIL" }, c.detail);
                }
            }
            if !report.pass {
                return Err(Error::StudyFailed { study: report.study });
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", error_json(&e));
            ExitCode::FAILURE
        }
    }
}
