use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use nilbohr_cli::{output, run, CliError, Command, ExperimentConfig};

#[derive(Parser)]
#[command(
    name = "nilbohr",
    version,
    about = "Recurrence experiments on tori and nilmanifolds"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(clap::Args)]
struct RunArgs {
    /// Experiment config (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Worker threads for the exhaustive scans; overrides the config.
    #[arg(long)]
    workers: Option<usize>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Also write a LaTeX table of the summary.
    #[arg(long)]
    emit_latex: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Polynomial recurrence along k-syndetic finite sums.
    ThmA(RunArgs),
    /// Nilmanifold recurrence along k-syndetic finite sums.
    ThmB(RunArgs),
    /// Two-stage nilmanifold search through the abelian projection.
    Staged(RunArgs),
    /// Enumerate SG_k sums up to a bound.
    SgEnum(RunArgs),
    /// Evaluate the ±1/2 counterexample on a block sequence.
    Counterexample(RunArgs),
    /// Blocks whose syndetic unions have sums divisible by m.
    Divisible(RunArgs),
    /// Stability and restriction-invariance checks, optional perturbation search.
    PolyCheck(RunArgs),
    /// Host–Kra cube membership, corner completion or factorization.
    HkCheck(RunArgs),
    /// Re-run the config recorded in a result file and compare results.
    Verify {
        /// A result JSON written by an earlier run.
        #[arg(long)]
        result: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("nilbohr: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(cmd: Cmd) -> Result<(), CliError> {
    let (command, args) = match cmd {
        Cmd::ThmA(a) => (Command::ThmA, a),
        Cmd::ThmB(a) => (Command::ThmB, a),
        Cmd::Staged(a) => (Command::Staged, a),
        Cmd::SgEnum(a) => (Command::SgEnum, a),
        Cmd::Counterexample(a) => (Command::Counterexample, a),
        Cmd::Divisible(a) => (Command::Divisible, a),
        Cmd::PolyCheck(a) => (Command::PolyCheck, a),
        Cmd::HkCheck(a) => (Command::HkCheck, a),
        Cmd::Verify { result } => return reverify(&result),
    };
    let mut cfg = ExperimentConfig::from_path(&args.config, Some(command))?;
    if let Some(w) = args.workers {
        if w == 0 {
            return Err(CliError::Param("--workers must be positive".into()));
        }
        cfg.workers = w;
    }
    let start = Instant::now();
    let out = run(&cfg)?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let written = output::write_all(&args.out, &out, wall_ms, cfg.workers, args.emit_latex)?;
    println!("{}", written.result.display());
    if !out.verification.passed {
        return Err(CliError::Internal(format!(
            "independent verification failed ({})",
            out.verification.method
        )));
    }
    Ok(())
}

fn reverify(path: &std::path::Path) -> Result<(), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Param(format!("cannot read {}: {e}", path.display())))?;
    let doc: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Param(format!("result is not valid JSON: {e}")))?;
    let config = doc
        .get("config")
        .ok_or_else(|| CliError::field("config", "missing from the result file"))?;
    let cfg = ExperimentConfig::from_str_for(&config.to_string(), None)?;
    let out = run(&cfg)?;
    if out.document()["result"] != doc["result"] {
        return Err(CliError::Internal(
            "re-run produced a different result".into(),
        ));
    }
    if !out.verification.passed {
        return Err(CliError::Internal(format!(
            "verification failed ({})",
            out.verification.method
        )));
    }
    println!("ok: {}", out.verification.method);
    Ok(())
}
