use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use mixmult_cli::{run, Format, JobConfig, Status};

#[derive(Parser, Debug)]
#[command(name = "mixmult", version, about = "Multiplicities and mixed multiplicities of monomial filtrations")]
struct Args {
    /// Job file (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Report destination; overrides the config. Defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format; overrides the config.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Leave out the generated_at field.
    #[arg(long)]
    no_timestamp: bool,
    /// Worker threads for the parallel parts.
    #[arg(long)]
    threads: Option<usize>,
}

fn execute(args: &Args) -> anyhow::Result<Status> {
    if let Some(n) = args.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let cfg = JobConfig::load(&args.config)?;
    let report = run(&cfg)?;
    let format = args.format.unwrap_or(cfg.output.format);
    let stamp = (!args.no_timestamp).then(|| chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true));
    let text = report.render(&cfg, format, stamp)?;
    match args.out.as_ref().or(cfg.output.path.as_ref()) {
        Some(path) => std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?,
        None => print!("{text}"),
    }
    for f in &report.failures {
        eprintln!("verification failed: {f}");
    }
    Ok(report.status)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(Status::InputError as u8)
        }
    }
}
