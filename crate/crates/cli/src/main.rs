use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;
use nogo_cli::{run, Command, Format, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "nogo", version, about = "Verify no-hidden-variables constructions: exact searches, colorings and Monte Carlo checks")]
struct Cli {
    /// Orthogonality tolerance for approximate rays
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,

    /// RNG seed for every randomized suite
    #[arg(long, global = true, env = "NOGO_SEED", default_value_t = 0)]
    seed: u64,

    /// Monte Carlo sample count
    #[arg(long, global = true, default_value_t = 1_000_000)]
    samples: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Leave wall-clock timing out of the report
    #[arg(long, global = true)]
    no_timing: bool,

    #[command(subcommand)]
    command: Command,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn execute(cli: Cli) -> Result<u8> {
    let config = RunConfig { command: cli.command, tolerance: cli.tol, seed: cli.seed, samples: cli.samples };
    let mut report = run(&config)?;
    if cli.no_timing {
        report.timing = None;
    }
    let rendered = report.render(cli.format)?;
    match &cli.out {
        Some(path) => {
            std::fs::write(path, &rendered).with_context(|| format!("writing {}", path.display()))?;
            println!("{}: {} (report written to {})", report.command, if report.passed { "PASS" } else { "FAIL" }, path.display());
        }
        None => print!("{rendered}"),
    }
    Ok(report.exit_code() as u8)
}
