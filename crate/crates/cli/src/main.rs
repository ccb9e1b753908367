// `!(x > 0.0)` checks reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use config::{Generator, Overrides, RunConfig};

#[derive(Parser)]
#[command(name = "spinflow", version, about = "Toy experiments, information-phase diagnostics and shortest-path planning")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Args)]
struct Flags {
    /// Output directory for CSV and markdown files.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Oscillator step count N (horizon is N·dt).
    #[arg(long, global = true)]
    steps: Option<usize>,
    /// Oscillator step size.
    #[arg(long, global = true)]
    dt: Option<f64>,
    /// Damping coefficient of the damped ablation.
    #[arg(long, global = true)]
    damping: Option<f64>,
    /// Toy decoder: peaked or symmetric.
    #[arg(long, global = true)]
    decoder: Option<String>,
    /// Seed of the synthetic generators.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Effort smoothing window (1 disables smoothing).
    #[arg(long, global = true)]
    window: Option<usize>,
    /// Bins per axis of the empirical field.
    #[arg(long, global = true)]
    bins: Option<usize>,
    /// `key=value` file read before the flags; flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Reproduce table 1, 2 or 3.
    Table {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        n: u8,
    },
    /// Phase portrait, empirical field and divergence score.
    Phase {
        /// One probability vector per line.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Built-in synthetic portraits: rotation or constant.
        #[arg(long)]
        generator: Option<Generator>,
    },
    /// Shortest path on a graph file.
    Plan { graph: PathBuf, src: String, dst: String },
}

fn run(cli: Cli) -> Result<()> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &cli.flags.config {
        cfg.apply_file(path)?;
    }
    let f = cli.flags;
    let mut overrides = Overrides {
        out: f.out,
        steps: f.steps,
        dt: f.dt,
        damping: f.damping,
        decoder: f.decoder,
        seed: f.seed,
        window: f.window,
        bins: f.bins,
        ..Overrides::default()
    };
    if let Command::Phase { input, generator } = &cli.command {
        overrides.input = input.clone();
        overrides.generator = *generator;
    }
    cfg.apply_overrides(overrides);
    cfg.validate()?;

    let output = match cli.command {
        Command::Table { n } => commands::table(n, &cfg)?,
        Command::Phase { .. } => commands::phase(&cfg)?,
        Command::Plan { graph, src, dst } => commands::plan(&graph, &src, &dst)?,
    };
    let mut stdout = std::io::stdout().lock();
    match writeln!(stdout, "{}", output.trim_end()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
