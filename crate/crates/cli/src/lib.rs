//! Command-line front end: catalog listing, OBJ meshes of families and their
//! duals, curve traces and the CSV verification report.

pub mod commands;
pub mod config;

use std::fs::File;
use std::io::{self, BufWriter, Write};

use clap::{Parser, Subcommand};

use config::{CommonArgs, RunConfig, TraceArgs};

#[derive(Debug, Parser)]
#[command(name = "isocrpc", version, about = "Isotropic constant-ratio surfaces: meshes, traces, duals and checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the family catalog
    List(CommonArgs),
    /// Sample a family into an OBJ mesh
    Generate(CommonArgs),
    /// Residual report over families and ratios (CSV)
    Verify(CommonArgs),
    /// Integrate a characteristic or principal direction field (CSV)
    Trace {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        trace: TraceArgs,
    },
    /// Sample the metric dual of a family into an OBJ mesh
    Dual(CommonArgs),
}

/// Runs a parsed command. `Ok(false)` means the command ran but reported failures.
pub fn run(cli: &Cli) -> anyhow::Result<bool> {
    let (common, trace) = match &cli.command {
        Command::List(c) | Command::Generate(c) | Command::Verify(c) | Command::Dual(c) => (c, None),
        Command::Trace { common, trace } => (common, Some(trace)),
    };
    let cfg = RunConfig::resolve(common, trace)?;
    let mut sink: Box<dyn Write> = match &cfg.out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let ok = match &cli.command {
        Command::List(_) => commands::cmd_list(&cfg, &mut sink).map(|_| true),
        Command::Generate(_) => commands::cmd_generate(&cfg, &mut sink).map(|_| true),
        Command::Dual(_) => commands::cmd_dual(&cfg, &mut sink).map(|_| true),
        Command::Verify(_) => commands::cmd_verify(&cfg, &mut sink),
        Command::Trace { .. } => commands::cmd_trace(&cfg, &mut sink).map(|t| {
            if let Some(e) = &t.stop {
                eprintln!("trace stopped after {} samples: {e}", t.samples.len());
            }
            true
        }),
    }?;
    sink.flush()?;
    Ok(ok)
}
