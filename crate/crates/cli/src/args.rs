// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use chainscope_core::shadow::DEFAULT_STATE_CAP;
use chainscope_core::{Property, Rational};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "chainscope", version, about = "Chain recurrence and shadowing analysis of finite metric systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

impl Cli {
    pub fn workers(&self) -> Option<usize> {
        match &self.command {
            Command::Analyze(a) => a.run.workers,
            Command::Shadow(a) => a.run.workers,
            Command::Ladder(a) => a.run.workers,
            Command::Verify(a) => a.run.workers,
            Command::Orbit(a) => a.run.workers,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Chain recurrent set, classes and their order at one resolution.
    Analyze(AnalyzeArgs),
    /// Decide the shadowing or s-limit shadowing property.
    Shadow(ShadowArgs),
    /// Class counts and refinement maps along a decreasing list of resolutions.
    Ladder(LadderArgs),
    /// Run the structural checks over a parameter grid.
    Verify(VerifyArgs),
    /// Check a single pseudo-orbit file against a system.
    Orbit(OrbitArgs),
}

#[derive(Debug, Args)]
#[group(required = false, multiple = false)]
pub struct Source {
    /// JSON system description.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Generator shorthand such as `rotation:8:3` or `north-south:8`.
    #[arg(long = "gen", value_name = "NAME[:ARGS]")]
    pub generator: Option<String>,
}

#[derive(Debug, Args)]
pub struct RunOptions {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads for automaton exploration and sweeps.
    #[arg(long, value_parser = positive)]
    pub workers: Option<usize>,
    /// Maximum number of automaton states before giving up as inconclusive.
    #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
    pub state_cap: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Table,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, value_parser = nonnegative)]
    pub delta: Rational,
    /// Separation above which a class is tagged isolated in DOT output
    /// (defaults to delta).
    #[arg(long, value_parser = nonnegative)]
    pub isolation: Option<Rational>,
    #[command(flatten)]
    pub run: RunOptions,
}

#[derive(Debug, Args)]
pub struct ShadowArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, default_value = "shadowing")]
    pub property: Property,
    #[arg(long, value_parser = nonnegative)]
    pub delta: Rational,
    #[arg(long, value_parser = nonnegative)]
    pub eps: Rational,
    #[command(flatten)]
    pub run: RunOptions,
}

#[derive(Debug, Args)]
pub struct LadderArgs {
    #[command(flatten)]
    pub source: Source,
    /// Strictly decreasing, comma separated.
    #[arg(long, value_parser = nonnegative, value_delimiter = ',', required = true)]
    pub deltas: Vec<Rational>,
    #[command(flatten)]
    pub run: RunOptions,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Without a system the whole built-in corpus is swept.
    #[command(flatten)]
    pub source: Source,
    /// Resolutions to sweep (defaults to distances, halves and doubles).
    #[arg(long, value_parser = nonnegative, value_delimiter = ',')]
    pub deltas: Option<Vec<Rational>>,
    /// Tolerances to sweep (defaults to the same grid as the resolutions).
    #[arg(long, value_parser = nonnegative, value_delimiter = ',')]
    pub eps: Option<Vec<Rational>>,
    #[command(flatten)]
    pub run: RunOptions,
}

#[derive(Debug, Args)]
pub struct OrbitArgs {
    #[command(flatten)]
    pub source: Source,
    /// JSON pseudo-orbit file.
    #[arg(long)]
    pub orbit: PathBuf,
    #[arg(long, value_parser = nonnegative)]
    pub eps: Rational,
    #[command(flatten)]
    pub run: RunOptions,
}

fn nonnegative(s: &str) -> Result<Rational, String> {
    let r: Rational = s.parse().map_err(|e| format!("{e}"))?;
    if r.is_negative() {
        return Err(format!("{s} is negative"));
    }
    Ok(r)
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}
