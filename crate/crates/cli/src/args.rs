use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug, Clone)]
#[command(name = "vedkit", version, about = "Virtual ED degrees of rank-2 symmetric matrices, exact and numeric")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Master seed for every random choice made by the run.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Append-only result cache (line-delimited JSON).
    #[arg(long, global = true, default_value = "./vedkit-cache.jsonl")]
    pub cache: PathBuf,
    /// Neither read nor write the cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub output: OutputFormat,
    /// Worker threads for localization sums and path tracking.
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: Option<u16>,
    /// Cross-check results (second localization route, weight independence).
    #[arg(long, global = true)]
    pub verify: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
    Plain,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Virtual ED degree and Chern-Mather degrees for n x n matrices.
    Ved {
        #[arg(long, value_parser = clap::value_parser!(u32).range(3..=40))]
        n: u32,
    },
    /// Table of virtual ED degrees with an optional polynomial fit.
    VedTable {
        #[arg(long, value_parser = clap::value_parser!(u32).range(3..=40))]
        n_min: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(3..=40))]
        n_max: u32,
        /// Inclusive window "a:b" on which the polynomial degree is detected.
        #[arg(long, value_parser = parse_window)]
        fit_window: Option<(usize, usize)>,
        /// Number of values after the window that must be predicted exactly.
        #[arg(long, default_value_t = 4)]
        holdout: usize,
    },
    /// Count ED-critical points of the 3x3 symmetric determinant numerically.
    EdCount {
        /// bw | random | diag:a1,...,a6 | file:<path>
        #[arg(long, default_value = "random")]
        metric: String,
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..))]
        trials: u32,
    },
    /// Compare the symbolic vED(3) with numeric counts for a generic and
    /// the Bombieri-Weyl metric.
    Compare {
        /// Number of seeded trials per lane.
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
        seeds: u32,
    },
}

pub fn parse_window(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected a:b, got {s:?}"))?;
    let a: usize = a.trim().parse().map_err(|e| format!("bad window start: {e}"))?;
    let b: usize = b.trim().parse().map_err(|e| format!("bad window end: {e}"))?;
    if a > b {
        return Err(format!("window start {a} exceeds end {b}"));
    }
    Ok((a, b))
}
