use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::usage;

#[derive(Parser, Debug)]
#[command(
    name = "mubwit",
    version,
    about = "Mutually unbiased bases and the MUB entanglement witness",
    propagate_version = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub flags: Flags,

    /// JSON file whose keys mirror the long flags; flags given on the command
    /// line take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Where to write the run manifest (default: `<out>.manifest.json`, or
    /// standard error without `--out`).
    #[arg(long, global = true, value_name = "FILE")]
    pub manifest: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Command {
    /// Construct a MUB set and verify unbiasedness.
    Build,
    /// Optimized lower bound L_m and upper bound U_m for a set or subset.
    Bounds,
    /// Witness values along a state family, optimized over local unitaries.
    Scan,
    /// Group the m-subsets of a set into classes by their lower bound.
    Classify,
    /// Recompute a reference table and compare (table1, table2, table3, d6,
    /// d8, d9, fig1).
    Reproduce { target: String },
    /// Re-run the invocation recorded in a manifest and compare digests.
    Replay { manifest: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Table,
}

/// Every tunable. `None` means "use the command's default".
#[derive(Args, Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Flags {
    /// Local dimension.
    #[arg(long, global = true)]
    pub d: Option<usize>,

    /// MUB family (hw, fourier4, h4, tao6, a7); for `scan`, the state
    /// family (magic, werner).
    #[arg(long, global = true)]
    pub family: Option<String>,

    /// Use the first m bases (or all m-subsets for `classify`).
    #[arg(long, global = true)]
    pub m: Option<usize>,

    /// Comma-separated one-based basis positions, e.g. `1,2,4`.
    #[arg(long, global = true)]
    pub subset: Option<String>,

    /// Multi-start restarts of the lower-bound search.
    #[arg(long, global = true)]
    pub restarts: Option<usize>,

    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Command tolerance: unbiasedness check (build), gradient stop
    /// (bounds), detection margin (scan), class gap (classify, reproduce).
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Output file (default: standard output).
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// MUB set file(s) written by `build`, used instead of `--family`.
    #[arg(long, global = true, value_name = "FILE")]
    pub set: Vec<PathBuf>,

    /// d = 4 family angle x, in units of π.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub x: Option<f64>,

    /// d = 4 family angle y, in units of π.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub y: Option<f64>,

    /// d = 4 family angle z, in units of π.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub z: Option<f64>,

    /// First grid parameter of `scan`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub from: Option<f64>,

    /// Last grid parameter of `scan` (`α_max` for `reproduce fig1`).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub to: Option<f64>,

    /// Grid intervals.
    #[arg(long, global = true)]
    pub steps: Option<usize>,

    /// Restarts of each local-unitary search.
    #[arg(long, global = true)]
    pub lu_restarts: Option<usize>,

    /// Classify every subset for d = 9 instead of representatives.
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub full_scan: bool,
}

impl Flags {
    /// `self` with unset fields taken from `file`.
    pub fn over(self, file: Flags) -> Flags {
        Flags {
            d: self.d.or(file.d),
            family: self.family.or(file.family),
            m: self.m.or(file.m),
            subset: self.subset.or(file.subset),
            restarts: self.restarts.or(file.restarts),
            seed: self.seed.or(file.seed),
            tol: self.tol.or(file.tol),
            threads: self.threads.or(file.threads),
            out: self.out.or(file.out),
            format: self.format.or(file.format),
            set: if self.set.is_empty() { file.set } else { self.set },
            x: self.x.or(file.x),
            y: self.y.or(file.y),
            z: self.z.or(file.z),
            from: self.from.or(file.from),
            to: self.to.or(file.to),
            steps: self.steps.or(file.steps),
            lu_restarts: self.lu_restarts.or(file.lu_restarts),
            full_scan: self.full_scan || file.full_scan,
        }
    }
}

pub fn read_config(path: &Path) -> anyhow::Result<Flags> {
    let text =
        std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| usage(format!("config {}: {e}", path.display())))
}

/// A fully resolved run: what the manifest records and `replay` re-executes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Invocation {
    pub command: Command,
    pub flags: Flags,
}
