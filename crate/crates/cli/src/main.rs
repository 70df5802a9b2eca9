//! `superchsh` command-line front end.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use superchsh::{MapKind, TrigScale};

/// Superqubit CHSH experiments.
#[derive(Debug, Parser)]
#[command(name = "superchsh", version, about)]
pub struct Cli {
    /// Output format; CSV covers tables only.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MapArg {
    Dewitt,
    Trig,
    Rogers,
}

impl From<MapArg> for MapKind {
    fn from(m: MapArg) -> Self {
        match m {
            MapArg::Dewitt => MapKind::DeWitt,
            MapArg::Trig => MapKind::Trigonometric,
            MapArg::Rogers => MapKind::ModifiedRogers,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TrigScaleArg {
    Rotation,
    State,
}

impl From<TrigScaleArg> for TrigScale {
    fn from(t: TrigScaleArg) -> Self {
        match t {
            TrigScaleArg::Rotation => TrigScale::Rotation,
            TrigScaleArg::State => TrigScale::State,
        }
    }
}

#[derive(Debug, Args)]
pub struct MapOpts {
    /// Probability map.
    #[arg(long, value_enum, default_value_t = MapArg::Rogers)]
    pub map: MapArg,
    /// Opt into the experimental bipartite trigonometric rule (required for `--map trig`).
    #[arg(long)]
    pub experimental: bool,
    /// Source of the trigonometric scales.
    #[arg(long, value_enum, default_value_t = TrigScaleArg::Rotation)]
    pub trig_scale: TrigScaleArg,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the game for one parameter set.
    Play {
        #[command(flatten)]
        map: MapOpts,
        /// `paper` (published winning parameters; angles a0=-π/2, a1=π/4,
        /// b0=π/4, b1=3π/4 with α=cos a, β=sin a), `zero`, or a JSON file.
        #[arg(long, default_value = "paper")]
        params: String,
        /// Override one parameter, e.g. `--set q=-1.0`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Maximize the game value subject to all outcome probabilities lying in [0, 1].
    Optimize {
        #[command(flatten)]
        map: MapOpts,
        #[arg(long, env = "SUPERCHSH_SEED", default_value_t = 0)]
        seed: u64,
        /// Compactified variant: |r_i|, |s_j| <= BOX.
        #[arg(long = "box", value_name = "BOX")]
        box_bound: Option<f64>,
        #[arg(long)]
        restarts: Option<usize>,
        #[arg(long)]
        max_iters: Option<usize>,
        /// Worker threads (default: available parallelism).
        #[arg(long)]
        threads: Option<usize>,
        /// Config override: restarts, max_iters, feasibility_tol, r_max, s_max,
        /// penalty_weights (colon separated).
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Reference constants: classical, Tsirelson, communication complexity, PR-box.
    Baselines,
    /// Single-superqubit outcome probabilities under all three maps.
    MapsDemo {
        /// Complex amplitude on |0⟩, e.g. `0.6` or `0.6+0.8i`.
        #[arg(long, default_value = "1")]
        alpha: String,
        /// Complex amplitude on |1⟩.
        #[arg(long, default_value = "0")]
        beta: String,
        #[arg(long, default_value_t = 0.6, allow_hyphen_values = true)]
        r: f64,
    },
    /// Run the seeded invariant suites.
    Check {
        #[arg(long, env = "SUPERCHSH_SEED", default_value_t = 0)]
        seed: u64,
    },
}

/// Exit status with message.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_BAD_PARAMS: u8 = 2;
pub const EXIT_EXTRACTION: u8 = 3;
pub const EXIT_INFEASIBLE: u8 = 4;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("superchsh: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
