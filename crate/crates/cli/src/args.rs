use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "eprsteer",
    version,
    about = "EPR-steering bounds, Werner states and photon-counting simulation",
    long_about = "EPR-steering bounds, Werner states and photon-counting simulation.\n\n\
        Every subcommand writes one JSON document (or a CSV table with --format csv) to standard \
        output. Errors go to standard error as a single JSON line {\"error\", \"detail\"}; the exit \
        status is 0 on success, 1 for invalid input and 2 for internal failures."
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Output format. `scan` defaults to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the result to this file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
    /// Worker threads for `scan` and `mc --repeats` (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Vertex,
    Dual,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Measurement axes of a built-in scheme with its vertex and dual directions.
    Scheme(SchemeArgs),
    /// Exhaustive-search steering bound C_n, compared with its closed form.
    Bounds(BoundsArgs),
    /// Entanglement, mixedness and regime of a Werner state.
    State(StateArgs),
    /// Exact steering parameter of an honest Alice sharing a Werner state.
    Steer(SteerArgs),
    /// Steering parameter reached by a local-hidden-state ensemble.
    Cheat(CheatArgs),
    /// Maximal CHSH value of a Werner state and settings reaching it.
    Bell(BellArgs),
    /// Exact steering and CHSH values over a grid of Werner parameters.
    Scan(ScanArgs),
    /// Simulated experiment: tomography, local correction, sampled S_n and CHSH.
    Mc(McArgs),
    /// Simulated Pauli tomography of a Werner state.
    Tomo(TomoArgs),
}

#[derive(Debug, Args)]
pub struct SchemeArgs {
    /// Number of settings: 2, 3, 4, 6 or 10.
    #[arg(long)]
    pub n: usize,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// Number of settings: 2, 3, 4, 6 or 10.
    #[arg(long)]
    pub n: usize,
}

#[derive(Debug, Args)]
pub struct StateArgs {
    /// Werner parameter in [0, 1].
    #[arg(long, allow_negative_numbers = true)]
    pub mu: f64,
    /// Use the simulated source (entangling gate plus one-sided
    /// depolarization) instead of the ideal Werner state.
    #[arg(long)]
    pub prepared: bool,
}

#[derive(Debug, Args)]
pub struct SteerArgs {
    /// Werner parameter in [0, 1].
    #[arg(long, allow_negative_numbers = true)]
    pub mu: f64,
    /// Number of settings: 2, 3, 4, 6 or 10.
    #[arg(long)]
    pub n: usize,
}

#[derive(Debug, Args)]
pub struct CheatArgs {
    /// Number of settings: 2, 3, 4, 6 or 10.
    #[arg(long)]
    pub n: usize,
    /// Ensemble directions; defaults to the kind that reaches C_n.
    #[arg(long, value_enum)]
    pub kind: Option<Kind>,
}

#[derive(Debug, Args)]
pub struct BellArgs {
    /// Werner parameter in [0, 1].
    #[arg(long, allow_negative_numbers = true)]
    pub mu: f64,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// First Werner parameter.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub from: f64,
    /// Last Werner parameter (included when the grid lands on it).
    #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
    pub to: f64,
    /// Grid spacing.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.05)]
    pub step: f64,
    /// Number of settings: 2, 3, 4, 6 or 10.
    #[arg(long, default_value_t = 3)]
    pub n: usize,
}

#[derive(Debug, Args)]
pub struct McArgs {
    /// Werner parameter in [0, 1].
    #[arg(long, allow_negative_numbers = true)]
    pub mu: f64,
    /// Number of settings: 2, 3, 4, 6 or 10.
    #[arg(long)]
    pub n: usize,
    /// Target mean counts per measurement setting.
    #[arg(long, default_value_t = 10_000)]
    pub shots: u64,
    /// Master seed; a random one is generated and reported if absent.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Independent repetitions, each with its own derived seed.
    #[arg(long, default_value_t = 1)]
    pub repeats: usize,
    /// Bootstrap resamples for the Monte-Carlo error bars.
    #[arg(long, default_value_t = 1000)]
    pub resamples: usize,
    /// Random restarts of the local-unitary search.
    #[arg(long, default_value_t = 20)]
    pub restarts: usize,
}

#[derive(Debug, Args)]
pub struct TomoArgs {
    /// Werner parameter in [0, 1].
    #[arg(long, allow_negative_numbers = true)]
    pub mu: f64,
    /// Target mean counts per measurement setting.
    #[arg(long, default_value_t = 10_000)]
    pub shots: u64,
    /// Master seed; a random one is generated and reported if absent.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Bootstrap resamples for the tangle and entropy error bars.
    #[arg(long, default_value_t = 100)]
    pub resamples: usize,
    /// Reconstruct the simulated source state instead of the ideal Werner state.
    #[arg(long)]
    pub prepared: bool,
}
