use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "renyi", version, about = "Rényi entropy vectors of multipartite states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a construction and write its descriptor and explicit state.
    Construct(ConstructArgs),
    /// Entropy vector of a state, descriptor or construction file.
    Entropy(EntropyArgs),
    /// Run inequality checks on a state.
    Verify(VerifyArgs),
    /// Strengthened Audenaert bound for a bipartite state.
    Audenaert(AudenaertArgs),
    /// Convergence table of a construction family over alphabet sizes.
    Sweep(SweepArgs),
    /// Random search for inequality violations.
    Witness(WitnessArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstructKind {
    /// Entropy concentrated on one subset.
    Spike,
    /// Uniformly chosen party carries a symbol (α > 1).
    Dilution,
    /// Entropy on an upward-closed family of subsets.
    Upset,
    /// Tensor product of spikes approximating a whole vector.
    Target,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepKind {
    Spike,
    Dilution,
    Upset,
    Target,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    Subadditivity,
}

#[derive(Debug, Args, Serialize)]
pub struct ConstructArgs {
    #[arg(long, value_enum)]
    pub kind: ConstructKind,
    /// Number of parties.
    #[arg(long)]
    pub n: Option<usize>,
    /// Rényi order: a number, or `0`, `1`, `inf`.
    #[arg(long)]
    pub alpha: String,
    /// Target subset as ascending digits, e.g. `12` (spike; default all parties).
    #[arg(long)]
    pub subset: Option<String>,
    /// Target entropy `s` in bits.
    #[arg(long)]
    pub target: Option<f64>,
    /// Alphabet size per party.
    #[arg(long = "M")]
    pub m: Option<u64>,
    /// Comma-separated generators of the upset, e.g. `1,23`.
    #[arg(long)]
    pub generators: Option<String>,
    /// Entropy vector JSON (kind `target`).
    #[arg(long)]
    pub target_vector: Option<PathBuf>,
    /// Sup-norm tolerance; picks `M` automatically (kind `target`, α < 1).
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Output file; standard output when absent.
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct EntropyArgs {
    /// State, descriptor or construction JSON.
    #[arg(long)]
    pub state: PathBuf,
    #[arg(long)]
    pub alpha: String,
    /// Evaluate the descriptor's closed forms even when a state is present.
    #[arg(long)]
    pub analytic: bool,
    #[arg(long, conflicts_with = "csv")]
    pub json: bool,
    #[arg(long)]
    pub csv: bool,
    /// Report text output in nats instead of bits.
    #[arg(long)]
    pub nats: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long)]
    pub state: PathBuf,
    /// Comma-separated: `monotonicity`, `ssa`.
    #[arg(long, default_value = "monotonicity")]
    pub checks: String,
    /// Order used for the monotonicity check.
    #[arg(long, default_value = "1")]
    pub alpha: String,
}

#[derive(Debug, Args, Serialize)]
pub struct AudenaertArgs {
    #[arg(long)]
    pub state: PathBuf,
    #[arg(long)]
    pub alpha: String,
}

#[derive(Debug, Args, Serialize)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub kind: SweepKind,
    #[arg(long)]
    pub alpha: String,
    /// Strictly increasing comma-separated alphabet sizes.
    #[arg(long)]
    pub schedule: String,
    /// Target entropy vector JSON; errors are measured against it.
    #[arg(long)]
    pub target_vector: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub subset: Option<String>,
    /// Spike or dilution height `s` in bits.
    #[arg(long)]
    pub target: Option<f64>,
    #[arg(long)]
    pub generators: Option<String>,
    /// Write the table to this file instead of standard output.
    #[arg(long)]
    #[serde(skip)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct WitnessArgs {
    #[arg(long, value_enum, default_value = "subadditivity")]
    pub property: Property,
    #[arg(long)]
    pub alpha: String,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Local dimensions of the two parties.
    #[arg(long, default_value = "2,2")]
    pub dims: String,
}
