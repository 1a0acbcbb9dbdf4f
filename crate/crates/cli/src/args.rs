use std::path::PathBuf;

use belllab::{BuiltinModel, Plane};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "belllab", version, about = "CHSH correlations, hidden-variable baselines and simulated Bell tests")]
pub struct Cli {
    /// Flat `key = value` file with defaults for the subcommand flags.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Worker threads (results do not depend on this).
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quantum CHSH value for c1|01> + c2|10>.
    Chsh(ChshArgs),
    /// Violation region over a two-angle grid.
    Scan(ScanArgs),
    /// Monte Carlo CHSH value of a local hidden-variable model.
    Lhv(LhvArgs),
    /// Simulated two-channel polarizer experiment.
    Agr(AgrArgs),
    /// Quick internal consistency checks.
    Selftest(SelftestArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Write the report to this file instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[group(id = "source", required = true, multiple = false)]
pub struct SettingsSource {
    /// Use the optimal settings for the state.
    #[arg(long, group = "source")]
    pub gisin: bool,

    /// Polar angles of a, b, a', b' in the xz-plane.
    #[arg(long, group = "source", num_args = 4, value_names = ["A", "B", "A'", "B'"], allow_negative_numbers = true)]
    pub angles: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct ChshArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub c1: f64,

    #[arg(long, allow_negative_numbers = true)]
    pub c2: f64,

    /// Accept separable states (c1·c2 = 0).
    #[arg(long)]
    pub permissive: bool,

    #[command(flatten)]
    pub source: SettingsSource,

    /// Angles are in radians rather than degrees.
    #[arg(long)]
    pub radians: bool,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long, value_parser = parse_plane)]
    pub plane: Plane,

    /// Concurrence 2|c1·c2| in [0, 1].
    #[arg(long, conflicts_with_all = ["c1", "c2"], required_unless_present_all = ["c1", "c2"])]
    pub concurrence: Option<f64>,

    /// Sign of c1·c2 when the state is given by its concurrence.
    #[arg(long, value_enum, default_value_t = Sign::Plus, requires = "concurrence")]
    pub sign: Sign,

    #[arg(long, requires = "c2", allow_negative_numbers = true)]
    pub c1: Option<f64>,

    #[arg(long, requires = "c1", allow_negative_numbers = true)]
    pub c2: Option<f64>,

    /// Grid points per axis.
    #[arg(long, default_value_t = belllab::scan::DEFAULT_GRID)]
    pub grid: usize,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct LhvArgs {
    #[arg(long, value_parser = parse_model, default_value = "bell-sign")]
    pub model: BuiltinModel,

    /// Hidden-variable draws, shared by the four correlations.
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,

    #[arg(long, env = "BELLLAB_SEED", default_value_t = 42)]
    pub seed: u64,

    /// Use the optimal quantum settings for c1|01> + c2|10>.
    #[arg(long, num_args = 2, value_names = ["C1", "C2"], conflicts_with = "angles", allow_negative_numbers = true)]
    pub gisin_for: Option<Vec<f64>>,

    /// Polar angles of a, b, a', b' in the xz-plane.
    #[arg(long, num_args = 4, value_names = ["A", "B", "A'", "B'"], allow_negative_numbers = true)]
    pub angles: Option<Vec<f64>>,

    #[arg(long)]
    pub radians: bool,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StateKind {
    Singlet,
    Product,
    Canonical,
}

#[derive(Debug, Args)]
pub struct AgrArgs {
    /// Pairs emitted per orientation pair.
    #[arg(long, default_value_t = 1_000_000)]
    pub pairs: u64,

    /// Per-side detection probability.
    #[arg(long, default_value_t = 1.0)]
    pub efficiency: f64,

    /// Fraction of pairs keeping their quantum correlation.
    #[arg(long, default_value_t = 1.0)]
    pub visibility: f64,

    /// Width of the random polarizer tilt (degrees unless --radians).
    #[arg(long, default_value_t = 0.0)]
    pub misalignment: f64,

    #[arg(long, env = "BELLLAB_SEED", default_value_t = 42)]
    pub seed: u64,

    #[arg(long, value_enum, default_value_t = StateKind::Singlet)]
    pub state: StateKind,

    /// Coefficients for --state canonical.
    #[arg(long, allow_negative_numbers = true)]
    pub c1: Option<f64>,

    #[arg(long, allow_negative_numbers = true)]
    pub c2: Option<f64>,

    /// Polar angles of a, b, a', b' in the xz-plane [default: 0 45 90 135].
    #[arg(long, num_args = 4, value_names = ["A", "B", "A'", "B'"], allow_negative_numbers = true)]
    pub angles: Option<Vec<f64>>,

    #[arg(long)]
    pub radians: bool,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    #[arg(long, env = "BELLLAB_SEED", default_value_t = 42)]
    pub seed: u64,
}

fn parse_plane(s: &str) -> Result<Plane, String> {
    s.parse().map_err(|e: belllab::BellError| e.to_string())
}

fn parse_model(s: &str) -> Result<BuiltinModel, String> {
    s.parse().map_err(|e: belllab::BellError| e.to_string())
}
