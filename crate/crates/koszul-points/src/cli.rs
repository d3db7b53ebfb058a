//! Command-line arguments.

use clap::{Args, Parser, Subcommand, ValueEnum};

use koszul_points_core::config::DEFAULT_LATTICE_BOUND;
use koszul_points_core::filtration::DEFAULT_D_ISO;
use koszul_points_core::lambda::DEFAULT_BUDGET;
use koszul_points_core::oracle::{TorMethod, DEFAULT_BAR_BOUND, DEFAULT_I_MAX, DEFAULT_J_MAX};
use koszul_points_core::scan::DEFAULT_COORD_BOUND;

#[derive(Debug, Parser)]
#[command(name = "koszul-points", version, about = "Koszulness certificates for finite sets of points in projective space")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the flats of a configuration.
    Flats(FlatsArgs),
    /// Search for a certifying family, verify it and cross-check it.
    Certify(CertifyArgs),
    /// Decide whether Koszulness passes from a configuration to a subset.
    Descent(DescentArgs),
    /// Compute Hilbert function and Tor window.
    Oracle(OracleArgs),
    /// Emit a configuration from one of the built-in families.
    Gen(GenArgs),
    /// Run the seeded scan over random 2n-point configurations in P^n.
    Scan(ScanArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Resolution,
    Bar,
}

impl From<MethodArg> for TorMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Resolution => TorMethod::Resolution,
            MethodArg::Bar => TorMethod::Bar,
        }
    }
}

#[derive(Debug, Args)]
pub struct WindowArgs {
    /// Largest homological degree i.
    #[arg(long, default_value_t = DEFAULT_I_MAX)]
    pub imax: usize,
    /// Largest internal degree j.
    #[arg(long, default_value_t = DEFAULT_J_MAX)]
    pub jmax: usize,
    #[arg(long, value_enum, default_value_t = MethodArg::Resolution)]
    pub method: MethodArg,
    /// Largest bar-complex term the bar method may build.
    #[arg(long, default_value_t = DEFAULT_BAR_BOUND)]
    pub bar_bound: usize,
}

#[derive(Debug, Args)]
pub struct FlatsArgs {
    /// Configuration JSON file, or `-` for standard input.
    pub input: String,
    #[arg(long, default_value_t = DEFAULT_LATTICE_BOUND)]
    pub bound: usize,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    pub input: String,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long, default_value_t = DEFAULT_D_ISO)]
    pub d_iso: usize,
    /// Skip the exhaustive lattice fallback.
    #[arg(long)]
    pub templates_only: bool,
    #[arg(long)]
    pub no_oracle: bool,
    #[command(flatten)]
    pub window: WindowArgs,
    #[arg(long)]
    pub json: bool,
    /// Write the certificate JSON here.
    #[arg(long)]
    pub out: Option<String>,
    /// Re-verify this certificate instead of searching.
    #[arg(long)]
    pub recheck: Option<String>,
}

#[derive(Debug, Args)]
pub struct DescentArgs {
    pub input: String,
    /// Comma-separated point indices of the subset.
    #[arg(long, value_delimiter = ',', required = true)]
    pub subset: Vec<usize>,
    /// Take Koszulness of the input as given.
    #[arg(long, conflicts_with = "certificate")]
    pub assume_koszul: bool,
    /// Certificate for the input, re-checked before use.
    #[arg(long)]
    pub certificate: Option<String>,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    pub input: String,
    #[command(flatten)]
    pub window: WindowArgs,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Work over GF(p) instead of the rationals.
    #[arg(long)]
    pub prime: Option<u64>,
    /// Write the configuration here instead of standard output.
    #[arg(long)]
    pub out: Option<String>,
    #[command(subcommand)]
    pub family: FamilyArg,
}

#[derive(Debug, Subcommand)]
pub enum FamilyArg {
    /// s points on the moment curve in P^n.
    General {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s: usize,
    },
    /// Two independent blocks of sizes a and b.
    Split {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
    },
    /// Blocks whose consecutive unions are flats.
    Chain {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
    },
    /// Four blocks S0..S3 on three planes.
    ThreePlanes {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
    },
    /// m blocks of n - m + 2 points, every union a flat.
    BlockUnions {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },
    /// The eight points e1..e5, x, y, z in P^4.
    Rains,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub trials: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Coordinates are drawn from [-bound, bound].
    #[arg(long, default_value_t = DEFAULT_COORD_BOUND)]
    pub bound: i64,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Replace the first sample with the Rains configuration (n = 4).
    #[arg(long)]
    pub inject_rains: bool,
    #[command(flatten)]
    pub window: WindowArgs,
    #[arg(long)]
    pub json: bool,
}
