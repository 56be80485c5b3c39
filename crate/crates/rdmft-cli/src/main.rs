//! Batch front-end over the rdmft crate: functional grids,
//! v-representability maps, BEC-force sweeps, energy minimization,
//! and Bogoliubov tables, serialized as CSV or JSON for external
//! plotting.
//!
//! Exit codes: 0 success, 2 usage error, 3 numerical nonconvergence.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::FileConfig;

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NONCONVERGED: u8 = 3;

#[derive(Parser)]
#[command(name = "rdmft", version, about = "Bosonic RDMFT toolkit for the Hubbard dimer")]
struct Cli {
    /// TOML config file; command-line flags take precedence over its
    /// values, which take precedence over built-in defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Pure / ensemble (and for N = 2 analytic) functional values on a
    /// polar grid over the 1RDM disc, at U = 1.
    FunctionalGrid(GridArgs),
    /// v-representability class of every grid point.
    VrepMap(VrepArgs),
    /// BEC force along rays: closed form vs a finite difference of the
    /// numeric functional.
    BecForce(BecForceArgs),
    /// Ground-state search through the functional, cross-checked
    /// against exact diagonalization. JSON output.
    EnergyMin(EnergyMinArgs),
    /// Per-mode Bogoliubov table: occupation, functional, mode energy
    /// and the Legendre-Fenchel gap across a dispersion sweep.
    Bogoliubov(BogoliubovArgs),
}

#[derive(Args, Clone, Default)]
pub struct GridArgs {
    /// Particle number N.
    #[arg(long)]
    n: Option<usize>,
    /// Grid resolution as RADIALxANGULAR, e.g. 50x50.
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    d_min: Option<f64>,
    #[arg(long)]
    d_max: Option<f64>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Multistart RNG seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (0 = all cores).
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args, Clone, Default)]
pub struct VrepArgs {
    #[arg(long)]
    n: Option<usize>,
    /// Grid resolution as RADIALxANGULAR.
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone, Default)]
pub struct BecForceArgs {
    #[arg(long)]
    n: Option<usize>,
    /// Interaction strength U.
    #[arg(long)]
    u: Option<f64>,
    /// Sweep resolution as DEPLETIONSxANGLES; D points are log-spaced.
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    d_min: Option<f64>,
    #[arg(long)]
    d_max: Option<f64>,
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args, Clone, Default)]
pub struct EnergyMinArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    u: Option<f64>,
    /// Hopping t.
    #[arg(long)]
    t: Option<f64>,
    /// Left on-site potential.
    #[arg(long)]
    vl: Option<f64>,
    /// Right on-site potential.
    #[arg(long)]
    vr: Option<f64>,
    /// Scan resolution as RADIALxANGULAR.
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Clone, Default)]
pub struct BogoliubovArgs {
    /// Energy scale n W_0.
    #[arg(long)]
    nw0: Option<f64>,
    #[arg(long)]
    eps_min: Option<f64>,
    #[arg(long)]
    eps_max: Option<f64>,
    /// Number of log-spaced dispersion points.
    #[arg(long)]
    points: Option<usize>,
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let file = match FileConfig::load(cli.config.as_deref()) {
        Ok(f) => f,
        Err(err) => {
            eprintln!("error: {err:#}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let result = match cli.command {
        Command::FunctionalGrid(args) => commands::functional_grid(&args, &file),
        Command::VrepMap(args) => commands::vrep_map(&args, &file),
        Command::BecForce(args) => commands::bec_force(&args, &file),
        Command::EnergyMin(args) => commands::energy_min(&args, &file),
        Command::Bogoliubov(args) => commands::bogoliubov(&args, &file),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
