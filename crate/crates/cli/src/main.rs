//! Command-line front end: configure warps and initial curves, run flows,
//! and execute the verification suites. Exit codes: 0 success, 2
//! configuration error, 3 numerical failure.

mod commands;
mod config;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use warpflow::CircleModel;

use commands::CircleRun;
use config::{CliError, RunConfig};

#[derive(Parser)]
#[command(name = "warpflow", version, about = "Area-preserving curve flow on warped-product surfaces")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// JSON run configuration
    #[arg(long)]
    config: PathBuf,
    /// Output directory (default: "out" field of the config, else ".")
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the configured random seed
    #[arg(long)]
    seed: Option<u64>,
    /// Override the configured grid size
    #[arg(long)]
    n: Option<usize>,
    /// Override the configured flow horizon
    #[arg(long)]
    tmax: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Euclidean,
    Sphere,
}

#[derive(Args)]
struct CirclesArgs {
    /// Model geometry
    #[arg(long, value_enum)]
    model: Model,
    /// Offset ratio in (-1, 1)
    #[arg(long)]
    a: f64,
    /// Axis angle (euclidean only)
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    /// Circle radius (geodesic radius on the sphere)
    #[arg(long)]
    radius: f64,
    /// Characteristic-ODE step size
    #[arg(long, default_value_t = 1e-3)]
    ds: f64,
    /// Grid size for the sampled circle
    #[arg(long, default_value_t = 512)]
    n: usize,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evolve an initial curve and write trace.csv, summary.json,
    /// final_curve.csv
    Flow(Common),
    /// Sample random radial graphs and report their isoperimetric deficits
    Isocheck(Common),
    /// Build an explicit circle, test its profile, and close the
    /// characteristic ODE around it
    Circles(CirclesArgs),
    /// Find the area-equalizing axis and cut-and-reflect about it
    Symmetrize(Common),
    /// Measure the second-order isoperimetric deficit of a perturbed slice
    Perturb(Common),
}

fn resolve(common: &Common) -> Result<(RunConfig, PathBuf, u64), CliError> {
    let mut config = RunConfig::load(&common.config)?;
    if let Some(n) = common.n {
        config.n = n;
    }
    if let Some(t) = common.tmax {
        config.flow.t_max = t;
    }
    if let Some(s) = common.seed {
        config.seed = s;
    }
    let out = common
        .out
        .clone()
        .or_else(|| config.out.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&out)
        .map_err(|e| CliError::Config(format!("cannot create {}: {e}", out.display())))?;
    let seed = config.seed;
    Ok((config, out, seed))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Flow(common) => {
            let (config, out, _) = resolve(&common)?;
            commands::cmd_flow(&config, &out)
        }
        Cmd::Isocheck(common) => {
            let (config, out, seed) = resolve(&common)?;
            commands::cmd_isocheck(&config, &out, seed)
        }
        Cmd::Symmetrize(common) => {
            let (config, out, _) = resolve(&common)?;
            commands::cmd_symmetrize(&config, &out)
        }
        Cmd::Perturb(common) => {
            let (config, out, _) = resolve(&common)?;
            commands::cmd_perturb(&config, &out)
        }
        Cmd::Circles(args) => {
            let out = args.out.clone().unwrap_or_else(|| PathBuf::from("."));
            std::fs::create_dir_all(&out)
                .map_err(|e| CliError::Config(format!("cannot create {}: {e}", out.display())))?;
            let run = CircleRun {
                model: match args.model {
                    Model::Euclidean => CircleModel::Euclidean,
                    Model::Sphere => CircleModel::Sphere,
                },
                a: args.a,
                alpha: args.alpha,
                radius: args.radius,
                ds: args.ds,
                n: args.n,
            };
            commands::cmd_circles(&run, &out)
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {}", e.message());
        std::process::exit(e.code());
    }
}
