//! `bv-relax`: relaxed areas, Plateau certificates and recovery checks from
//! the command line.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid input, 3 numerical
//! failure, 4 unknown example.

mod commands;
mod error;
mod input;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::Common;

#[derive(Debug, Parser)]
#[command(name = "bv-relax", version, about = "Relaxed area of piecewise Lipschitz planar maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Absolute tolerance of the quadratures and the Plateau lower bound.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Seed of the Plateau optimizer.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Rings of the disk mesh.
    #[arg(long)]
    rings: Option<usize>,
    /// Angular resolution of the disk mesh.
    #[arg(long)]
    angular: Option<usize>,
    /// Write the CSV table here instead of standard output.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write an SVG picture here.
    #[arg(long)]
    svg: Option<PathBuf>,
}

impl From<&CommonArgs> for Common {
    fn from(a: &CommonArgs) -> Self {
        Common {
            tol: a.tol,
            seed: a.seed,
            rings: a.rings,
            angular: a.angular,
            csv: a.csv.clone(),
            svg: a.svg.clone(),
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Relaxed area of a scene: regular, jump and junction terms.
    Area {
        #[arg(long)]
        scene: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Relaxed Jacobian total variation at the junctions of a scene or for
    /// circle data.
    Tvj {
        #[arg(long, conflicts_with = "loop_file")]
        scene: Option<PathBuf>,
        #[arg(long = "loop")]
        loop_file: Option<PathBuf>,
        /// Radius of the n-uple point (the value does not depend on it).
        #[arg(long, default_value_t = 1.0)]
        r: f64,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Plateau certificate of a closed polygon.
    Plateau {
        #[arg(long = "loop")]
        loop_file: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Recovery sequence of a straight-jump or n-uple scene, with strict
    /// convergence and area gaps.
    RecoveryCheck {
        #[arg(long)]
        scene: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Reproduce a worked example: triple, nuple, butterfly, infinite-triple.
    Example {
        name: String,
        #[arg(long, default_value_t = 1.0)]
        r: f64,
        #[arg(long, default_value_t = 20)]
        levels: usize,
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Area { scene, common } => commands::run_area(scene, &common.into()),
        Command::Tvj {
            scene,
            loop_file,
            r,
            common,
        } => commands::run_tvj(scene.as_deref(), loop_file.as_deref(), *r, &common.into()),
        Command::Plateau { loop_file, common } => commands::run_plateau(loop_file, &common.into()),
        Command::RecoveryCheck { scene, common } => commands::run_recovery_check(scene, &common.into()),
        Command::Example {
            name,
            r,
            levels,
            common,
        } => commands::run_example(name, *r, *levels, &common.into()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
