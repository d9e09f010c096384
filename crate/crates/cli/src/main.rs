//! `xtwin`: austenite-martensite interface analysis for
//! cubic-to-orthorhombic alloys.
//!
//! Subcommands: `variants`, `twins`, `classical`, `nonclassical`, `check`.
//! Exit codes: 0 success, 2 configuration error, 3 no solution,
//! 4 solvability conditions failed (files still written), 5 self-check
//! failure.

mod commands;
mod config;
mod jsonfmt;
mod output;
mod report;
mod svg;

use clap::{Args, Parser, Subcommand};
use std::process::ExitCode;

#[derive(Debug, Parser)]
#[command(
    name = "xtwin",
    version,
    about = "Austenite-martensite interface analysis"
)]
pub struct Cli {
    #[command(flatten)]
    pub overrides: CliOverrides,

    #[command(subcommand)]
    pub command: Command,
}

/// Command-line values that override the config file, which in turn
/// overrides the built-in defaults.
#[derive(Debug, Args, Default)]
pub struct CliOverrides {
    /// Flat key = value config file.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<std::path::PathBuf>,

    /// Lattice stretch alpha.
    #[arg(long, global = true)]
    pub alpha: Option<f64>,

    /// Lattice stretch beta.
    #[arg(long, global = true)]
    pub beta: Option<f64>,

    /// Lattice stretch gamma.
    #[arg(long, global = true)]
    pub gamma: Option<f64>,

    /// Variant roles A B A' B' (1-based indices).
    #[arg(long, global = true, num_args = 4, value_names = ["A", "B", "AP", "BP"])]
    pub variants: Option<Vec<u8>>,

    /// Number of Lambda grid points.
    #[arg(long = "grid", global = true, value_name = "N")]
    pub grid_n: Option<usize>,

    /// Tolerance on |middle eigenvalue - 1| for habit-plane solutions.
    #[arg(long, global = true, value_name = "TOL")]
    pub tol_mid: Option<f64>,

    /// Branch CSV output path.
    #[arg(long, global = true, value_name = "PATH")]
    pub out_branches: Option<std::path::PathBuf>,

    /// Normals CSV output path.
    #[arg(long, global = true, value_name = "PATH")]
    pub out_normals: Option<std::path::PathBuf>,

    /// SVG plot output path (omit to skip the plot).
    #[arg(long, global = true, value_name = "PATH")]
    pub out_svg: Option<std::path::PathBuf>,

    /// Machine-readable (JSON) stdout where applicable.
    #[arg(long, global = true)]
    pub json: bool,

    /// Inject a fault before running checks (test builds only).
    #[cfg(debug_assertions)]
    #[arg(long, global = true, hide = true, value_name = "WHICH")]
    pub inject_fault: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the six variant stretch matrices.
    Variants,
    /// Solve the twinning equation for one ordered variant pair.
    Twins {
        /// Ordered variant pair I J (1-based indices).
        #[arg(long, num_args = 2, value_names = ["I", "J"], required = true)]
        pair: Vec<u8>,
    },
    /// Classical interface: lambda* and the four habit normals.
    Classical,
    /// Non-classical crossing-twins interface: branch and normal curves.
    Nonclassical,
    /// Run the invariant self-check suite.
    Check,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
