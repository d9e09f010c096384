//! Subcommand implementations and the exit-code contract.

use crate::config::{self, ConfigError, RunConfig};
use crate::jsonfmt::{self, Obj};
use crate::output;
use crate::report::RunReport;
use crate::svg;
use crate::{Cli, Command};
use std::process::ExitCode;
use xtwin_core::crossing::{build_system, ParallelogramSystem};
use xtwin_core::interface::classical_interface;
use xtwin_core::twinning::{solve_pair_classified, type_ii_solution, TwinSolution};
use xtwin_core::variants::{cubic_point_group, make_variants, PointGroup, VariantSet};
use xtwin_core::{Error as CoreError, Mat3};

pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_NO_SOLUTION: u8 = 3;
pub const EXIT_CONDITIONS: u8 = 4;
pub const EXIT_CHECK: u8 = 5;

/// Write to stdout, ignoring a closed pipe (e.g. piping into `head`).
fn emit(text: std::fmt::Arguments<'_>) {
    use std::io::Write;
    let _ = std::io::stdout().write_fmt(text);
}

macro_rules! outln {
    ($($arg:tt)*) => { emit(format_args!(concat!("{}", "\n"), format_args!($($arg)*))) };
}

macro_rules! out {
    ($($arg:tt)*) => { emit(format_args!($($arg)*)) };
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Core(CoreError),
    Io(std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "{msg}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Config(_) => ExitCode::from(EXIT_CONFIG),
            CliError::Core(e) => match e {
                CoreError::BadParams { .. } | CoreError::BadVariantIndex { .. } => {
                    ExitCode::from(EXIT_CONFIG)
                }
                _ => ExitCode::from(EXIT_NO_SOLUTION),
            },
            CliError::Io(_) => ExitCode::FAILURE,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.0)
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

pub fn run(cli: &Cli) -> Result<ExitCode, CliError> {
    let cfg = config::resolve(&cli.overrides)?;
    match &cli.command {
        Command::Variants => cmd_variants(&cfg),
        Command::Twins { pair } => cmd_twins(&cfg, pair),
        Command::Classical => cmd_classical(&cfg),
        Command::Nonclassical => cmd_nonclassical(&cfg, cli.overrides.json),
        Command::Check => cmd_check(&cfg, cli),
    }
}

fn setup(cfg: &RunConfig) -> Result<(VariantSet, PointGroup), CliError> {
    let set = make_variants(&cfg.lattice())?;
    Ok((set, cubic_point_group()))
}

fn twin_json(sol: &TwinSolution, twin_type: &str, ui: &Mat3, uj: &Mat3) -> String {
    Obj::new()
        .str("type", twin_type)
        .raw("rotation", jsonfmt::mat3(&sol.rotation))
        .raw("shear", jsonfmt::vec3(&sol.shear))
        .raw("normal", jsonfmt::vec3(&sol.normal))
        .num("residual", sol.residual(ui, uj))
        .build()
}

fn cmd_variants(cfg: &RunConfig) -> Result<ExitCode, CliError> {
    let (set, _) = setup(cfg)?;
    let variants = jsonfmt::array(set.all().iter().map(|v| {
        Obj::new()
            .int("index", v.index as usize)
            .raw("u", jsonfmt::mat3(&v.stretch))
            .num("det", v.stretch.det())
            .build()
    }));
    let doc = Obj::new()
        .num("alpha", cfg.alpha)
        .num("beta", cfg.beta)
        .num("gamma", cfg.gamma)
        .raw("variants", variants)
        .build();
    outln!("{doc}");
    Ok(ExitCode::SUCCESS)
}

fn cmd_twins(cfg: &RunConfig, pair: &[u8]) -> Result<ExitCode, CliError> {
    let [i, j] = pair else {
        return Err(CliError::Config("--pair expects two indices".into()));
    };
    if i == j {
        return Err(CliError::Config(format!(
            "--pair indices must differ (got {i} {j})"
        )));
    }
    let (set, group) = setup(cfg)?;
    let (pair_sols, types) = solve_pair_classified(*i, *j, &set, &group)?;
    let ui = set.stretch(*i)?;
    let uj = set.stretch(*j)?;
    let solutions = jsonfmt::array(
        pair_sols
            .solutions
            .iter()
            .zip(types.iter())
            .map(|(sol, t)| twin_json(sol, &t.to_string(), ui, uj)),
    );
    let doc = Obj::new()
        .int("i", *i as usize)
        .int("j", *j as usize)
        .raw("solutions", solutions)
        .build();
    outln!("{doc}");
    Ok(ExitCode::SUCCESS)
}

fn cmd_classical(cfg: &RunConfig) -> Result<ExitCode, CliError> {
    let (set, group) = setup(cfg)?;
    let u_a = set.stretch(cfg.a)?;
    let twin = type_ii_solution(cfg.a, cfg.b, &set, &group)?;
    let classical = classical_interface(u_a, &twin, cfg.tol_mid)?;
    let lambdas = [
        classical.lambda_star,
        classical.lambda_star,
        1.0 - classical.lambda_star,
        1.0 - classical.lambda_star,
    ];
    let signs = ["+", "-", "+", "-"];
    let solutions = jsonfmt::array(classical.solutions.iter().enumerate().map(|(k, s)| {
        Obj::new()
            .num("lambda", lambdas[k])
            .str("sign", signs[k])
            .raw("normal", jsonfmt::vec3(&s.normal))
            .raw("shear", jsonfmt::vec3(&s.shear))
            .num("mid_eigenvalue", s.eigenvalues[1])
            .num("mid_eig_residual", (s.eigenvalues[1] - 1.0).abs())
            .build()
    }));
    let doc = Obj::new()
        .int("A", cfg.a as usize)
        .int("B", cfg.b as usize)
        .num("lambda_star", classical.lambda_star)
        .num("one_minus_lambda_star", 1.0 - classical.lambda_star)
        .raw("solutions", solutions)
        .build();
    outln!("{doc}");
    Ok(ExitCode::SUCCESS)
}

fn cmd_nonclassical(cfg: &RunConfig, json: bool) -> Result<ExitCode, CliError> {
    let (set, group) = setup(cfg)?;
    let sys = build_system(cfg.a, cfg.b, cfg.aprime, cfg.bprime, &set, &group)?;
    let scan = sys.solve_branches(cfg.grid_n)?;
    let curves = sys.normal_curves(&scan, cfg.tol_mid)?;

    std::fs::write(&cfg.out_branches, output::branches_csv(&scan))?;
    std::fs::write(&cfg.out_normals, output::normals_csv(&curves))?;
    if let Some(path) = &cfg.out_svg {
        std::fs::write(path, svg::render(&scan, &curves))?;
    }

    let report = RunReport::new(cfg, &sys, &scan, &curves);
    if json {
        outln!("{}", report.to_json());
    } else {
        out!("{}", report.to_text());
    }
    if report.conditions_hold() && report.full_coverage {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(EXIT_CONDITIONS))
    }
}

fn cmd_check(cfg: &RunConfig, cli: &Cli) -> Result<ExitCode, CliError> {
    let (set, group) = setup(cfg)?;
    let sys = match build_system(cfg.a, cfg.b, cfg.aprime, cfg.bprime, &set, &group) {
        Ok(sys) => sys,
        Err(CoreError::Degenerate) | Err(CoreError::NoTwin { .. }) => {
            outln!("no twin system for these lattice parameters; nothing to check (skipped)");
            return Ok(ExitCode::SUCCESS);
        }
        Err(e) => return Err(e.into()),
    };
    let sys = apply_fault(sys, cli)?;
    let results = xtwin_core::checks::run_all(&sys, &set, cfg.grid_n)?;

    if cli.overrides.json {
        let checks = jsonfmt::array(results.iter().map(|r| {
            Obj::new()
                .str("name", r.name)
                .num("max_residual", r.max_residual)
                .num("tolerance", r.tolerance)
                .bool("passed", r.passed())
                .build()
        }));
        let doc = Obj::new()
            .raw("checks", checks)
            .bool("all_passed", results.iter().all(|r| r.passed()))
            .build();
        outln!("{doc}");
    } else {
        for r in &results {
            outln!(
                "{}  {:<32} max_residual={:<12e} tol={:e}",
                if r.passed() { "ok  " } else { "FAIL" },
                r.name,
                r.max_residual,
                r.tolerance
            );
        }
    }
    if let Some(first_fail) = results.iter().find(|r| !r.passed()) {
        eprintln!(
            "self-check failed: {} ({:e} > {:e})",
            first_fail.name, first_fail.max_residual, first_fail.tolerance
        );
        return Ok(ExitCode::from(EXIT_CHECK));
    }
    Ok(ExitCode::SUCCESS)
}

#[cfg(debug_assertions)]
fn apply_fault(mut sys: ParallelogramSystem, cli: &Cli) -> Result<ParallelogramSystem, CliError> {
    if let Some(which) = &cli.overrides.inject_fault {
        match which.as_str() {
            "perturb-b-ab" => sys.sol_ab.shear[0] += 1e-6,
            other => {
                return Err(CliError::Config(format!("unknown fault `{other}`")));
            }
        }
    }
    Ok(sys)
}

#[cfg(not(debug_assertions))]
fn apply_fault(sys: ParallelogramSystem, _cli: &Cli) -> Result<ParallelogramSystem, CliError> {
    Ok(sys)
}
