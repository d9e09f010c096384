//! Run configuration: defaults, flat key = value config files, and
//! command-line overrides, in increasing order of precedence.

use crate::CliOverrides;
use std::path::{Path, PathBuf};
use xtwin_core::variants::LatticeParams;

/// Fully resolved configuration of one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub a: u8,
    pub b: u8,
    pub aprime: u8,
    pub bprime: u8,
    pub grid_n: usize,
    pub tol_mid: f64,
    pub out_branches: PathBuf,
    pub out_normals: PathBuf,
    pub out_svg: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let p = LatticeParams::CUALNI;
        RunConfig {
            alpha: p.alpha,
            beta: p.beta,
            gamma: p.gamma,
            a: 3,
            b: 6,
            aprime: 4,
            bprime: 5,
            grid_n: 1001,
            tol_mid: 1e-8,
            out_branches: PathBuf::from("branches.csv"),
            out_normals: PathBuf::from("normals.csv"),
            out_svg: None,
        }
    }
}

/// A configuration problem; always maps to exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl RunConfig {
    pub fn lattice(&self) -> LatticeParams {
        LatticeParams {
            alpha: self.alpha,
            beta: self.beta,
            gamma: self.gamma,
        }
    }

    fn validate(&self) -> Result<(), ConfigError> {
        for (name, value) in [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("gamma", self.gamma),
        ] {
            if value <= 0.0 || !value.is_finite() {
                return Err(ConfigError(format!(
                    "{name} must be strictly positive (got {value})"
                )));
            }
        }
        let named = [
            ("A", self.a),
            ("B", self.b),
            ("Aprime", self.aprime),
            ("Bprime", self.bprime),
        ];
        for (k, (name, idx)) in named.iter().enumerate() {
            if !(1..=6).contains(idx) {
                return Err(ConfigError(format!(
                    "variant index {name} must lie in 1..=6 (got {idx})"
                )));
            }
            for (other, prev) in &named[..k] {
                if prev == idx {
                    return Err(ConfigError(format!(
                        "variant indices must be pairwise distinct ({other} and {name} are both {idx})"
                    )));
                }
            }
        }
        if self.grid_n < 2 {
            return Err(ConfigError(format!(
                "grid_n must be at least 2 (got {})",
                self.grid_n
            )));
        }
        if self.tol_mid <= 0.0 || !self.tol_mid.is_finite() {
            return Err(ConfigError(format!(
                "tol_mid must be strictly positive (got {})",
                self.tol_mid
            )));
        }
        Ok(())
    }
}

/// Apply defaults, then the config file, then command-line overrides.
pub fn resolve(overrides: &CliOverrides) -> Result<RunConfig, ConfigError> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &overrides.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read config file {}: {e}", path.display())))?;
        apply_file(&mut cfg, &text, path)?;
    }
    if let Some(v) = overrides.alpha {
        cfg.alpha = v;
    }
    if let Some(v) = overrides.beta {
        cfg.beta = v;
    }
    if let Some(v) = overrides.gamma {
        cfg.gamma = v;
    }
    if let Some(v) = &overrides.variants {
        if v.len() != 4 {
            return Err(ConfigError("--variants expects four indices".into()));
        }
        cfg.a = v[0];
        cfg.b = v[1];
        cfg.aprime = v[2];
        cfg.bprime = v[3];
    }
    if let Some(v) = overrides.grid_n {
        cfg.grid_n = v;
    }
    if let Some(v) = overrides.tol_mid {
        cfg.tol_mid = v;
    }
    if let Some(v) = &overrides.out_branches {
        cfg.out_branches = v.clone();
    }
    if let Some(v) = &overrides.out_normals {
        cfg.out_normals = v.clone();
    }
    if let Some(v) = &overrides.out_svg {
        cfg.out_svg = Some(v.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Parse a flat `key = value` file; `#` starts a comment, unknown keys
/// are an error.
fn apply_file(cfg: &mut RunConfig, text: &str, path: &Path) -> Result<(), ConfigError> {
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            ConfigError(format!(
                "{}:{}: expected `key = value`, got `{line}`",
                path.display(),
                lineno + 1
            ))
        })?;
        let key = key.trim();
        let value = value.trim();
        let bad = |what: &str| {
            ConfigError(format!(
                "{}:{}: {key}: {what} (got `{value}`)",
                path.display(),
                lineno + 1
            ))
        };
        match key {
            "alpha" => cfg.alpha = value.parse().map_err(|_| bad("expected a number"))?,
            "beta" => cfg.beta = value.parse().map_err(|_| bad("expected a number"))?,
            "gamma" => cfg.gamma = value.parse().map_err(|_| bad("expected a number"))?,
            "A" => cfg.a = value.parse().map_err(|_| bad("expected a variant index"))?,
            "B" => cfg.b = value.parse().map_err(|_| bad("expected a variant index"))?,
            "Aprime" => cfg.aprime = value.parse().map_err(|_| bad("expected a variant index"))?,
            "Bprime" => cfg.bprime = value.parse().map_err(|_| bad("expected a variant index"))?,
            "grid_n" => cfg.grid_n = value.parse().map_err(|_| bad("expected an integer"))?,
            "tol_mid" => cfg.tol_mid = value.parse().map_err(|_| bad("expected a number"))?,
            "out_branches" => cfg.out_branches = PathBuf::from(value),
            "out_normals" => cfg.out_normals = PathBuf::from(value),
            "out_svg" => cfg.out_svg = Some(PathBuf::from(value)),
            other => {
                return Err(ConfigError(format!(
                    "{}:{}: unknown config key `{other}`",
                    path.display(),
                    lineno + 1
                )))
            }
        }
    }
    Ok(())
}
