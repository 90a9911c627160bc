//! Config-file loading and flag/file/default resolution.
//!
//! Every knob can come from three places with a fixed precedence:
//! command-line flags override the TOML config file (`--config`), which
//! overrides built-in defaults. The config file uses the same names as the
//! flags (with underscores), and unknown keys are rejected so typos fail
//! loudly instead of silently running defaults.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use spinmarket::stats::{DEFAULT_FIT_WINDOW, DEFAULT_MAX_LAG};
use spinmarket::{Error, Mapping, ModelParams, Result};

/// Raw contents of a TOML config file; everything optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub beta: Option<f64>,
    pub alpha: Option<f64>,
    pub coupling: Option<f64>,
    pub size: Option<usize>,
    pub sweeps: Option<usize>,
    pub warmup: Option<usize>,
    pub delta_t: Option<usize>,
    pub seed: Option<u64>,
    pub seeds: Option<String>,
    pub mapping: Option<String>,
    pub max_lag: Option<usize>,
    pub fit_window: Option<[usize; 2]>,
    pub snapshots: Option<Vec<usize>>,
    pub out: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub date_col: Option<String>,
    pub price_col: Option<String>,
}

impl FileConfig {
    /// Load a TOML config; a malformed file is a configuration error.
    pub fn load(path: &Path) -> Result<FileConfig> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        toml::from_str(&text).map_err(|e| {
            Error::InvalidConfig(format!("config {}: {e}", path.display()))
        })
    }

    /// Load if a path was given, otherwise an empty config.
    pub fn load_opt(path: Option<&PathBuf>) -> Result<FileConfig> {
        match path {
            Some(p) => Self::load(p),
            None => Ok(FileConfig::default()),
        }
    }
}

/// First of flag, config-file value, default.
pub fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

/// Model parameters from merged sources.
pub fn merge_params(args_like: &ParamOverrides, file: &FileConfig) -> ModelParams {
    let d = ModelParams::default();
    ModelParams {
        beta: pick(args_like.beta, file.beta, d.beta),
        alpha: pick(args_like.alpha, file.alpha, d.alpha),
        coupling: pick(args_like.coupling, file.coupling, d.coupling),
        side: pick(args_like.size, file.size, d.side),
        sweeps: pick(args_like.sweeps, file.sweeps, d.sweeps),
        warmup: pick(args_like.warmup, file.warmup, d.warmup),
        delta_t: pick(args_like.delta_t, file.delta_t, d.delta_t),
        seed: pick(args_like.seed, file.seed, d.seed),
    }
}

/// The model-parameter flags shared by `simulate` and `snapshot`.
#[derive(Debug, Default, clap::Args)]
pub struct ParamOverrides {
    /// Inverse temperature of the heat-bath update
    #[arg(long)]
    pub beta: Option<f64>,
    /// Strength of the global coupling to |m|
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Nearest-neighbour coupling J
    #[arg(long)]
    pub coupling: Option<f64>,
    /// Lattice side length L
    #[arg(long)]
    pub size: Option<usize>,
    /// Total sweeps to run
    #[arg(long)]
    pub sweeps: Option<usize>,
    /// Sweeps discarded before recording starts
    #[arg(long)]
    pub warmup: Option<usize>,
    /// Stride between return observations, in recorded sweeps
    #[arg(long)]
    pub delta_t: Option<usize>,
    /// Seed of the random stream
    #[arg(long)]
    pub seed: Option<u64>,
}

/// Parse `"LO,HI"` into an inclusive lag window.
pub fn parse_fit_window(s: &str) -> Result<(usize, usize)> {
    let err = || {
        Error::InvalidConfig(format!(
            "fit window {s:?} should be \"LO,HI\" (e.g. \"1,150\")"
        ))
    };
    let (lo, hi) = s.split_once(',').ok_or_else(err)?;
    let lo = lo.trim().parse::<usize>().map_err(|_| err())?;
    let hi = hi.trim().parse::<usize>().map_err(|_| err())?;
    Ok((lo, hi))
}

/// Parse an inclusive seed range `"A..B"`.
pub fn parse_seed_range(s: &str) -> Result<(u64, u64)> {
    let err = || {
        Error::InvalidConfig(format!(
            "seed range {s:?} should be \"A..B\" (inclusive, e.g. \"1..10\")"
        ))
    };
    let (a, b) = s.split_once("..").ok_or_else(err)?;
    let a = a.trim().parse::<u64>().map_err(|_| err())?;
    let b = b.trim().strip_prefix('=').unwrap_or(b.trim());
    let b = b.trim().parse::<u64>().map_err(|_| err())?;
    if b < a {
        return Err(Error::InvalidConfig(format!("seed range {s:?} is empty")));
    }
    Ok((a, b))
}

/// Parse a comma-separated list of sweep indices.
pub fn parse_sweep_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|tok| {
            tok.trim().parse::<usize>().map_err(|_| {
                Error::InvalidConfig(format!("bad sweep index {tok:?} in {s:?}"))
            })
        })
        .collect()
}

/// Parse a mapping name.
pub fn parse_mapping(s: &str) -> Result<Mapping> {
    Mapping::parse(s)
}

/// Statistics knobs shared by `simulate` and `analyze`.
pub fn merge_stats_window(
    max_lag_flag: Option<usize>,
    fit_window_flag: Option<&String>,
    file: &FileConfig,
) -> Result<(usize, (usize, usize))> {
    let max_lag = pick(max_lag_flag, file.max_lag, DEFAULT_MAX_LAG);
    let fit_window = match fit_window_flag {
        Some(s) => parse_fit_window(s)?,
        None => file.fit_window.map(|[lo, hi]| (lo, hi)).unwrap_or(DEFAULT_FIT_WINDOW),
    };
    Ok((max_lag, fit_window))
}
