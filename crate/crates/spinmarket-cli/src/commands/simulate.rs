//! `spinmarket simulate`: run the model, extract returns, write artifacts.

use std::path::{Path, PathBuf};

use clap::Args;
use spinmarket::report::{Provenance, ReportDoc};
use spinmarket::{
    build_report, dynamics, magnetization_to_returns, market::ReturnsMeta, run_simulation,
    Mapping, ModelParams, Result,
};

use crate::config::{
    merge_params, merge_stats_window, parse_mapping, parse_seed_range, parse_sweep_list, pick,
    FileConfig, ParamOverrides,
};

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub params: ParamOverrides,
    /// Run a whole inclusive seed range "A..B", one subdirectory per seed
    #[arg(long, conflicts_with = "seed")]
    pub seeds: Option<String>,
    /// Return mapping: "m-diff" or "log-abs-m"
    #[arg(long)]
    pub mapping: Option<String>,
    /// Largest autocorrelation lag in the report
    #[arg(long)]
    pub max_lag: Option<usize>,
    /// Power-law fit window "LO,HI" (inclusive lags)
    #[arg(long)]
    pub fit_window: Option<String>,
    /// Comma-separated sweep indices to snapshot as PGM images
    #[arg(long)]
    pub snapshots: Option<String>,
    /// TOML config file (flags override it)
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
}

struct Settings {
    params: ModelParams,
    mapping: Mapping,
    max_lag: usize,
    fit_window: (usize, usize),
    snapshots: Vec<usize>,
    out: PathBuf,
    seeds: Option<(u64, u64)>,
}

fn resolve(args: &SimulateArgs) -> Result<Settings> {
    let file = FileConfig::load_opt(args.config.as_ref())?;
    let params = merge_params(&args.params, &file);
    let mapping = match &args.mapping {
        Some(s) => parse_mapping(s)?,
        None => file.mapping.as_deref().map(Mapping::parse).transpose()?.unwrap_or(Mapping::MDiff),
    };
    let (max_lag, fit_window) =
        merge_stats_window(args.max_lag, args.fit_window.as_ref(), &file)?;
    let snapshots = match &args.snapshots {
        Some(s) => parse_sweep_list(s)?,
        None => file.snapshots.clone().unwrap_or_default(),
    };
    let seeds = match &args.seeds {
        Some(s) => Some(parse_seed_range(s)?),
        None => file.seeds.as_deref().map(parse_seed_range).transpose()?,
    };
    let out = pick(args.out.clone(), file.out, PathBuf::from("out"));
    Ok(Settings { params, mapping, max_lag, fit_window, snapshots, out, seeds })
}

pub fn run(args: &SimulateArgs) -> Result<()> {
    let settings = resolve(args)?;
    settings.params.validate_for_returns()?;

    match settings.seeds {
        None => {
            let line = run_one(&settings, settings.params.seed, &settings.out)?;
            println!("{line}");
            println!("wrote {}", settings.out.display());
            Ok(())
        }
        Some((first, last)) => run_batch(&settings, first, last),
    }
}

/// Run the seeds of a batch across a small worker pool, one output
/// subdirectory per seed.
fn run_batch(settings: &Settings, first: u64, last: u64) -> Result<()> {
    let seeds: Vec<u64> = (first..=last).collect();
    let workers = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(seeds.len());

    let mut results: Vec<Option<(u64, Result<String>)>> = Vec::new();
    results.resize_with(seeds.len(), || None);
    let results = std::sync::Mutex::new(results);
    let next = std::sync::atomic::AtomicUsize::new(0);

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                let Some(&seed) = seeds.get(i) else { break };
                let dir = settings.out.join(format!("seed-{seed}"));
                let outcome = run_one(settings, seed, &dir);
                results.lock().unwrap()[i] = Some((seed, outcome));
            });
        }
    });

    let mut first_err = None;
    for slot in results.into_inner().unwrap() {
        let (seed, outcome) = slot.expect("worker pool covered every seed");
        match outcome {
            Ok(line) => println!("{line}"),
            Err(e) => {
                eprintln!("seed {seed}: error: {e}");
                first_err.get_or_insert(e);
            }
        }
    }
    match first_err {
        None => {
            println!("wrote {}", settings.out.display());
            Ok(())
        }
        Some(e) => Err(e),
    }
}

/// One full run into `dir`; returns the one-line summary for stdout.
fn run_one(settings: &Settings, seed: u64, dir: &Path) -> Result<String> {
    let params = ModelParams { seed, ..settings.params.clone() };
    std::fs::create_dir_all(dir).map_err(|e| spinmarket::Error::io(dir, e))?;

    let output = run_simulation(&params, &settings.snapshots)?;
    output.series.write_csv_path(&dir.join("magnetization.csv"))?;

    let returns =
        magnetization_to_returns(&output.series, params.delta_t, settings.mapping)?.standardize()?;
    returns.write_csv_path(&dir.join("returns.csv"))?;
    let meta = ReturnsMeta {
        n: returns.len(),
        delta_t: returns.delta_t(),
        source: returns.source(),
        mapping: Some(settings.mapping),
        seed: Some(seed),
        standardized: returns.standardized(),
    };
    spinmarket::report::write_json_path(&meta, &dir.join("returns.meta.json"))?;

    let stats = build_report(&returns, settings.max_lag, settings.fit_window)?;
    let doc = ReportDoc::from_stats(&stats, Provenance::simulated(&params, settings.mapping));
    doc.write_path(&dir.join("report.json"))?;
    stats.acf_returns.write_csv_path(&dir.join("acf_returns.csv"))?;
    stats.acf_abs_returns.write_csv_path(&dir.join("acf_abs_returns.csv"))?;

    if !output.snapshots.is_empty() {
        let snap_dir = dir.join("snapshots");
        std::fs::create_dir_all(&snap_dir).map_err(|e| spinmarket::Error::io(&snap_dir, e))?;
        for snap in &output.snapshots {
            let path = snap_dir.join(format!("sweep-{:07}.pgm", snap.sweep));
            dynamics::export_snapshot(&snap.lattice, snap.sweep, &params, &path)?;
        }
    }

    Ok(format!(
        "seed {seed}: n={} eta={:.4} (r2={:.3}) kurtosis={:.3} jb_p={:.3e} sw_p={:.3e}",
        stats.n, stats.powerlaw.eta, stats.powerlaw.r_squared, stats.kurtosis_raw,
        stats.jb_pvalue, stats.sw_pvalue
    ))
}
