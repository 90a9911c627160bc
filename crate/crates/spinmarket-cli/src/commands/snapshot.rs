//! `spinmarket snapshot`: export lattice configurations as PGM images.

use std::path::PathBuf;

use clap::Args;
use spinmarket::{dynamics, run_simulation, Error, ModelParams, Result};

use crate::config::{merge_params, parse_sweep_list, pick, FileConfig, ParamOverrides};

#[derive(Debug, Args)]
pub struct SnapshotArgs {
    #[command(flatten)]
    pub params: ParamOverrides,
    /// Comma-separated sweep indices to capture (state after that sweep)
    #[arg(long)]
    pub at: Option<String>,
    /// TOML config file (flags override it)
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(args: &SnapshotArgs) -> Result<()> {
    let file = FileConfig::load_opt(args.config.as_ref())?;
    let params = merge_params(&args.params, &file);
    let at = match &args.at {
        Some(s) => parse_sweep_list(s)?,
        None => file.snapshots.clone().unwrap_or_default(),
    };
    if at.is_empty() {
        return Err(Error::InvalidConfig(
            "snapshot needs sweep indices: pass --at or set snapshots in the config".into(),
        ));
    }
    let out = pick(args.out.clone(), file.out, PathBuf::from("out"));
    params.validate()?;
    let last = *at.iter().max().expect("non-empty");
    if last >= params.sweeps {
        return Err(Error::InvalidConfig(format!(
            "snapshot requested at sweep {last} but the run has sweeps 0..={}",
            params.sweeps - 1
        )));
    }

    // The random stream is consumed sweep by sweep, so truncating the run
    // right after the last snapshot reproduces exactly the configurations
    // the full run would show.
    let truncated =
        ModelParams { sweeps: last + 1, warmup: last, ..params.clone() };
    let output = run_simulation(&truncated, &at)?;

    std::fs::create_dir_all(&out).map_err(|e| Error::io(&out, e))?;
    for snap in &output.snapshots {
        let path = out.join(format!("sweep-{:07}.pgm", snap.sweep));
        dynamics::export_snapshot(&snap.lattice, snap.sweep, &params, &path)?;
        println!("wrote {} (m = {:+.4})", path.display(), snap.lattice.magnetization());
    }
    Ok(())
}
