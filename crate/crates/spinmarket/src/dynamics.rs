//! Heat-bath dynamics of the spin market and the simulation driver.
//!
//! Each elementary move resamples one randomly chosen site: the new spin is
//! `+1` with probability `1 / (1 + exp(-2 * beta * h))` where the local field
//!
//! ```text
//! h_i = J * sum(neighbour spins) - alpha * S_i * |m|
//! ```
//!
//! couples ferromagnetic imitation of the four lattice neighbours with a
//! global anti-alignment against the magnitude of the magnetization `m`.
//! The magnetization is maintained incrementally, so every single-site move
//! sees the up-to-date `|m|` including all flips earlier in the same sweep.
//!
//! One *sweep* is `N = L * L` such moves with sites drawn uniformly with
//! replacement. A run performs `sweeps` sweeps from a random initial
//! configuration, discards the first `warmup` of them, and records `m` once
//! per remaining sweep.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fmt::float17;
use crate::lattice::{InitMode, SiteIndex, SpinLattice};

/// Full parameter set of one simulation run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Inverse temperature of the heat-bath update.
    pub beta: f64,
    /// Strength of the coupling to `|m|` (the global "minority" pressure).
    pub alpha: f64,
    /// Nearest-neighbour coupling `J`.
    pub coupling: f64,
    /// Lattice side length `L`.
    pub side: usize,
    /// Total number of sweeps to perform.
    pub sweeps: usize,
    /// Sweeps discarded before recording begins.
    pub warmup: usize,
    /// Stride, in recorded sweeps, between return observations.
    pub delta_t: usize,
    /// Seed of the ChaCha stream driving init and updates.
    pub seed: u64,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            beta: 1.7,
            alpha: 10.0,
            coupling: 1.0,
            side: 32,
            sweeps: 1_000_000,
            warmup: 100_000,
            delta_t: 100,
            seed: 1,
        }
    }
}

impl ModelParams {
    /// Checks every field a bare simulation needs. Return-series extraction
    /// has the stronger requirement in [`validate_for_returns`].
    ///
    /// [`validate_for_returns`]: Self::validate_for_returns
    pub fn validate(&self) -> Result<()> {
        if self.side < 2 || (self.side * self.side) > u32::MAX as usize {
            return Err(Error::InvalidDimension { side: self.side });
        }
        if !self.beta.is_finite() || self.beta < 0.0 {
            return Err(Error::InvalidConfig(format!("beta must be finite and >= 0, got {}", self.beta)));
        }
        if !self.alpha.is_finite() || self.alpha < 0.0 {
            return Err(Error::InvalidConfig(format!("alpha must be finite and >= 0, got {}", self.alpha)));
        }
        if !self.coupling.is_finite() {
            return Err(Error::InvalidConfig(format!("coupling must be finite, got {}", self.coupling)));
        }
        if self.sweeps == 0 {
            return Err(Error::InvalidConfig("sweeps must be >= 1".into()));
        }
        if self.warmup >= self.sweeps {
            return Err(Error::InvalidConfig(format!(
                "warmup ({}) must be smaller than sweeps ({})",
                self.warmup, self.sweeps
            )));
        }
        if self.delta_t == 0 {
            return Err(Error::InvalidConfig("delta_t must be >= 1".into()));
        }
        Ok(())
    }

    /// [`validate`](Self::validate) plus the requirement that the recorded
    /// span can support at least two return observations at stride
    /// `delta_t`, which the downstream standardization needs.
    pub fn validate_for_returns(&self) -> Result<()> {
        self.validate()?;
        let recorded = self.sweeps - self.warmup;
        if recorded < 2 * self.delta_t {
            return Err(Error::InvalidConfig(format!(
                "recorded span too short: sweeps - warmup = {} but the return stride needs at least 2 * delta_t = {}",
                recorded,
                2 * self.delta_t
            )));
        }
        Ok(())
    }
}

/// Local field at `site` given the current magnetization `m`.
///
/// `m` must be the magnetization of the configuration being probed; the
/// driver keeps it incrementally, callers probing a standalone lattice can
/// pass `lattice.magnetization()`.
pub fn local_field(
    lattice: &SpinLattice,
    site: SiteIndex,
    alpha: f64,
    coupling: f64,
    m: f64,
) -> Result<f64> {
    let spin = f64::from(lattice.spin_at(site)?);
    let flat = site.to_flat(lattice.side());
    let [u, d, l, r] = lattice.neighbors_flat(flat);
    let neighbour_sum =
        f64::from(lattice.spin(u) + lattice.spin(d) + lattice.spin(l) + lattice.spin(r));
    Ok(coupling * neighbour_sum - alpha * spin * m.abs())
}

/// Heat-bath probability that the resampled spin comes out `+1`.
///
/// Evaluates `1 / (1 + exp(-2 * beta * field))` through the branch that only
/// ever exponentiates a non-positive argument, so large fields saturate
/// cleanly at 0 or 1 instead of overflowing.
#[inline]
pub fn update_probability(field: f64, beta: f64) -> f64 {
    let x = 2.0 * beta * field;
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// One elementary move: resample the spin at flat index `site`.
///
/// This is a resampling (heat-bath) step, not an accept/reject flip: the new
/// value is drawn from the conditional distribution given the neighbours and
/// the current `|m|`, independent of the old value except through the
/// `alpha` term of the field.
#[inline]
pub fn update_site<R: Rng>(
    lattice: &mut SpinLattice,
    site: usize,
    beta: f64,
    alpha: f64,
    coupling: f64,
    rng: &mut R,
) {
    let m_abs = lattice.magnetization().abs();
    let spin = f64::from(lattice.spin(site));
    let [u, d, l, r] = lattice.neighbors_flat(site);
    let neighbour_sum =
        f64::from(lattice.spin(u) + lattice.spin(d) + lattice.spin(l) + lattice.spin(r));
    let field = coupling * neighbour_sum - alpha * spin * m_abs;
    let p_up = update_probability(field, beta);
    let next = if rng.random::<f64>() < p_up { 1 } else { -1 };
    lattice.set_spin(site, next);
}

/// One sweep: `N` elementary moves at uniformly random sites (with
/// replacement), asynchronously, each seeing all earlier moves.
pub fn sweep<R: Rng>(lattice: &mut SpinLattice, params: &ModelParams, rng: &mut R) {
    assert_eq!(lattice.side(), params.side, "lattice side does not match params.side");
    let n = lattice.num_sites();
    for _ in 0..n {
        let site = rng.random_range(0..n);
        update_site(lattice, site, params.beta, params.alpha, params.coupling, rng);
    }
}

/// Per-sweep magnetization record of one run (post-warmup portion).
#[derive(Clone, Debug)]
pub struct MagnetizationSeries {
    values: Vec<f64>,
    params: ModelParams,
}

impl MagnetizationSeries {
    pub fn new(values: Vec<f64>, params: ModelParams) -> Self {
        MagnetizationSeries { values, params }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Absolute sweep index of entry `k` (recording starts after warmup).
    pub fn sweep_of(&self, k: usize) -> usize {
        self.params.warmup + k
    }

    /// Write `sweep,m` rows, floats with 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "sweep,m")?;
        for (k, &m) in self.values.iter().enumerate() {
            writeln!(w, "{},{}", self.sweep_of(k), float17(m))?;
        }
        Ok(())
    }

    pub fn write_csv_path(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(file);
        self.write_csv(&mut w).map_err(|e| Error::io(path, e))?;
        w.flush().map_err(|e| Error::io(path, e))
    }
}

/// A lattice configuration captured right after a given sweep finished.
#[derive(Clone, Debug)]
pub struct Snapshot {
    pub sweep: usize,
    pub lattice: SpinLattice,
}

/// Everything a run produces in memory.
#[derive(Clone, Debug)]
pub struct SimulationOutput {
    pub series: MagnetizationSeries,
    pub snapshots: Vec<Snapshot>,
}

/// Run the full simulation described by `params`.
///
/// A single ChaCha stream seeded from `params.seed` drives both the random
/// initial configuration and every update, so a `(params, seed)` pair fully
/// determines the output. `snapshot_at` lists sweep indices (0-based, state
/// captured after that sweep completes) to clone out; capturing does not
/// touch the random stream. Indices past the last sweep are a configuration
/// error.
pub fn run_simulation(params: &ModelParams, snapshot_at: &[usize]) -> Result<SimulationOutput> {
    params.validate()?;
    let mut schedule: Vec<usize> = snapshot_at.to_vec();
    schedule.sort_unstable();
    schedule.dedup();
    if let Some(&last) = schedule.last() {
        if last >= params.sweeps {
            return Err(Error::InvalidConfig(format!(
                "snapshot requested at sweep {last} but the run has sweeps 0..={}",
                params.sweeps - 1
            )));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut lattice = SpinLattice::from_rng(params.side, InitMode::Random, &mut rng)?;

    let mut values = Vec::with_capacity(params.sweeps - params.warmup);
    let mut snapshots = Vec::with_capacity(schedule.len());
    let mut next_snap = 0usize;

    for t in 0..params.sweeps {
        sweep(&mut lattice, params, &mut rng);
        if t >= params.warmup {
            values.push(lattice.magnetization());
        }
        if next_snap < schedule.len() && schedule[next_snap] == t {
            snapshots.push(Snapshot { sweep: t, lattice: lattice.clone() });
            next_snap += 1;
        }
    }

    Ok(SimulationOutput {
        series: MagnetizationSeries::new(values, params.clone()),
        snapshots,
    })
}

/// Write a configuration as a plain-text PGM (`P2`) image: `0` for a `-1`
/// spin, `255` for `+1`, one lattice row per raster line. The header comment
/// records the sweep index and the run parameters.
pub fn write_pgm<W: Write>(
    lattice: &SpinLattice,
    sweep: usize,
    params: &ModelParams,
    mut w: W,
) -> io::Result<()> {
    let side = lattice.side();
    writeln!(w, "P2")?;
    writeln!(
        w,
        "# sweep={} L={} beta={} alpha={} J={} seed={}",
        sweep, params.side, params.beta, params.alpha, params.coupling, params.seed
    )?;
    writeln!(w, "{side} {side}")?;
    writeln!(w, "255")?;
    for row in 0..side {
        let mut line = String::with_capacity(side * 4);
        for col in 0..side {
            if col > 0 {
                line.push(' ');
            }
            let v = if lattice.spin(row * side + col) == 1 { "255" } else { "0" };
            line.push_str(v);
        }
        writeln!(w, "{line}")?;
    }
    Ok(())
}

/// [`write_pgm`] to a file path.
pub fn export_snapshot(
    lattice: &SpinLattice,
    sweep: usize,
    params: &ModelParams,
    path: &Path,
) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    write_pgm(lattice, sweep, params, &mut w).map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))
}

/// Parse a PGM written by [`write_pgm`] back into a lattice.
///
/// Accepts any conforming plain PGM with a square raster, maxval 255 and
/// pixel values restricted to `{0, 255}`; comment lines are skipped wherever
/// they appear.
pub fn parse_pgm<R: BufRead>(reader: R) -> Result<SpinLattice> {
    let mut tokens: Vec<String> = Vec::new();
    for line in reader.lines() {
        let line = line.map_err(|e| Error::Parse(format!("pgm read failed: {e}")))?;
        let data = match line.find('#') {
            Some(pos) => &line[..pos],
            None => &line[..],
        };
        tokens.extend(data.split_whitespace().map(str::to_owned));
    }
    let mut it = tokens.into_iter();
    let magic = it.next().ok_or_else(|| Error::Parse("empty pgm".into()))?;
    if magic != "P2" {
        return Err(Error::Parse(format!("expected plain pgm magic P2, got {magic:?}")));
    }
    let mut next_usize = |what: &str| -> Result<usize> {
        let tok = it.next().ok_or_else(|| Error::Parse(format!("pgm truncated before {what}")))?;
        tok.parse::<usize>().map_err(|_| Error::Parse(format!("bad {what} {tok:?}")))
    };
    let width = next_usize("width")?;
    let height = next_usize("height")?;
    if width != height {
        return Err(Error::Parse(format!("raster is {width}x{height}, expected a square lattice")));
    }
    let maxval = next_usize("maxval")?;
    if maxval != 255 {
        return Err(Error::Parse(format!("expected maxval 255, got {maxval}")));
    }
    let mut lattice = SpinLattice::new(width, InitMode::AllDown, 0)?;
    for i in 0..width * height {
        let v = next_usize("pixel")?;
        match v {
            0 => lattice.set_spin(i, -1),
            255 => lattice.set_spin(i, 1),
            other => return Err(Error::Parse(format!("pixel value {other} is neither 0 nor 255"))),
        }
    }
    if it.next().is_some() {
        return Err(Error::Parse("trailing data after raster".into()));
    }
    Ok(lattice)
}

/// [`parse_pgm`] from a file path.
pub fn load_snapshot(path: &Path) -> Result<SpinLattice> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_pgm(BufReader::new(file))
}
