//! Spin-lattice market simulator and stylized-facts toolkit.
//!
//! The crate has two halves that meet in the middle:
//!
//! * a Monte Carlo simulator for a spin model of market participants —
//!   an `L x L` torus of traders whose buy/sell state is resampled by
//!   heat-bath updates under a local field that couples nearest-neighbour
//!   imitation with a global coupling to the magnetization (the net
//!   "market position"), producing intermittent bursts of volatility;
//! * a statistics toolkit that maps magnetization histories (or empirical
//!   price series) to standardized returns and measures the classic
//!   stylized facts: fat tails, normality-test rejections, a flat raw-return
//!   autocorrelation, and a slowly decaying power-law autocorrelation of
//!   absolute returns.
//!
//! Everything is deterministic given a seed: simulations use a counter-based
//! ChaCha stream, files carry provenance blocks, and all floating-point
//! output is written with 17 significant digits so artifacts are
//! byte-reproducible.

pub mod dynamics;
pub mod error;
mod fmt;
pub mod ingest;
pub mod lattice;
pub mod market;
pub mod report;
pub mod stats;

pub use dynamics::{run_simulation, MagnetizationSeries, ModelParams, SimulationOutput, Snapshot};
pub use error::{Error, Result};
pub use ingest::PriceSeries;
pub use lattice::{InitMode, SiteIndex, SpinLattice};
pub use market::{magnetization_to_returns, standardize, Mapping, ReturnSeries, Source};
pub use report::{ReportDoc, SCHEMA_VERSION};
pub use stats::{build_report, log_returns, AcfCurve, PowerLawFit, StatsReport};
