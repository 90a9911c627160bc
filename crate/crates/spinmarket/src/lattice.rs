//! Square spin lattice with periodic boundaries.
//!
//! Spins live on an `L x L` torus and take values in `{-1, +1}`. The lattice
//! keeps a running count of up spins so the magnetization
//! `m = (2 * up_count - N) / N` is available in O(1) after every single-site
//! update, and it precomputes the four-neighbour table once at construction
//! so the update loop does no modular arithmetic.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// How to populate the spins at construction time.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitMode {
    /// Every spin `+1`.
    AllUp,
    /// Every spin `-1`.
    AllDown,
    /// Each spin independently `+1` or `-1` with probability 1/2,
    /// drawn from the supplied generator.
    Random,
}

/// A `(row, col)` pair addressing one site of an `L x L` lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SiteIndex {
    pub row: usize,
    pub col: usize,
}

impl SiteIndex {
    pub fn new(row: usize, col: usize) -> Self {
        SiteIndex { row, col }
    }

    /// Row-major flat offset: `row * side + col`.
    pub fn to_flat(self, side: usize) -> usize {
        debug_assert!(self.row < side && self.col < side);
        self.row * side + self.col
    }

    /// Inverse of [`to_flat`](Self::to_flat).
    pub fn from_flat(flat: usize, side: usize) -> Self {
        debug_assert!(flat < side * side);
        SiteIndex { row: flat / side, col: flat % side }
    }
}

/// `L x L` Ising-type configuration on a torus.
#[derive(Clone, Debug)]
pub struct SpinLattice {
    side: usize,
    spins: Vec<i8>,
    up_count: usize,
    /// `neighbors[i]` holds the flat indices of the four nearest neighbours
    /// of site `i` in the order up, down, left, right (with wraparound).
    neighbors: Vec<[u32; 4]>,
}

impl SpinLattice {
    /// Build a lattice seeding a private ChaCha stream for the random fill.
    ///
    /// For `InitMode::AllUp`/`AllDown` the seed is irrelevant but accepted so
    /// call sites stay uniform.
    pub fn new(side: usize, init: InitMode, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::from_rng(side, init, &mut rng)
    }

    /// Build a lattice drawing any random fill from the caller's generator.
    ///
    /// This is what the simulation driver uses so that lattice initialization
    /// and the sweep updates consume a single random stream.
    pub fn from_rng<R: Rng>(side: usize, init: InitMode, rng: &mut R) -> Result<Self> {
        if side < 2 || (side * side) > u32::MAX as usize {
            return Err(Error::InvalidDimension { side });
        }
        let n = side * side;
        let spins: Vec<i8> = match init {
            InitMode::AllUp => vec![1; n],
            InitMode::AllDown => vec![-1; n],
            InitMode::Random => (0..n).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect(),
        };
        let up_count = spins.iter().filter(|&&s| s == 1).count();
        let mut neighbors = Vec::with_capacity(n);
        for row in 0..side {
            let up = (row + side - 1) % side;
            let down = (row + 1) % side;
            for col in 0..side {
                let left = (col + side - 1) % side;
                let right = (col + 1) % side;
                neighbors.push([
                    (up * side + col) as u32,
                    (down * side + col) as u32,
                    (row * side + left) as u32,
                    (row * side + right) as u32,
                ]);
            }
        }
        Ok(SpinLattice { side, spins, up_count, neighbors })
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn num_sites(&self) -> usize {
        self.spins.len()
    }

    /// Spin at a flat index. Panics on out-of-range (hot-path accessor).
    #[inline]
    pub fn spin(&self, site: usize) -> i8 {
        self.spins[site]
    }

    /// Spin at a checked `(row, col)` coordinate.
    pub fn spin_at(&self, site: SiteIndex) -> Result<i8> {
        self.check(site)?;
        Ok(self.spins[site.to_flat(self.side)])
    }

    /// All spins in row-major order.
    pub fn spins(&self) -> &[i8] {
        &self.spins
    }

    /// Overwrite one spin, maintaining the up-spin count.
    ///
    /// `value` must be `-1` or `+1`; writing the value a site already holds
    /// is a no-op.
    #[inline]
    pub fn set_spin(&mut self, site: usize, value: i8) {
        debug_assert!(value == 1 || value == -1);
        let old = self.spins[site];
        if old != value {
            self.spins[site] = value;
            if value == 1 {
                self.up_count += 1;
            } else {
                self.up_count -= 1;
            }
        }
    }

    /// The four torus neighbours of `site` in the order up, down, left,
    /// right. On an `L = 2` lattice opposite directions coincide, so the
    /// result can contain duplicates; that is intentional, because each
    /// lattice direction contributes its own bond to the local field.
    pub fn neighbors(&self, site: SiteIndex) -> Result<[SiteIndex; 4]> {
        self.check(site)?;
        let flat = self.neighbors[site.to_flat(self.side)];
        Ok(flat.map(|f| SiteIndex::from_flat(f as usize, self.side)))
    }

    /// Unchecked flat-index variant of [`neighbors`](Self::neighbors) for the
    /// update loop.
    #[inline]
    pub fn neighbors_flat(&self, site: usize) -> [usize; 4] {
        let [u, d, l, r] = self.neighbors[site];
        [u as usize, d as usize, l as usize, r as usize]
    }

    pub fn up_count(&self) -> usize {
        self.up_count
    }

    /// Magnetization `m = (1/N) * sum(spins) = (2 * up_count - N) / N`,
    /// always in `[-1, 1]`.
    #[inline]
    pub fn magnetization(&self) -> f64 {
        let n = self.spins.len() as f64;
        (2.0 * self.up_count as f64 - n) / n
    }

    /// O(N) recount of up spins; used by tests to audit the running count.
    pub fn recount_up(&self) -> usize {
        self.spins.iter().filter(|&&s| s == 1).count()
    }

    fn check(&self, site: SiteIndex) -> Result<()> {
        if site.row >= self.side || site.col >= self.side {
            return Err(Error::SiteOutOfRange { row: site.row, col: site.col, side: self.side });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_degenerate_sides() {
        for side in [0, 1] {
            match SpinLattice::new(side, InitMode::AllUp, 0) {
                Err(Error::InvalidDimension { side: s }) => assert_eq!(s, side),
                other => panic!("expected InvalidDimension, got {other:?}"),
            }
        }
    }

    #[test]
    fn flat_round_trip() {
        let side = 7;
        for flat in 0..side * side {
            let idx = SiteIndex::from_flat(flat, side);
            assert_eq!(idx.to_flat(side), flat);
        }
    }

    #[test]
    fn neighbor_order_and_wraparound() {
        // Corner of a 3x3 torus: up wraps to the bottom row, left wraps to
        // the last column.
        let lat = SpinLattice::new(3, InitMode::AllUp, 0).unwrap();
        let nbrs = lat.neighbors(SiteIndex::new(0, 0)).unwrap();
        assert_eq!(
            nbrs,
            [
                SiteIndex::new(2, 0),
                SiteIndex::new(1, 0),
                SiteIndex::new(0, 2),
                SiteIndex::new(0, 1),
            ]
        );

        // Interior site of a 4x4 torus.
        let lat = SpinLattice::new(4, InitMode::AllUp, 0).unwrap();
        let nbrs = lat.neighbors(SiteIndex::new(2, 1)).unwrap();
        assert_eq!(
            nbrs,
            [
                SiteIndex::new(1, 1),
                SiteIndex::new(3, 1),
                SiteIndex::new(2, 0),
                SiteIndex::new(2, 2),
            ]
        );
    }

    #[test]
    fn two_by_two_has_duplicate_neighbors() {
        let lat = SpinLattice::new(2, InitMode::AllUp, 0).unwrap();
        let nbrs = lat.neighbors(SiteIndex::new(0, 0)).unwrap();
        assert_eq!(
            nbrs,
            [
                SiteIndex::new(1, 0),
                SiteIndex::new(1, 0),
                SiteIndex::new(0, 1),
                SiteIndex::new(0, 1),
            ]
        );
    }

    #[test]
    fn neighbor_relation_is_symmetric_and_never_self() {
        for side in 2..=8 {
            let lat = SpinLattice::new(side, InitMode::AllUp, 0).unwrap();
            for flat in 0..side * side {
                let site = SiteIndex::from_flat(flat, side);
                for nbr in lat.neighbors(site).unwrap() {
                    if side >= 3 {
                        assert_ne!(nbr, site, "self-neighbour on L={side}");
                    }
                    let back = lat.neighbors(nbr).unwrap();
                    assert!(
                        back.contains(&site),
                        "asymmetric neighbour pair {site:?} -> {nbr:?} on L={side}"
                    );
                }
            }
        }
    }

    #[test]
    fn out_of_range_site_is_an_error() {
        let lat = SpinLattice::new(4, InitMode::AllUp, 0).unwrap();
        assert!(matches!(
            lat.neighbors(SiteIndex::new(4, 0)),
            Err(Error::SiteOutOfRange { row: 4, col: 0, side: 4 })
        ));
        assert!(matches!(lat.spin_at(SiteIndex::new(0, 9)), Err(Error::SiteOutOfRange { .. })));
    }

    #[test]
    fn init_modes_and_magnetization() {
        let up = SpinLattice::new(4, InitMode::AllUp, 0).unwrap();
        assert_eq!(up.up_count(), 16);
        assert_eq!(up.magnetization(), 1.0);

        let down = SpinLattice::new(4, InitMode::AllDown, 0).unwrap();
        assert_eq!(down.up_count(), 0);
        assert_eq!(down.magnetization(), -1.0);

        let random = SpinLattice::new(32, InitMode::Random, 7).unwrap();
        assert_eq!(random.up_count(), random.recount_up());
        let m = random.magnetization();
        assert!((-1.0..=1.0).contains(&m));
        // A random fill of 1024 spins pinned at |m| = 1 would mean a broken
        // generator hookup.
        assert!(m.abs() < 1.0);
    }

    #[test]
    fn random_init_is_deterministic_per_seed() {
        let a = SpinLattice::new(16, InitMode::Random, 42).unwrap();
        let b = SpinLattice::new(16, InitMode::Random, 42).unwrap();
        let c = SpinLattice::new(16, InitMode::Random, 43).unwrap();
        assert_eq!(a.spins(), b.spins());
        assert_ne!(a.spins(), c.spins());
    }

    #[test]
    fn set_spin_keeps_the_count_consistent() {
        let mut lat = SpinLattice::new(8, InitMode::Random, 3).unwrap();
        // A small deterministic walk of writes, including redundant ones.
        for step in 0..500usize {
            let site = (step * 37) % lat.num_sites();
            let value = if step % 3 == 0 { 1 } else { -1 };
            lat.set_spin(site, value);
            assert_eq!(lat.spin(site), value);
            assert_eq!(lat.up_count(), lat.recount_up(), "diverged at step {step}");
        }
        let n = lat.num_sites() as f64;
        let expect = (2.0 * lat.up_count() as f64 - n) / n;
        assert_eq!(lat.magnetization(), expect);
    }
}
