use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::ModelConfig;
use crate::error::{Error, Result};

/// Default upper bound on `(H+1)^n`.
pub const DEFAULT_STATE_CAP: usize = 1 << 24;

/// A point of the health lattice; higher coordinates mean better health.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HealthState(Vec<u32>);

impl HealthState {
    pub fn new(coords: Vec<u32>) -> Self {
        HealthState(coords)
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_origin(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Componentwise `self <= other`.
    pub fn is_dominated_by(&self, other: &HealthState) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn coord_sum(&self) -> u64 {
        self.0.iter().map(|&c| u64::from(c)).sum()
    }
}

impl From<Vec<u32>> for HealthState {
    fn from(coords: Vec<u32>) -> Self {
        HealthState(coords)
    }
}

impl<const N: usize> From<[u32; N]> for HealthState {
    fn from(coords: [u32; N]) -> Self {
        HealthState(coords.to_vec())
    }
}

impl fmt::Display for HealthState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// The grid `{0..=max_level}^dim` with a lexicographic (first coordinate
/// most significant) index. Value functions and policies are stored in this
/// order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lattice {
    dim: usize,
    max_level: u32,
    len: usize,
}

impl Lattice {
    pub fn new(dim: usize, max_level: u32) -> Result<Self> {
        Self::with_cap(dim, max_level, DEFAULT_STATE_CAP)
    }

    pub fn with_cap(dim: usize, max_level: u32, cap: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("lattice dimension must be at least 1".into()));
        }
        let side = u128::from(max_level) + 1;
        let mut required: u128 = 1;
        for _ in 0..dim {
            required = required.saturating_mul(side);
        }
        if required > cap as u128 {
            return Err(Error::Capacity {
                what: "health lattice",
                required,
                cap: cap as u128,
            });
        }
        Ok(Lattice {
            dim,
            max_level,
            len: required as usize,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_level(&self) -> u32 {
        self.max_level
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Index distance between neighbours along `axis`.
    pub fn stride(&self, axis: usize) -> usize {
        let side = self.max_level as usize + 1;
        side.pow((self.dim - 1 - axis) as u32)
    }

    pub fn contains(&self, coords: &[u32]) -> bool {
        coords.len() == self.dim && coords.iter().all(|&c| c <= self.max_level)
    }

    pub fn index_of(&self, coords: &[u32]) -> Option<usize> {
        if !self.contains(coords) {
            return None;
        }
        let side = self.max_level as usize + 1;
        Some(coords.iter().fold(0usize, |acc, &c| acc * side + c as usize))
    }

    pub fn coords_into(&self, mut index: usize, out: &mut [u32]) {
        debug_assert!(index < self.len && out.len() == self.dim);
        let side = self.max_level as usize + 1;
        for slot in out.iter_mut().rev() {
            *slot = (index % side) as u32;
            index /= side;
        }
    }

    pub fn state(&self, index: usize) -> HealthState {
        let mut coords = vec![0; self.dim];
        self.coords_into(index, &mut coords);
        HealthState(coords)
    }

    pub fn states(&self) -> impl Iterator<Item = HealthState> + '_ {
        (0..self.len).map(move |i| self.state(i))
    }
}

/// All `(H+1)^n` lattice points in canonical order.
pub fn enumerate_states(cfg: &ModelConfig) -> Result<Vec<HealthState>> {
    enumerate_states_with_cap(cfg, DEFAULT_STATE_CAP)
}

pub fn enumerate_states_with_cap(cfg: &ModelConfig, cap: usize) -> Result<Vec<HealthState>> {
    let lattice = Lattice::with_cap(cfg.dim(), cfg.max_level(), cap)?;
    Ok(lattice.states().collect())
}
