use alloc::format;
use alloc::vec::Vec;

use super::HealthState;
use crate::error::{Error, Result};

/// Health states where monitoring stops and the terminal cost is paid.
///
/// Every variant is a sublevel set `{h : g(h) <= c}` of a function that is
/// non-decreasing in each coordinate, so membership is downward-closed.
/// The origin is a member of every set regardless of parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum CriticalSet {
    /// Any measurement at level 0.
    MinZero,
    /// `sum(h) <= c`.
    L1Ball(u32),
    /// `max(h) <= c`.
    LInfBall(u32),
    /// `weights . h <= threshold`, weights strictly positive.
    WeightedL1 { weights: Vec<f64>, threshold: f64 },
    /// Member of any of the listed sets.
    Union(Vec<CriticalSet>),
}

impl CriticalSet {
    /// The set containing only the origin.
    pub fn origin_only() -> Self {
        CriticalSet::L1Ball(0)
    }

    /// Checks parameters against a lattice dimension.
    pub fn validate(&self, dim: usize) -> Result<()> {
        match self {
            CriticalSet::MinZero | CriticalSet::L1Ball(_) | CriticalSet::LInfBall(_) => Ok(()),
            CriticalSet::WeightedL1 { weights, threshold } => {
                if weights.len() != dim {
                    return Err(Error::DimensionMismatch {
                        what: "critical set weights",
                        expected: dim,
                        found: weights.len(),
                    });
                }
                if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
                    return Err(Error::InvalidParameter(format!(
                        "critical set weight {w} must be positive and finite"
                    )));
                }
                if threshold.is_nan() {
                    return Err(Error::InvalidParameter("critical set threshold is NaN".into()));
                }
                Ok(())
            }
            CriticalSet::Union(sets) => sets.iter().try_for_each(|s| s.validate(dim)),
        }
    }

    pub fn contains(&self, coords: &[u32]) -> Result<bool> {
        self.validate(coords.len())?;
        Ok(self.contains_unchecked(coords))
    }

    /// Membership without parameter validation; callers must have run
    /// [`CriticalSet::validate`] for this dimension.
    pub(crate) fn contains_unchecked(&self, coords: &[u32]) -> bool {
        coords.iter().all(|&c| c == 0) || self.formula(coords)
    }

    fn formula(&self, coords: &[u32]) -> bool {
        match self {
            CriticalSet::MinZero => coords.contains(&0),
            CriticalSet::L1Ball(c) => coords.iter().map(|&x| u64::from(x)).sum::<u64>() <= u64::from(*c),
            CriticalSet::LInfBall(c) => coords.iter().all(|x| x <= c),
            CriticalSet::WeightedL1 { weights, threshold } => {
                let dot: f64 = weights.iter().zip(coords).map(|(w, &x)| w * f64::from(x)).sum();
                dot <= *threshold
            }
            CriticalSet::Union(sets) => sets.iter().any(|s| s.formula(coords)),
        }
    }
}

pub fn is_critical(h: &HealthState, cs: &CriticalSet) -> Result<bool> {
    cs.contains(h.coords())
}
