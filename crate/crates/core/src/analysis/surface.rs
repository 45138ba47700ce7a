use alloc::vec;
use alloc::vec::Vec;

use crate::model::{HealthState, Model, MonitoringMode};
use crate::solver::Policy;

/// Largest integer weight tried per dimension by [`fit_linear_switching`].
pub const MAX_FIT_WEIGHT: u32 = 12;
/// Bound on the number of weight vectors enumerated; for high dimensions the
/// per-dimension range shrinks to stay under it.
const MAX_WEIGHT_VECTORS: u64 = 1 << 22;

/// Half-space classifier: intensive iff `weights . h <= threshold`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearFit {
    pub weights: Vec<u32>,
    pub threshold: i64,
    /// Reproduces the intensive set on every non-critical state.
    pub exact: bool,
    /// Non-critical states the half-space classifies wrongly.
    pub misclassified: usize,
}

impl LinearFit {
    pub fn score(&self, coords: &[u32]) -> i64 {
        dot(&self.weights, coords)
    }

    pub fn predicts_intensive(&self, coords: &[u32]) -> bool {
        self.score(coords) <= self.threshold
    }
}

fn dot(weights: &[u32], coords: &[u32]) -> i64 {
    weights
        .iter()
        .zip(coords)
        .map(|(&w, &c)| i64::from(w) * i64::from(c))
        .sum()
}

/// Boundary between the intensive and ordinary regions of a policy.
#[derive(Debug, Clone, PartialEq)]
pub struct SwitchingSurface {
    /// Non-critical states assigned intensive monitoring, in lattice order.
    pub intensive_set: Vec<HealthState>,
    /// Intensive states with an ordinary neighbour one step up some axis.
    pub frontier: Vec<HealthState>,
    pub linear_fit: Option<LinearFit>,
    pub fit_exact: bool,
}

pub fn extract_surface(pi: &Policy, model: &Model) -> SwitchingSurface {
    let lattice = model.lattice();
    let max_level = lattice.max_level();
    let mut coords = vec![0u32; lattice.dim()];
    let mut intensive_set = Vec::new();
    let mut frontier = Vec::new();
    for index in pi.indices_with(MonitoringMode::Intensive) {
        lattice.coords_into(index, &mut coords);
        let on_frontier = (0..lattice.dim()).any(|axis| {
            coords[axis] < max_level && pi.action(index + lattice.stride(axis)) == Some(MonitoringMode::Ordinary)
        });
        let state = HealthState::new(coords.clone());
        if on_frontier {
            frontier.push(state.clone());
        }
        intensive_set.push(state);
    }

    let linear_fit = if intensive_set.is_empty() {
        Some(LinearFit {
            weights: vec![1; lattice.dim()],
            threshold: -1,
            exact: true,
            misclassified: 0,
        })
    } else {
        fit_linear_switching(&intensive_set, model)
    };
    let fit_exact = linear_fit.as_ref().is_some_and(|f| f.exact);
    SwitchingSurface {
        intensive_set,
        frontier,
        linear_fit,
        fit_exact,
    }
}

/// True iff the intensive region is downward-closed among non-critical
/// states.
///
/// Checking the immediate lower neighbour along each axis is enough because
/// critical sets are downward-closed: the box between a non-critical `h'`
/// and any `h >= h'` contains no critical state.
pub fn is_monotone_threshold(pi: &Policy, model: &Model) -> bool {
    let lattice = model.lattice();
    let mut coords = vec![0u32; lattice.dim()];
    pi.indices_with(MonitoringMode::Intensive).all(|index| {
        lattice.coords_into(index, &mut coords);
        (0..lattice.dim()).all(|axis| {
            if coords[axis] == 0 {
                return true;
            }
            let lower = index - lattice.stride(axis);
            model.is_critical(lower) || pi.action(lower) == Some(MonitoringMode::Intensive)
        })
    })
}

/// Searches integer weight vectors (components `1..=MAX_FIT_WEIGHT`, gcd 1,
/// lexicographic order) for a half-space `w . h <= k` that reproduces the
/// intensive set on every non-critical state, with `k` the largest score of
/// an intensive state. Returns the first exact fit, otherwise the fit with
/// the fewest misclassified states. `None` for an empty set.
///
/// States in `intensive` that are critical or off the lattice are ignored.
pub fn fit_linear_switching(intensive: &[HealthState], model: &Model) -> Option<LinearFit> {
    let lattice = model.lattice();
    let mut is_intensive = vec![false; lattice.len()];
    for h in intensive {
        if let Some(i) = lattice.index_of(h.coords()) {
            if !model.is_critical(i) {
                is_intensive[i] = true;
            }
        }
    }
    let mut points: Vec<(Vec<u32>, bool)> = model
        .noncritical_indices()
        .map(|i| (lattice.state(i).coords().to_vec(), is_intensive[i]))
        .collect();
    if !points.iter().any(|(_, yes)| *yes) {
        return None;
    }
    // intensive points first so the threshold is known before scanning
    points.sort_by_key(|(_, yes)| !*yes);
    let split = points.iter().position(|(_, yes)| !*yes).unwrap_or(points.len());

    let dim = lattice.dim();
    let max_weight = weight_range(dim);
    let mut weights = vec![1u32; dim];
    let mut best: Option<LinearFit> = None;
    loop {
        if gcd_all(&weights) == 1 {
            let threshold = points[..split]
                .iter()
                .map(|(c, _)| dot(&weights, c))
                .max()
                .unwrap_or(-1);
            let misclassified = points[split..]
                .iter()
                .filter(|(c, _)| dot(&weights, c) <= threshold)
                .count();
            if best.as_ref().is_none_or(|b| misclassified < b.misclassified) {
                best = Some(LinearFit {
                    weights: weights.clone(),
                    threshold,
                    exact: misclassified == 0,
                    misclassified,
                });
                if misclassified == 0 {
                    break;
                }
            }
        }
        if !advance(&mut weights, max_weight) {
            break;
        }
    }
    best
}

fn weight_range(dim: usize) -> u32 {
    let mut w = MAX_FIT_WEIGHT;
    while w > 1
        && u64::from(w)
            .checked_pow(dim as u32)
            .is_none_or(|n| n > MAX_WEIGHT_VECTORS)
    {
        w -= 1;
    }
    w
}

/// Odometer increment with the last component varying fastest.
fn advance(weights: &mut [u32], max_weight: u32) -> bool {
    for w in weights.iter_mut().rev() {
        if *w < max_weight {
            *w += 1;
            return true;
        }
        *w = 1;
    }
    false
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn gcd_all(values: &[u32]) -> u32 {
    values.iter().fold(0, |g, &v| gcd(g, v))
}
