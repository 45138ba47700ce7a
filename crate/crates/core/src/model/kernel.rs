use alloc::format;
use alloc::vec::Vec;

use super::{CriticalSet, HealthState, ModelConfig, MonitoringMode};
use crate::error::{Error, Result};

/// Elementary move of the health process from a given state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Step {
    Up(usize),
    /// Increment blocked by the upper boundary.
    Stay,
    Down(usize),
}

/// Pushes the one-step moves out of `coords` with their probabilities.
///
/// Increments along axis `k` happen with `lambda[k]` and turn into a
/// self-loop at level `max_level`. Decrements happen with `mu[k]` when
/// `coords[k] > 0`; the decline mass of axes sitting at 0 is shared among
/// the axes above 0 in proportion to their `mu` (evenly when those are all
/// zero). With two axes this sends all blocked mass to the other axis.
/// Zero-probability moves are omitted and self-loops are merged.
pub(crate) fn elementary_moves(coords: &[u32], lambda: &[f64], mu: &[f64], max_level: u32, out: &mut Vec<(Step, f64)>) {
    out.clear();
    let mut stay_slot: Option<usize> = None;
    for (axis, (&c, &p)) in coords.iter().zip(lambda).enumerate() {
        if p == 0.0 {
            continue;
        }
        if c >= max_level {
            match stay_slot {
                Some(slot) => out[slot].1 += p,
                None => {
                    stay_slot = Some(out.len());
                    out.push((Step::Stay, p));
                }
            }
        } else {
            out.push((Step::Up(axis), p));
        }
    }

    let mut blocked = 0.0;
    let mut receiver_mass = 0.0;
    let mut receivers = 0usize;
    for (&c, &m) in coords.iter().zip(mu) {
        if c == 0 {
            blocked += m;
        } else {
            receiver_mass += m;
            receivers += 1;
        }
    }
    debug_assert!(receivers > 0, "the origin is always critical");
    for (axis, (&c, &m)) in coords.iter().zip(mu).enumerate() {
        if c == 0 {
            continue;
        }
        let share = if receiver_mass > 0.0 {
            m / receiver_mass
        } else {
            1.0 / receivers as f64
        };
        let p = m + blocked * share;
        if p > 0.0 {
            out.push((Step::Down(axis), p));
        }
    }
}

pub(crate) fn apply_step(coords: &[u32], step: Step, out: &mut Vec<u32>) {
    out.clear();
    out.extend_from_slice(coords);
    match step {
        Step::Up(axis) => out[axis] += 1,
        Step::Stay => {}
        Step::Down(axis) => out[axis] -= 1,
    }
}

/// Next-state distribution for one (state, action) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionDistribution {
    entries: Vec<(HealthState, f64)>,
}

impl TransitionDistribution {
    pub fn entries(&self) -> &[(HealthState, f64)] {
        &self.entries
    }

    pub fn total_mass(&self) -> f64 {
        self.entries.iter().map(|(_, p)| p).sum()
    }

    /// Probability of moving to `target` (0 if absent).
    pub fn probability_of(&self, target: &HealthState) -> f64 {
        self.entries.iter().find(|(s, _)| s == target).map_or(0.0, |(_, p)| *p)
    }
}

/// One-step transition law out of the non-critical state `h` under `action`.
///
/// Only the action matters: the monitoring state the patient is currently in
/// does not enter the law.
pub fn transition(
    h: &HealthState,
    action: MonitoringMode,
    cfg: &ModelConfig,
    cs: &CriticalSet,
) -> Result<TransitionDistribution> {
    if h.dim() != cfg.dim() {
        return Err(Error::DimensionMismatch {
            what: "health state",
            expected: cfg.dim(),
            found: h.dim(),
        });
    }
    if let Some(c) = h.coords().iter().find(|&&c| c > cfg.max_level()) {
        return Err(Error::InvalidParameter(format!(
            "coordinate {c} of {h} exceeds H = {}",
            cfg.max_level()
        )));
    }
    if cs.contains(h.coords())? {
        return Err(Error::CriticalState(h.clone()));
    }
    let mut moves = Vec::with_capacity(2 * cfg.dim());
    elementary_moves(
        h.coords(),
        cfg.improvement(action),
        cfg.decline(action),
        cfg.max_level(),
        &mut moves,
    );
    let mut buf = Vec::with_capacity(cfg.dim());
    let entries = moves
        .iter()
        .map(|&(step, p)| {
            apply_step(h.coords(), step, &mut buf);
            (HealthState::new(buf.clone()), p)
        })
        .collect();
    Ok(TransitionDistribution { entries })
}
