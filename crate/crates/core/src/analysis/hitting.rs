use alloc::vec::Vec;

use super::stats::spearman;
use crate::error::{Error, Result};
use crate::model::{Model, MonitoringMode};
use crate::solver::ValueFunction;

const MAX_SWEEPS: usize = 10_000_000;

/// `u(h) = E[gamma^tau]` for the first entry time `tau` into the critical
/// set, with the chain run under one fixed monitoring mode.
#[derive(Debug, Clone, PartialEq)]
pub struct HittingFunctional {
    pub mode: MonitoringMode,
    values: Vec<f64>,
    pub iterations: usize,
    /// Last sup-norm change of the fixed-point iteration.
    pub final_change: f64,
}

impl HittingFunctional {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, index: usize) -> f64 {
        self.values[index]
    }

    /// `max_h |u(h) - gamma * sum_h' P(h'|h) u(h')|` over non-critical states.
    pub fn fixed_point_residual(&self, model: &Model) -> f64 {
        let gamma = model.config().gamma();
        let kernel = model.kernel(self.mode);
        model
            .noncritical_indices()
            .map(|i| (self.values[i] - gamma * kernel.expectation(i, &self.values)).abs())
            .fold(0.0, f64::max)
    }
}

/// Solves `u = gamma P_mode u` with `u = 1` on critical states, iterating
/// from `u = 1` until successive iterates differ by at most `tol`.
pub fn hitting_functional(model: &Model, mode: MonitoringMode, tol: f64) -> Result<HittingFunctional> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidParameter(alloc::format!(
            "tolerance {tol} must be positive"
        )));
    }
    let gamma = model.config().gamma();
    let kernel = model.kernel(mode);
    let mut values = alloc::vec![1.0; model.num_states()];
    let mut next = values.clone();
    let mut change = f64::INFINITY;
    let mut iterations = 0;
    while iterations < MAX_SWEEPS && change > tol {
        change = 0.0;
        for (index, slot) in next.iter_mut().enumerate() {
            if !model.is_critical(index) {
                *slot = gamma * kernel.expectation(index, &values);
                change = change.max((*slot - values[index]).abs());
            }
        }
        core::mem::swap(&mut values, &mut next);
        iterations += 1;
    }
    Ok(HittingFunctional {
        mode,
        values,
        iterations,
        final_change: change,
    })
}

/// `Q_o(h) - Q_i(h)` at each non-critical state: how much cheaper intensive
/// monitoring is. Its zero level set is the switching surface.
pub fn switching_advantage(values: &ValueFunction, model: &Model) -> Vec<Option<f64>> {
    (0..model.num_states())
        .map(|i| {
            (!model.is_critical(i)).then(|| {
                model.q_value(MonitoringMode::Ordinary, i, values.values())
                    - model.q_value(MonitoringMode::Intensive, i, values.values())
            })
        })
        .collect()
}

/// Spearman correlation, over non-critical states, between the hitting
/// functional and the intensive advantage of a solved value function.
///
/// A value near 1 means states closer to absorption (in discounted time) are
/// exactly those where intensive monitoring pays off most.
pub fn hitting_surface_correlation(hit: &HittingFunctional, values: &ValueFunction, model: &Model) -> Option<f64> {
    let advantage = switching_advantage(values, model);
    let (u, adv): (Vec<f64>, Vec<f64>) = advantage
        .iter()
        .enumerate()
        .filter_map(|(i, a)| a.map(|a| (hit.get(i), a)))
        .unzip();
    spearman(&u, &adv)
}
