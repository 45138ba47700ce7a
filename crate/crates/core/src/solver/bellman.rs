use alloc::vec::Vec;

use super::{check_tolerance, sup_distance, Policy, Solution, SolveReport, ValueFunction, TIE_TOLERANCE};
use crate::error::{Error, Result};
use crate::model::{Model, MonitoringMode};

/// Minimizing action and its Bellman value at a non-critical state.
pub(crate) fn best_action(model: &Model, index: usize, values: &[f64]) -> (f64, MonitoringMode) {
    let q_o = model.q_value(MonitoringMode::Ordinary, index, values);
    let q_i = model.q_value(MonitoringMode::Intensive, index, values);
    if q_i < q_o - TIE_TOLERANCE {
        (q_i, MonitoringMode::Intensive)
    } else {
        (q_o.min(q_i), MonitoringMode::Ordinary)
    }
}

fn sweep(model: &Model, values: &[f64], out: &mut [f64], mut record: impl FnMut(usize, MonitoringMode)) {
    let cost_c = model.config().cost_c();
    for (index, slot) in out.iter_mut().enumerate() {
        if model.is_critical(index) {
            *slot = cost_c;
        } else {
            let (v, a) = best_action(model, index, values);
            *slot = v;
            record(index, a);
        }
    }
}

/// One synchronous Bellman sweep. Critical states are reset to `cost_c`.
///
/// # Panics
/// If `v` is not defined on the model's lattice.
pub fn bellman_update(v: &ValueFunction, model: &Model) -> (ValueFunction, Policy) {
    assert_eq!(v.len(), model.num_states(), "value function on a different lattice");
    let mut out = alloc::vec![0.0; v.len()];
    let mut actions = alloc::vec![None; v.len()];
    sweep(model, v.values(), &mut out, |i, a| actions[i] = Some(a));
    (ValueFunction::new(out), Policy::from_actions_unchecked(actions))
}

/// Greedy policy with respect to `v`, ties going to ordinary.
pub fn greedy_policy(v: &ValueFunction, model: &Model) -> Policy {
    bellman_update(v, model).1
}

/// Stepwise Jacobi value iteration from `v = cost_c`.
///
/// Exposed so callers can observe per-sweep residuals.
#[derive(Debug, Clone)]
pub struct ValueIteration<'a> {
    model: &'a Model,
    values: Vec<f64>,
    scratch: Vec<f64>,
    iterations: usize,
}

impl<'a> ValueIteration<'a> {
    pub fn new(model: &'a Model) -> Self {
        let values = ValueFunction::ceiling(model).into_values();
        let scratch = values.clone();
        ValueIteration {
            model,
            values,
            scratch,
            iterations: 0,
        }
    }

    /// Applies one sweep and returns its sup-norm residual.
    pub fn step(&mut self) -> f64 {
        sweep(self.model, &self.values, &mut self.scratch, |_, _| {});
        core::mem::swap(&mut self.values, &mut self.scratch);
        self.iterations += 1;
        sup_distance(&self.values, &self.scratch)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn into_values(self) -> ValueFunction {
        ValueFunction::new(self.values)
    }
}

/// Iterates the Bellman operator from `v = cost_c` until the sup-norm
/// change drops to `tol` or `max_iter` sweeps have run.
///
/// Running out of iterations is not an error: the report says
/// `converged = false`. The policy is extracted greedily from the final
/// values.
pub fn value_iteration(model: &Model, tol: f64, max_iter: usize) -> Result<Solution> {
    check_tolerance(tol)?;
    if max_iter == 0 {
        return Err(Error::InvalidParameter("max_iter must be at least 1".into()));
    }
    let mut vi = ValueIteration::new(model);
    let mut residual = f64::INFINITY;
    while vi.iterations() < max_iter {
        residual = vi.step();
        if residual <= tol {
            break;
        }
    }
    let report = SolveReport {
        iterations: vi.iterations(),
        final_residual: residual,
        converged: residual <= tol,
    };
    let values = vi.into_values();
    let policy = greedy_policy(&values, model);
    Ok(Solution { values, policy, report })
}
