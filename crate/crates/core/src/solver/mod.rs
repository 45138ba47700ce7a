//! Discounted dynamic program over the health lattice.
//!
//! Transitions and costs depend only on the chosen action, so the value of
//! `(ordinary, h)` and `(intensive, h)` coincide and everything here works on
//! health states alone. [`product_space_solve`] rebuilds the two-copy chain
//! explicitly to check that collapse.

mod bellman;
mod evaluation;
mod oracle;
mod product;

use alloc::format;
use alloc::vec::Vec;

pub use bellman::{bellman_update, greedy_policy, value_iteration, ValueIteration};
pub use evaluation::policy_evaluation;
pub use oracle::{oracle_solve, ORACLE_MAX_STATES};
pub use product::{product_space_solve, ProductSpaceSolution};

use crate::error::{Error, Result};
use crate::model::{HealthState, Model, MonitoringMode};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_MAX_ITER: usize = 100_000;
/// Bellman branches closer than this are a tie, resolved to ordinary.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Discounted cost per lattice state, in canonical lattice order.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueFunction {
    values: Vec<f64>,
}

impl ValueFunction {
    pub fn new(values: Vec<f64>) -> Self {
        ValueFunction { values }
    }

    /// The starting point `v = cost_c` everywhere.
    pub fn ceiling(model: &Model) -> Self {
        ValueFunction {
            values: alloc::vec![model.config().cost_c(); model.num_states()],
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, index: usize) -> f64 {
        self.values[index]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sup-norm distance; lengths must match.
    pub fn sup_distance(&self, other: &ValueFunction) -> f64 {
        assert_eq!(
            self.values.len(),
            other.values.len(),
            "value functions on different lattices"
        );
        sup_distance(&self.values, &other.values)
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

pub(crate) fn sup_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |acc, (x, y)| acc.max((x - y).abs()))
}

/// A stationary policy: an action for every non-critical state, `None` on
/// critical ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Policy {
    actions: Vec<Option<MonitoringMode>>,
}

impl Policy {
    /// Checks that actions are given exactly on the non-critical states.
    pub fn new(model: &Model, actions: Vec<Option<MonitoringMode>>) -> Result<Self> {
        if actions.len() != model.num_states() {
            return Err(Error::DimensionMismatch {
                what: "policy",
                expected: model.num_states(),
                found: actions.len(),
            });
        }
        for (index, action) in actions.iter().enumerate() {
            if model.is_critical(index) == action.is_some() {
                let state = model.lattice().state(index);
                return Err(Error::InvalidParameter(if action.is_some() {
                    format!("policy assigns an action to critical state {state}")
                } else {
                    format!("policy has no action for non-critical state {state}")
                }));
            }
        }
        Ok(Policy { actions })
    }

    pub fn uniform(model: &Model, mode: MonitoringMode) -> Self {
        Self::from_fn(model, |_| mode)
    }

    pub fn from_fn(model: &Model, mut f: impl FnMut(&HealthState) -> MonitoringMode) -> Self {
        let lattice = model.lattice();
        let actions = (0..model.num_states())
            .map(|i| (!model.is_critical(i)).then(|| f(&lattice.state(i))))
            .collect();
        Policy { actions }
    }

    pub(crate) fn from_actions_unchecked(actions: Vec<Option<MonitoringMode>>) -> Self {
        Policy { actions }
    }

    pub fn action(&self, index: usize) -> Option<MonitoringMode> {
        self.actions[index]
    }

    pub fn actions(&self) -> &[Option<MonitoringMode>] {
        &self.actions
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    pub fn count(&self, mode: MonitoringMode) -> usize {
        self.actions.iter().filter(|a| **a == Some(mode)).count()
    }

    pub fn indices_with(&self, mode: MonitoringMode) -> impl Iterator<Item = usize> + '_ {
        self.actions
            .iter()
            .enumerate()
            .filter(move |(_, a)| **a == Some(mode))
            .map(|(i, _)| i)
    }

    pub(crate) fn matches_model(&self, model: &Model) -> Result<()> {
        Policy::new(model, self.actions.clone()).map(|_| ())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveReport {
    pub iterations: usize,
    /// Sup-norm of the last change between successive iterates.
    pub final_residual: f64,
    pub converged: bool,
}

/// Output of [`value_iteration`].
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub values: ValueFunction,
    pub policy: Policy,
    pub report: SolveReport,
}

pub(crate) fn check_tolerance(tol: f64) -> Result<()> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("tolerance {tol} must be positive")))
    }
}
