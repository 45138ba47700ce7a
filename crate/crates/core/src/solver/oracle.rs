use alloc::vec::Vec;

use super::evaluation::evaluate_unchecked;
use super::{Policy, ValueFunction};
use crate::error::{Error, Result};
use crate::model::{Model, MonitoringMode};

/// Largest number of non-critical states [`oracle_solve`] will enumerate
/// over (`2^20` policies).
pub const ORACLE_MAX_STATES: usize = 20;

const EVAL_TOLERANCE: f64 = 1e-12;
const SUM_TIE: f64 = 1e-9;

/// Brute-force optimum: evaluates every deterministic stationary policy and
/// keeps the best one.
///
/// An optimal policy's value is pointwise minimal, so it also has the
/// smallest summed value; among policies tied on that sum the one with the
/// fewest intensive states wins.
pub fn oracle_solve(model: &Model) -> Result<(ValueFunction, Policy)> {
    let free: Vec<usize> = model.noncritical_indices().collect();
    if free.len() > ORACLE_MAX_STATES {
        return Err(Error::Capacity {
            what: "policy enumeration over non-critical states",
            required: free.len() as u128,
            cap: ORACLE_MAX_STATES as u128,
        });
    }

    let mut actions: Vec<Option<MonitoringMode>> = alloc::vec![None; model.num_states()];
    let mut best: Option<(f64, u32, ValueFunction, Policy)> = None;
    for mask in 0u32..(1u32 << free.len()) {
        for (bit, &index) in free.iter().enumerate() {
            actions[index] = Some(if mask >> bit & 1 == 1 {
                MonitoringMode::Intensive
            } else {
                MonitoringMode::Ordinary
            });
        }
        let policy = Policy::from_actions_unchecked(actions.clone());
        let values = evaluate_unchecked(&policy, model, EVAL_TOLERANCE);
        let total: f64 = values.values().iter().sum();
        let intensive = mask.count_ones();
        let better = match &best {
            None => true,
            Some((best_total, best_intensive, _, _)) => {
                total < best_total - SUM_TIE || (total <= best_total + SUM_TIE && intensive < *best_intensive)
            }
        };
        if better {
            best = Some((total, intensive, values, policy));
        }
    }
    let (_, _, values, policy) = best.expect("at least one policy is enumerated");
    Ok((values, policy))
}
