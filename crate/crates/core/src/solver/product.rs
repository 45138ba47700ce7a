use alloc::vec::Vec;

use super::{check_tolerance, sup_distance, SolveReport, ValueFunction};
use crate::error::{Error, Result};
use crate::model::{transition, Model, MonitoringMode};

/// Values of the explicit `(monitoring state, health state)` chain.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductSpaceSolution {
    pub ordinary: ValueFunction,
    pub intensive: ValueFunction,
    pub report: SolveReport,
}

impl ProductSpaceSolution {
    /// `max_h |V(o,h) - V(i,h)|`.
    pub fn max_mode_gap(&self) -> f64 {
        self.ordinary.sup_distance(&self.intensive)
    }

    /// Largest deviation of either copy from a health-only value function.
    pub fn max_gap_to(&self, collapsed: &ValueFunction) -> f64 {
        self.ordinary
            .sup_distance(collapsed)
            .max(self.intensive.sup_distance(collapsed))
    }
}

struct Row {
    cost: f64,
    targets: Vec<usize>,
    probs: Vec<f64>,
}

/// Solves the discounted program on the full state space `{o,i} x H`,
/// where action `a` from `(m, h)` pays `cost(a)` and moves to `(a, h')`.
///
/// Transition rows are built from [`transition`] directly rather than
/// from the model's cached kernels.
pub fn product_space_solve(model: &Model, tol: f64, max_iter: usize) -> Result<ProductSpaceSolution> {
    check_tolerance(tol)?;
    if max_iter == 0 {
        return Err(Error::InvalidParameter("max_iter must be at least 1".into()));
    }
    let n = model.num_states();
    let cfg = model.config();
    let lattice = model.lattice();
    let slot = |m: MonitoringMode, h: usize| match m {
        MonitoringMode::Ordinary => h,
        MonitoringMode::Intensive => n + h,
    };

    // rows[s] holds one row per action, or nothing for critical states
    let mut rows: Vec<Vec<Row>> = Vec::with_capacity(2 * n);
    for _monitoring in MonitoringMode::ALL {
        for h in 0..n {
            if model.is_critical(h) {
                rows.push(Vec::new());
                continue;
            }
            let state = lattice.state(h);
            let mut per_action = Vec::with_capacity(2);
            for action in MonitoringMode::ALL {
                let dist = transition(&state, action, cfg, model.critical_set())?;
                let (targets, probs) = dist
                    .entries()
                    .iter()
                    .map(|(s, p)| {
                        let h2 = lattice.index_of(s.coords()).expect("successor lies on the lattice");
                        (slot(action, h2), *p)
                    })
                    .unzip();
                per_action.push(Row {
                    cost: cfg.cost(action),
                    targets,
                    probs,
                });
            }
            rows.push(per_action);
        }
    }

    let gamma = cfg.gamma();
    let mut values = alloc::vec![cfg.cost_c(); 2 * n];
    let mut next = values.clone();
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    while iterations < max_iter {
        for (s, slot_value) in next.iter_mut().enumerate() {
            if rows[s].is_empty() {
                continue;
            }
            *slot_value = rows[s]
                .iter()
                .map(|r| {
                    let ev: f64 = r.targets.iter().zip(&r.probs).map(|(&t, &p)| p * values[t]).sum();
                    r.cost + gamma * ev
                })
                .fold(f64::INFINITY, f64::min);
        }
        core::mem::swap(&mut values, &mut next);
        iterations += 1;
        residual = sup_distance(&values, &next);
        if residual <= tol {
            break;
        }
    }
    let intensive = values.split_off(n);
    Ok(ProductSpaceSolution {
        ordinary: ValueFunction::new(values),
        intensive: ValueFunction::new(intensive),
        report: SolveReport {
            iterations,
            final_residual: residual,
            converged: residual <= tol,
        },
    })
}
