use super::{check_tolerance, sup_distance, Policy, ValueFunction};
use crate::error::Result;
use crate::model::Model;

const MAX_SWEEPS: usize = 10_000_000;

/// Value of a fixed stationary policy: the fixed point of its affine
/// Bellman operator, iterated from `cost_c` until the sup-norm change is at
/// most `tol`.
pub fn policy_evaluation(pi: &Policy, model: &Model, tol: f64) -> Result<ValueFunction> {
    check_tolerance(tol)?;
    pi.matches_model(model)?;
    Ok(evaluate_unchecked(pi, model, tol))
}

pub(crate) fn evaluate_unchecked(pi: &Policy, model: &Model, tol: f64) -> ValueFunction {
    let mut values = ValueFunction::ceiling(model).into_values();
    let mut next = values.clone();
    for _ in 0..MAX_SWEEPS {
        for (index, slot) in next.iter_mut().enumerate() {
            if let Some(mode) = pi.action(index) {
                *slot = model.q_value(mode, index, &values);
            }
        }
        core::mem::swap(&mut values, &mut next);
        if sup_distance(&values, &next) <= tol {
            break;
        }
    }
    ValueFunction::new(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CriticalSet, ModelConfig, ModelParams, MonitoringMode};
    use alloc::vec;

    #[test]
    fn two_state_closed_form() {
        // V(1) = C_o + g (l V(1) + m C_c)  =>  V(1) = (C_o + g m C_c) / (1 - g l)
        let cfg = ModelConfig::new(ModelParams {
            dim: 1,
            max_level: 1,
            lambda_o: vec![0.3],
            lambda_i: vec![0.6],
            mu_o: vec![0.7],
            mu_i: vec![0.4],
            cost_o: 0.0,
            cost_i: 1.0,
            cost_c: 35.0,
            gamma: 0.9,
        })
        .unwrap();
        let model = Model::new(cfg, CriticalSet::origin_only()).unwrap();
        let pi = Policy::uniform(&model, MonitoringMode::Ordinary);
        let v = policy_evaluation(&pi, &model, 1e-14).unwrap();
        let expected = (0.0 + 0.9 * 0.7 * 35.0) / (1.0 - 0.9 * 0.3);
        assert!((v.get(1) - expected).abs() < 1e-12);
        assert!((v.get(1) - 30.2055).abs() < 1e-4);
    }

    #[test]
    fn rejects_mismatched_policy() {
        let cfg = ModelConfig::new(ModelParams {
            dim: 1,
            max_level: 2,
            lambda_o: vec![0.3],
            lambda_i: vec![0.6],
            mu_o: vec![0.7],
            mu_i: vec![0.4],
            cost_o: 0.0,
            cost_i: 1.0,
            cost_c: 35.0,
            gamma: 0.9,
        })
        .unwrap();
        let model = Model::new(cfg, CriticalSet::origin_only()).unwrap();
        let bad = Policy::from_actions_unchecked(vec![None, Some(MonitoringMode::Ordinary), None]);
        assert!(policy_evaluation(&bad, &model, 1e-9).is_err());
        let short = Policy::from_actions_unchecked(vec![None]);
        assert!(policy_evaluation(&short, &model, 1e-9).is_err());
    }
}
