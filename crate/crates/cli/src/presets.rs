//! Built-in scenarios.

use healthmon_core::{CriticalSet, ModelConfig, ModelParams};

/// Reference result attached to a scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Expected {
    /// Intensive iff `weights . h <= threshold` on non-critical states.
    pub linear_fit: Option<(Vec<u32>, i64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: &'static str,
    pub config: ModelConfig,
    pub critical_set: CriticalSet,
    pub expected: Option<Expected>,
}

pub const NAMES: [&str; 6] = ["fig2a", "fig2b", "fig2c", "fig2d", "fig3a", "fig3b"];

const GAMMA: f64 = 0.9;
const COST_O: f64 = 0.0;
const COST_I: f64 = 1.0;
const COST_C: f64 = 35.0;

fn two_dim(max_level: u32, lambda_o: f64, lambda_i: [f64; 2]) -> ModelConfig {
    ModelConfig::new(ModelParams {
        dim: 2,
        max_level,
        lambda_o: vec![lambda_o; 2],
        lambda_i: lambda_i.to_vec(),
        mu_o: vec![0.5 - lambda_o; 2],
        mu_i: vec![0.5 - lambda_i[0], 0.5 - lambda_i[1]],
        cost_o: COST_O,
        cost_i: COST_I,
        cost_c: COST_C,
        gamma: GAMMA,
    })
    .expect("preset parameters are valid")
}

fn grid(critical_set: CriticalSet) -> (ModelConfig, CriticalSet) {
    (two_dim(6, 0.075, [0.2, 0.2]), critical_set)
}

pub fn preset(name: &str) -> Option<Scenario> {
    let (config, critical_set, expected) = match name {
        "fig2a" => {
            let (c, s) = grid(CriticalSet::MinZero);
            (c, s, None)
        }
        "fig2b" => {
            let (c, s) = grid(CriticalSet::L1Ball(2));
            let fit = Some((vec![1, 1], 5));
            (c, s, Some(Expected { linear_fit: fit }))
        }
        "fig2c" => {
            let (c, s) = grid(CriticalSet::LInfBall(2));
            (c, s, None)
        }
        "fig2d" => {
            let (c, s) = grid(CriticalSet::Union(vec![CriticalSet::MinZero, CriticalSet::L1Ball(2)]));
            (c, s, None)
        }
        "fig3a" => (two_dim(6, 0.1, [0.3, 0.25]), CriticalSet::MinZero, None),
        "fig3b" => (
            two_dim(10, 0.1, [0.2, 0.2]),
            CriticalSet::WeightedL1 {
                weights: vec![2.0, 3.0],
                threshold: 6.0,
            },
            Some(Expected {
                linear_fit: Some((vec![4, 5], 25)),
            }),
        ),
        _ => return None,
    };
    let name = NAMES.iter().copied().find(|n| *n == name)?;
    Some(Scenario {
        name,
        config,
        critical_set,
        expected,
    })
}

pub fn all() -> Vec<Scenario> {
    NAMES.iter().map(|n| preset(n).unwrap()).collect()
}
