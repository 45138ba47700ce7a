#![allow(dead_code)]

use healthmon_core::model::{CriticalSet, Model, ModelConfig, ModelParams};
use proptest::prelude::*;

/// Random valid configuration with `n` in `1..=3` and a small lattice.
pub fn config() -> impl Strategy<Value = ModelConfig> {
    (1usize..=3)
        .prop_flat_map(|n| {
            let max_h = if n == 3 { 3u32 } else { 5 };
            (
                Just(n),
                1..=max_h,
                prop::collection::vec(0.01f64..1.0, 2 * n),
                prop::collection::vec(0.0f64..=1.0, n),
                (0.0f64..2.0, 0.0f64..3.0, 0.0f64..50.0),
                0.05f64..0.95,
            )
        })
        .prop_map(|(n, max_level, raw, shift, (c_o, d_i, d_c), gamma)| {
            let total: f64 = raw.iter().sum();
            let lambda_o: Vec<f64> = raw[..n].iter().map(|w| w / total).collect();
            let mu_o: Vec<f64> = raw[n..].iter().map(|w| w / total).collect();
            // move part of each decline into improvement for the intensive mode
            let lambda_i = lambda_o
                .iter()
                .zip(&mu_o)
                .zip(&shift)
                .map(|((l, m), f)| l + f * m)
                .collect();
            let mu_i = mu_o.iter().zip(&shift).map(|(m, f)| (1.0 - f) * m).collect();
            ModelConfig::new(ModelParams {
                dim: n,
                max_level,
                lambda_o,
                lambda_i,
                mu_o,
                mu_i,
                cost_o: c_o,
                cost_i: c_o + d_i,
                cost_c: c_o + d_i + d_c,
                gamma,
            })
            .expect("generated config is valid")
        })
}

pub fn critical_set(n: usize) -> impl Strategy<Value = CriticalSet> {
    let leaf = prop_oneof![
        Just(CriticalSet::MinZero),
        (0u32..4).prop_map(CriticalSet::L1Ball),
        (0u32..3).prop_map(CriticalSet::LInfBall),
        (prop::collection::vec(0.5f64..4.0, n), -1.0f64..8.0)
            .prop_map(|(weights, threshold)| CriticalSet::WeightedL1 { weights, threshold }),
    ];
    leaf.prop_recursive(2, 4, 3, |inner| {
        prop::collection::vec(inner, 0..3).prop_map(CriticalSet::Union)
    })
}

pub fn model() -> impl Strategy<Value = Model> {
    config().prop_flat_map(|cfg| {
        let n = cfg.dim();
        (Just(cfg), critical_set(n)).prop_map(|(cfg, cs)| Model::new(cfg, cs).unwrap())
    })
}
