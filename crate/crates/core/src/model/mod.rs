//! State space, critical sets, costs and the transition kernel.

mod config;
mod critical;
pub mod kernel;
mod state;

use alloc::vec;
use alloc::vec::Vec;

pub use config::{ModelConfig, ModelParams, MonitoringMode, PROBABILITY_TOLERANCE};
pub use critical::{is_critical, CriticalSet};
pub use kernel::{transition, TransitionDistribution};
pub use state::{enumerate_states, enumerate_states_with_cap, HealthState, Lattice, DEFAULT_STATE_CAP};

use crate::error::Result;
use kernel::{elementary_moves, Step};

/// Transition rows in compressed sparse row layout, indexed by lattice
/// position. Critical states have empty rows.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseKernel {
    offsets: Vec<usize>,
    targets: Vec<usize>,
    probs: Vec<f64>,
}

impl SparseKernel {
    pub fn row(&self, index: usize) -> (&[usize], &[f64]) {
        let (lo, hi) = (self.offsets[index], self.offsets[index + 1]);
        (&self.targets[lo..hi], &self.probs[lo..hi])
    }

    /// `sum_j P(index -> j) * values[j]`, accumulated in row order.
    pub fn expectation(&self, index: usize, values: &[f64]) -> f64 {
        let (targets, probs) = self.row(index);
        targets.iter().zip(probs).map(|(&t, &p)| p * values[t]).sum()
    }
}

/// A validated configuration and critical set together with the lattice,
/// the critical mask and both action kernels.
///
/// Immutable once built; solvers and analyses borrow it.
#[derive(Debug, Clone)]
pub struct Model {
    config: ModelConfig,
    critical_set: CriticalSet,
    lattice: Lattice,
    critical: Vec<bool>,
    kernels: [SparseKernel; 2],
}

impl Model {
    pub fn new(config: ModelConfig, critical_set: CriticalSet) -> Result<Self> {
        Self::with_state_cap(config, critical_set, DEFAULT_STATE_CAP)
    }

    pub fn with_state_cap(config: ModelConfig, critical_set: CriticalSet, cap: usize) -> Result<Self> {
        critical_set.validate(config.dim())?;
        let lattice = Lattice::with_cap(config.dim(), config.max_level(), cap)?;
        let mut coords = vec![0u32; lattice.dim()];
        let critical: Vec<bool> = (0..lattice.len())
            .map(|i| {
                lattice.coords_into(i, &mut coords);
                critical_set.contains_unchecked(&coords)
            })
            .collect();
        let kernels = MonitoringMode::ALL.map(|mode| build_kernel(&config, &lattice, &critical, mode));
        Ok(Model {
            config,
            critical_set,
            lattice,
            critical,
            kernels,
        })
    }

    pub fn config(&self) -> &ModelConfig {
        &self.config
    }

    pub fn critical_set(&self) -> &CriticalSet {
        &self.critical_set
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn num_states(&self) -> usize {
        self.lattice.len()
    }

    pub fn num_noncritical(&self) -> usize {
        self.critical.iter().filter(|c| !**c).count()
    }

    pub fn is_critical(&self, index: usize) -> bool {
        self.critical[index]
    }

    pub fn critical_mask(&self) -> &[bool] {
        &self.critical
    }

    pub fn noncritical_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.critical.iter().enumerate().filter(|(_, c)| !**c).map(|(i, _)| i)
    }

    pub fn kernel(&self, mode: MonitoringMode) -> &SparseKernel {
        &self.kernels[mode.slot()]
    }

    /// One-step cost of `mode` plus the discounted expectation of `values`.
    pub fn q_value(&self, mode: MonitoringMode, index: usize, values: &[f64]) -> f64 {
        self.config.cost(mode) + self.config.gamma() * self.kernel(mode).expectation(index, values)
    }
}

fn build_kernel(config: &ModelConfig, lattice: &Lattice, critical: &[bool], mode: MonitoringMode) -> SparseKernel {
    let mut offsets = Vec::with_capacity(lattice.len() + 1);
    let mut targets = Vec::new();
    let mut probs = Vec::new();
    let mut coords = vec![0u32; lattice.dim()];
    let mut moves = Vec::with_capacity(2 * lattice.dim());
    offsets.push(0);
    for (index, &is_critical) in critical.iter().enumerate() {
        if !is_critical {
            lattice.coords_into(index, &mut coords);
            elementary_moves(
                &coords,
                config.improvement(mode),
                config.decline(mode),
                config.max_level(),
                &mut moves,
            );
            for &(step, p) in &moves {
                let target = match step {
                    Step::Up(axis) => index + lattice.stride(axis),
                    Step::Stay => index,
                    Step::Down(axis) => index - lattice.stride(axis),
                };
                targets.push(target);
                probs.push(p);
            }
        }
        offsets.push(targets.len());
    }
    SparseKernel {
        offsets,
        targets,
        probs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig2(max_level: u32) -> ModelConfig {
        ModelConfig::new(ModelParams {
            dim: 2,
            max_level,
            lambda_o: vec![0.075, 0.075],
            lambda_i: vec![0.2, 0.2],
            mu_o: vec![0.425, 0.425],
            mu_i: vec![0.3, 0.3],
            cost_o: 0.0,
            cost_i: 1.0,
            cost_c: 35.0,
            gamma: 0.9,
        })
        .unwrap()
    }

    #[test]
    fn sparse_rows_match_transition() {
        let cs = CriticalSet::Union(vec![CriticalSet::MinZero, CriticalSet::L1Ball(2)]);
        let cfg = fig2(5);
        let model = Model::new(cfg.clone(), cs.clone()).unwrap();
        let lattice = *model.lattice();
        for index in 0..lattice.len() {
            let h = lattice.state(index);
            for mode in MonitoringMode::ALL {
                let (targets, probs) = model.kernel(mode).row(index);
                if model.is_critical(index) {
                    assert!(targets.is_empty());
                    continue;
                }
                let dist = transition(&h, mode, &cfg, &cs).unwrap();
                assert_eq!(dist.entries().len(), targets.len());
                for ((s, p), (&t, &q)) in dist.entries().iter().zip(targets.iter().zip(probs)) {
                    assert_eq!(lattice.index_of(s.coords()), Some(t));
                    assert_eq!(*p, q);
                }
            }
        }
    }

    #[test]
    fn state_cap_applies() {
        let err = Model::with_state_cap(fig2(6), CriticalSet::MinZero, 10).unwrap_err();
        assert!(err.is_capacity());
    }

    #[test]
    fn enumerate_counts() {
        assert_eq!(enumerate_states(&fig2(6)).unwrap().len(), 49);
        let one_d = ModelConfig::new(ModelParams {
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
        assert_eq!(
            enumerate_states(&one_d).unwrap(),
            vec![HealthState::from([0]), HealthState::from([1]), HealthState::from([2])]
        );
        assert!(enumerate_states_with_cap(&fig2(6), 48).unwrap_err().is_capacity());
    }
}
