use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{CriticalSet, HealthState, Model, ModelConfig, MonitoringMode};
use crate::solver::{value_iteration, SolveReport};

/// Parameter varied by a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    /// Discount factor.
    Gamma,
    /// `cost_c / cost_i` with `cost_o = 0` and `cost_i` held.
    CostRatio,
    /// Additive shift of every `lambda_i[k]`, taken out of `mu_i[k]`.
    LambdaI,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::Gamma => "gamma",
            SweepAxis::CostRatio => "cost-ratio",
            SweepAxis::LambdaI => "lambda-i",
        }
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gamma" => Ok(SweepAxis::Gamma),
            "cost-ratio" | "cost_ratio" => Ok(SweepAxis::CostRatio),
            "lambda-i" | "lambda_i" => Ok(SweepAxis::LambdaI),
            other => Err(Error::InvalidParameter(format!(
                "unknown sweep axis {other:?} (expected gamma, cost-ratio or lambda-i)"
            ))),
        }
    }
}

/// `base` with `axis` set to `value`; errors name the value.
pub fn apply_sweep(base: &ModelConfig, axis: SweepAxis, value: f64) -> Result<ModelConfig> {
    let wrap = |source: Error| Error::SweepValue {
        value,
        source: Box::new(source),
    };
    let mut p = base.params().clone();
    match axis {
        SweepAxis::Gamma => p.gamma = value,
        SweepAxis::CostRatio => {
            if p.cost_i.is_nan() || p.cost_i <= 0.0 {
                return Err(wrap(Error::InvalidParameter(
                    "cost-ratio sweep needs cost_i > 0".into(),
                )));
            }
            p.cost_o = 0.0;
            p.cost_c = value * p.cost_i;
        }
        SweepAxis::LambdaI => {
            for (l, m) in p.lambda_i.iter_mut().zip(p.mu_i.iter_mut()) {
                *l += value;
                *m -= value;
            }
        }
    }
    ModelConfig::new(p).map_err(wrap)
}

/// One solved configuration of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub value: f64,
    pub config: ModelConfig,
    pub intensive_set: Vec<HealthState>,
    pub report: SolveReport,
}

pub(crate) fn check_values(values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::InvalidParameter("sweep needs at least one value".into()));
    }
    if let Some(w) = values
        .windows(2)
        .find(|w| w[0].partial_cmp(&w[1]) != Some(core::cmp::Ordering::Less))
    {
        return Err(Error::InvalidParameter(format!(
            "sweep values must be strictly increasing ({} then {})",
            w[0], w[1]
        )));
    }
    Ok(())
}

/// Solves one configuration and records its intensive set.
pub fn solve_point(config: ModelConfig, cs: &CriticalSet, value: f64, tol: f64, max_iter: usize) -> Result<SweepPoint> {
    let model = Model::new(config.clone(), cs.clone())?;
    let sol = value_iteration(&model, tol, max_iter)?;
    let lattice = model.lattice();
    let intensive_set = sol
        .policy
        .indices_with(MonitoringMode::Intensive)
        .map(|i| lattice.state(i))
        .collect();
    Ok(SweepPoint {
        value,
        config,
        intensive_set,
        report: sol.report,
    })
}

/// Solves `base` at each value of `axis` (strictly increasing), in order.
/// Every configuration is validated before any solve runs.
pub fn sweep_inclusion(
    base: &ModelConfig,
    cs: &CriticalSet,
    axis: SweepAxis,
    values: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<Vec<SweepPoint>> {
    check_values(values)?;
    let configs = values
        .iter()
        .map(|&v| apply_sweep(base, axis, v))
        .collect::<Result<Vec<_>>>()?;
    configs
        .into_iter()
        .zip(values)
        .map(|(config, &v)| solve_point(config, cs, v, tol, max_iter))
        .collect()
}

pub fn is_subset(a: &[HealthState], b: &[HealthState]) -> bool {
    let b: BTreeSet<&HealthState> = b.iter().collect();
    a.iter().all(|h| b.contains(h))
}

/// For each consecutive pair, whether the earlier intensive set is contained
/// in the later one.
pub fn nested_pairs(points: &[SweepPoint]) -> Vec<bool> {
    points
        .windows(2)
        .map(|w| is_subset(&w[0].intensive_set, &w[1].intensive_set))
        .collect()
}
