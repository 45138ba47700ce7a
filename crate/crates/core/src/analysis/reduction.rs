use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::{CriticalSet, HealthState, Model, ModelConfig, ModelParams, MonitoringMode};
use crate::solver::{value_iteration, DEFAULT_MAX_ITER};

/// Width of the band along the upper boundary excluded from the diagonal
/// comparison; the reflecting boundary breaks the reduction there.
pub const BOUNDARY_BAND: u32 = 5;

const SOLVE_TOLERANCE: f64 = 1e-10;

/// Comparison between a two-dimensional model with critical set
/// `h_x + h_y <= c` and the one-dimensional chain on diagonal sums.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductionResult {
    pub critical_level: u32,
    pub gamma: f64,
    /// `lambda_o,x + lambda_o,y`.
    pub reduced_lambda_o: f64,
    /// `lambda_i,x + lambda_i,y`.
    pub reduced_lambda_i: f64,
    /// Largest `h'` such that the 1D policy is intensive on `1..=h'`.
    pub one_d_threshold: u32,
    /// The 1D policy is ordinary everywhere above `one_d_threshold`.
    pub one_d_is_threshold: bool,
    pub two_d_is_diagonal_threshold: bool,
    /// `k` such that intensive iff `h_x + h_y <= k`, when diagonal.
    pub two_d_threshold_k: Option<u32>,
    /// Compared states that break the diagonal structure.
    pub off_diagonal: Vec<HealthState>,
    /// Diagonal in 2D and `k - c` equals the 1D threshold.
    pub agrees: bool,
}

/// The one-dimensional chain on `h' = h_x + h_y - c`, states `0..=2H-c`,
/// `h' = 0` critical, improving with `lambda'` and declining with
/// `1 - lambda'` under each mode.
pub fn one_dimensional_reduction(cfg: &ModelConfig, c: u32, gamma: f64) -> Result<Model> {
    require_plane(cfg)?;
    let top = 2 * cfg.max_level();
    if top <= c {
        return Err(Error::InvalidParameter(format!(
            "critical level {c} leaves no non-critical diagonal below 2H = {top}"
        )));
    }
    let p = cfg.params();
    let lo: f64 = p.lambda_o.iter().sum();
    let li: f64 = p.lambda_i.iter().sum();
    let reduced = ModelConfig::new(ModelParams {
        dim: 1,
        max_level: top - c,
        lambda_o: vec![lo],
        lambda_i: vec![li],
        mu_o: vec![1.0 - lo],
        mu_i: vec![1.0 - li],
        cost_o: p.cost_o,
        cost_i: p.cost_i,
        cost_c: p.cost_c,
        gamma,
    })?;
    Model::new(reduced, CriticalSet::origin_only())
}

fn require_plane(cfg: &ModelConfig) -> Result<()> {
    if cfg.dim() != 2 {
        return Err(Error::InvalidParameter(format!(
            "diagonal reduction needs n = 2, got n = {}",
            cfg.dim()
        )));
    }
    Ok(())
}

/// Solves the reduced 1D chain and the 2D model at discount `gamma_small`
/// and checks that the 2D intensive set is `{h_x + h_y <= k}` with
/// `k - c` equal to the 1D threshold. States within [`BOUNDARY_BAND`] of the
/// upper boundary are left out of the 2D comparison.
pub fn reduce_theorem1(cfg: &ModelConfig, cs: &CriticalSet, gamma_small: f64) -> Result<ReductionResult> {
    require_plane(cfg)?;
    let c = match cs {
        CriticalSet::L1Ball(c) => *c,
        other => {
            return Err(Error::InvalidParameter(format!(
                "diagonal reduction needs an L1Ball critical set, got {other:?}"
            )))
        }
    };
    let cfg2 = cfg.with_gamma(gamma_small)?;
    let h = cfg2.max_level();
    if h < BOUNDARY_BAND || 2 * (h - BOUNDARY_BAND) <= c {
        return Err(Error::InvalidParameter(format!(
            "H = {h} leaves no non-critical state outside the boundary band of {BOUNDARY_BAND}"
        )));
    }

    let one_d = one_dimensional_reduction(&cfg2, c, gamma_small)?;
    let sol1 = value_iteration(&one_d, SOLVE_TOLERANCE, DEFAULT_MAX_ITER)?;
    let actions1 = &sol1.policy.actions()[1..];
    let one_d_threshold = actions1
        .iter()
        .take_while(|a| **a == Some(MonitoringMode::Intensive))
        .count() as u32;
    let one_d_is_threshold = actions1[one_d_threshold as usize..]
        .iter()
        .all(|a| *a == Some(MonitoringMode::Ordinary));

    let two_d = Model::new(cfg2, cs.clone())?;
    let sol2 = value_iteration(&two_d, SOLVE_TOLERANCE, DEFAULT_MAX_ITER)?;
    let lattice = two_d.lattice();
    let region: Vec<(HealthState, bool)> = two_d
        .noncritical_indices()
        .map(|i| {
            (
                lattice.state(i),
                sol2.policy.action(i) == Some(MonitoringMode::Intensive),
            )
        })
        .filter(|(s, _)| s.coords().iter().all(|&x| x <= h - BOUNDARY_BAND))
        .collect();
    let k = region
        .iter()
        .filter(|(_, intensive)| *intensive)
        .map(|(s, _)| s.coord_sum() as u32)
        .max()
        .unwrap_or(c);
    let off_diagonal: Vec<HealthState> = region
        .into_iter()
        .filter(|(s, intensive)| (s.coord_sum() <= u64::from(k)) != *intensive)
        .map(|(s, _)| s)
        .collect();
    let diagonal = off_diagonal.is_empty();

    let p = one_d.config();
    Ok(ReductionResult {
        critical_level: c,
        gamma: gamma_small,
        reduced_lambda_o: p.improvement(MonitoringMode::Ordinary)[0],
        reduced_lambda_i: p.improvement(MonitoringMode::Intensive)[0],
        one_d_threshold,
        one_d_is_threshold,
        two_d_is_diagonal_threshold: diagonal,
        two_d_threshold_k: diagonal.then_some(k),
        off_diagonal,
        agrees: diagonal && one_d_is_threshold && k - c == one_d_threshold,
    })
}

/// Largest discount among `candidates` at which [`reduce_theorem1`] agrees.
pub fn largest_diagonal_gamma(cfg: &ModelConfig, cs: &CriticalSet, candidates: &[f64]) -> Result<Option<f64>> {
    let mut best = None;
    for &gamma in candidates {
        if reduce_theorem1(cfg, cs, gamma)?.agrees {
            best = Some(best.map_or(gamma, |b: f64| b.max(gamma)));
        }
    }
    Ok(best)
}
