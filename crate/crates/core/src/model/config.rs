use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Absolute tolerance on per-mode probability sums.
pub const PROBABILITY_TOLERANCE: f64 = 1e-12;

/// Monitoring level; doubles as the action set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MonitoringMode {
    Ordinary,
    Intensive,
}

impl MonitoringMode {
    pub const ALL: [MonitoringMode; 2] = [MonitoringMode::Ordinary, MonitoringMode::Intensive];

    /// Single-letter code, `o` or `i`.
    pub fn code(self) -> char {
        match self {
            MonitoringMode::Ordinary => 'o',
            MonitoringMode::Intensive => 'i',
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MonitoringMode::Ordinary => "ordinary",
            MonitoringMode::Intensive => "intensive",
        }
    }

    pub(crate) fn slot(self) -> usize {
        match self {
            MonitoringMode::Ordinary => 0,
            MonitoringMode::Intensive => 1,
        }
    }
}

impl fmt::Display for MonitoringMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Raw, unvalidated model parameters. Turn into a [`ModelConfig`] with
/// [`ModelConfig::new`].
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    /// Number of health measurements `n`.
    pub dim: usize,
    /// Maximum level `H` of every measurement.
    pub max_level: u32,
    /// Per-dimension improvement probabilities under ordinary monitoring.
    pub lambda_o: Vec<f64>,
    /// Per-dimension improvement probabilities under intensive monitoring.
    pub lambda_i: Vec<f64>,
    /// Per-dimension decline probabilities under ordinary monitoring.
    pub mu_o: Vec<f64>,
    /// Per-dimension decline probabilities under intensive monitoring.
    pub mu_i: Vec<f64>,
    pub cost_o: f64,
    pub cost_i: f64,
    /// Terminal cost paid on entering the critical set.
    pub cost_c: f64,
    pub gamma: f64,
}

/// Validated model parameters.
///
/// Guarantees: each mode's probabilities sum to 1, `lambda_i >= lambda_o`
/// per dimension, `0 <= cost_o <= cost_i <= cost_c` and `0 < gamma < 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelConfig {
    params: ModelParams,
}

impl ModelConfig {
    pub fn new(mut params: ModelParams) -> Result<Self> {
        if params.dim == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        if params.max_level == 0 {
            return Err(Error::InvalidParameter("H must be at least 1".into()));
        }
        let n = params.dim;
        for (what, v) in [
            ("lambda_o", &params.lambda_o),
            ("lambda_i", &params.lambda_i),
            ("mu_o", &params.mu_o),
            ("mu_i", &params.mu_i),
        ] {
            if v.len() != n {
                return Err(Error::DimensionMismatch {
                    what,
                    expected: n,
                    found: v.len(),
                });
            }
            if let Some((index, &value)) = v
                .iter()
                .enumerate()
                .find(|(_, p)| !(p.is_finite() && (0.0..=1.0).contains(*p)))
            {
                return Err(Error::InvalidProbability { what, index, value });
            }
        }

        normalize(MonitoringMode::Ordinary, &mut params.lambda_o, &mut params.mu_o)?;
        normalize(MonitoringMode::Intensive, &mut params.lambda_i, &mut params.mu_i)?;

        for (index, (&intensive, &ordinary)) in params.lambda_i.iter().zip(&params.lambda_o).enumerate() {
            if intensive < ordinary {
                return Err(Error::Dominance {
                    index,
                    intensive,
                    ordinary,
                });
            }
        }

        let (cost_o, cost_i, cost_c) = (params.cost_o, params.cost_i, params.cost_c);
        let finite = cost_o.is_finite() && cost_i.is_finite() && cost_c.is_finite();
        if !(finite && 0.0 <= cost_o && cost_o <= cost_i && cost_i <= cost_c) {
            return Err(Error::CostOrder { cost_o, cost_i, cost_c });
        }
        if !(params.gamma > 0.0 && params.gamma < 1.0) {
            return Err(Error::Discount(params.gamma));
        }
        Ok(ModelConfig { params })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn into_params(self) -> ModelParams {
        self.params
    }

    pub fn dim(&self) -> usize {
        self.params.dim
    }

    pub fn max_level(&self) -> u32 {
        self.params.max_level
    }

    pub fn gamma(&self) -> f64 {
        self.params.gamma
    }

    pub fn cost(&self, mode: MonitoringMode) -> f64 {
        match mode {
            MonitoringMode::Ordinary => self.params.cost_o,
            MonitoringMode::Intensive => self.params.cost_i,
        }
    }

    pub fn cost_c(&self) -> f64 {
        self.params.cost_c
    }

    pub fn improvement(&self, mode: MonitoringMode) -> &[f64] {
        match mode {
            MonitoringMode::Ordinary => &self.params.lambda_o,
            MonitoringMode::Intensive => &self.params.lambda_i,
        }
    }

    pub fn decline(&self, mode: MonitoringMode) -> &[f64] {
        match mode {
            MonitoringMode::Ordinary => &self.params.mu_o,
            MonitoringMode::Intensive => &self.params.mu_i,
        }
    }

    /// Same model with a different discount factor.
    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        let mut params = self.params.clone();
        params.gamma = gamma;
        ModelConfig::new(params)
    }

    /// Same model with a different grid size.
    pub fn with_max_level(&self, max_level: u32) -> Result<Self> {
        let mut params = self.params.clone();
        params.max_level = max_level;
        ModelConfig::new(params)
    }
}

fn normalize(mode: MonitoringMode, lambda: &mut [f64], mu: &mut [f64]) -> Result<()> {
    let sum: f64 = lambda.iter().chain(mu.iter()).sum();
    if (sum - 1.0).abs() > PROBABILITY_TOLERANCE {
        return Err(Error::Normalization { mode, sum });
    }
    // sums off by rounding only are left alone so exact decimal inputs stay bit-identical
    if (sum - 1.0).abs() > 4.0 * f64::EPSILON {
        for p in lambda.iter_mut().chain(mu.iter_mut()) {
            *p /= sum;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn fig2() -> ModelParams {
        ModelParams {
            dim: 2,
            max_level: 6,
            lambda_o: vec![0.075, 0.075],
            lambda_i: vec![0.2, 0.2],
            mu_o: vec![0.425, 0.425],
            mu_i: vec![0.3, 0.3],
            cost_o: 0.0,
            cost_i: 1.0,
            cost_c: 35.0,
            gamma: 0.9,
        }
    }

    #[test]
    fn accepts_fig2_parameters() {
        let cfg = ModelConfig::new(fig2()).unwrap();
        assert_eq!(cfg.improvement(MonitoringMode::Intensive), &[0.2, 0.2]);
        assert_eq!(cfg.cost(MonitoringMode::Ordinary), 0.0);
    }

    #[test]
    fn rejects_unnormalized() {
        let mut p = fig2();
        p.mu_o = vec![0.375, 0.375];
        let err = ModelConfig::new(p).unwrap_err();
        assert!(matches!(
            err,
            Error::Normalization {
                mode: MonitoringMode::Ordinary,
                ..
            }
        ));
        assert!(err.to_string().contains("sum to"));
    }

    #[test]
    fn renormalizes_within_tolerance() {
        let mut p = fig2();
        p.mu_i[0] += 4e-13;
        p.mu_i[1] -= 1e-13;
        let cfg = ModelConfig::new(p).unwrap();
        let sum: f64 = cfg.improvement(MonitoringMode::Intensive).iter().sum::<f64>()
            + cfg.decline(MonitoringMode::Intensive).iter().sum::<f64>();
        assert!((sum - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_dominance_violation() {
        let mut p = fig2();
        p.lambda_i = vec![0.05, 0.2];
        p.mu_i = vec![0.45, 0.3];
        let err = ModelConfig::new(p).unwrap_err();
        assert_eq!(
            err,
            Error::Dominance {
                index: 0,
                intensive: 0.05,
                ordinary: 0.075
            }
        );
        assert!(err.to_string().starts_with("lambda_i[0] = 0.05 < lambda_o[0] = 0.075"));
    }

    #[test]
    fn rejects_cost_order_and_discount() {
        let mut p = fig2();
        p.cost_i = 40.0;
        assert!(matches!(ModelConfig::new(p).unwrap_err(), Error::CostOrder { .. }));
        for gamma in [0.0, 1.0, f64::NAN] {
            let mut p = fig2();
            p.gamma = gamma;
            assert!(matches!(ModelConfig::new(p).unwrap_err(), Error::Discount(_)));
        }
    }

    #[test]
    fn rejects_length_and_range() {
        let mut p = fig2();
        p.mu_i = vec![0.6];
        assert_eq!(
            ModelConfig::new(p).unwrap_err(),
            Error::DimensionMismatch {
                what: "mu_i",
                expected: 2,
                found: 1
            }
        );
        let mut p = fig2();
        p.lambda_o = vec![-0.075, 0.225];
        assert!(matches!(
            ModelConfig::new(p).unwrap_err(),
            Error::InvalidProbability {
                what: "lambda_o",
                index: 0,
                ..
            }
        ));
        let mut p = fig2();
        p.max_level = 0;
        assert!(ModelConfig::new(p).is_err());
    }
}
