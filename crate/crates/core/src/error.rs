use alloc::boxed::Box;
use alloc::string::String;

use crate::model::{HealthState, MonitoringMode};

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("{what} has length {found}, expected {expected}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("{what}[{index}] = {value} is not a probability in [0, 1]")]
    InvalidProbability {
        what: &'static str,
        index: usize,
        value: f64,
    },

    #[error("{mode} monitoring probabilities sum to {sum}, expected 1 (normalization tolerance 1e-12)")]
    Normalization { mode: MonitoringMode, sum: f64 },

    #[error(
        "lambda_i[{index}] = {intensive} < lambda_o[{index}] = {ordinary}: intensive monitoring must not slow improvement"
    )]
    Dominance {
        index: usize,
        intensive: f64,
        ordinary: f64,
    },

    #[error("costs must satisfy 0 <= cost_o <= cost_i <= cost_c, got cost_o = {cost_o}, cost_i = {cost_i}, cost_c = {cost_c}")]
    CostOrder { cost_o: f64, cost_i: f64, cost_c: f64 },

    #[error("gamma = {0} must lie strictly between 0 and 1")]
    Discount(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what} needs {required} entries, exceeding the cap of {cap}")]
    Capacity {
        what: &'static str,
        required: u128,
        cap: u128,
    },

    #[error("state {0} is critical and has no outgoing transitions")]
    CriticalState(HealthState),

    #[error("swept value {value}: {source}")]
    SweepValue {
        value: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// True for errors caused by a size cap rather than bad input.
    pub fn is_capacity(&self) -> bool {
        match self {
            Error::Capacity { .. } => true,
            Error::SweepValue { source, .. } => source.is_capacity(),
            _ => false,
        }
    }
}
