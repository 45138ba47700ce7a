//! TOML model files.
//!
//! ```toml
//! n = 2
//! H = 6
//! gamma = 0.9
//! cost_o = 0.0
//! cost_i = 1.0
//! cost_c = 35.0
//! lambda_o = [0.075, 0.075]
//! lambda_i = [0.2, 0.2]
//! mu_o = [0.425, 0.425]
//! mu_i = [0.3, 0.3]
//!
//! [critical_set]
//! type = "l1_ball"
//! c = 2
//! ```
//!
//! `critical_set` may also be an array of tables, read as their union.

use std::fs;
use std::path::Path;

use healthmon_core::{CriticalSet, ModelConfig, ModelParams};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub n: usize,
    #[serde(rename = "H")]
    pub max_level: u32,
    pub gamma: f64,
    pub cost_o: f64,
    pub cost_i: f64,
    pub cost_c: f64,
    pub lambda_o: Vec<f64>,
    pub lambda_i: Vec<f64>,
    pub mu_o: Vec<f64>,
    pub mu_i: Vec<f64>,
    pub critical_set: CriticalSetField,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CriticalSetField {
    One(CriticalSpec),
    Union(Vec<CriticalSpec>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum CriticalSpec {
    #[serde(rename = "min_zero")]
    MinZero,
    #[serde(rename = "l1_ball")]
    L1Ball { c: u32 },
    #[serde(rename = "linf_ball")]
    LInfBall { c: u32 },
    #[serde(rename = "weighted_l1")]
    WeightedL1 { w: Vec<f64>, c: f64 },
    #[serde(rename = "union")]
    Union { sets: Vec<CriticalSpec> },
}

impl From<&CriticalSpec> for CriticalSet {
    fn from(spec: &CriticalSpec) -> Self {
        match spec {
            CriticalSpec::MinZero => CriticalSet::MinZero,
            CriticalSpec::L1Ball { c } => CriticalSet::L1Ball(*c),
            CriticalSpec::LInfBall { c } => CriticalSet::LInfBall(*c),
            CriticalSpec::WeightedL1 { w, c } => CriticalSet::WeightedL1 {
                weights: w.clone(),
                threshold: *c,
            },
            CriticalSpec::Union { sets } => CriticalSet::Union(sets.iter().map(Into::into).collect()),
        }
    }
}

impl From<&CriticalSet> for CriticalSpec {
    fn from(cs: &CriticalSet) -> Self {
        match cs {
            CriticalSet::MinZero => CriticalSpec::MinZero,
            CriticalSet::L1Ball(c) => CriticalSpec::L1Ball { c: *c },
            CriticalSet::LInfBall(c) => CriticalSpec::LInfBall { c: *c },
            CriticalSet::WeightedL1 { weights, threshold } => CriticalSpec::WeightedL1 {
                w: weights.clone(),
                c: *threshold,
            },
            CriticalSet::Union(sets) => CriticalSpec::Union {
                sets: sets.iter().map(Into::into).collect(),
            },
        }
    }
}

impl CriticalSetField {
    pub fn to_critical_set(&self) -> CriticalSet {
        match self {
            CriticalSetField::One(spec) => spec.into(),
            CriticalSetField::Union(specs) => CriticalSet::Union(specs.iter().map(Into::into).collect()),
        }
    }
}

impl ConfigFile {
    pub fn from_model(config: &ModelConfig, cs: &CriticalSet) -> Self {
        let p = config.params();
        let critical_set = match cs {
            CriticalSet::Union(sets) => CriticalSetField::Union(sets.iter().map(Into::into).collect()),
            other => CriticalSetField::One(other.into()),
        };
        ConfigFile {
            n: p.dim,
            max_level: p.max_level,
            gamma: p.gamma,
            cost_o: p.cost_o,
            cost_i: p.cost_i,
            cost_c: p.cost_c,
            lambda_o: p.lambda_o.clone(),
            lambda_i: p.lambda_i.clone(),
            mu_o: p.mu_o.clone(),
            mu_i: p.mu_i.clone(),
            critical_set,
        }
    }

    /// Validated model configuration and critical set.
    pub fn to_model(&self) -> Result<(ModelConfig, CriticalSet)> {
        let config = ModelConfig::new(ModelParams {
            dim: self.n,
            max_level: self.max_level,
            lambda_o: self.lambda_o.clone(),
            lambda_i: self.lambda_i.clone(),
            mu_o: self.mu_o.clone(),
            mu_i: self.mu_i.clone(),
            cost_o: self.cost_o,
            cost_i: self.cost_i,
            cost_c: self.cost_c,
            gamma: self.gamma,
        })?;
        let cs = self.critical_set.to_critical_set();
        cs.validate(self.n)?;
        Ok((config, cs))
    }

    pub fn parse(text: &str) -> std::result::Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}

pub fn load(path: &Path) -> Result<(ModelConfig, CriticalSet)> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let file = ConfigFile::parse(&text).map_err(|e| CliError::parse(path, e.message()))?;
    file.to_model()
}

#[cfg(test)]
mod tests {
    use super::*;

    const UNION_CONFIG: &str = r#"
n = 2
H = 6
gamma = 0.9
cost_o = 0.0
cost_i = 1.0
cost_c = 35.0
lambda_o = [0.075, 0.075]
lambda_i = [0.2, 0.2]
mu_o = [0.425, 0.425]
mu_i = [0.3, 0.3]
critical_set = [{ type = "min_zero" }, { type = "l1_ball", c = 2 }]
"#;

    #[test]
    fn union_as_array() {
        let (cfg, cs) = ConfigFile::parse(UNION_CONFIG).unwrap().to_model().unwrap();
        assert_eq!(cfg.max_level(), 6);
        assert_eq!(
            cs,
            CriticalSet::Union(vec![CriticalSet::MinZero, CriticalSet::L1Ball(2)])
        );
    }

    #[test]
    fn tagged_variants() {
        let text = UNION_CONFIG.replace(
            r#"critical_set = [{ type = "min_zero" }, { type = "l1_ball", c = 2 }]"#,
            r#"critical_set = { type = "union", sets = [{ type = "weighted_l1", w = [2.0, 3.0], c = 6.0 }, { type = "linf_ball", c = 1 }] }"#,
        );
        let (_, cs) = ConfigFile::parse(&text).unwrap().to_model().unwrap();
        assert_eq!(
            cs,
            CriticalSet::Union(vec![
                CriticalSet::WeightedL1 {
                    weights: vec![2.0, 3.0],
                    threshold: 6.0
                },
                CriticalSet::LInfBall(1),
            ])
        );
    }

    #[test]
    fn round_trip() {
        let file = ConfigFile::parse(UNION_CONFIG).unwrap();
        let (cfg, cs) = file.to_model().unwrap();
        let again = ConfigFile::parse(&ConfigFile::from_model(&cfg, &cs).to_toml()).unwrap();
        assert_eq!(again, file);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_models() {
        assert!(ConfigFile::parse(&format!("{UNION_CONFIG}\nbeta = 1.0")).is_err());
        let short = UNION_CONFIG.replace("mu_o = [0.425, 0.425]", "mu_o = [0.375, 0.375]");
        let err = ConfigFile::parse(&short).unwrap().to_model().unwrap_err();
        assert!(err.to_string().contains("normalization"), "{err}");
        let weights = UNION_CONFIG.replace(
            r#"critical_set = [{ type = "min_zero" }, { type = "l1_ball", c = 2 }]"#,
            r#"critical_set = { type = "weighted_l1", w = [1.0], c = 2.0 }"#,
        );
        assert!(ConfigFile::parse(&weights).unwrap().to_model().is_err());
    }
}
