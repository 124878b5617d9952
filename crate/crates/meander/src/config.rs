//! JSON experiment configuration: a single flat schema shared by every
//! named experiment. Unknown fields are rejected.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tailcore::TailModel;

/// Which step-law family to simulate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ModelConfig {
    #[serde(default)]
    pub family: ModelFamily,
    /// AR(1) coefficient; only used by the stoch-vol family.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum ModelFamily {
    #[default]
    ExactPareto,
    StochVol,
    SsrwExcursion,
}

/// Small-jump truncation policy for subordinator experiments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CutoffPolicy {
    /// Expected discarded jump mass, relative to the target level.
    pub target_bias: f64,
    /// Explicit cutoff override; when set, `target_bias` is ignored.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<f64>,
}

impl Default for CutoffPolicy {
    fn default() -> Self {
        CutoffPolicy { target_bias: 1e-4, cutoff: None }
    }
}

/// One experiment run: which experiment, the tail model, the levels,
/// the replicate count, the master seed and where the CSVs go.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub alpha: f64,
    #[serde(default)]
    pub model: ModelConfig,
    pub t_levels: Vec<f64>,
    pub replicates: u64,
    pub seed: u64,
    #[serde(default)]
    pub cutoff_policy: CutoffPolicy,
    pub output_path: PathBuf,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.replicates < 1 {
            return Err(Error::Config("replicates must be at least 1".into()));
        }
        if self.t_levels.is_empty() {
            return Err(Error::Config("t_levels must be nonempty".into()));
        }
        if self.t_levels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("t_levels must be strictly increasing".into()));
        }
        if self.t_levels.iter().any(|&t| t <= 0.0) {
            return Err(Error::Config("t_levels must be positive".into()));
        }
        self.tail_model()?;
        Ok(())
    }

    /// Materialize the configured tail model.
    pub fn tail_model(&self) -> Result<TailModel> {
        match self.model.family {
            ModelFamily::ExactPareto => TailModel::exact_pareto(self.alpha),
            ModelFamily::StochVol => {
                let phi = self
                    .model
                    .phi
                    .ok_or_else(|| Error::Config("stoch-vol model requires phi".into()))?;
                TailModel::stoch_vol(self.alpha, phi)
            }
            ModelFamily::SsrwExcursion => {
                if (self.alpha - 0.5).abs() > 1e-12 {
                    return Err(Error::Config(
                        "ssrw-excursion fixes alpha = 0.5".into(),
                    ));
                }
                Ok(TailModel::ssrw_excursion())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOOD: &str = r#"{
        "experiment": "dynkin-lamperti",
        "alpha": 0.5,
        "t_levels": [100000.0],
        "replicates": 100,
        "seed": 42,
        "output_path": "out/dl"
    }"#;

    #[test]
    fn parses_minimal_config() {
        let cfg = ExperimentConfig::from_json(GOOD).unwrap();
        assert_eq!(cfg.experiment, "dynkin-lamperti");
        assert_eq!(cfg.model.family, ModelFamily::ExactPareto);
        assert_eq!(cfg.cutoff_policy.target_bias, 1e-4);
        cfg.tail_model().unwrap();
    }

    #[test]
    fn rejects_unknown_fields() {
        let bad = GOOD.replace("\"seed\": 42", "\"seed\": 42, \"surprise\": 1");
        assert!(ExperimentConfig::from_json(&bad).is_err());
    }

    #[test]
    fn rejects_bad_invariants() {
        let bad = GOOD.replace("\"replicates\": 100", "\"replicates\": 0");
        assert!(ExperimentConfig::from_json(&bad).is_err());
        let bad = GOOD.replace("[100000.0]", "[]");
        assert!(ExperimentConfig::from_json(&bad).is_err());
        let bad = GOOD.replace("[100000.0]", "[2.0, 1.0]");
        assert!(ExperimentConfig::from_json(&bad).is_err());
    }

    #[test]
    fn stoch_vol_requires_phi() {
        let cfg = GOOD.replace(
            "\"alpha\": 0.5,",
            "\"alpha\": 0.5, \"model\": {\"family\": \"stoch-vol\"},",
        );
        assert!(ExperimentConfig::from_json(&cfg).is_err());
        let with_phi = cfg.replace(
            "{\"family\": \"stoch-vol\"}",
            "{\"family\": \"stoch-vol\", \"phi\": 0.7}",
        );
        ExperimentConfig::from_json(&with_phi).unwrap().tail_model().unwrap();
    }
}
