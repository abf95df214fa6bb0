//! ScenarioConfig ingestion.
//!
//! Scenarios are TOML files describing everything about a run that is not a
//! per-stage property: the personalization frontier, demand, service target,
//! deadlines, and the optional `[sim]` and `[fit]` blocks.

use std::path::Path;

use serde::Deserialize;

use crate::fitting::{ModelFamily, DEFAULT_CV_THRESHOLD};
use crate::simulation::{DemandModel, SimConfig};

use super::commands::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub frontier: usize,
    pub demand_rate: f64,
    pub demand_std: f64,
    pub service_level: f64,
    #[serde(default = "default_review_period")]
    pub review_period: f64,
    #[serde(default)]
    pub deadline: Option<f64>,
    #[serde(default)]
    pub deadlines: Vec<f64>,
    #[serde(default = "default_volume")]
    pub volume: f64,
    #[serde(default)]
    pub sim: Option<SimSettings>,
    #[serde(default)]
    pub fit: FitSettings,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimSettings {
    pub horizon: usize,
    pub warmup: usize,
    pub seed: u64,
    pub replications: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitSettings {
    /// Families to consider; all three when absent.
    #[serde(default)]
    pub families: Option<Vec<String>>,
    #[serde(default = "default_cv_threshold")]
    pub cv_threshold: f64,
}

impl Default for FitSettings {
    fn default() -> Self {
        FitSettings {
            families: None,
            cv_threshold: DEFAULT_CV_THRESHOLD,
        }
    }
}

fn default_review_period() -> f64 {
    1.0
}

fn default_volume() -> f64 {
    1.0
}

fn default_cv_threshold() -> f64 {
    DEFAULT_CV_THRESHOLD
}

impl Scenario {
    /// Demand process implied by the scenario. A zero standard deviation
    /// degenerates to a constant stream without consuming random draws.
    pub fn demand_model(&self) -> DemandModel {
        DemandModel::Normal {
            mean: self.demand_rate,
            std: self.demand_std,
        }
    }

    /// The `[sim]` block as a simulator configuration, when present.
    pub fn sim_config(&self) -> Option<SimConfig> {
        self.sim.as_ref().map(|s| SimConfig {
            horizon: s.horizon,
            warmup: s.warmup,
            seed: s.seed,
            replications: s.replications,
        })
    }

    /// Families named in `[fit]`, parsed; `None` means all families.
    pub fn fit_families(&self) -> Result<Option<Vec<ModelFamily>>, CliError> {
        let Some(names) = &self.fit.families else {
            return Ok(None);
        };
        if names.is_empty() {
            return Err(CliError::validation(
                "fit.families must name at least one family",
            ));
        }
        let mut families = Vec::with_capacity(names.len());
        for name in names {
            let family = match name.to_ascii_lowercase().as_str() {
                "linear" => ModelFamily::Linear,
                "quadratic" => ModelFamily::Quadratic,
                "exponential" => ModelFamily::Exponential,
                other => {
                    return Err(CliError::validation(format!(
                        "fit.families: unknown family {other:?} \
                         (expected linear, quadratic, or exponential)"
                    )))
                }
            };
            if !families.contains(&family) {
                families.push(family);
            }
        }
        Ok(Some(families))
    }

    fn check_finite(value: f64, key: &str) -> Result<(), CliError> {
        if !value.is_finite() {
            return Err(CliError::validation(format!("{key} must be finite")));
        }
        Ok(())
    }

    /// Range checks with the offending key named. Deadline values are left to
    /// the feasibility layer, which reports them with full context.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.frontier == 0 {
            return Err(CliError::validation("frontier must be at least 1"));
        }
        Self::check_finite(self.demand_rate, "demand_rate")?;
        Self::check_finite(self.demand_std, "demand_std")?;
        Self::check_finite(self.service_level, "service_level")?;
        Self::check_finite(self.review_period, "review_period")?;
        Self::check_finite(self.volume, "volume")?;
        if self.demand_rate < 0.0 {
            return Err(CliError::validation("demand_rate must be non-negative"));
        }
        if self.demand_std < 0.0 {
            return Err(CliError::validation("demand_std must be non-negative"));
        }
        if !(self.service_level > 0.0 && self.service_level < 1.0) {
            return Err(CliError::validation(
                "service_level must lie strictly between 0 and 1",
            ));
        }
        if self.review_period < 0.0 {
            return Err(CliError::validation("review_period must be non-negative"));
        }
        if self.volume <= 0.0 {
            return Err(CliError::validation("volume must be positive"));
        }
        if let Some(sim) = &self.sim {
            if sim.horizon == 0 {
                return Err(CliError::validation("sim.horizon must be at least 1"));
            }
            if sim.warmup >= sim.horizon {
                return Err(CliError::validation(
                    "sim.warmup must be smaller than sim.horizon",
                ));
            }
            if sim.replications == 0 {
                return Err(CliError::validation(
                    "sim.replications must be at least 1",
                ));
            }
        }
        if !(self.fit.cv_threshold.is_finite() && self.fit.cv_threshold > 0.0) {
            return Err(CliError::validation("fit.cv_threshold must be positive"));
        }
        self.fit_families()?;
        Ok(())
    }
}

fn toml_error_line(content: &str, err: &toml::de::Error) -> u64 {
    match err.span() {
        Some(span) => {
            let upto = span.start.min(content.len());
            content[..upto].matches('\n').count() as u64 + 1
        }
        None => 0,
    }
}

/// Reads and validates a scenario file.
pub fn load_scenario(path: &Path) -> Result<Scenario, CliError> {
    let content = std::fs::read_to_string(path).map_err(|e| CliError::open(path, &e))?;
    let scenario: Scenario = toml::from_str(&content).map_err(|e| {
        CliError::parse(path, toml_error_line(&content, &e), "-", e.message())
    })?;
    scenario.validate()?;
    Ok(scenario)
}
