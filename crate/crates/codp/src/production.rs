//! Production line data model: stage profiles, the personalization frontier,
//! decoupling-point candidates, and lead-time primitives.
//!
//! Index convention used throughout the crate: a [`CodpPosition`] `p` names the
//! *last* generic (forecast-driven) process. The semi-finished buffer sits
//! immediately after stage `p`; stages `1..=p` run push, stages `p+1..=N` run
//! pull against customer orders. "Moving the decoupling point back" means `p`
//! increases (more of the line is standardized).

use thiserror::Error;

/// Errors raised while building or querying a [`ProductionLine`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LineError {
    #[error("production line has no stages")]
    EmptyLine,
    #[error("stage indices must be contiguous from 1: expected {expected}, found {found}")]
    NonContiguousIndices { expected: usize, found: usize },
    #[error("personalization frontier {frontier} out of range for a {stages}-stage line")]
    FrontierOutOfRange { frontier: usize, stages: usize },
    #[error("stage {stage}: field `{field}` must be non-negative, got {value}")]
    NegativeField {
        stage: usize,
        field: &'static str,
        value: f64,
    },
    #[error("position {position} out of range 1..={max}")]
    PositionOutOfRange { position: usize, max: usize },
}

/// One production process: timing, unit costs, and buffer parameters.
///
/// `time_mean`/`time_std` and the review period used elsewhere must share one
/// time unit (the crate's reports assume days); `turnover` must be positive
/// whenever holding costs are evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct StageProfile {
    /// Process position along the line, starting at 1.
    pub index: usize,
    /// Mean processing time for this stage.
    pub time_mean: f64,
    /// Standard deviation of the processing time; 0 means deterministic.
    pub time_std: f64,
    /// Per-unit cost when the stage runs upstream of the decoupling point.
    pub generic_unit_cost: f64,
    /// Per-unit incremental cost when the stage runs downstream (customized).
    pub custom_unit_cost: f64,
    /// Equipment adjustment/design cost if this stage is reconfigured.
    pub modification_cost: f64,
    /// Unit inventory carrying cost per period.
    pub holding_cost: f64,
    /// Inventory turnover rate per period.
    pub turnover: f64,
    /// Standard inventory held at this stage's buffer.
    pub std_inventory: f64,
    /// Optional adjustment added to the standard inventory (any sign).
    pub inventory_adjustment: f64,
}

/// An ordered, validated sequence of stages with a personalization frontier.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductionLine {
    stages: Vec<StageProfile>,
    personalization_frontier: usize,
    demand_rate: f64,
    demand_std: f64,
}

/// Index of the last generic process; the buffer sits right after it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CodpPosition(usize);

impl CodpPosition {
    pub fn new(p: usize) -> Self {
        CodpPosition(p)
    }

    pub fn get(self) -> usize {
        self.0
    }
}

impl std::fmt::Display for CodpPosition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Validates stages and assembles a [`ProductionLine`].
///
/// Stages may arrive in any order; they are sorted by index and the result must
/// be contiguous from 1. All numeric fields except `inventory_adjustment` must
/// be non-negative. A zero `demand_rate` models a no-flow buffer and is
/// accepted.
pub fn build_line(
    stages: Vec<StageProfile>,
    frontier: usize,
    demand_rate: f64,
    demand_std: f64,
) -> Result<ProductionLine, LineError> {
    if stages.is_empty() {
        return Err(LineError::EmptyLine);
    }
    let mut stages = stages;
    stages.sort_by_key(|s| s.index);
    for (pos, stage) in stages.iter().enumerate() {
        if stage.index != pos + 1 {
            return Err(LineError::NonContiguousIndices {
                expected: pos + 1,
                found: stage.index,
            });
        }
        check_non_negative(stage.index, "time_mean", stage.time_mean)?;
        check_non_negative(stage.index, "time_std", stage.time_std)?;
        check_non_negative(stage.index, "generic_unit_cost", stage.generic_unit_cost)?;
        check_non_negative(stage.index, "custom_unit_cost", stage.custom_unit_cost)?;
        check_non_negative(stage.index, "modification_cost", stage.modification_cost)?;
        check_non_negative(stage.index, "holding_cost", stage.holding_cost)?;
        check_non_negative(stage.index, "turnover", stage.turnover)?;
        check_non_negative(stage.index, "std_inventory", stage.std_inventory)?;
    }
    let n = stages.len();
    if frontier < 1 || frontier > n {
        return Err(LineError::FrontierOutOfRange {
            frontier,
            stages: n,
        });
    }
    if demand_rate < 0.0 {
        return Err(LineError::NegativeField {
            stage: 0,
            field: "demand_rate",
            value: demand_rate,
        });
    }
    if demand_std < 0.0 {
        return Err(LineError::NegativeField {
            stage: 0,
            field: "demand_std",
            value: demand_std,
        });
    }
    Ok(ProductionLine {
        stages,
        personalization_frontier: frontier,
        demand_rate,
        demand_std,
    })
}

fn check_non_negative(stage: usize, field: &'static str, value: f64) -> Result<(), LineError> {
    if value < 0.0 || value.is_nan() {
        return Err(LineError::NegativeField {
            stage,
            field,
            value,
        });
    }
    Ok(())
}

impl ProductionLine {
    pub fn stages(&self) -> &[StageProfile] {
        &self.stages
    }

    /// Number of processes N.
    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    /// Index of the first process carrying personalized features.
    pub fn personalization_frontier(&self) -> usize {
        self.personalization_frontier
    }

    /// Mean demand per period at the decoupling buffer.
    pub fn demand_rate(&self) -> f64 {
        self.demand_rate
    }

    /// Demand standard deviation per period.
    pub fn demand_std(&self) -> f64 {
        self.demand_std
    }

    /// Stage by 1-based index.
    pub fn stage(&self, index: usize) -> Option<&StageProfile> {
        self.stages.get(index.checked_sub(1)?)
    }

    /// Sum of mean processing times over the whole line.
    pub fn total_time(&self) -> f64 {
        self.stages.iter().map(|s| s.time_mean).sum()
    }

    pub(crate) fn check_position(&self, p: CodpPosition) -> Result<usize, LineError> {
        let p = p.get();
        if p < 1 || p > self.len() {
            return Err(LineError::PositionOutOfRange {
                position: p,
                max: self.len(),
            });
        }
        Ok(p)
    }
}

/// All admissible decoupling positions: `{1, ..., frontier - 1}`, ascending.
///
/// Empty when the frontier is 1 (the very first process is already
/// personalized, so no generic prefix exists).
pub fn codp_candidates(line: &ProductionLine) -> Vec<CodpPosition> {
    (1..line.personalization_frontier())
        .map(CodpPosition::new)
        .collect()
}

/// Remaining order-driven processing time when the buffer sits after stage `p`:
/// the sum of mean times over stages `p+1..=N`.
pub fn custom_lead_time(line: &ProductionLine, p: CodpPosition) -> Result<f64, LineError> {
    let p = line.check_position(p)?;
    Ok(line.stages[p..].iter().map(|s| s.time_mean).sum())
}

/// Push-side processing time feeding the buffer: the sum of mean times over
/// stages `1..=p`. Together with [`custom_lead_time`] it partitions the total
/// line time.
pub fn generic_lead_time(line: &ProductionLine, p: CodpPosition) -> Result<f64, LineError> {
    let p = line.check_position(p)?;
    Ok(line.stages[..p].iter().map(|s| s.time_mean).sum())
}

#[cfg(test)]
pub(crate) fn stage(index: usize, time_mean: f64) -> StageProfile {
    StageProfile {
        index,
        time_mean,
        time_std: 0.0,
        generic_unit_cost: 0.0,
        custom_unit_cost: 0.0,
        modification_cost: 0.0,
        holding_cost: 0.0,
        turnover: 1.0,
        std_inventory: 0.0,
        inventory_adjustment: 0.0,
    }
}
