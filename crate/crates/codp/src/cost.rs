//! Total-cost objective over decoupling positions.
//!
//! The discrete objective sums four components at a position `p`: generic
//! processing over stages `1..=p`, push-side WIP holding, incremental
//! customization over stages `p+1..=N`, and reconfiguration charges for
//! flagged stations. A fitted variant relaxes `p` to the reals by replacing
//! per-stage costs with fitted curves whose partial sums have closed forms.

use crate::fitting::{select_model, CostSeries, FitError, FittedCurve, ModelFamily};
use crate::production::{CodpPosition, LineError, ProductionLine};
use std::collections::BTreeMap;
use thiserror::Error;

/// Errors raised by cost evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CostError {
    #[error(transparent)]
    Line(#[from] LineError),
    #[error(transparent)]
    Fit(#[from] FitError),
    #[error("stage {stage} has zero inventory turnover; holding cost undefined")]
    ZeroTurnover { stage: usize },
    #[error("reconfiguration flag names stage {stage}, line has stages 1..={stages}")]
    FlagOutsideLine { stage: usize, stages: usize },
    #[error("volume must be positive, got {value}")]
    NonPositiveVolume { value: f64 },
    #[error("position {position} outside fitted range [{lo}, {hi}]")]
    OutOfFittedRange { position: f64, lo: f64, hi: f64 },
}

/// Component-wise cost at one position. `total` is always the exact
/// left-to-right sum of the four components.
#[derive(Debug, Clone, PartialEq)]
pub struct CostBreakdown {
    pub position: CodpPosition,
    pub generic_processing: f64,
    pub wip_holding: f64,
    pub custom_incremental: f64,
    pub reconfiguration: f64,
    pub total: f64,
}

/// Which stations incur their modification cost. Stored sparsely; unlisted
/// stages are unflagged.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReconfigurationSet {
    flags: BTreeMap<usize, bool>,
}

impl ReconfigurationSet {
    /// No station reconfigured.
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_flags<I: IntoIterator<Item = (usize, bool)>>(flags: I) -> Self {
        ReconfigurationSet {
            flags: flags.into_iter().collect(),
        }
    }

    /// Flags every stage in `(p, frontier]`: positioning the buffer at `p`
    /// forces adjustments on the stations between it and the first
    /// personalized process.
    pub fn default_for(line: &ProductionLine, p: CodpPosition) -> Self {
        let flags = (p.get() + 1..=line.personalization_frontier())
            .map(|i| (i, true))
            .collect();
        ReconfigurationSet { flags }
    }

    pub fn set(&mut self, stage: usize, flagged: bool) {
        self.flags.insert(stage, flagged);
    }

    pub fn is_flagged(&self, stage: usize) -> bool {
        self.flags.get(&stage).copied().unwrap_or(false)
    }

    /// Flagged stage indices in ascending order.
    pub fn flagged(&self) -> impl Iterator<Item = usize> + '_ {
        self.flags
            .iter()
            .filter(|&(_, &on)| on)
            .map(|(&stage, _)| stage)
    }

    fn validate(&self, line: &ProductionLine) -> Result<(), CostError> {
        for &stage in self.flags.keys() {
            if stage < 1 || stage > line.len() {
                return Err(CostError::FlagOutsideLine {
                    stage,
                    stages: line.len(),
                });
            }
        }
        Ok(())
    }
}

/// Push-side WIP holding cost: Σ over stages 1..=p of
/// holding_cost·(std_inventory + inventory_adjustment)/turnover.
pub fn inventory_cost_delta(line: &ProductionLine, p: CodpPosition) -> Result<f64, CostError> {
    let idx = line.check_position(p)?;
    let mut delta = 0.0;
    for stage in &line.stages()[..idx] {
        if stage.turnover == 0.0 {
            return Err(CostError::ZeroTurnover { stage: stage.index });
        }
        delta += stage.holding_cost * (stage.std_inventory + stage.inventory_adjustment)
            / stage.turnover;
    }
    Ok(delta)
}

/// Evaluates the discrete objective at position `p`.
///
/// Generic and custom processing scale with `volume`; holding and
/// reconfiguration are per-period and per-event charges and do not.
pub fn total_cost(
    line: &ProductionLine,
    p: CodpPosition,
    recfg: &ReconfigurationSet,
    volume: f64,
) -> Result<CostBreakdown, CostError> {
    if !(volume > 0.0) {
        return Err(CostError::NonPositiveVolume { value: volume });
    }
    let idx = line.check_position(p)?;
    recfg.validate(line)?;

    let generic_sum: f64 = line.stages()[..idx]
        .iter()
        .map(|s| s.generic_unit_cost)
        .sum();
    let custom_sum: f64 = line.stages()[idx..]
        .iter()
        .map(|s| s.custom_unit_cost)
        .sum();
    let wip_holding = inventory_cost_delta(line, p)?;
    let mut reconfiguration = 0.0;
    for stage in recfg.flagged() {
        reconfiguration += line.stage(stage).expect("validated flag").modification_cost;
    }

    let generic_processing = volume * generic_sum;
    let custom_incremental = volume * custom_sum;
    // component order fixed; the identity total = g + h + c + r must be exact
    let total = generic_processing + wip_holding + custom_incremental + reconfiguration;
    Ok(CostBreakdown {
        position: p,
        generic_processing,
        wip_holding,
        custom_incremental,
        reconfiguration,
        total,
    })
}

/// Continuous-cost surrogate built by fitting per-stage cost columns.
///
/// Each curve maps a stage index to that stage's fitted cost; partial sums of
/// the curves (closed form per family) replace the discrete prefix/suffix
/// sums, so the relaxed objective is smooth in `p` and matches the discrete
/// one at integers up to fit residuals. Holding terms stay exact.
#[derive(Debug, Clone)]
pub struct FittedCostModel {
    line: ProductionLine,
    volume: f64,
    pub generic_curve: FittedCurve,
    pub custom_curve: FittedCurve,
    pub modification_curve: FittedCurve,
    /// holding_prefix[k] = Σ_{i=1..k} h_i·(x*_i+α_i)/r_i, k ≤ frontier−1.
    holding_prefix: Vec<f64>,
}

impl FittedCostModel {
    /// Fits the three cost columns over stage indices 1..=N and freezes the
    /// holding prefix. Needs at least 3 stages for the fits and positive
    /// turnover on every stage the candidate range can touch.
    pub fn from_line(line: &ProductionLine, volume: f64) -> Result<Self, CostError> {
        if !(volume > 0.0) {
            return Err(CostError::NonPositiveVolume { value: volume });
        }
        let column = |f: fn(&crate::production::StageProfile) -> f64| -> Result<CostSeries, FitError> {
            CostSeries::new(
                line.stages()
                    .iter()
                    .map(|s| (s.index as f64, f(s)))
                    .collect(),
            )
        };
        let generic_curve = select_model(&column(|s| s.generic_unit_cost)?)?;
        let custom_curve = select_model(&column(|s| s.custom_unit_cost)?)?;
        let modification_curve = select_model(&column(|s| s.modification_cost)?)?;

        let top = line.personalization_frontier().saturating_sub(1);
        let mut holding_prefix = Vec::with_capacity(top + 1);
        holding_prefix.push(0.0);
        for stage in &line.stages()[..top] {
            if stage.turnover == 0.0 {
                return Err(CostError::ZeroTurnover { stage: stage.index });
            }
            let term = stage.holding_cost * (stage.std_inventory + stage.inventory_adjustment)
                / stage.turnover;
            holding_prefix.push(holding_prefix.last().unwrap() + term);
        }
        Ok(FittedCostModel {
            line: line.clone(),
            volume,
            generic_curve,
            custom_curve,
            modification_curve,
            holding_prefix,
        })
    }

    pub fn line(&self) -> &ProductionLine {
        &self.line
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    /// Continuous positions the model covers: `[1, frontier−1]`.
    pub fn fitted_range(&self) -> (f64, f64) {
        (
            1.0,
            (self.line.personalization_frontier() - 1) as f64,
        )
    }

    fn holding_at(&self, p: f64) -> f64 {
        let k = p.floor() as usize;
        let frac = p - k as f64;
        let base = self.holding_prefix[k];
        if frac == 0.0 {
            base
        } else {
            base + frac * (self.holding_prefix[k + 1] - base)
        }
    }
}

/// Σ_{i=1}^{p} curve(i) extended to real `p` by each family's closed form.
/// Exact at integer `p` up to rounding.
fn cumulative(curve: &FittedCurve, p: f64) -> f64 {
    let c = &curve.coefficients;
    match curve.family {
        ModelFamily::Linear => c[0] * p * (p + 1.0) / 2.0 + c[1] * p,
        ModelFamily::Quadratic => {
            c[0] * p * (p + 1.0) * (2.0 * p + 1.0) / 6.0 + c[1] * p * (p + 1.0) / 2.0 + c[2] * p
        }
        ModelFamily::Exponential => {
            let growth = c[1].exp() - 1.0;
            if growth.abs() < 1e-12 {
                // flat exponential degenerates to a constant per stage
                c[0] * p
            } else {
                c[0] * c[1].exp() * ((c[1] * p).exp() - 1.0) / growth
            }
        }
    }
}

/// Relaxed objective at real position `p` within the fitted range, using the
/// default reconfiguration rule (stations between `p` and the frontier).
pub fn fitted_total_cost(model: &FittedCostModel, p: f64) -> Result<f64, CostError> {
    let (lo, hi) = model.fitted_range();
    if !(p >= lo && p <= hi) {
        return Err(CostError::OutOfFittedRange {
            position: p,
            lo,
            hi,
        });
    }
    let n = model.line.len() as f64;
    let frontier = model.line.personalization_frontier() as f64;
    let generic = cumulative(&model.generic_curve, p);
    let custom = cumulative(&model.custom_curve, n) - cumulative(&model.custom_curve, p);
    let recfg =
        cumulative(&model.modification_curve, frontier) - cumulative(&model.modification_curve, p);
    Ok(model.volume * generic + model.holding_at(p) + model.volume * custom + recfg)
}

/// Direction a fitted cost curve is expected to move over the candidate range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrendExpectation {
    Increasing,
    Decreasing,
}

/// Outcome of the derivative sign check over a fixed grid.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityReport {
    pub expected: TrendExpectation,
    pub passed: bool,
    /// Merged subintervals of the grid where the derivative sign disagrees.
    pub violations: Vec<(f64, f64)>,
    pub grid_points: usize,
}

/// Checks the analytic derivative of `curve` against the expected sign on a
/// 1001-point grid over `[lo, hi]`. Sign failures are reported, never thrown.
pub fn monotonicity_diagnostic(
    curve: &FittedCurve,
    lo: f64,
    hi: f64,
    expected: TrendExpectation,
) -> MonotonicityReport {
    assert!(lo < hi, "monotonicity range must satisfy lo < hi");
    const STEPS: usize = 1000;
    let step = (hi - lo) / STEPS as f64;
    let mut violations: Vec<(f64, f64)> = Vec::new();
    let mut run_start: Option<f64> = None;
    let mut last_x = lo;
    for i in 0..=STEPS {
        let x = lo + step * i as f64;
        let d = curve.derivative(x);
        let ok = match expected {
            TrendExpectation::Increasing => d > 0.0,
            TrendExpectation::Decreasing => d < 0.0,
        };
        if ok {
            if let Some(start) = run_start.take() {
                violations.push((start, last_x));
            }
        } else if run_start.is_none() {
            run_start = Some(x);
        }
        last_x = x;
    }
    if let Some(start) = run_start {
        violations.push((start, last_x));
    }
    MonotonicityReport {
        expected,
        passed: violations.is_empty(),
        violations,
        grid_points: STEPS + 1,
    }
}
