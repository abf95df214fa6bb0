//! Decision support for placing the customer order decoupling point (CODP)
//! on a multi-stage production line.
//!
//! The decoupling point splits a line into a forecast-driven generic prefix
//! and an order-driven customized suffix, with a semi-finished buffer in
//! between. This crate models the line, fits continuous cost curves to its
//! per-stage cost data, sizes the buffer for a service target, minimizes the
//! total-cost objective subject to the delivery deadline, and cross-checks
//! the analytic answers with a seeded Monte Carlo simulation.
//!
//! Entry points, roughly in pipeline order:
//!
//! - [`production::build_line`] validates stage data into a [`production::ProductionLine`]
//! - [`fitting::select_model`] fits cost trends per stage column
//! - [`inventory::buffer_plan`] sizes safety stock and the order-up-to level
//! - [`optimizer::optimize_discrete`] picks the cheapest feasible position
//! - [`simulation::simulate`] replays the plan under stochastic demand
//!
//! The `codp` binary exposes the same pipeline as `fit`, `locate`, `sweep`,
//! and `simulate` subcommands over a stage table and a scenario file; the
//! crate's examples walk each capability with the bundled reference data.

// validation guards use negated comparisons so NaN fails them too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod cost;
pub mod fitting;
pub mod inventory;
pub mod optimizer;
pub mod production;
pub mod simulation;

pub use cost::{
    fitted_total_cost, inventory_cost_delta, monotonicity_diagnostic, total_cost, CostBreakdown,
    CostError, FittedCostModel, MonotonicityReport, ReconfigurationSet, TrendExpectation,
};
pub use fitting::{
    difference_profile, fit_model, goodness_of_fit, select_among, select_model, CostSeries,
    DifferenceReport, FitError, FittedCurve, ModelFamily, DEFAULT_CV_THRESHOLD,
};
pub use inventory::{
    buffer_plan, normal_cdf, replenishment_cycle, safety_stock, timing_buffer,
    z_for_service_level, BufferPlan, InventoryError, ServiceParams,
};
pub use optimizer::{
    deadline_sweep, feasible_window, optimize_discrete, optimize_relaxed, rank_position,
    DeadlineRegime, FeasibilityVerdict, OptimizerError, RankedPosition, Recommendation, Regime,
    RelaxedOptimum, SweepEntry, SweepOutcome, MAKE_TO_STOCK_ADVISORY,
};
pub use production::{
    build_line, codp_candidates, custom_lead_time, generic_lead_time, CodpPosition, LineError,
    ProductionLine, StageProfile,
};
pub use simulation::{
    empirical_delivery_check, simulate, validate_plan, DemandModel, MetricCheck, ReplicationStats,
    SimConfig, SimError, SimReport, Tolerances, ValidationResult,
};
