//! Monte Carlo check of the buffer plan under periodic review.
//!
//! Each period runs receipts, then review, then demand. At every review epoch
//! the buffer is ordered back up to S; the order's lead time is the sum of
//! push-side stage times drawn fresh per order. A lead draw happens at every
//! review epoch even when the order quantity is zero, so runs that differ
//! only in S consume identical random streams and stay coupled.
//!
//! Every replication owns three private streams (demand, lead, custom route)
//! derived from the seed and replication index, so adding replications never
//! perturbs earlier ones. Stages with zero spread return their mean without
//! touching the stream, which keeps zero-variance runs bit-exact against the
//! deterministic lead-time arithmetic.

use crate::inventory::BufferPlan;
use crate::production::{generic_lead_time, CodpPosition, LineError, ProductionLine};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Poisson};
use thiserror::Error;

/// Errors raised by the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("invalid simulation config: {reason}")]
    InvalidConfig { reason: String },
    #[error("report was not produced from this plan: {reason}")]
    MismatchedPlan { reason: String },
    #[error(transparent)]
    Line(#[from] LineError),
}

/// Per-period demand law at the buffer. Normal draws clamp at zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DemandModel {
    Deterministic { mean: f64 },
    Normal { mean: f64, std: f64 },
    Poisson { mean: f64 },
}

impl DemandModel {
    fn validate(&self) -> Result<(), SimError> {
        let (mean, std) = match *self {
            DemandModel::Deterministic { mean } => (mean, 0.0),
            DemandModel::Normal { mean, std } => (mean, std),
            DemandModel::Poisson { mean } => (mean, 0.0),
        };
        if !(mean >= 0.0) || !mean.is_finite() {
            return Err(SimError::InvalidConfig {
                reason: format!("demand mean must be non-negative and finite, got {mean}"),
            });
        }
        if !(std >= 0.0) || !std.is_finite() {
            return Err(SimError::InvalidConfig {
                reason: format!("demand std must be non-negative and finite, got {std}"),
            });
        }
        Ok(())
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> f64 {
        match *self {
            DemandModel::Deterministic { mean } => mean,
            DemandModel::Normal { mean, std } => {
                if std == 0.0 {
                    mean
                } else {
                    let normal = Normal::new(mean, std).expect("validated std");
                    normal.sample(rng).max(0.0)
                }
            }
            DemandModel::Poisson { mean } => {
                if mean == 0.0 {
                    0.0
                } else {
                    let poisson = Poisson::new(mean).expect("validated mean");
                    poisson.sample(rng)
                }
            }
        }
    }
}

/// Horizon, warmup, seed, and replication count for one run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimConfig {
    /// Periods per replication.
    pub horizon: usize,
    /// Leading periods excluded from statistics.
    pub warmup: usize,
    pub seed: u64,
    pub replications: usize,
}

impl SimConfig {
    fn validate(&self) -> Result<(), SimError> {
        if self.horizon == 0 {
            return Err(SimError::InvalidConfig {
                reason: "horizon must be at least 1 period".into(),
            });
        }
        if self.warmup >= self.horizon {
            return Err(SimError::InvalidConfig {
                reason: format!(
                    "warmup ({}) must be shorter than the horizon ({})",
                    self.warmup, self.horizon
                ),
            });
        }
        if self.replications == 0 {
            return Err(SimError::InvalidConfig {
                reason: "at least one replication is required".into(),
            });
        }
        Ok(())
    }
}

/// Post-warmup statistics of one replication.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicationStats {
    pub cycle_service_level: f64,
    pub fill_rate: f64,
    pub average_inventory: f64,
    pub max_inventory_observed: f64,
    /// Largest single receipt; bounds how far stock can overshoot S.
    pub max_receipt: f64,
    pub stockout_periods: u64,
    pub cycles: u64,
    pub mean_custom_lead_time: f64,
    pub total_demand: f64,
    pub delivered: f64,
    pub ending_backorders: f64,
}

/// Pooled simulation outcome. Echoes the plan's position and order-up-to
/// level so downstream validation can detect a report/plan mismatch.
#[derive(Debug, Clone, PartialEq)]
pub struct SimReport {
    pub position: CodpPosition,
    pub order_up_to: f64,
    pub cycle_service_level: f64,
    pub fill_rate: f64,
    pub average_inventory: f64,
    pub max_inventory_observed: f64,
    pub stockout_periods: u64,
    pub post_warmup_cycles: u64,
    pub mean_custom_lead_time: f64,
    pub replications: Vec<ReplicationStats>,
    /// End-of-period on-hand stock for the first replication, all periods.
    pub trajectory: Vec<f64>,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Lanes 0..=2 are the replication's demand, lead, and custom-route streams;
/// lane 3 feeds the delivery check.
fn stream(seed: u64, replication: u64, lane: u64) -> ChaCha8Rng {
    let salt = splitmix64(replication.wrapping_mul(4).wrapping_add(lane));
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ salt))
}

/// One stage time: the mean when the stage is deterministic (stream
/// untouched), otherwise a truncated normal draw.
fn stage_time(mean: f64, std: f64, rng: &mut ChaCha8Rng) -> f64 {
    if std == 0.0 {
        mean
    } else {
        let normal = Normal::new(mean, std).expect("positive std");
        normal.sample(rng).max(0.0)
    }
}

/// Sum of realized stage times over `range` (0-based), in ascending order to
/// match the deterministic lead-time arithmetic term for term.
fn route_time(line: &ProductionLine, range: std::ops::Range<usize>, rng: &mut ChaCha8Rng) -> f64 {
    line.stages()[range]
        .iter()
        .map(|s| stage_time(s.time_mean, s.time_std, rng))
        .sum()
}

/// Runs the periodic-review policy against stochastic demand and lead times.
///
/// Identical inputs and seed give a bit-identical report; replications are
/// combined in index order.
pub fn simulate(
    line: &ProductionLine,
    plan: &BufferPlan,
    demand: &DemandModel,
    cfg: &SimConfig,
) -> Result<SimReport, SimError> {
    cfg.validate()?;
    demand.validate()?;
    let p = line.check_position(plan.position)?;
    let planned_cycle = generic_lead_time(line, plan.position)?;
    if (plan.replenishment_cycle - planned_cycle).abs() > 1e-9 * planned_cycle.max(1.0) {
        return Err(SimError::InvalidConfig {
            reason: format!(
                "plan replenishment cycle {} does not match the line's push-side lead time {}",
                plan.replenishment_cycle, planned_cycle
            ),
        });
    }
    if !(plan.order_up_to >= 0.0) || !plan.order_up_to.is_finite() {
        return Err(SimError::InvalidConfig {
            reason: format!("order-up-to level must be non-negative, got {}", plan.order_up_to),
        });
    }
    if !(plan.review_period >= 0.0) || !plan.review_period.is_finite() {
        return Err(SimError::InvalidConfig {
            reason: format!("review period must be non-negative, got {}", plan.review_period),
        });
    }

    // review cadence in whole periods; sub-period cadence reviews every period
    let review_interval = (plan.review_period.round() as usize).max(1);
    let s_level = plan.order_up_to;

    let mut replications = Vec::with_capacity(cfg.replications);
    let mut trajectory = Vec::new();
    for rep in 0..cfg.replications {
        let mut demand_rng = stream(cfg.seed, rep as u64, 0);
        let mut lead_rng = stream(cfg.seed, rep as u64, 1);
        let mut custom_rng = stream(cfg.seed, rep as u64, 2);

        let mut on_hand = s_level;
        let mut on_order = 0.0f64;
        let mut backorders = 0.0f64;
        let mut arrivals = vec![0.0f64; cfg.horizon];

        let mut total_demand = 0.0f64;
        let mut filled_immediately = 0.0f64;
        let mut delivered = 0.0f64;
        let mut inventory_area = 0.0f64;
        let mut observed_periods = 0u64;
        let mut max_inventory = 0.0f64;
        let mut max_receipt = 0.0f64;
        let mut stockout_periods = 0u64;
        let mut custom_lead_sum = 0.0f64;
        let mut custom_lead_count = 0u64;

        let mut cycles = 0u64;
        let mut ok_cycles = 0u64;
        let mut cycle_start = 0usize;
        let mut cycle_had_stockout = false;

        for t in 0..cfg.horizon {
            // receipts land first and clear backorders before new demand
            let receipt = arrivals[t];
            if receipt > 0.0 {
                on_order -= receipt;
                on_hand += receipt;
                max_receipt = max_receipt.max(receipt);
                let served = on_hand.min(backorders);
                on_hand -= served;
                backorders -= served;
                delivered += served;
            }

            if t % review_interval == 0 {
                if t > 0 {
                    if cycle_start >= cfg.warmup {
                        cycles += 1;
                        if !cycle_had_stockout {
                            ok_cycles += 1;
                        }
                    }
                    cycle_start = t;
                    cycle_had_stockout = false;
                }
                // lead and custom-route draws happen every review epoch so
                // the streams align across runs with different S
                let lead = route_time(line, 0..p, &mut lead_rng);
                let custom = route_time(line, p..line.len(), &mut custom_rng);
                if t >= cfg.warmup {
                    custom_lead_sum += custom;
                    custom_lead_count += 1;
                }
                let position = on_hand + on_order - backorders;
                let quantity = s_level - position;
                if quantity > 0.0 {
                    let offset = lead.round() as usize;
                    if offset == 0 {
                        on_hand += quantity;
                        max_receipt = max_receipt.max(quantity);
                        let served = on_hand.min(backorders);
                        on_hand -= served;
                        backorders -= served;
                        delivered += served;
                    } else if t + offset < cfg.horizon {
                        arrivals[t + offset] += quantity;
                        on_order += quantity;
                    } else {
                        // lands past the horizon; stays in flight
                        on_order += quantity;
                    }
                }
            }

            let peak = on_hand;
            let d = demand.draw(&mut demand_rng);
            let filled = on_hand.min(d);
            on_hand -= filled;
            let unmet = d - filled;
            backorders += unmet;
            delivered += filled;
            total_demand += d;
            filled_immediately += filled;

            if t >= cfg.warmup {
                observed_periods += 1;
                inventory_area += 0.5 * (peak + on_hand);
                max_inventory = max_inventory.max(peak);
                if unmet > 0.0 {
                    stockout_periods += 1;
                    cycle_had_stockout = true;
                }
            } else if unmet > 0.0 {
                cycle_had_stockout = true;
            }
            if rep == 0 {
                trajectory.push(on_hand);
            }
        }
        if cycle_start >= cfg.warmup {
            cycles += 1;
            if !cycle_had_stockout {
                ok_cycles += 1;
            }
        }

        let fill_rate = if total_demand > 0.0 {
            filled_immediately / total_demand
        } else {
            1.0
        };
        replications.push(ReplicationStats {
            cycle_service_level: if cycles > 0 {
                ok_cycles as f64 / cycles as f64
            } else {
                1.0
            },
            fill_rate,
            average_inventory: inventory_area / observed_periods as f64,
            max_inventory_observed: max_inventory,
            max_receipt,
            stockout_periods,
            cycles,
            mean_custom_lead_time: if custom_lead_count > 0 {
                custom_lead_sum / custom_lead_count as f64
            } else {
                0.0
            },
            total_demand,
            delivered,
            ending_backorders: backorders,
        });
    }

    // pooled summary in replication-index order
    let n = replications.len() as f64;
    let mean = |f: fn(&ReplicationStats) -> f64| replications.iter().map(f).sum::<f64>() / n;
    Ok(SimReport {
        position: plan.position,
        order_up_to: plan.order_up_to,
        cycle_service_level: mean(|r| r.cycle_service_level),
        fill_rate: mean(|r| r.fill_rate),
        average_inventory: mean(|r| r.average_inventory),
        max_inventory_observed: replications
            .iter()
            .fold(0.0f64, |acc, r| acc.max(r.max_inventory_observed)),
        stockout_periods: replications.iter().map(|r| r.stockout_periods).sum(),
        post_warmup_cycles: replications.iter().map(|r| r.cycles).sum(),
        mean_custom_lead_time: mean(|r| r.mean_custom_lead_time),
        replications,
        trajectory,
    })
}

/// Pass/fail outcome for one validated metric.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricCheck {
    pub observed: f64,
    pub expected: f64,
    pub delta: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Validation tolerances; the service check is one-sided (exceeding the
/// target is never a failure).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub target_service: f64,
    pub service_abs: f64,
    pub average_inventory_rel: f64,
}

impl Tolerances {
    /// Default tolerances: service within 0.02 below target, average
    /// inventory within 10% relative.
    pub fn for_target(target_service: f64) -> Self {
        Tolerances {
            target_service,
            service_abs: 0.02,
            average_inventory_rel: 0.10,
        }
    }
}

/// Verdicts of [`validate_plan`].
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationResult {
    pub service: MetricCheck,
    pub average_inventory: MetricCheck,
    pub all_passed: bool,
}

/// Compares a simulation report against its analytic plan.
///
/// The report must have been produced from the same plan; the echoed
/// position and order-up-to level are checked bitwise.
pub fn validate_plan(
    report: &SimReport,
    plan: &BufferPlan,
    tolerances: &Tolerances,
) -> Result<ValidationResult, SimError> {
    if report.position != plan.position {
        return Err(SimError::MismatchedPlan {
            reason: format!(
                "report is for position {}, plan is for position {}",
                report.position, plan.position
            ),
        });
    }
    if report.order_up_to != plan.order_up_to {
        return Err(SimError::MismatchedPlan {
            reason: format!(
                "report order-up-to {} differs from plan order-up-to {}",
                report.order_up_to, plan.order_up_to
            ),
        });
    }
    let service = MetricCheck {
        observed: report.cycle_service_level,
        expected: tolerances.target_service,
        delta: report.cycle_service_level - tolerances.target_service,
        tolerance: tolerances.service_abs,
        passed: report.cycle_service_level >= tolerances.target_service - tolerances.service_abs,
    };
    let avg_tol = tolerances.average_inventory_rel * plan.average_inventory.abs();
    let avg_delta = report.average_inventory - plan.average_inventory;
    let average_inventory = MetricCheck {
        observed: report.average_inventory,
        expected: plan.average_inventory,
        delta: avg_delta,
        tolerance: avg_tol,
        passed: avg_delta.abs() <= avg_tol.max(f64::EPSILON),
    };
    let all_passed = service.passed && average_inventory.passed;
    Ok(ValidationResult {
        service,
        average_inventory,
        all_passed,
    })
}

/// Fraction of simulated orders whose realized customized route finishes
/// within the deadline.
///
/// Draws one order per period per replication over the route `p+1..=N`. With
/// every stage deterministic the result is exactly 0 or 1 and the comparison
/// reproduces the analytic feasibility verdict bit for bit.
pub fn empirical_delivery_check(
    line: &ProductionLine,
    p: CodpPosition,
    deadline: f64,
    cfg: &SimConfig,
) -> Result<f64, SimError> {
    cfg.validate()?;
    let idx = line.check_position(p)?;
    if !(deadline >= 0.0) || !deadline.is_finite() {
        return Err(SimError::InvalidConfig {
            reason: format!("deadline must be non-negative and finite, got {deadline}"),
        });
    }
    let mut on_time = 0u64;
    let mut orders = 0u64;
    for rep in 0..cfg.replications {
        let mut rng = stream(cfg.seed, rep as u64, 3);
        for _ in 0..cfg.horizon {
            let realized = route_time(line, idx..line.len(), &mut rng);
            if realized <= deadline {
                on_time += 1;
            }
            orders += 1;
        }
    }
    Ok(on_time as f64 / orders as f64)
}
