//! Buffer sizing at the decoupling point: safety factor, safety stock,
//! order-up-to level, and the resulting inventory profile under a periodic
//! review policy.
//!
//! Two stock figures are reported side by side. `timing_buffer` is the raw
//! composition z·√(Σσ_j²) over the push-side stages, in time units.
//! `safety_stock` converts lead-time and demand uncertainty into units:
//! z·√(demand_std²·L_s + demand_rate²·Σσ_j²). Plans carry both.

use crate::production::{generic_lead_time, CodpPosition, LineError, ProductionLine};
use thiserror::Error;

/// Maximum tolerated gap between a caller-supplied z and the quantile implied
/// by the service level.
const Z_CONSISTENCY_TOL: f64 = 0.01;

/// Errors raised by service-parameter validation and buffer planning.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum InventoryError {
    #[error("service level must lie strictly between 0 and 1, got {beta}")]
    OutOfRange { beta: f64 },
    #[error("service level {beta} implies non-positive safety factor z = {z:.4}")]
    NonPositiveZ { beta: f64, z: f64 },
    #[error(
        "safety factor {z} inconsistent with service level {beta}: expected {expected:.4} within {Z_CONSISTENCY_TOL}"
    )]
    InconsistentZ { z: f64, beta: f64, expected: f64 },
    #[error("review period must be non-negative, got {value}")]
    NegativeReviewPeriod { value: f64 },
    #[error(transparent)]
    Line(#[from] LineError),
}

/// Service target and review cadence for the decoupling buffer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ServiceParams {
    service_level: f64,
    z: f64,
    review_period: f64,
}

impl ServiceParams {
    /// Derives z from the service level. Requires beta > 0.5 so z stays
    /// positive; a zero review period models continuous review.
    pub fn from_service_level(beta: f64, review_period: f64) -> Result<Self, InventoryError> {
        let z = z_for_service_level(beta)?;
        if z <= 0.0 {
            return Err(InventoryError::NonPositiveZ { beta, z });
        }
        if review_period < 0.0 || !review_period.is_finite() {
            return Err(InventoryError::NegativeReviewPeriod {
                value: review_period,
            });
        }
        Ok(ServiceParams {
            service_level: beta,
            z,
            review_period,
        })
    }

    /// Accepts an explicit z, which must agree with the service level's
    /// quantile within 0.01.
    pub fn new(beta: f64, z: f64, review_period: f64) -> Result<Self, InventoryError> {
        let expected = z_for_service_level(beta)?;
        if (z - expected).abs() > Z_CONSISTENCY_TOL {
            return Err(InventoryError::InconsistentZ { z, beta, expected });
        }
        if z <= 0.0 {
            return Err(InventoryError::NonPositiveZ { beta, z });
        }
        if review_period < 0.0 || !review_period.is_finite() {
            return Err(InventoryError::NegativeReviewPeriod {
                value: review_period,
            });
        }
        Ok(ServiceParams {
            service_level: beta,
            z,
            review_period,
        })
    }

    pub fn service_level(&self) -> f64 {
        self.service_level
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn review_period(&self) -> f64 {
        self.review_period
    }
}

/// The sized buffer at one decoupling position.
///
/// `max_inventory` always equals `order_up_to`; `average_inventory` is never
/// below `safety_stock`.
#[derive(Debug, Clone, PartialEq)]
pub struct BufferPlan {
    pub position: CodpPosition,
    /// L_s: push-side lead time replenishing the buffer.
    pub replenishment_cycle: f64,
    /// Stock in units covering demand and lead-time variability.
    pub safety_stock: f64,
    /// z·√(Σσ_j²) over stages 1..=p, in time units.
    pub timing_buffer: f64,
    /// S: inventory position restored at each review.
    pub order_up_to: f64,
    pub average_inventory: f64,
    pub max_inventory: f64,
    pub review_period: f64,
}

/// Inverse standard-normal quantile, absolute error below 5e-4 over (0, 1).
///
/// Rational approximation in three regions (central plus two tails); the
/// actual error of this form stays under 1.2e-9.
// coefficients kept digit-for-digit as published
#[allow(clippy::excessive_precision)]
pub fn z_for_service_level(beta: f64) -> Result<f64, InventoryError> {
    if !(beta > 0.0 && beta < 1.0) || beta.is_nan() {
        return Err(InventoryError::OutOfRange { beta });
    }

    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383577518672690e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;

    let z = if beta < P_LOW {
        let q = (-2.0 * beta.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if beta <= 1.0 - P_LOW {
        let q = beta - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - beta).ln()).sqrt();
        -((((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0))
    };
    Ok(z)
}

/// Standard normal CDF via an error-function approximation; absolute error
/// below 1.5e-7.
pub fn normal_cdf(x: f64) -> f64 {
    let t = x / std::f64::consts::SQRT_2;
    0.5 * (1.0 + erf(t))
}

fn erf(x: f64) -> f64 {
    // Abramowitz/Stegun style polynomial in 1/(1+px), odd symmetry
    const P: f64 = 0.327_591_1;
    const A1: f64 = 0.254_829_592;
    const A2: f64 = -0.284_496_736;
    const A3: f64 = 1.421_413_741;
    const A4: f64 = -1.453_152_027;
    const A5: f64 = 1.061_405_429;
    let sign = if x < 0.0 { -1.0 } else { 1.0 };
    let x = x.abs();
    let t = 1.0 / (1.0 + P * x);
    let poly = ((((A5 * t + A4) * t + A3) * t + A2) * t + A1) * t;
    sign * (1.0 - poly * (-x * x).exp())
}

/// Time to refill the buffer after stage `p`: the push-side lead time.
pub fn replenishment_cycle(line: &ProductionLine, p: CodpPosition) -> Result<f64, LineError> {
    generic_lead_time(line, p)
}

/// z·√(Σ_{j=1}^{p} σ_j²): the timing slack protecting the replenishment
/// cycle, in time units.
pub fn timing_buffer(line: &ProductionLine, p: CodpPosition, z: f64) -> Result<f64, LineError> {
    let p = line.check_position(p)?;
    let var: f64 = line.stages()[..p].iter().map(|s| s.time_std * s.time_std).sum();
    Ok(z * var.sqrt())
}

/// Safety stock in units: z·√(demand_std²·L_s + demand_rate²·Σσ_j²).
///
/// Composes demand noise over the replenishment cycle with lead-time noise
/// scaled by the demand rate. With unit demand rate and no demand noise this
/// reduces to the timing composition in stock form.
pub fn safety_stock(
    line: &ProductionLine,
    p: CodpPosition,
    params: &ServiceParams,
) -> Result<f64, InventoryError> {
    let idx = line.check_position(p)?;
    let lead = generic_lead_time(line, p)?;
    let timing_var: f64 = line.stages()[..idx]
        .iter()
        .map(|s| s.time_std * s.time_std)
        .sum();
    let d = line.demand_rate();
    let sd = line.demand_std();
    Ok(params.z() * (sd * sd * lead + d * d * timing_var).sqrt())
}

/// Sizes the order-up-to policy at position `p`.
///
/// S covers mean demand over lead time plus one review period plus safety
/// stock; the long-run average sits half a review period's demand above the
/// safety floor.
pub fn buffer_plan(
    line: &ProductionLine,
    p: CodpPosition,
    params: &ServiceParams,
) -> Result<BufferPlan, InventoryError> {
    let cycle = replenishment_cycle(line, p)?;
    let ss = safety_stock(line, p, params)?;
    let tb = timing_buffer(line, p, params.z())?;
    let d = line.demand_rate();
    let r = params.review_period();
    let order_up_to = d * (cycle + r) + ss;
    Ok(BufferPlan {
        position: p,
        replenishment_cycle: cycle,
        safety_stock: ss,
        timing_buffer: tb,
        order_up_to,
        average_inventory: ss + d * r / 2.0,
        max_inventory: order_up_to,
        review_period: r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::production::{build_line, StageProfile};
    use proptest::prelude::*;

    fn stage_with_std(index: usize, time_mean: f64, time_std: f64) -> StageProfile {
        StageProfile {
            index,
            time_mean,
            time_std,
            generic_unit_cost: 0.0,
            custom_unit_cost: 0.0,
            modification_cost: 0.0,
            holding_cost: 0.0,
            turnover: 1.0,
            std_inventory: 0.0,
            inventory_adjustment: 0.0,
        }
    }

    fn line(stds: &[(f64, f64)], demand_rate: f64, demand_std: f64) -> ProductionLine {
        let stages = stds
            .iter()
            .enumerate()
            .map(|(i, &(t, s))| stage_with_std(i + 1, t, s))
            .collect();
        build_line(stages, stds.len(), demand_rate, demand_std).unwrap()
    }

    /// Bisection on the CDF, independent of the rational approximation.
    fn z_by_bisection(beta: f64) -> f64 {
        let (mut lo, mut hi) = (-10.0f64, 10.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if normal_cdf(mid) < beta {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn quantile_at_95_percent() {
        let z = z_for_service_level(0.95).unwrap();
        assert!((z - 1.645).abs() < 5e-4, "got {z}");
    }

    #[test]
    fn quantile_at_median_is_zero() {
        let z = z_for_service_level(0.5).unwrap();
        assert!(z.abs() < 1e-12, "got {z}");
    }

    #[test]
    fn quantile_at_97_5_percent() {
        let z = z_for_service_level(0.975).unwrap();
        let oracle = z_by_bisection(0.975);
        assert!((z - 1.960).abs() < 5e-4, "got {z}");
        assert!((z - oracle).abs() < 5e-4, "oracle {oracle}, got {z}");
    }

    #[test]
    fn quantile_rejects_out_of_range() {
        for beta in [0.0, 1.0, -0.3, 1.7, f64::NAN] {
            assert!(matches!(
                z_for_service_level(beta),
                Err(InventoryError::OutOfRange { .. })
            ));
        }
    }

    #[test]
    fn service_params_from_level() {
        let params = ServiceParams::from_service_level(0.95, 1.0).unwrap();
        assert!((params.z() - 1.645).abs() < 5e-4);
        assert_eq!(params.review_period(), 1.0);
    }

    #[test]
    fn service_params_reject_consistent_but_low_levels() {
        assert!(matches!(
            ServiceParams::from_service_level(0.4, 1.0),
            Err(InventoryError::NonPositiveZ { .. })
        ));
    }

    #[test]
    fn service_params_reject_inconsistent_z() {
        let err = ServiceParams::new(0.95, 1.9, 1.0).unwrap_err();
        assert!(matches!(err, InventoryError::InconsistentZ { .. }));
    }

    #[test]
    fn service_params_accept_paper_rounding() {
        // 1.65 sits within 0.01 of the exact 95% quantile
        let params = ServiceParams::new(0.95, 1.65, 1.0).unwrap();
        assert_eq!(params.z(), 1.65);
    }

    #[test]
    fn replenishment_cycle_is_prefix_sum() {
        let l = line(&[(2.0, 0.0), (3.0, 0.0), (4.0, 0.0)], 1.0, 0.0);
        assert_eq!(
            replenishment_cycle(&l, CodpPosition::new(2)).unwrap(),
            5.0
        );
        assert_eq!(
            replenishment_cycle(&l, CodpPosition::new(1)).unwrap(),
            2.0
        );
    }

    #[test]
    fn zero_time_line_has_zero_cycle() {
        let l = line(&[(0.0, 0.0), (0.0, 0.0)], 1.0, 0.0);
        assert_eq!(replenishment_cycle(&l, CodpPosition::new(2)).unwrap(), 0.0);
    }

    #[test]
    fn timing_buffer_pythagorean() {
        let l = line(&[(1.0, 3.0), (1.0, 4.0)], 1.0, 0.0);
        let tb = timing_buffer(&l, CodpPosition::new(2), 1.0).unwrap();
        assert_eq!(tb, 5.0);
    }

    #[test]
    fn safety_stock_reduces_to_timing_form_at_unit_demand() {
        let l = line(&[(1.0, 3.0), (1.0, 4.0)], 1.0, 0.0);
        let params = ServiceParams::new(0.8413, 1.0, 1.0).unwrap();
        let ss = safety_stock(&l, CodpPosition::new(2), &params).unwrap();
        assert_eq!(ss, 5.0);
    }

    #[test]
    fn safety_stock_known_composition() {
        let l = line(&[(1.0, 2.0), (1.0, 2.0), (1.0, 1.0)], 1.0, 0.0);
        let params = ServiceParams::new(0.9505, 1.65, 1.0).unwrap();
        let ss = safety_stock(&l, CodpPosition::new(3), &params).unwrap();
        assert!((ss - 4.95).abs() < 1e-12);
    }

    #[test]
    fn deterministic_line_needs_no_stock() {
        let l = line(&[(1.0, 0.0), (2.0, 0.0)], 0.0, 0.0);
        let params = ServiceParams::from_service_level(0.99, 1.0).unwrap();
        assert_eq!(
            safety_stock(&l, CodpPosition::new(2), &params).unwrap(),
            0.0
        );
    }

    #[test]
    fn buffer_plan_hand_example() {
        // demand 10/day, L_s = 2, review 1, demand_std chosen so SS = 5
        let params = ServiceParams::from_service_level(0.95, 1.0).unwrap();
        let sd = 5.0 / (params.z() * 2.0f64.sqrt());
        let l = line(&[(1.0, 0.0), (1.0, 0.0)], 10.0, sd);
        let plan = buffer_plan(&l, CodpPosition::new(2), &params).unwrap();
        assert!((plan.safety_stock - 5.0).abs() < 1e-9);
        assert!((plan.order_up_to - 35.0).abs() < 1e-9);
        assert!((plan.average_inventory - 10.0).abs() < 1e-9);
        assert_eq!(plan.max_inventory, plan.order_up_to);
    }

    #[test]
    fn buffer_plan_zero_demand() {
        let l = line(&[(1.0, 0.5), (1.0, 0.5)], 0.0, 0.0);
        let params = ServiceParams::from_service_level(0.95, 1.0).unwrap();
        let plan = buffer_plan(&l, CodpPosition::new(2), &params).unwrap();
        assert_eq!(plan.order_up_to, plan.safety_stock);
        assert_eq!(plan.average_inventory, plan.safety_stock);
    }

    #[test]
    fn buffer_plan_just_in_time_limit() {
        // zero variance, zero review period: stock exactly covers the lead
        let l = line(&[(2.0, 0.0), (1.0, 0.0)], 10.0, 0.0);
        let params = ServiceParams::from_service_level(0.95, 0.0).unwrap();
        let plan = buffer_plan(&l, CodpPosition::new(2), &params).unwrap();
        assert_eq!(plan.safety_stock, 0.0);
        assert_eq!(plan.order_up_to, 30.0);
        assert_eq!(plan.average_inventory, 0.0);
    }

    proptest! {
        #[test]
        fn quantile_round_trips_through_cdf(beta in 0.001f64..0.999) {
            let z = z_for_service_level(beta).unwrap();
            prop_assert!((normal_cdf(z) - beta).abs() <= 1e-3);
        }

        #[test]
        fn quantile_matches_bisection_oracle(beta in 0.001f64..0.999) {
            let z = z_for_service_level(beta).unwrap();
            prop_assert!((z - z_by_bisection(beta)).abs() <= 5e-4);
        }

        #[test]
        fn quantile_is_monotone(a in 0.01f64..0.98, delta in 0.001f64..0.01) {
            let za = z_for_service_level(a).unwrap();
            let zb = z_for_service_level(a + delta).unwrap();
            prop_assert!(zb > za);
        }

        #[test]
        fn safety_stock_linear_in_z(
            stds in proptest::collection::vec((0.1f64..5.0, 0.0f64..2.0), 1..8),
            k in prop::sample::select(vec![0.25f64, 0.5, 2.0, 4.0]),
        ) {
            // powers of two keep the scaling exact in binary
            let l = line(&stds, 1.0, 0.0);
            let p = CodpPosition::new(stds.len());
            let base = timing_buffer(&l, p, 1.3).unwrap();
            let scaled = timing_buffer(&l, p, 1.3 * k).unwrap();
            prop_assert_eq!(scaled, k * base);
        }

        #[test]
        fn timing_buffer_homogeneous_in_sigma(
            stds in proptest::collection::vec((0.1f64..5.0, 0.01f64..2.0), 1..8),
            c in prop::sample::select(vec![0.5f64, 2.0, 4.0]),
        ) {
            let base_line = line(&stds, 1.0, 0.0);
            let scaled: Vec<(f64, f64)> =
                stds.iter().map(|&(t, s)| (t, c * s)).collect();
            let scaled_line = line(&scaled, 1.0, 0.0);
            let p = CodpPosition::new(stds.len());
            let a = timing_buffer(&base_line, p, 1.65).unwrap();
            let b = timing_buffer(&scaled_line, p, 1.65).unwrap();
            prop_assert!((b - c * a).abs() <= 1e-12 * b.abs().max(1.0));
        }

        #[test]
        fn safety_stock_non_decreasing_in_p(
            stds in proptest::collection::vec((0.1f64..5.0, 0.0f64..2.0), 2..10),
            demand in 0.0f64..50.0,
            demand_std in 0.0f64..10.0,
        ) {
            let l = line(&stds, demand, demand_std);
            let params = ServiceParams::from_service_level(0.95, 1.0).unwrap();
            let mut prev = 0.0;
            for p in 1..=stds.len() {
                let ss = safety_stock(&l, CodpPosition::new(p), &params).unwrap();
                prop_assert!(ss >= prev - 1e-12);
                prev = ss;
            }
        }

        #[test]
        fn buffer_plan_invariants(
            stds in proptest::collection::vec((0.1f64..5.0, 0.0f64..2.0), 1..10),
            demand in 0.0f64..100.0,
            demand_std in 0.0f64..20.0,
            beta in 0.51f64..0.999,
            review in 0.0f64..5.0,
        ) {
            let l = line(&stds, demand, demand_std);
            let params = ServiceParams::from_service_level(beta, review).unwrap();
            for p in 1..=stds.len() {
                let plan = buffer_plan(&l, CodpPosition::new(p), &params).unwrap();
                prop_assert_eq!(plan.max_inventory, plan.order_up_to);
                prop_assert!(plan.average_inventory >= plan.safety_stock);
                prop_assert!(plan.safety_stock >= 0.0);
                prop_assert!(plan.order_up_to >= 0.0);
                prop_assert!(plan.average_inventory >= 0.0);
                prop_assert!(plan.replenishment_cycle >= 0.0);
            }
        }
    }
}
