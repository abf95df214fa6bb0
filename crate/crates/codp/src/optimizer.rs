//! Deadline feasibility and cost minimization over decoupling positions.
//!
//! Feasibility follows the delivery constraint: a position `p` is admissible
//! when the order-driven suffix `p+1..=N` finishes within the deadline. The
//! discrete optimizer exhaustively ranks the feasible window; the relaxed
//! optimizer minimizes the fitted continuous objective and then defers to a
//! discrete check, which is authoritative.

use crate::cost::{
    fitted_total_cost, total_cost, CostBreakdown, CostError, FittedCostModel, ReconfigurationSet,
};
use crate::inventory::{buffer_plan, BufferPlan, InventoryError, ServiceParams};
use crate::production::{
    codp_candidates, custom_lead_time, CodpPosition, LineError, ProductionLine,
};
use thiserror::Error;

/// Fallback guidance when no decoupling position can meet the deadline.
pub const MAKE_TO_STOCK_ADVISORY: &str = "produce the whole line to stock and serve orders from finished inventory";

/// Errors raised by feasibility analysis and optimization.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum OptimizerError {
    #[error("line has no decoupling candidates: the first process is already personalized")]
    NoCandidates,
    #[error(
        "deadline {deadline} is below the fastest customized route {min_custom_time}; {MAKE_TO_STOCK_ADVISORY}",
        deadline = .verdict.deadline,
        min_custom_time = .verdict.min_custom_time
    )]
    InfeasibleDeadline { verdict: FeasibilityVerdict },
    #[error("deadline must be non-negative and finite, got {value}")]
    InvalidDeadline { value: f64 },
    #[error("deadline sweep needs at least one deadline")]
    EmptyDeadlines,
    #[error(transparent)]
    Line(#[from] LineError),
    #[error(transparent)]
    Cost(#[from] CostError),
    #[error(transparent)]
    Inventory(#[from] InventoryError),
}

/// Cardinality classification of the feasible window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Infeasible,
    ExactlyOne,
    Window,
}

/// Which positions can deliver within the deadline.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityVerdict {
    pub regime: Regime,
    /// Feasible positions in ascending order; contiguous up to frontier−1.
    pub window: Vec<CodpPosition>,
    /// Fastest possible customized route: custom lead time at frontier−1.
    pub min_custom_time: f64,
    pub deadline: f64,
}

/// Where the deadline falls relative to the line's time scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeadlineRegime {
    /// Below every customized route; nothing feasible.
    ShortDeadline,
    /// Exactly the fastest customized route; the buffer must sit immediately
    /// before the first personalized process.
    ExactDeadline,
    /// Between the fastest route and the whole line time.
    MiddleDeadline,
    /// At or beyond the whole line time; the deadline no longer binds.
    LongDeadline,
}

/// One evaluated position: its cost breakdown, delivery time, and buffer.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedPosition {
    pub position: CodpPosition,
    pub breakdown: CostBreakdown,
    pub custom_lead_time: f64,
    pub buffer: BufferPlan,
}

/// Optimizer output: cheapest feasible position plus the runner-up.
#[derive(Debug, Clone, PartialEq)]
pub struct Recommendation {
    pub best: RankedPosition,
    /// Second-lowest total within the window; absent for singleton windows.
    pub second_best: Option<RankedPosition>,
    pub verdict: FeasibilityVerdict,
    pub regime_note: DeadlineRegime,
}

/// Result of minimizing the fitted continuous objective.
#[derive(Debug, Clone, PartialEq)]
pub struct RelaxedOptimum {
    /// Continuous minimizer of the fitted objective over the window span.
    pub p_star: f64,
    /// Fitted objective value at `p_star`.
    pub fitted_cost: f64,
    /// Cheaper of the two integer neighbors under the discrete objective.
    pub rounded_position: CodpPosition,
    pub rounded_breakdown: CostBreakdown,
}

/// One row of a deadline sweep. Infeasible deadlines are data, not errors.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepEntry {
    pub deadline: f64,
    pub outcome: SweepOutcome,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SweepOutcome {
    Feasible(Box<Recommendation>),
    Infeasible(FeasibilityVerdict),
}

/// Classifies every candidate position against the delivery deadline.
pub fn feasible_window(
    line: &ProductionLine,
    deadline: f64,
) -> Result<FeasibilityVerdict, OptimizerError> {
    if !(deadline >= 0.0) || !deadline.is_finite() {
        return Err(OptimizerError::InvalidDeadline { value: deadline });
    }
    let candidates = codp_candidates(line);
    if candidates.is_empty() {
        return Err(OptimizerError::NoCandidates);
    }
    let last = *candidates.last().expect("non-empty candidates");
    let min_custom_time = custom_lead_time(line, last)?;
    let mut window = Vec::new();
    for &p in &candidates {
        if custom_lead_time(line, p)? <= deadline {
            window.push(p);
        }
    }
    let regime = match window.len() {
        0 => Regime::Infeasible,
        1 => Regime::ExactlyOne,
        _ => Regime::Window,
    };
    Ok(FeasibilityVerdict {
        regime,
        window,
        min_custom_time,
        deadline,
    })
}

fn classify_deadline(verdict: &FeasibilityVerdict, total_time: f64) -> DeadlineRegime {
    if verdict.window.is_empty() {
        DeadlineRegime::ShortDeadline
    } else if verdict.deadline == verdict.min_custom_time {
        DeadlineRegime::ExactDeadline
    } else if verdict.deadline >= total_time {
        DeadlineRegime::LongDeadline
    } else {
        DeadlineRegime::MiddleDeadline
    }
}

/// Evaluates a single candidate: cost breakdown under the default
/// reconfiguration set, custom lead time, and buffer plan.
pub fn rank_position(
    line: &ProductionLine,
    p: CodpPosition,
    params: &ServiceParams,
    volume: f64,
) -> Result<RankedPosition, OptimizerError> {
    let recfg = ReconfigurationSet::default_for(line, p);
    let breakdown = total_cost(line, p, &recfg, volume)?;
    let lead = custom_lead_time(line, p)?;
    let buffer = buffer_plan(line, p, params)?;
    Ok(RankedPosition {
        position: p,
        breakdown,
        custom_lead_time: lead,
        buffer,
    })
}

/// Exhaustive minimization over the feasible window.
///
/// Positions are scanned in ascending order and replaced only on strictly
/// lower total, so cost ties resolve to the smallest position. The runner-up
/// follows the same rule over the remaining window.
pub fn optimize_discrete(
    line: &ProductionLine,
    params: &ServiceParams,
    deadline: f64,
    volume: f64,
) -> Result<Recommendation, OptimizerError> {
    let verdict = feasible_window(line, deadline)?;
    if verdict.window.is_empty() {
        return Err(OptimizerError::InfeasibleDeadline { verdict });
    }
    let mut best: Option<RankedPosition> = None;
    for &p in &verdict.window {
        let ranked = rank_position(line, p, params, volume)?;
        let better = match &best {
            None => true,
            Some(b) => ranked.breakdown.total < b.breakdown.total,
        };
        if better {
            best = Some(ranked);
        }
    }
    let best = best.expect("window verified non-empty");
    let mut second_best: Option<RankedPosition> = None;
    for &p in &verdict.window {
        if p == best.position {
            continue;
        }
        let ranked = rank_position(line, p, params, volume)?;
        let better = match &second_best {
            None => true,
            Some(b) => ranked.breakdown.total < b.breakdown.total,
        };
        if better {
            second_best = Some(ranked);
        }
    }
    let regime_note = classify_deadline(&verdict, line.total_time());
    Ok(Recommendation {
        best,
        second_best,
        verdict,
        regime_note,
    })
}

/// Minimizes the fitted objective over the window span, then lets the
/// discrete objective pick between the two neighboring integer positions.
///
/// The continuous stage runs a 1001-point grid scan followed by one parabolic
/// refinement through the best grid point and its neighbors; both stages are
/// deterministic.
pub fn optimize_relaxed(
    model: &FittedCostModel,
    verdict: &FeasibilityVerdict,
) -> Result<RelaxedOptimum, OptimizerError> {
    if verdict.window.is_empty() {
        return Err(OptimizerError::InfeasibleDeadline {
            verdict: verdict.clone(),
        });
    }
    let lo = verdict.window.first().expect("non-empty").get() as f64;
    let hi = verdict.window.last().expect("non-empty").get() as f64;

    let (mut p_star, mut f_star) = (lo, fitted_total_cost(model, lo)?);
    if hi > lo {
        const STEPS: usize = 1000;
        let step = (hi - lo) / STEPS as f64;
        let mut grid_idx = 0usize;
        for i in 1..=STEPS {
            let x = lo + step * i as f64;
            let f = fitted_total_cost(model, x)?;
            if f < f_star {
                p_star = x;
                f_star = f;
                grid_idx = i;
            }
        }
        // parabola through the winning grid point and its neighbors; the
        // vertex only replaces the grid point when it actually improves
        if grid_idx > 0 && grid_idx < STEPS {
            let x0 = lo + step * (grid_idx - 1) as f64;
            let x2 = lo + step * (grid_idx + 1) as f64;
            let f0 = fitted_total_cost(model, x0)?;
            let f2 = fitted_total_cost(model, x2)?;
            let denom = f0 - 2.0 * f_star + f2;
            if denom > 0.0 {
                let vertex = p_star + 0.5 * step * (f0 - f2) / denom;
                if vertex.is_finite() && vertex >= x0 && vertex <= x2 {
                    let fv = fitted_total_cost(model, vertex)?;
                    if fv < f_star {
                        p_star = vertex;
                        f_star = fv;
                    }
                }
            }
        }
    }

    // integer neighbors exist inside the window because it is contiguous
    let floor = CodpPosition::new(p_star.floor() as usize);
    let ceil = CodpPosition::new(p_star.ceil() as usize);
    let line = model.line();
    let volume = model.volume();
    let floor_cost = total_cost(
        line,
        floor,
        &ReconfigurationSet::default_for(line, floor),
        volume,
    )?;
    let (rounded_position, rounded_breakdown) = if ceil == floor {
        (floor, floor_cost)
    } else {
        let ceil_cost = total_cost(
            line,
            ceil,
            &ReconfigurationSet::default_for(line, ceil),
            volume,
        )?;
        if ceil_cost.total < floor_cost.total {
            (ceil, ceil_cost)
        } else {
            (floor, floor_cost)
        }
    };
    Ok(RelaxedOptimum {
        p_star,
        fitted_cost: f_star,
        rounded_position,
        rounded_breakdown,
    })
}

/// Runs the discrete optimizer across several deadlines. Infeasible
/// deadlines land in the sweep as data; only structural problems error.
pub fn deadline_sweep(
    line: &ProductionLine,
    params: &ServiceParams,
    deadlines: &[f64],
    volume: f64,
) -> Result<Vec<SweepEntry>, OptimizerError> {
    if deadlines.is_empty() {
        return Err(OptimizerError::EmptyDeadlines);
    }
    let mut entries = Vec::with_capacity(deadlines.len());
    for &deadline in deadlines {
        let outcome = match optimize_discrete(line, params, deadline, volume) {
            Ok(rec) => SweepOutcome::Feasible(Box::new(rec)),
            Err(OptimizerError::InfeasibleDeadline { verdict }) => {
                SweepOutcome::Infeasible(verdict)
            }
            Err(other) => return Err(other),
        };
        entries.push(SweepEntry { deadline, outcome });
    }
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::production::{build_line, StageProfile};
    use proptest::prelude::*;

    fn stage(index: usize, time: f64, generic: f64, custom: f64, modification: f64) -> StageProfile {
        StageProfile {
            index,
            time_mean: time,
            time_std: 0.0,
            generic_unit_cost: generic,
            custom_unit_cost: custom,
            modification_cost: modification,
            holding_cost: 0.0,
            turnover: 1.0,
            std_inventory: 0.0,
            inventory_adjustment: 0.0,
        }
    }

    fn simple_params() -> ServiceParams {
        ServiceParams::from_service_level(0.95, 1.0).unwrap()
    }

    fn four_stage_line() -> ProductionLine {
        let stages = vec![
            stage(1, 2.0, 1.0, 8.0, 0.0),
            stage(2, 2.0, 2.0, 6.0, 0.0),
            stage(3, 2.0, 4.0, 4.0, 0.0),
            stage(4, 2.0, 8.0, 2.0, 0.0),
        ];
        build_line(stages, 3, 1.0, 0.0).unwrap()
    }

    #[test]
    fn window_from_suffix_sums() {
        // times [2,2,2,2], frontier 3: custom(1)=6, custom(2)=4
        let line = four_stage_line();
        let verdict = feasible_window(&line, 5.0).unwrap();
        assert_eq!(verdict.regime, Regime::ExactlyOne);
        assert_eq!(
            verdict.window,
            vec![CodpPosition::new(2)]
        );
        assert_eq!(verdict.min_custom_time, 4.0);
    }

    #[test]
    fn slack_deadline_admits_all_candidates() {
        let line = four_stage_line();
        let verdict = feasible_window(&line, 100.0).unwrap();
        assert_eq!(verdict.regime, Regime::Window);
        assert_eq!(verdict.window.len(), 2);
    }

    #[test]
    fn tight_deadline_is_infeasible() {
        let line = four_stage_line();
        let verdict = feasible_window(&line, 3.0).unwrap();
        assert_eq!(verdict.regime, Regime::Infeasible);
        assert!(verdict.window.is_empty());
    }

    #[test]
    fn frontier_at_first_process_has_no_candidates() {
        let stages = vec![stage(1, 1.0, 1.0, 1.0, 0.0), stage(2, 1.0, 1.0, 1.0, 0.0)];
        let line = build_line(stages, 1, 1.0, 0.0).unwrap();
        assert_eq!(
            feasible_window(&line, 5.0),
            Err(OptimizerError::NoCandidates)
        );
    }

    #[test]
    fn rejects_invalid_deadline() {
        let line = four_stage_line();
        for d in [-1.0, f64::NAN, f64::INFINITY] {
            assert!(matches!(
                feasible_window(&line, d),
                Err(OptimizerError::InvalidDeadline { .. })
            ));
        }
    }

    #[test]
    fn singleton_window_is_forced_choice() {
        let line = four_stage_line();
        let rec = optimize_discrete(&line, &simple_params(), 5.0, 1.0).unwrap();
        assert_eq!(rec.best.position, CodpPosition::new(2));
        assert!(rec.second_best.is_none());
    }

    #[test]
    fn infeasible_deadline_carries_advisory() {
        let line = four_stage_line();
        let err = optimize_discrete(&line, &simple_params(), 1.0, 1.0).unwrap_err();
        let text = err.to_string();
        assert!(text.contains(MAKE_TO_STOCK_ADVISORY), "got: {text}");
        match err {
            OptimizerError::InfeasibleDeadline { verdict } => {
                assert_eq!(verdict.regime, Regime::Infeasible);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn equal_totals_resolve_to_smaller_position() {
        // symmetric costs: total identical at both candidates
        let stages = vec![
            stage(1, 1.0, 3.0, 5.0, 0.0),
            stage(2, 1.0, 3.0, 3.0, 0.0),
            stage(3, 1.0, 5.0, 3.0, 0.0),
        ];
        let line = build_line(stages, 3, 1.0, 0.0).unwrap();
        let rec = optimize_discrete(&line, &simple_params(), 10.0, 1.0).unwrap();
        let t1 = rec.best.breakdown.total;
        let t2 = rec.second_best.as_ref().unwrap().breakdown.total;
        assert_eq!(t1, t2);
        assert_eq!(rec.best.position, CodpPosition::new(1));
    }

    #[test]
    fn best_position_meets_deadline() {
        let line = four_stage_line();
        let rec = optimize_discrete(&line, &simple_params(), 6.0, 1.0).unwrap();
        assert!(rec.best.custom_lead_time <= 6.0);
    }

    #[test]
    fn exact_deadline_regime_forces_latest_candidate() {
        let line = four_stage_line();
        // min_custom_time = custom(2) = 4
        let rec = optimize_discrete(&line, &simple_params(), 4.0, 1.0).unwrap();
        assert_eq!(rec.regime_note, DeadlineRegime::ExactDeadline);
        assert_eq!(rec.best.position, CodpPosition::new(2));
        assert_eq!(rec.verdict.window, vec![CodpPosition::new(2)]);
    }

    #[test]
    fn long_deadline_regime_at_total_time() {
        let line = four_stage_line();
        let rec = optimize_discrete(&line, &simple_params(), 8.0, 1.0).unwrap();
        assert_eq!(rec.regime_note, DeadlineRegime::LongDeadline);
        let mid = optimize_discrete(&line, &simple_params(), 6.0, 1.0).unwrap();
        assert_eq!(mid.regime_note, DeadlineRegime::MiddleDeadline);
    }

    #[test]
    fn sweep_keeps_infeasible_entries_as_data() {
        let line = four_stage_line();
        let entries =
            deadline_sweep(&line, &simple_params(), &[1.0, 4.0, 100.0], 1.0).unwrap();
        assert_eq!(entries.len(), 3);
        assert!(matches!(entries[0].outcome, SweepOutcome::Infeasible(_)));
        assert!(matches!(entries[1].outcome, SweepOutcome::Feasible(_)));
        assert!(matches!(entries[2].outcome, SweepOutcome::Feasible(_)));
    }

    #[test]
    fn sweep_rejects_empty_deadline_list() {
        let line = four_stage_line();
        assert_eq!(
            deadline_sweep(&line, &simple_params(), &[], 1.0),
            Err(OptimizerError::EmptyDeadlines)
        );
    }

    #[test]
    fn duplicate_deadlines_give_identical_rows() {
        let line = four_stage_line();
        let entries = deadline_sweep(&line, &simple_params(), &[6.0, 6.0], 1.0).unwrap();
        assert_eq!(entries[0], entries[1]);
    }

    fn convex_line() -> ProductionLine {
        // falling custom costs against rising generic costs give an interior
        // minimum over candidates 1..=7
        let stages = (1..=8)
            .map(|i| {
                let x = i as f64;
                stage(
                    i,
                    1.0,
                    1.5 * x * x + 2.0 * x + 5.0,
                    150.0 * (-0.35 * x).exp(),
                    2.0 * (0.25 * x).exp(),
                )
            })
            .collect();
        build_line(stages, 8, 1.0, 0.0).unwrap()
    }

    #[test]
    fn relaxed_interior_minimum_agrees_with_discrete() {
        let line = convex_line();
        let model = FittedCostModel::from_line(&line, 1.0).unwrap();
        let verdict = feasible_window(&line, 100.0).unwrap();
        let relaxed = optimize_relaxed(&model, &verdict).unwrap();
        let discrete = optimize_discrete(&line, &simple_params(), 100.0, 1.0).unwrap();
        assert!(relaxed.p_star > 1.0 && relaxed.p_star < 7.0, "p* = {}", relaxed.p_star);
        assert_eq!(relaxed.rounded_position, discrete.best.position);
        assert!(relaxed.rounded_breakdown.total >= discrete.best.breakdown.total);
    }

    #[test]
    fn relaxed_boundary_minimum_on_increasing_objective() {
        // no custom costs: total rises with p, so the window minimum wins
        let stages = (1..=6)
            .map(|i| stage(i, 1.0, 10.0 * i as f64, 0.0, 0.0))
            .collect();
        let line = build_line(stages, 6, 1.0, 0.0).unwrap();
        let model = FittedCostModel::from_line(&line, 1.0).unwrap();
        let verdict = feasible_window(&line, 100.0).unwrap();
        let relaxed = optimize_relaxed(&model, &verdict).unwrap();
        assert!((relaxed.p_star - 1.0).abs() < 1e-9);
        assert_eq!(relaxed.rounded_position, CodpPosition::new(1));
    }

    #[test]
    fn relaxed_singleton_window() {
        let line = four_stage_line();
        let model = FittedCostModel::from_line(&line, 1.0).unwrap();
        let verdict = feasible_window(&line, 5.0).unwrap();
        let relaxed = optimize_relaxed(&model, &verdict).unwrap();
        assert_eq!(relaxed.p_star, 2.0);
        assert_eq!(relaxed.rounded_position, CodpPosition::new(2));
    }

    /// Independent brute-force enumerator mirroring the production cost path
    /// term by term, written against the raw stage fields.
    fn brute_force(
        line: &ProductionLine,
        deadline: f64,
        volume: f64,
    ) -> Option<(usize, f64)> {
        let n = line.len();
        let frontier = line.personalization_frontier();
        let mut best: Option<(usize, f64)> = None;
        for p in 1..frontier {
            let suffix_time: f64 = (p..n).map(|i| line.stages()[i].time_mean).sum();
            if suffix_time > deadline {
                continue;
            }
            let generic: f64 = (0..p).map(|i| line.stages()[i].generic_unit_cost).sum();
            let custom: f64 = (p..n).map(|i| line.stages()[i].custom_unit_cost).sum();
            let mut holding = 0.0;
            for s in &line.stages()[..p] {
                holding += s.holding_cost * (s.std_inventory + s.inventory_adjustment)
                    / s.turnover;
            }
            let mut recfg = 0.0;
            for s in &line.stages()[p..frontier] {
                recfg += s.modification_cost;
            }
            let total = volume * generic + holding + volume * custom + recfg;
            let better = match best {
                None => true,
                Some((_, t)) => total < t,
            };
            if better {
                best = Some((p, total));
            }
        }
        best
    }

    proptest! {
        #[test]
        fn matches_brute_force_oracle(
            rows in proptest::collection::vec(
                (0.0f64..5.0, 0.0f64..100.0, 0.0f64..100.0, 0.0f64..50.0, 0.0f64..3.0, 1.0f64..20.0, 0.0f64..80.0),
                2..10,
            ),
            frontier_frac in 0.0f64..1.0,
            deadline in 0.0f64..30.0,
        ) {
            let n = rows.len();
            let stages: Vec<StageProfile> = rows
                .iter()
                .enumerate()
                .map(|(i, &(t, g, c, m, h, r, inv))| StageProfile {
                    index: i + 1,
                    time_mean: t,
                    time_std: 0.0,
                    generic_unit_cost: g,
                    custom_unit_cost: c,
                    modification_cost: m,
                    holding_cost: h,
                    turnover: r,
                    std_inventory: inv,
                    inventory_adjustment: 0.0,
                })
                .collect();
            let frontier = 2 + ((n - 2) as f64 * frontier_frac) as usize;
            let line = build_line(stages, frontier.min(n), 1.0, 0.0).unwrap();
            let params = simple_params();
            let oracle = brute_force(&line, deadline, 1.0);
            match optimize_discrete(&line, &params, deadline, 1.0) {
                Ok(rec) => {
                    let (op, ot) = oracle.expect("oracle disagrees: no feasible position");
                    prop_assert_eq!(rec.best.position.get(), op);
                    prop_assert_eq!(rec.best.breakdown.total, ot);
                }
                Err(OptimizerError::InfeasibleDeadline { .. }) => {
                    prop_assert!(oracle.is_none());
                }
                Err(e) => return Err(TestCaseError::fail(format!("{e}"))),
            }
        }

        #[test]
        fn best_total_non_increasing_in_deadline(
            rows in proptest::collection::vec(
                (0.0f64..5.0, 0.0f64..100.0, 0.0f64..100.0, 0.0f64..50.0),
                2..10,
            ),
            mut deadlines in proptest::collection::vec(0.0f64..30.0, 2..6),
        ) {
            let n = rows.len();
            let stages: Vec<StageProfile> = rows
                .iter()
                .enumerate()
                .map(|(i, &(t, g, c, m))| stage(i + 1, t, g, c, m))
                .collect();
            let line = build_line(stages, n, 1.0, 0.0).unwrap();
            deadlines.sort_by(f64::total_cmp);
            let entries = deadline_sweep(&line, &simple_params(), &deadlines, 1.0).unwrap();
            let mut prev = f64::INFINITY;
            for entry in &entries {
                if let SweepOutcome::Feasible(rec) = &entry.outcome {
                    prop_assert!(rec.best.breakdown.total <= prev + 1e-12 * prev.abs().max(1.0));
                    prev = rec.best.breakdown.total;
                }
            }
        }

        #[test]
        fn repeated_runs_identical(
            rows in proptest::collection::vec(
                (0.0f64..5.0, 0.0f64..100.0, 0.0f64..100.0, 0.0f64..50.0),
                3..8,
            ),
            deadline in 0.0f64..30.0,
        ) {
            let n = rows.len();
            let stages: Vec<StageProfile> = rows
                .iter()
                .enumerate()
                .map(|(i, &(t, g, c, m))| stage(i + 1, t, g, c, m))
                .collect();
            let line = build_line(stages, n, 1.0, 0.0).unwrap();
            let once = optimize_discrete(&line, &simple_params(), deadline, 1.0);
            let twice = optimize_discrete(&line, &simple_params(), deadline, 1.0);
            prop_assert_eq!(once, twice);
        }

        #[test]
        fn relaxed_never_beats_discrete(
            rows in proptest::collection::vec(
                (0.5f64..80.0, 0.5f64..80.0, 0.0f64..40.0),
                4..10,
            ),
        ) {
            let n = rows.len();
            let stages: Vec<StageProfile> = rows
                .iter()
                .enumerate()
                .map(|(i, &(g, c, m))| stage(i + 1, 1.0, g, c, m))
                .collect();
            let line = build_line(stages, n, 1.0, 0.0).unwrap();
            let model = FittedCostModel::from_line(&line, 1.0).unwrap();
            let verdict = feasible_window(&line, 1e6).unwrap();
            let relaxed = optimize_relaxed(&model, &verdict).unwrap();
            let discrete = optimize_discrete(&line, &simple_params(), 1e6, 1.0).unwrap();
            prop_assert!(relaxed.rounded_breakdown.total >= discrete.best.breakdown.total - 1e-9);
        }
    }
}
