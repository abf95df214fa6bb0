//! Report rendering.
//!
//! Every command renders through these helpers so the two output modes stay
//! in lockstep. Human mode prints aligned text with rounded figures; machine
//! mode prints `key=value` lines with shortest round-trip floats. Both are
//! byte-deterministic for a fixed input, which the reproducibility tests
//! rely on.

use std::fmt::Display;
use std::fmt::Write as _;

use crate::cost::{CostBreakdown, MonotonicityReport, TrendExpectation};
use crate::fitting::{DifferenceReport, FittedCurve, ModelFamily};
use crate::inventory::BufferPlan;
use crate::optimizer::{
    DeadlineRegime, FeasibilityVerdict, Recommendation, Regime, SweepEntry, SweepOutcome,
};
use crate::production::CodpPosition;
use crate::simulation::{SimConfig, SimReport, ValidationResult};

/// How reports are written to stdout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputMode {
    Human,
    Machine,
}

/// Accumulates `key=value` lines for machine mode.
pub(crate) struct Kv {
    out: String,
}

impl Kv {
    pub(crate) fn new(command: &str) -> Self {
        let mut kv = Kv { out: String::new() };
        kv.push("command", command);
        kv
    }

    pub(crate) fn push<V: Display>(&mut self, key: &str, value: V) {
        let _ = writeln!(self.out, "{key}={value}");
    }

    pub(crate) fn push_float(&mut self, key: &str, value: f64) {
        let _ = writeln!(self.out, "{key}={value}");
    }

    pub(crate) fn finish(self) -> String {
        self.out
    }
}

pub(crate) fn regime_label(regime: Regime) -> &'static str {
    match regime {
        Regime::Infeasible => "infeasible",
        Regime::ExactlyOne => "exactly_one",
        Regime::Window => "window",
    }
}

pub(crate) fn regime_note_label(note: DeadlineRegime) -> &'static str {
    match note {
        DeadlineRegime::ShortDeadline => "short",
        DeadlineRegime::ExactDeadline => "exact",
        DeadlineRegime::LongDeadline => "long",
        DeadlineRegime::MiddleDeadline => "middle",
    }
}

fn trend_label(trend: TrendExpectation) -> &'static str {
    match trend {
        TrendExpectation::Increasing => "increasing",
        TrendExpectation::Decreasing => "decreasing",
    }
}

fn join_floats(values: impl IntoIterator<Item = f64>) -> String {
    let mut out = String::new();
    for (i, v) in values.into_iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "{v}");
    }
    out
}

fn join_positions(values: &[CodpPosition]) -> String {
    let mut out = String::new();
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "{v}");
    }
    out
}

/// Renders a fitted curve as an explicit formula.
pub fn equation(curve: &FittedCurve) -> String {
    let c = &curve.coefficients;
    match curve.family {
        ModelFamily::Linear => format!("y = {:.6} x + {:.6}", c[0], c[1]),
        ModelFamily::Quadratic => {
            format!("y = {:.6} x^2 + {:.6} x + {:.6}", c[0], c[1], c[2])
        }
        ModelFamily::Exponential => format!("y = {:.6} exp({:.6} x)", c[0], c[1]),
    }
}

/// One fitted cost series, prepared by the fit command.
pub struct SeriesFit {
    pub name: &'static str,
    pub observed: Vec<f64>,
    pub fitted: Vec<f64>,
    pub profile: DifferenceReport,
    pub curve: FittedCurve,
}

pub(crate) fn render_fit(
    mode: OutputMode,
    stage_count: usize,
    cv_threshold: f64,
    series: &[SeriesFit],
    files: &[String],
) -> String {
    match mode {
        OutputMode::Machine => {
            let mut kv = Kv::new("fit");
            kv.push("stages", stage_count);
            kv.push_float("cv_threshold", cv_threshold);
            for s in series {
                let prefix = format!("series.{}", s.name);
                kv.push(
                    &format!("{prefix}.suggested"),
                    s.profile.suggested_family,
                );
                kv.push(&format!("{prefix}.selected"), s.curve.family);
                kv.push_float(&format!("{prefix}.r_squared"), s.curve.r_squared);
                kv.push(
                    &format!("{prefix}.coefficients"),
                    join_floats(s.curve.coefficients.iter().copied()),
                );
            }
            push_files(&mut kv, files);
            kv.finish()
        }
        OutputMode::Human => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "cost curve fit over {stage_count} stages (cv threshold {cv_threshold})"
            );
            for s in series {
                let _ = writeln!(out);
                let _ = writeln!(out, "{}", s.name);
                let _ = writeln!(
                    out,
                    "  difference profile suggests : {}",
                    s.profile.suggested_family
                );
                let _ = writeln!(
                    out,
                    "  selected                    : {}   {}",
                    s.curve.family,
                    equation(&s.curve)
                );
                let _ = writeln!(out, "  r_squared                   : {:.9}", s.curve.r_squared);
            }
            push_files_human(&mut out, files);
            out
        }
    }
}

/// Plot data for one fitted series: stage, observed, fitted.
pub(crate) fn fit_plot_csv(s: &SeriesFit) -> String {
    let mut out = String::from("stage,observed,fitted\n");
    for (i, (obs, fit)) in s.observed.iter().zip(&s.fitted).enumerate() {
        let _ = writeln!(out, "{},{},{}", i + 1, obs, fit);
    }
    out
}

/// Everything the locate command has computed, ready for rendering.
pub struct LocateView<'a> {
    pub deadline: f64,
    pub total_time: f64,
    pub recommendation: &'a Recommendation,
    /// Per-candidate rows across the feasible window: position, costs, custom
    /// lead time.
    pub window_rows: &'a [(CodpPosition, CostBreakdown, f64)],
    pub monotonicity: &'a [(String, TrendExpectation, MonotonicityReport)],
}

fn push_breakdown(kv: &mut Kv, prefix: &str, b: &CostBreakdown) {
    kv.push_float(&format!("{prefix}.generic_processing"), b.generic_processing);
    kv.push_float(&format!("{prefix}.wip_holding"), b.wip_holding);
    kv.push_float(&format!("{prefix}.custom_incremental"), b.custom_incremental);
    kv.push_float(&format!("{prefix}.reconfiguration"), b.reconfiguration);
    kv.push_float(&format!("{prefix}.total"), b.total);
}

fn push_buffer(kv: &mut Kv, plan: &BufferPlan) {
    kv.push("buffer.position", plan.position.get());
    kv.push_float("buffer.replenishment_cycle", plan.replenishment_cycle);
    kv.push_float("buffer.review_period", plan.review_period);
    kv.push_float("buffer.safety_stock", plan.safety_stock);
    kv.push_float("buffer.timing_buffer", plan.timing_buffer);
    kv.push_float("buffer.order_up_to", plan.order_up_to);
    kv.push_float("buffer.average_inventory", plan.average_inventory);
    kv.push_float("buffer.max_inventory", plan.max_inventory);
}

fn push_verdict(kv: &mut Kv, verdict: &FeasibilityVerdict) {
    kv.push_float("deadline", verdict.deadline);
    kv.push_float("min_custom_time", verdict.min_custom_time);
    kv.push("regime", regime_label(verdict.regime));
    kv.push("window", join_positions(&verdict.window));
}

fn push_files(kv: &mut Kv, files: &[String]) {
    if !files.is_empty() {
        kv.push("files", files.join(","));
    }
}

fn push_files_human(out: &mut String, files: &[String]) {
    for f in files {
        let _ = writeln!(out, "wrote {f}");
    }
}

fn human_buffer(out: &mut String, plan: &BufferPlan) {
    let _ = writeln!(out, "buffer plan at p = {}", plan.position.get());
    let _ = writeln!(out, "  replenishment cycle : {:.4}", plan.replenishment_cycle);
    let _ = writeln!(out, "  review period       : {:.4}", plan.review_period);
    let _ = writeln!(out, "  safety stock        : {:.4}", plan.safety_stock);
    let _ = writeln!(out, "  timing buffer       : {:.4}", plan.timing_buffer);
    let _ = writeln!(out, "  order-up-to level   : {:.4}", plan.order_up_to);
    let _ = writeln!(out, "  average inventory   : {:.4}", plan.average_inventory);
    let _ = writeln!(out, "  max inventory       : {:.4}", plan.max_inventory);
}

pub(crate) fn render_locate(mode: OutputMode, view: &LocateView, files: &[String]) -> String {
    let rec = view.recommendation;
    match mode {
        OutputMode::Machine => {
            let mut kv = Kv::new("locate");
            push_verdict(&mut kv, &rec.verdict);
            kv.push("regime_note", regime_note_label(rec.regime_note));
            kv.push_float("total_time", view.total_time);
            for (p, breakdown, lead) in view.window_rows {
                let prefix = format!("cost.{}", p.get());
                push_breakdown(&mut kv, &prefix, breakdown);
                kv.push_float(&format!("{prefix}.custom_lead_time"), *lead);
            }
            kv.push("best.position", rec.best.position.get());
            kv.push_float("best.custom_lead_time", rec.best.custom_lead_time);
            push_breakdown(&mut kv, "best", &rec.best.breakdown);
            if let Some(second) = &rec.second_best {
                kv.push("second.position", second.position.get());
                kv.push_float("second.total", second.breakdown.total);
            }
            push_buffer(&mut kv, &rec.best.buffer);
            for (name, expected, report) in view.monotonicity {
                kv.push(&format!("monotonicity.{name}.expected"), trend_label(*expected));
                kv.push(&format!("monotonicity.{name}.passed"), report.passed);
                kv.push(
                    &format!("monotonicity.{name}.violations"),
                    report.violations.len(),
                );
            }
            push_files(&mut kv, files);
            kv.finish()
        }
        OutputMode::Human => {
            let mut out = String::new();
            let v = &rec.verdict;
            let _ = writeln!(
                out,
                "deadline {} (fastest custom route {}, total line time {}): {} regime",
                v.deadline,
                v.min_custom_time,
                view.total_time,
                regime_note_label(rec.regime_note)
            );
            let _ = writeln!(
                out,
                "feasible window: {} candidate position(s): {}",
                v.window.len(),
                join_positions(&v.window)
            );
            let _ = writeln!(out);
            let _ = writeln!(
                out,
                "   p      total    generic    holding     custom   reconfig  custom_lt"
            );
            for (p, b, lead) in view.window_rows {
                let marker = if *p == rec.best.position { '*' } else { ' ' };
                let _ = writeln!(
                    out,
                    "{marker}{:>3} {:>10.2} {:>10.2} {:>10.2} {:>10.2} {:>10.2} {:>10.2}",
                    p.get(),
                    b.total,
                    b.generic_processing,
                    b.wip_holding,
                    b.custom_incremental,
                    b.reconfiguration,
                    lead
                );
            }
            let _ = writeln!(out);
            let _ = writeln!(
                out,
                "best p = {} (total {:.4})",
                rec.best.position.get(),
                rec.best.breakdown.total
            );
            if let Some(second) = &rec.second_best {
                let _ = writeln!(
                    out,
                    "runner-up p = {} (total {:.4})",
                    second.position.get(),
                    second.breakdown.total
                );
            }
            let _ = writeln!(out);
            human_buffer(&mut out, &rec.best.buffer);
            if !view.monotonicity.is_empty() {
                let _ = writeln!(out);
                for (name, expected, report) in view.monotonicity {
                    let verdict = if report.passed {
                        "holds".to_string()
                    } else {
                        format!("violated on {} grid run(s)", report.violations.len())
                    };
                    let _ = writeln!(
                        out,
                        "monotonicity: {name} expected {} over the fitted range: {verdict}",
                        trend_label(*expected)
                    );
                }
            }
            push_files_human(&mut out, files);
            out
        }
    }
}

/// Plot data for the locate command: position, total across the window.
pub(crate) fn locate_plot_csv(window_rows: &[(CodpPosition, CostBreakdown, f64)]) -> String {
    let mut out = String::from("position,total\n");
    for (p, b, _) in window_rows {
        let _ = writeln!(out, "{},{}", p.get(), b.total);
    }
    out
}

pub(crate) fn render_sweep(
    mode: OutputMode,
    entries: &[SweepEntry],
    total_time: f64,
    files: &[String],
) -> String {
    match mode {
        OutputMode::Machine => {
            let mut kv = Kv::new("sweep");
            kv.push("rows", entries.len());
            kv.push_float("total_time", total_time);
            for (i, entry) in entries.iter().enumerate() {
                let prefix = format!("row.{}", i + 1);
                kv.push_float(&format!("{prefix}.deadline"), entry.deadline);
                match &entry.outcome {
                    SweepOutcome::Feasible(rec) => {
                        kv.push(&format!("{prefix}.outcome"), "feasible");
                        kv.push(
                            &format!("{prefix}.regime_note"),
                            regime_note_label(rec.regime_note),
                        );
                        kv.push(&format!("{prefix}.position"), rec.best.position.get());
                        kv.push_float(&format!("{prefix}.total"), rec.best.breakdown.total);
                        kv.push_float(
                            &format!("{prefix}.min_custom_time"),
                            rec.verdict.min_custom_time,
                        );
                    }
                    SweepOutcome::Infeasible(verdict) => {
                        kv.push(&format!("{prefix}.outcome"), "infeasible");
                        kv.push_float(
                            &format!("{prefix}.min_custom_time"),
                            verdict.min_custom_time,
                        );
                        kv.push(
                            &format!("{prefix}.advisory"),
                            crate::optimizer::MAKE_TO_STOCK_ADVISORY,
                        );
                    }
                }
            }
            push_files(&mut kv, files);
            kv.finish()
        }
        OutputMode::Human => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "deadline sweep over {} deadline(s), total line time {total_time}",
                entries.len()
            );
            let _ = writeln!(out);
            let _ = writeln!(out, "  deadline  outcome      p      total  note");
            for entry in entries {
                match &entry.outcome {
                    SweepOutcome::Feasible(rec) => {
                        let _ = writeln!(
                            out,
                            "{:>10}  feasible   {:>3} {:>10.2}  {}",
                            entry.deadline,
                            rec.best.position.get(),
                            rec.best.breakdown.total,
                            regime_note_label(rec.regime_note),
                        );
                    }
                    SweepOutcome::Infeasible(verdict) => {
                        let _ = writeln!(
                            out,
                            "{:>10}  infeasible   -          -  shortest feasible deadline is {}; {}",
                            entry.deadline,
                            verdict.min_custom_time,
                            crate::optimizer::MAKE_TO_STOCK_ADVISORY,
                        );
                    }
                }
            }
            push_files_human(&mut out, files);
            out
        }
    }
}

/// Plot data for the sweep: deadline, best total for feasible rows.
pub(crate) fn sweep_plot_csv(entries: &[SweepEntry]) -> String {
    let mut out = String::from("deadline,total\n");
    for entry in entries {
        if let SweepOutcome::Feasible(rec) = &entry.outcome {
            let _ = writeln!(out, "{},{}", entry.deadline, rec.best.breakdown.total);
        }
    }
    out
}

pub(crate) fn render_simulate(
    mode: OutputMode,
    cfg: &SimConfig,
    report: &SimReport,
    validation: &ValidationResult,
    target_service: f64,
    files: &[String],
) -> String {
    match mode {
        OutputMode::Machine => {
            let mut kv = Kv::new("simulate");
            kv.push("position", report.position.get());
            kv.push_float("order_up_to", report.order_up_to);
            kv.push("horizon", cfg.horizon);
            kv.push("warmup", cfg.warmup);
            kv.push("seed", cfg.seed);
            kv.push("replications", cfg.replications);
            kv.push("post_warmup_cycles", report.post_warmup_cycles);
            kv.push_float("pooled.cycle_service_level", report.cycle_service_level);
            kv.push_float("pooled.fill_rate", report.fill_rate);
            kv.push_float("pooled.average_inventory", report.average_inventory);
            kv.push_float(
                "pooled.max_inventory_observed",
                report.max_inventory_observed,
            );
            kv.push_float("pooled.mean_custom_lead_time", report.mean_custom_lead_time);
            kv.push("pooled.stockout_periods", report.stockout_periods);
            for (i, rep) in report.replications.iter().enumerate() {
                let prefix = format!("rep.{}", i + 1);
                kv.push_float(
                    &format!("{prefix}.cycle_service_level"),
                    rep.cycle_service_level,
                );
                kv.push_float(&format!("{prefix}.fill_rate"), rep.fill_rate);
                kv.push_float(
                    &format!("{prefix}.average_inventory"),
                    rep.average_inventory,
                );
            }
            kv.push_float("validation.service.observed", validation.service.observed);
            kv.push_float("validation.service.expected", validation.service.expected);
            kv.push("validation.service.passed", validation.service.passed);
            kv.push_float(
                "validation.average_inventory.observed",
                validation.average_inventory.observed,
            );
            kv.push_float(
                "validation.average_inventory.expected",
                validation.average_inventory.expected,
            );
            kv.push(
                "validation.average_inventory.passed",
                validation.average_inventory.passed,
            );
            kv.push("validation.all_passed", validation.all_passed);
            push_files(&mut kv, files);
            kv.finish()
        }
        OutputMode::Human => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "simulated p = {} (order-up-to {:.4}) for {} replication(s), horizon {} (warmup {}), seed {}",
                report.position.get(),
                report.order_up_to,
                cfg.replications,
                cfg.horizon,
                cfg.warmup,
                cfg.seed
            );
            let _ = writeln!(out, "  post-warmup cycles     : {}", report.post_warmup_cycles);
            let _ = writeln!(
                out,
                "  cycle service level    : {:.4}  (target {target_service})",
                report.cycle_service_level
            );
            let _ = writeln!(out, "  fill rate              : {:.4}", report.fill_rate);
            let _ = writeln!(
                out,
                "  average inventory      : {:.4}  (analytic {:.4})",
                report.average_inventory, validation.average_inventory.expected
            );
            let _ = writeln!(
                out,
                "  max inventory observed : {:.4}",
                report.max_inventory_observed
            );
            let _ = writeln!(
                out,
                "  mean custom lead time  : {:.4}",
                report.mean_custom_lead_time
            );
            let _ = writeln!(out, "  stockout periods       : {}", report.stockout_periods);
            let service = if validation.service.passed { "pass" } else { "FAIL" };
            let avg = if validation.average_inventory.passed {
                "pass"
            } else {
                "FAIL"
            };
            let overall = if validation.all_passed {
                "all checks passed"
            } else {
                "CHECKS FAILED"
            };
            let _ = writeln!(
                out,
                "validation: service {service}, average inventory {avg} -> {overall}"
            );
            push_files_human(&mut out, files);
            out
        }
    }
}

/// Plot data for the simulate command: period, end-of-period on-hand for the
/// first replication.
pub(crate) fn trajectory_plot_csv(report: &SimReport) -> String {
    let mut out = String::from("period,on_hand\n");
    for (i, level) in report.trajectory.iter().enumerate() {
        let _ = writeln!(out, "{},{}", i + 1, level);
    }
    out
}
