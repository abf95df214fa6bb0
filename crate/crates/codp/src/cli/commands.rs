//! Command pipelines behind the `codp` binary.
//!
//! Each command takes an already-loaded line and scenario, computes through
//! the library, and returns the rendered report. Plot data goes to the
//! optional output directory; stdout itself stays deterministic because file
//! listings use bare names.

use std::fmt;
use std::path::{Path, PathBuf};

use crate::cost::{FittedCostModel, MonotonicityReport, TrendExpectation};
use crate::fitting::{difference_profile, select_among, select_model, CostSeries};
use crate::inventory::ServiceParams;
use crate::optimizer::{
    deadline_sweep, optimize_discrete, rank_position, FeasibilityVerdict, OptimizerError,
};
use crate::production::{build_line, ProductionLine};
use crate::simulation::{simulate, validate_plan, SimError, Tolerances};

use super::render::{
    fit_plot_csv, locate_plot_csv, render_fit, render_locate, render_simulate, render_sweep,
    sweep_plot_csv, trajectory_plot_csv, LocateView, OutputMode, SeriesFit,
};
use super::scenario::{load_scenario, Scenario};
use super::table::read_stage_table;

/// Errors surfaced to the terminal, mapped onto process exit codes by
/// [`exit_code`].
#[derive(Debug)]
pub enum CliError {
    FileNotFound {
        path: PathBuf,
    },
    Io {
        path: PathBuf,
        reason: String,
    },
    /// A cell or key could not be read. `line` is 1-based; `column` is the
    /// column or key name when one applies, `-` otherwise.
    Parse {
        path: PathBuf,
        line: u64,
        column: String,
        reason: String,
    },
    Validation {
        reason: String,
    },
    /// The deadline admits no position; carries the verdict so the advisory
    /// reaches the terminal.
    Infeasible {
        verdict: FeasibilityVerdict,
    },
    Output {
        path: PathBuf,
        reason: String,
    },
    Internal {
        reason: String,
    },
}

impl CliError {
    pub(crate) fn parse(
        path: &Path,
        line: u64,
        column: &str,
        reason: impl fmt::Display,
    ) -> CliError {
        CliError::Parse {
            path: path.to_path_buf(),
            line,
            column: column.to_string(),
            reason: reason.to_string(),
        }
    }

    pub(crate) fn validation(reason: impl Into<String>) -> CliError {
        CliError::Validation {
            reason: reason.into(),
        }
    }

    pub(crate) fn open(path: &Path, err: &(dyn std::error::Error + 'static)) -> CliError {
        let mut cursor: Option<&(dyn std::error::Error + 'static)> = Some(err);
        while let Some(e) = cursor {
            if let Some(io) = e.downcast_ref::<std::io::Error>() {
                if io.kind() == std::io::ErrorKind::NotFound {
                    return CliError::FileNotFound {
                        path: path.to_path_buf(),
                    };
                }
                break;
            }
            cursor = e.source();
        }
        CliError::Io {
            path: path.to_path_buf(),
            reason: err.to_string(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::FileNotFound { path } => write!(f, "file not found: {}", path.display()),
            CliError::Io { path, reason } => {
                write!(f, "cannot read {}: {reason}", path.display())
            }
            CliError::Parse {
                path,
                line,
                column,
                reason,
            } => write!(
                f,
                "{}: line {line}, column {column}: {reason}",
                path.display()
            ),
            CliError::Validation { reason } => write!(f, "invalid input: {reason}"),
            CliError::Infeasible { verdict } => {
                let err = OptimizerError::InfeasibleDeadline {
                    verdict: verdict.clone(),
                };
                write!(f, "{err}")
            }
            CliError::Output { path, reason } => {
                write!(f, "cannot write {}: {reason}", path.display())
            }
            CliError::Internal { reason } => write!(f, "internal error: {reason}"),
        }
    }
}

impl std::error::Error for CliError {}

/// Process exit code for an error: 2 infeasible deadline, 3 bad input, 4
/// internal or environment failure. Successful runs exit 0.
pub fn exit_code(err: &CliError) -> i32 {
    match err {
        CliError::FileNotFound { .. }
        | CliError::Io { .. }
        | CliError::Parse { .. }
        | CliError::Validation { .. } => 3,
        CliError::Infeasible { .. } => 2,
        CliError::Output { .. } | CliError::Internal { .. } => 4,
    }
}

fn optimizer_error(err: OptimizerError) -> CliError {
    match err {
        OptimizerError::InfeasibleDeadline { verdict } => CliError::Infeasible { verdict },
        other => CliError::validation(other.to_string()),
    }
}

fn sim_error(err: SimError) -> CliError {
    match err {
        SimError::MismatchedPlan { reason } => CliError::Internal { reason },
        other => CliError::validation(other.to_string()),
    }
}

/// Reads both input files and assembles the production line.
pub fn load(stages_path: &Path, scenario_path: &Path) -> Result<(ProductionLine, Scenario), CliError> {
    let stages = read_stage_table(stages_path)?;
    let scenario = load_scenario(scenario_path)?;
    let line = build_line(
        stages,
        scenario.frontier,
        scenario.demand_rate,
        scenario.demand_std,
    )
    .map_err(|e| CliError::validation(e.to_string()))?;
    Ok((line, scenario))
}

fn write_outputs(
    out_dir: Option<&Path>,
    files: &[(String, String)],
) -> Result<Vec<String>, CliError> {
    let Some(dir) = out_dir else {
        return Ok(Vec::new());
    };
    std::fs::create_dir_all(dir).map_err(|e| CliError::Output {
        path: dir.to_path_buf(),
        reason: e.to_string(),
    })?;
    let mut written = Vec::with_capacity(files.len());
    for (name, content) in files {
        let path = dir.join(name);
        std::fs::write(&path, content).map_err(|e| CliError::Output {
            path: path.clone(),
            reason: e.to_string(),
        })?;
        written.push(name.clone());
    }
    Ok(written)
}

fn service_params(scenario: &Scenario) -> Result<ServiceParams, CliError> {
    ServiceParams::from_service_level(scenario.service_level, scenario.review_period)
        .map_err(|e| CliError::validation(e.to_string()))
}

fn require_deadline(scenario: &Scenario) -> Result<f64, CliError> {
    scenario
        .deadline
        .ok_or_else(|| CliError::validation("scenario must set a deadline for this command"))
}

/// Fits each cost column, reports the difference profile and the selected
/// model, and writes per-series plot data when an output directory is given.
pub fn cmd_fit(
    line: &ProductionLine,
    scenario: &Scenario,
    out_dir: Option<&Path>,
    mode: OutputMode,
) -> Result<String, CliError> {
    let families = scenario.fit_families()?;
    let columns: [(&'static str, Vec<f64>); 3] = [
        (
            "modification_cost",
            line.stages().iter().map(|s| s.modification_cost).collect(),
        ),
        (
            "generic_unit_cost",
            line.stages().iter().map(|s| s.generic_unit_cost).collect(),
        ),
        (
            "custom_unit_cost",
            line.stages().iter().map(|s| s.custom_unit_cost).collect(),
        ),
    ];

    let mut series = Vec::with_capacity(columns.len());
    for (name, values) in columns {
        let cost_series = CostSeries::from_values(&values)
            .map_err(|e| CliError::validation(format!("{name}: {e}")))?;
        let profile = difference_profile(&cost_series, scenario.fit.cv_threshold)
            .map_err(|e| CliError::validation(format!("{name}: {e}")))?;
        let curve = match &families {
            Some(fams) => select_among(&cost_series, fams),
            None => select_model(&cost_series),
        }
        .map_err(|e| CliError::validation(format!("{name}: {e}")))?;
        let fitted = (1..=values.len())
            .map(|x| curve.eval(x as f64))
            .collect::<Vec<_>>();
        series.push(SeriesFit {
            name,
            observed: values,
            fitted,
            profile,
            curve,
        });
    }

    let plot_files: Vec<(String, String)> = series
        .iter()
        .map(|s| {
            let short = s.name.trim_end_matches("_unit_cost").trim_end_matches("_cost");
            (format!("fit_{short}.csv"), fit_plot_csv(s))
        })
        .collect();
    let written = write_outputs(out_dir, &plot_files)?;
    Ok(render_fit(
        mode,
        line.len(),
        scenario.fit.cv_threshold,
        &series,
        &written,
    ))
}

fn monotonicity_section(
    line: &ProductionLine,
    scenario: &Scenario,
) -> Vec<(String, TrendExpectation, MonotonicityReport)> {
    // decorative diagnostics; lines too short to fit are simply skipped
    let Ok(model) = FittedCostModel::from_line(line, scenario.volume) else {
        return Vec::new();
    };
    let span = (1.0, line.len() as f64);
    if span.0 >= span.1 {
        return Vec::new();
    }
    vec![
        (
            "generic_unit_cost".to_string(),
            TrendExpectation::Increasing,
            crate::cost::monotonicity_diagnostic(
                &model.generic_curve,
                span.0,
                span.1,
                TrendExpectation::Increasing,
            ),
        ),
        (
            "custom_unit_cost".to_string(),
            TrendExpectation::Decreasing,
            crate::cost::monotonicity_diagnostic(
                &model.custom_curve,
                span.0,
                span.1,
                TrendExpectation::Decreasing,
            ),
        ),
    ]
}

/// Locates the cost-minimal feasible position for the scenario deadline and
/// reports the full window, the buffer plan, and trend diagnostics.
pub fn cmd_locate(
    line: &ProductionLine,
    scenario: &Scenario,
    out_dir: Option<&Path>,
    mode: OutputMode,
) -> Result<String, CliError> {
    let deadline = require_deadline(scenario)?;
    let params = service_params(scenario)?;
    let recommendation =
        optimize_discrete(line, &params, deadline, scenario.volume).map_err(optimizer_error)?;

    let mut window_rows = Vec::with_capacity(recommendation.verdict.window.len());
    for &p in &recommendation.verdict.window {
        let ranked =
            rank_position(line, p, &params, scenario.volume).map_err(optimizer_error)?;
        window_rows.push((p, ranked.breakdown, ranked.custom_lead_time));
    }

    let monotonicity = monotonicity_section(line, scenario);
    let view = LocateView {
        deadline,
        total_time: line.total_time(),
        recommendation: &recommendation,
        window_rows: &window_rows,
        monotonicity: &monotonicity,
    };
    let written = write_outputs(
        out_dir,
        &[("cost_vs_position.csv".to_string(), locate_plot_csv(&window_rows))],
    )?;
    Ok(render_locate(mode, &view, &written))
}

/// Re-optimizes across each deadline in the scenario and reports the regime
/// transitions. Requires at least two deadlines so the sweep shows movement.
pub fn cmd_sweep(
    line: &ProductionLine,
    scenario: &Scenario,
    out_dir: Option<&Path>,
    mode: OutputMode,
) -> Result<String, CliError> {
    if scenario.deadlines.len() < 2 {
        return Err(CliError::validation(
            "scenario must list at least two deadlines for a sweep",
        ));
    }
    let params = service_params(scenario)?;
    let entries = deadline_sweep(line, &params, &scenario.deadlines, scenario.volume)
        .map_err(optimizer_error)?;
    let written = write_outputs(
        out_dir,
        &[("sweep_totals.csv".to_string(), sweep_plot_csv(&entries))],
    )?;
    Ok(render_sweep(mode, &entries, line.total_time(), &written))
}

/// Places the buffer at the recommended position, simulates it, and checks
/// the analytic plan against the observed run.
pub fn cmd_simulate(
    line: &ProductionLine,
    scenario: &Scenario,
    out_dir: Option<&Path>,
    mode: OutputMode,
) -> Result<String, CliError> {
    let cfg = scenario
        .sim_config()
        .ok_or_else(|| CliError::validation("scenario must carry a [sim] block for simulate"))?;
    let deadline = require_deadline(scenario)?;
    let params = service_params(scenario)?;
    let recommendation =
        optimize_discrete(line, &params, deadline, scenario.volume).map_err(optimizer_error)?;
    let plan = &recommendation.best.buffer;

    let demand = scenario.demand_model();
    let report = simulate(line, plan, &demand, &cfg).map_err(sim_error)?;
    let tolerances = Tolerances::for_target(scenario.service_level);
    let validation = validate_plan(&report, plan, &tolerances).map_err(sim_error)?;

    let written = write_outputs(
        out_dir,
        &[("trajectory.csv".to_string(), trajectory_plot_csv(&report))],
    )?;
    Ok(render_simulate(
        mode,
        &cfg,
        &report,
        &validation,
        scenario.service_level,
        &written,
    ))
}
