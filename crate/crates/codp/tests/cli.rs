//! End-to-end tests of the `codp` binary: exit codes, report content, plot
//! data emission, and byte-identical reruns.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn testdata(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("testdata").join(name)
}

fn codp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_codp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run(subcommand: &str, stages: &Path, scenario: &Path, extra: &[&str]) -> Output {
    let mut args = vec![
        subcommand,
        "--stages",
        stages.to_str().unwrap(),
        "--scenario",
        scenario.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    codp(&args)
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is utf-8")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is utf-8")
}

fn write_scenario(content: &str) -> tempfile::NamedTempFile {
    use std::io::Write as _;
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(content.as_bytes()).unwrap();
    f
}

const BASE_SCENARIO: &str =
    "frontier = 9\ndemand_rate = 120.0\ndemand_std = 10.0\nservice_level = 0.95\n";

#[test]
fn locate_reference_scenario_exits_zero() {
    let out = run("locate", &testdata("stages.csv"), &testdata("scenario.toml"), &[]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("best p = 4"), "{text}");
    assert!(text.contains("order-up-to level"), "{text}");
}

#[test]
fn machine_readable_locate_has_stable_keys() {
    let out = run(
        "locate",
        &testdata("stages.csv"),
        &testdata("scenario.toml"),
        &["--machine-readable"],
    );
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for key in [
        "command=locate",
        "regime=window",
        "window=3,4,5,6,7,8",
        "best.position=4",
        "buffer.order_up_to=",
        "monotonicity.generic_unit_cost.passed=true",
        "monotonicity.custom_unit_cost.passed=true",
    ] {
        assert!(text.contains(key), "missing {key} in:\n{text}");
    }
}

#[test]
fn infeasible_deadline_exits_two_and_advises() {
    let scenario = write_scenario(&format!("{BASE_SCENARIO}deadline = 2.0\n"));
    let out = run("locate", &testdata("stages.csv"), scenario.path(), &[]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("stock"), "advisory missing: {err}");
    assert!(err.contains("3.25"), "fastest route missing: {err}");
}

#[test]
fn missing_stage_file_exits_three() {
    let out = run(
        "locate",
        Path::new("/nonexistent/stages.csv"),
        &testdata("scenario.toml"),
        &[],
    );
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("/nonexistent/stages.csv"));
}

#[test]
fn malformed_cell_exits_three_with_location() {
    use std::io::Write as _;
    let mut stages = tempfile::NamedTempFile::new().unwrap();
    write!(
        stages,
        "stage_index,time_mean,time_std,generic_unit_cost,custom_unit_cost,\
         modification_cost,holding_cost,turnover,std_inventory\n\
         1,1.0,0.1,10,5,2,0.5,10,50\n\
         2,quick,0.1,10,5,2,0.5,10,50\n"
    )
    .unwrap();
    let out = run("locate", stages.path(), &testdata("scenario.toml"), &[]);
    assert_eq!(out.status.code(), Some(3));
    let err = stderr(&out);
    assert!(err.contains("line 3"), "{err}");
    assert!(err.contains("time_mean"), "{err}");
}

#[test]
fn invalid_scenario_key_exits_three() {
    let scenario = write_scenario(&format!("{BASE_SCENARIO}surprise = 1\n"));
    let out = run("locate", &testdata("stages.csv"), scenario.path(), &[]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("surprise"));
}

#[test]
fn usage_errors_exit_three_and_help_exits_zero() {
    let unknown = codp(&["explode"]);
    assert_eq!(unknown.status.code(), Some(3));
    let missing_arg = codp(&["locate", "--stages", "x.csv"]);
    assert_eq!(missing_arg.status.code(), Some(3));
    let help = codp(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    assert!(stdout(&help).contains("locate"));
}

#[test]
fn sweep_walks_regimes_in_order() {
    let out = run(
        "sweep",
        &testdata("stages.csv"),
        &testdata("scenario.toml"),
        &["--machine-readable"],
    );
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("row.1.outcome=infeasible"), "{text}");
    assert!(text.contains("row.2.outcome=feasible"), "{text}");
    assert!(text.contains("row.2.regime_note=exact"), "{text}");
    assert!(text.contains("row.2.position=8"), "{text}");
    assert!(text.contains("row.3.regime_note=long"), "{text}");
    assert!(text.contains("row.3.position=4"), "{text}");
}

#[test]
fn fit_writes_plot_data() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        "fit",
        &testdata("stages.csv"),
        &testdata("scenario.toml"),
        &["--out", dir.path().to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(0));
    for name in ["fit_modification.csv", "fit_generic.csv", "fit_custom.csv"] {
        let content = std::fs::read_to_string(dir.path().join(name)).unwrap();
        assert!(content.starts_with("stage,observed,fitted\n"), "{name}");
        assert_eq!(content.lines().count(), 13, "{name}: 12 stages plus header");
    }
    assert!(stdout(&out).contains("wrote fit_modification.csv"));
}

#[test]
fn simulate_reruns_are_byte_identical() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    let args_for = |dir: &Path| {
        vec![
            "--machine-readable".to_string(),
            "--out".to_string(),
            dir.to_str().unwrap().to_string(),
        ]
    };
    let a_args = args_for(dir_a.path());
    let b_args = args_for(dir_b.path());
    let a = run(
        "simulate",
        &testdata("stages.csv"),
        &testdata("scenario.toml"),
        &a_args.iter().map(String::as_str).collect::<Vec<_>>(),
    );
    let b = run(
        "simulate",
        &testdata("stages.csv"),
        &testdata("scenario.toml"),
        &b_args.iter().map(String::as_str).collect::<Vec<_>>(),
    );
    assert_eq!(a.status.code(), Some(0), "stderr: {}", stderr(&a));
    assert_eq!(b.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout, "fixed-seed stdout diverged");
    let traj_a = std::fs::read(dir_a.path().join("trajectory.csv")).unwrap();
    let traj_b = std::fs::read(dir_b.path().join("trajectory.csv")).unwrap();
    assert_eq!(traj_a, traj_b, "fixed-seed trajectory data diverged");
    assert!(!traj_a.is_empty());
}

#[test]
fn simulate_reports_validation_verdicts() {
    let out = run(
        "simulate",
        &testdata("stages.csv"),
        &testdata("scenario.toml"),
        &["--machine-readable"],
    );
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("validation.service.passed=true"), "{text}");
    assert!(
        text.contains("validation.average_inventory.passed=true"),
        "{text}"
    );
    assert!(text.contains("validation.all_passed=true"), "{text}");
    assert!(text.contains("post_warmup_cycles=20000"), "{text}");
}

#[test]
fn sweep_plot_shows_non_increasing_totals() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        "sweep",
        &testdata("stages.csv"),
        &testdata("scenario.toml"),
        &["--out", dir.path().to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(0));
    let content = std::fs::read_to_string(dir.path().join("sweep_totals.csv")).unwrap();
    let mut totals = Vec::new();
    for line in content.lines().skip(1) {
        let (_, total) = line.split_once(',').unwrap();
        totals.push(total.parse::<f64>().unwrap());
    }
    assert!(totals.len() >= 2, "{content}");
    for pair in totals.windows(2) {
        assert!(pair[1] <= pair[0], "totals increased: {totals:?}");
    }
}
