//! Sweeps the delivery deadline from impossible to unconstrained and shows
//! how the recommended position and its cost move through the regimes.
//!
//! Run with: cargo run --example deadline_sweep

use std::path::PathBuf;

use codp::cli::read_stage_table;
use codp::{
    build_line, deadline_sweep, DeadlineRegime, ServiceParams, SweepOutcome,
};

fn main() {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("testdata/stages.csv");
    let stages = read_stage_table(&path).expect("bundled stage table");
    let line = build_line(stages, 9, 120.0, 10.0).expect("valid line");
    let params = ServiceParams::from_service_level(0.95, 1.0).expect("service target");

    let deadlines = [2.0, 3.25, 4.0, 5.0, 6.5, 8.0, 10.75, 12.0];
    let entries = deadline_sweep(&line, &params, &deadlines, 1.0).expect("sweep");

    println!(
        "line time {} days, fastest customized route 3.25 days\n",
        line.total_time()
    );
    println!("  deadline    p      total  regime");
    for entry in &entries {
        match &entry.outcome {
            SweepOutcome::Infeasible(v) => println!(
                "  {:>8}    -          -  infeasible (needs at least {})",
                entry.deadline, v.min_custom_time
            ),
            SweepOutcome::Feasible(rec) => println!(
                "  {:>8}  {:>3} {:>10.2}  {}",
                entry.deadline,
                rec.best.position.get(),
                rec.best.breakdown.total,
                regime(rec.regime_note)
            ),
        }
    }

    println!(
        "\ntightening the deadline pushes the buffer downstream (larger p) and raises cost;"
    );
    println!("once the deadline passes the total line time, only the cost structure matters.");
}

fn regime(note: DeadlineRegime) -> &'static str {
    match note {
        DeadlineRegime::ShortDeadline => "short",
        DeadlineRegime::ExactDeadline => "exact: forced to the latest candidate",
        DeadlineRegime::MiddleDeadline => "middle: deadline binds",
        DeadlineRegime::LongDeadline => "long: deadline slack",
    }
}
