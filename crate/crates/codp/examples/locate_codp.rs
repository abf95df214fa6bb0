//! Finds the cheapest feasible buffer position for the bundled line under an
//! 8-day delivery deadline, then prints the cost table and the winning
//! buffer plan.
//!
//! Run with: cargo run --example locate_codp

use std::path::PathBuf;

use codp::cli::read_stage_table;
use codp::{
    build_line, feasible_window, optimize_discrete, rank_position, ServiceParams,
};

fn main() {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("testdata/stages.csv");
    let stages = read_stage_table(&path).expect("bundled stage table");
    let line = build_line(stages, 9, 120.0, 10.0).expect("valid line");
    let params = ServiceParams::from_service_level(0.95, 1.0).expect("service target");

    let deadline = 8.0;
    let verdict = feasible_window(&line, deadline).expect("window");
    println!(
        "deadline {deadline}: {} of {} candidates can deliver in time",
        verdict.window.len(),
        line.personalization_frontier() - 1
    );

    println!("\n  p      total    generic    holding     custom   reconfig");
    for &p in &verdict.window {
        let ranked = rank_position(&line, p, &params, 1.0).expect("rankable");
        let b = &ranked.breakdown;
        println!(
            " {:>2} {:>10.2} {:>10.2} {:>10.2} {:>10.2} {:>10.2}",
            p.get(),
            b.total,
            b.generic_processing,
            b.wip_holding,
            b.custom_incremental,
            b.reconfiguration
        );
    }

    let rec = optimize_discrete(&line, &params, deadline, 1.0).expect("feasible");
    println!(
        "\nbest position: p = {} at total {:.2}",
        rec.best.position.get(),
        rec.best.breakdown.total
    );
    if let Some(second) = &rec.second_best {
        println!(
            "second best:   p = {} at total {:.2} (costs {:.2} more, delivers in {:.2} instead of {:.2})",
            second.position.get(),
            second.breakdown.total,
            second.breakdown.total - rec.best.breakdown.total,
            second.custom_lead_time,
            rec.best.custom_lead_time
        );
    }

    let plan = &rec.best.buffer;
    println!("\nbuffer plan at the best position:");
    println!("  replenishment cycle : {:.2} days", plan.replenishment_cycle);
    println!("  safety stock        : {:.2} units", plan.safety_stock);
    println!("  timing buffer       : {:.3} days", plan.timing_buffer);
    println!("  order-up-to level   : {:.2} units", plan.order_up_to);
    println!("  average inventory   : {:.2} units", plan.average_inventory);
}
