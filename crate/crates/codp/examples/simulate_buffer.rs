//! Sizes the buffer analytically, then replays it under stochastic demand
//! and lead times to check that the plan delivers its service target.
//!
//! Run with: cargo run --example simulate_buffer

use std::path::PathBuf;

use codp::cli::read_stage_table;
use codp::{
    build_line, buffer_plan, simulate, validate_plan, CodpPosition, DemandModel, ServiceParams,
    SimConfig, Tolerances,
};

fn main() {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("testdata/stages.csv");
    let stages = read_stage_table(&path).expect("bundled stage table");
    let line = build_line(stages, 9, 120.0, 10.0).expect("valid line");
    let params = ServiceParams::from_service_level(0.95, 1.0).expect("service target");

    let p = CodpPosition::new(4);
    let plan = buffer_plan(&line, p, &params).expect("plan");
    println!("analytic plan at p = {}:", p.get());
    println!("  order-up-to       : {:.2}", plan.order_up_to);
    println!("  safety stock      : {:.2}", plan.safety_stock);
    println!("  average inventory : {:.2}", plan.average_inventory);

    let cfg = SimConfig {
        horizon: 2400,
        warmup: 400,
        seed: 42,
        replications: 10,
    };
    let demand = DemandModel::Normal {
        mean: line.demand_rate(),
        std: line.demand_std(),
    };
    let report = simulate(&line, &plan, &demand, &cfg).expect("simulation");

    println!("\nsimulated {} replications of {} periods:", cfg.replications, cfg.horizon);
    println!("  cycle service level : {:.4} (target 0.95)", report.cycle_service_level);
    println!("  fill rate           : {:.4}", report.fill_rate);
    println!("  average inventory   : {:.2}", report.average_inventory);
    println!("  stockout periods    : {}", report.stockout_periods);
    println!("  post-warmup cycles  : {}", report.post_warmup_cycles);

    println!("\nper-replication service levels:");
    for (i, rep) in report.replications.iter().enumerate() {
        println!(
            "  rep {:>2}: service {:.4}, avg inventory {:>7.2}",
            i + 1,
            rep.cycle_service_level,
            rep.average_inventory
        );
    }

    let verdict = validate_plan(&report, &plan, &Tolerances::for_target(0.95)).expect("verdict");
    println!(
        "\nvalidation: service {} (observed {:.4} vs target {:.2}), inventory {} (off by {:.2})",
        pass(verdict.service.passed),
        verdict.service.observed,
        verdict.service.expected,
        pass(verdict.average_inventory.passed),
        verdict.average_inventory.delta
    );
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}
