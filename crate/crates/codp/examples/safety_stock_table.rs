//! Tabulates service factors and the resulting buffer sizes for every
//! candidate position, showing how safety stock grows as the buffer moves
//! downstream and the replenishment cycle lengthens.
//!
//! Run with: cargo run --example safety_stock_table

use std::path::PathBuf;

use codp::cli::read_stage_table;
use codp::{
    build_line, buffer_plan, codp_candidates, z_for_service_level, ServiceParams,
};

fn main() {
    println!("service level to z factor:");
    for beta in [0.80, 0.90, 0.95, 0.975, 0.99, 0.999] {
        let z = z_for_service_level(beta).expect("valid level");
        println!("  beta = {beta:<6} z = {z:.4}");
    }

    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("testdata/stages.csv");
    let stages = read_stage_table(&path).expect("bundled stage table");
    let line = build_line(stages, 9, 120.0, 10.0).expect("valid line");
    let params = ServiceParams::from_service_level(0.95, 1.0).expect("service target");

    println!(
        "\nbuffers at 95% service, demand {} +/- {} per day:",
        line.demand_rate(),
        line.demand_std()
    );
    println!("  p   cycle  safety stock  order-up-to  avg inventory");
    for p in codp_candidates(&line) {
        let plan = buffer_plan(&line, p, &params).expect("plan");
        println!(
            " {:>2} {:>6.2} {:>13.2} {:>12.2} {:>14.2}",
            p.get(),
            plan.replenishment_cycle,
            plan.safety_stock,
            plan.order_up_to,
            plan.average_inventory
        );
    }

    println!(
        "\nlonger generic prefixes mean longer replenishment cycles, so both the\n\
         order-up-to level and the safety stock rise as p moves downstream; the\n\
         cost optimizer weighs this against cheaper customized processing."
    );
}
