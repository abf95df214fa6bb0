//! Fits the three per-stage cost columns of the bundled line and shows how
//! the difference profile's suggestion compares with the model actually
//! selected by goodness of fit.
//!
//! Run with: cargo run --example fit_cost_curves

use std::path::PathBuf;

use codp::cli::read_stage_table;
use codp::{difference_profile, select_model, CostSeries, DEFAULT_CV_THRESHOLD};

fn main() {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("testdata/stages.csv");
    let stages = read_stage_table(&path).expect("bundled stage table");

    let columns: [(&str, Vec<f64>); 3] = [
        ("generic_unit_cost", stages.iter().map(|s| s.generic_unit_cost).collect()),
        ("custom_unit_cost", stages.iter().map(|s| s.custom_unit_cost).collect()),
        ("modification_cost", stages.iter().map(|s| s.modification_cost).collect()),
    ];

    println!("fitting {} stages, cv threshold {DEFAULT_CV_THRESHOLD}", stages.len());
    for (name, values) in columns {
        let series = CostSeries::from_values(&values).expect("column series");
        let profile = difference_profile(&series, DEFAULT_CV_THRESHOLD).expect("profile");
        let curve = select_model(&series).expect("fit");

        println!("\n{name}");
        println!("  first differences   : {:>8.2?}", heads(&profile.first_differences));
        println!("  second differences  : {:>8.2?}", heads(&profile.second_differences));
        match &profile.successive_ratios {
            Some(r) => println!("  successive ratios   : {:>8.3?}", heads(r)),
            None => println!("  successive ratios   : n/a (non-positive values)"),
        }
        println!("  profile suggests    : {}", profile.suggested_family);
        println!("  selected by fit     : {}", curve.family);
        println!("  coefficients        : {:?}", curve.coefficients);
        println!("  r_squared           : {:.6}", curve.r_squared);

        // show the fit against the observations at a few stages
        for x in [1usize, 4, 8, 12] {
            let obs = values[x - 1];
            let fit = curve.eval(x as f64);
            println!("  stage {x:>2}: observed {obs:>8.2}, fitted {fit:>8.2}");
        }
    }
}

/// First four entries, enough to see the trend without flooding the terminal.
fn heads(values: &[f64]) -> Vec<f64> {
    values.iter().copied().take(4).collect()
}
