//! Drives experiments through the harness the way the CLI does and renders
//! the shared CSV/JSON report schema.
//!
//! Run with `cargo run --release --example reports`.

use chainring::harness::{run, sweep, Experiment, ExperimentConfig, ReportFormat};
use chainring::ring::Ring;

fn main() {
    let ring = Ring::make(3, 1, 2).unwrap();

    // a verify-style run: per-trial rows plus a summary
    let mut cfg = ExperimentConfig::new(Experiment::Nica, ring.clone());
    cfg.trials = 5;
    cfg.seed = 7;
    let report = run(&cfg).unwrap();
    println!("--- verify nica, CSV ---");
    print!("{}", report.render(ReportFormat::Csv));

    // the same rows as JSON
    let mut cfg = ExperimentConfig::new(Experiment::Spectrum, ring.clone());
    cfg.d = 2;
    let report = run(&cfg).unwrap();
    println!("\n--- verify spectrum, JSON ---");
    print!("{}", report.render(ReportFormat::Json));

    // a sweep aggregates one rate row per size tuple
    let mut cfg = ExperimentConfig::new(Experiment::SumProduct, ring);
    cfg.trials = 20;
    cfg.sizes = vec![vec![2, 2], vec![4, 5], vec![6, 6]];
    let report = sweep(&cfg).unwrap();
    println!("\n--- sweep sumproduct, CSV ---");
    print!("{}", report.render(ReportFormat::Csv));
}
