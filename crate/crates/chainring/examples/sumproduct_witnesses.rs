//! Monochromatic sum-product witnesses: the exhaustive finder against the
//! spectral route through the Erdős–Rényi graph, plus a witness-rate sweep
//! against the size thresholds.
//!
//! Run with `cargo run --release --example sumproduct_witnesses`.

use chainring::harness::trial_rng;
use chainring::ring::Ring;
use chainring::sumproduct::{
    find_witness_direct, threshold_sweep, SpectralContext, UnitSetPair,
};
use rand::seq::index::sample;
use rand::Rng;

fn main() {
    let z9 = Ring::make(3, 1, 2).unwrap();

    // the textbook pair: X1 = {1}, X2 = {7}
    let pair = UnitSetPair::from_indices(&z9, &[1], &[7]).unwrap();
    let (x, y) = find_witness_direct(&pair).unwrap();
    println!("X1 = {{1}}, X2 = {{7}} over Z/9: witness x = {}, y = {} (x+y = {}, xy = {})",
        x.index(), y.index(), x.add(&y).index(), x.mul(&y).index());

    // spectral route agreement over Z/9 and Z/25
    for ring in [z9.clone(), Ring::make(5, 1, 2).unwrap()] {
        let ctx = SpectralContext::new(&ring).unwrap();
        let units: Vec<u64> = ring.units().map(|u| u.index()).collect();
        let mut rng = trial_rng(29, 0);
        let mut agreements = 0;
        let mut edge_backed = 0;
        for _ in 0..500 {
            let s1 = rng.gen_range(1..=units.len());
            let s2 = rng.gen_range(1..=units.len());
            let x1: Vec<u64> = sample(&mut rng, units.len(), s1).iter().map(|i| units[i]).collect();
            let x2: Vec<u64> = sample(&mut rng, units.len(), s2).iter().map(|i| units[i]).collect();
            let pair = UnitSetPair::from_indices(&ring, &x1, &x2).unwrap();
            let direct = find_witness_direct(&pair);
            let spectral = ctx.find_witness(&pair);
            assert_eq!(direct.is_some(), spectral.witness.is_some());
            agreements += 1;
            if spectral.via_edge {
                edge_backed += 1;
            }
        }
        println!(
            "{}: 500 seeded pairs, {agreements} agreements ({edge_backed} witnesses straight from graph edges)",
            ring.descriptor()
        );
    }

    // witness rates against the thresholds
    let z25 = Ring::make(5, 1, 2).unwrap();
    println!(
        "\nthreshold over Z/25: |X1||X2| > {:.2}",
        UnitSetPair::ring_threshold(&z25)
    );
    let sweep = threshold_sweep(&z25, &[(5, 5), (10, 10), (14, 14), (20, 20)], 60, 31).unwrap();
    for row in sweep.rows {
        println!(
            "  |X1| = {:>2}, |X2| = {:>2}: rate {:>5.3} (above threshold: {}, asserted ok: {})",
            row.size1,
            row.size2,
            row.found as f64 / row.trials as f64,
            row.above_ring_threshold,
            row.ok
        );
    }
}
