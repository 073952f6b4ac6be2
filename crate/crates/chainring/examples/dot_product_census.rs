//! Counts solutions of `a · b = λ` over point-set pairs and checks the
//! square-root deviation bound, including the fully exhaustive subset sweep
//! in dimension one.
//!
//! Run with `cargo run --release --example dot_product_census`.

use chainring::counting::{count_pairs, nica_exhaustive_d1, PointSet};
use chainring::harness::{random_point_set, trial_rng, Constraint};
use chainring::ring::Ring;

fn main() {
    let ring = Ring::make(3, 1, 2).unwrap();

    // the flagship exact value: all of (Z/9)^2 against itself at λ = 1
    let e = PointSet::full_space(&ring, 2);
    let rep = count_pairs(&e, &e, &ring.one()).unwrap();
    println!(
        "E = F = (Z/9)^2, λ = 1: N = {}, main term {:.2}, bound {:.2} -> {}",
        rep.observed,
        rep.main_term,
        rep.bound,
        if rep.pass { "holds" } else { "FAILS" }
    );

    // exhaustive: every one of the 512 x 512 subset pairs of R^1, six λ
    let sweep = nica_exhaustive_d1(&ring).unwrap();
    println!(
        "exhaustive d = 1 sweep: {} checks, {} failures, worst |dev|/bound = {:.4}",
        sweep.checks, sweep.failures, sweep.worst_ratio
    );

    // seeded random point sets in the plane
    let mut passes = 0;
    let units: Vec<u64> = ring.units().map(|u| u.index()).collect();
    for trial in 0..500u64 {
        let mut rng = trial_rng(7, trial);
        use rand::Rng;
        let e = random_point_set(&ring, 2, rng.gen_range(1..=81), &mut rng, Constraint::None).unwrap();
        let f = random_point_set(&ring, 2, rng.gen_range(1..=81), &mut rng, Constraint::None).unwrap();
        let lambda = ring.element(units[rng.gen_range(0..units.len())]);
        if count_pairs(&e, &f, &lambda).unwrap().pass {
            passes += 1;
        }
    }
    println!("500 random planar pairs: {passes} within the bound");
}
