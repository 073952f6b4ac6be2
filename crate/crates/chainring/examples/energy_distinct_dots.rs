//! The ν(t) spectrum of dot products between two point sets, its energy
//! bound, and the Cauchy–Schwarz lower bound on the number of distinct
//! products.
//!
//! Run with `cargo run --release --example energy_distinct_dots`.

use chainring::counting::{distinct_dots, max_line_mass, nu_spectrum, PointSet};
use chainring::harness::{random_point_set, trial_rng, Constraint};
use chainring::ring::Ring;

fn main() {
    let ring = Ring::make(3, 1, 2).unwrap();

    // the full universe outside (R^0)^2: every product value is attained
    let f = PointSet::outside_nonunit_cube(&ring, 2);
    let (nu, energy) = nu_spectrum(&f, &f).unwrap();
    println!("F = G = (Z/9)^2 \\ (R^0)^2, |F| = {}", f.len());
    println!("  nu(t) by element index: {:?}", nu.counts);
    println!("  total = {}, energy = {}, bound rhs = {:.0} -> {}", nu.total, nu.energy, energy.rhs,
        if energy.pass { "holds" } else { "FAILS" });
    println!("  max line mass m = {}", max_line_mass(&f));

    let dots = distinct_dots(&f, &f).unwrap();
    println!(
        "  distinct products: {} of q^r = {}, Cauchy-Schwarz floor {:.2}",
        dots.support_size, dots.main_term, dots.cs_lower
    );

    // seeded random pairs
    let mut worst_slack = f64::INFINITY;
    for trial in 0..200u64 {
        let mut rng = trial_rng(11, trial);
        use rand::Rng;
        let f = random_point_set(&ring, 2, rng.gen_range(1..=72), &mut rng, Constraint::AvoidNonunitCube)
            .unwrap();
        let g = random_point_set(&ring, 2, rng.gen_range(1..=81), &mut rng, Constraint::None).unwrap();
        let (nu, rep) = nu_spectrum(&f, &g).unwrap();
        assert!(rep.pass);
        worst_slack = worst_slack.min(rep.rhs - nu.energy as f64);
    }
    println!("200 random (F, G): energy bound holds, smallest slack {worst_slack:.1}");
}
