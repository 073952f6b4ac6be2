//! Census of dot-product congruence classes of k-simplices: the number of
//! distinct pairwise-product label tuples over ordered tuples of distinct
//! points, in both label modes.
//!
//! Run with `cargo run --release --example simplex_census`.

use chainring::counting::{simplex_classes, PointSet, SimplexMode};
use chainring::harness::{random_point_set, trial_rng, Constraint};
use chainring::ring::Ring;

fn main() {
    // 1-simplices over the full plane: unit labels only vs all labels
    let z9 = Ring::make(3, 1, 2).unwrap();
    let plane = PointSet::full_space(&z9, 2);
    for (mode, name) in [(SimplexMode::UnitsOnly, "units-only"), (SimplexMode::AllValues, "all-values")] {
        let rep = simplex_classes(&plane, 1, mode).unwrap();
        println!(
            "k = 1 over (Z/9)^2, {name}: {} classes of ceiling {:.0} (ratio {:.3})",
            rep.classes, rep.ceiling, rep.ratio
        );
    }

    // triangles over the full F_3 plane
    let f3 = Ring::make(3, 1, 1).unwrap();
    let small = PointSet::full_space(&f3, 2);
    let rep = simplex_classes(&small, 2, SimplexMode::AllValues).unwrap();
    println!("k = 2 over (F_3)^2, all-values: {} classes of ceiling {:.0}", rep.classes, rep.ceiling);

    // how the census grows with |E|
    println!("\nk = 2 over (Z/9)^2, units-only, random E:");
    for size in [10u64, 20, 40, 60, 81] {
        let mut rng = trial_rng(3, size);
        let e = random_point_set(&z9, 2, size, &mut rng, Constraint::None).unwrap();
        let rep = simplex_classes(&e, 2, SimplexMode::UnitsOnly).unwrap();
        println!("  |E| = {size:>2}: {:>6} classes, ratio {:.4}", rep.classes, rep.ratio);
    }
}
