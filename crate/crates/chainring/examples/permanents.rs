//! Permanents over a chain ring: Ryser inclusion-exclusion against the
//! naive permutation sum, the two-row reduction identity, and permanent
//! value sets.
//!
//! Run with `cargo run --release --example permanents`.

use chainring::counting::{permanent_reduction_check, permanent_value_set, reduced_permanent};
use chainring::harness::trial_rng;
use chainring::linalg::{PointVec, SquareMatrix};
use chainring::ring::{Family, Ring};
use rand::Rng;

fn main() {
    let z9 = Ring::make(3, 1, 2).unwrap();

    let ones = SquareMatrix::from_indices(&z9, 3, vec![1; 9]);
    println!("Per(all-ones 3x3) over Z/9 = {} (= 3!)", ones.permanent().unwrap().index());

    // dual evaluation on random matrices
    let mut rng = trial_rng(23, 0);
    let mut agree = 0;
    for _ in 0..1000 {
        let k = rng.gen_range(1..=4);
        let entries: Vec<u64> = (0..k * k).map(|_| rng.gen_range(0..9)).collect();
        let m = SquareMatrix::from_indices(&z9, k, entries);
        if m.permanent().unwrap() == m.permanent_naive().unwrap() {
            agree += 1;
        }
    }
    println!("Ryser vs naive permutation sum: {agree}/1000 agree");

    // the reduction identity Per(M(u, x, y)) = (k-2)! u^(k-2) sum_i x_i (S_y - y_i)
    let f9t2 = Ring::new(3, 2, 2, Family::Polynomial).unwrap();
    let mut checks = 0;
    for ring in [&z9, &f9t2] {
        let units: Vec<u64> = ring.units().map(|u| u.index()).collect();
        for _ in 0..2000 {
            let k = rng.gen_range(2..=4);
            let u = ring.element(units[rng.gen_range(0..units.len())]);
            let x: Vec<u64> = (0..k).map(|_| rng.gen_range(0..ring.order())).collect();
            let y: Vec<u64> = (0..k).map(|_| rng.gen_range(0..ring.order())).collect();
            assert!(permanent_reduction_check(
                &u,
                &PointVec::from_indices(ring, &x),
                &PointVec::from_indices(ring, &y),
            )
            .unwrap());
            checks += 1;
        }
    }
    println!("reduction identity verified on {checks} random (u, x, y) across both families");
    println!(
        "  e.g. closed form for u=1, x=y=(1,1,1): {}",
        reduced_permanent(&z9, 1, &[1, 1, 1], &[1, 1, 1])
    );

    // value sets: exact at k = 2, reduced family for k >= 3
    let a: Vec<_> = [1u64, 2].iter().map(|&i| z9.element(i)).collect();
    let rep = permanent_value_set(&z9, &a, 2).unwrap();
    println!("\nP_2(A^2) for A = {{1, 2}} over Z/9: {:?}", rep.values.iter().collect::<Vec<_>>());

    let f5 = Ring::make(5, 1, 1).unwrap();
    let full: Vec<_> = f5.elements().collect();
    let rep = permanent_value_set(&f5, &full, 3).unwrap();
    println!(
        "P_3 reduced family over F_5 with u = {}: {} of q^r = {} values",
        rep.reduced_u.unwrap(),
        rep.values.len(),
        rep.main_term
    );
}
