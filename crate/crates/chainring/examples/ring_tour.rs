//! Tour of the two chain-ring families: construction, exact arithmetic,
//! valuations, units, and the canonical digit encoding.
//!
//! Run with `cargo run --example ring_tour`.

use chainring::ring::{Family, Ring};

fn main() {
    // Z/9: the cyclic family, uniformizer 3
    let z9 = Ring::new(3, 1, 2, Family::Cyclic).unwrap();
    println!("{}: order {}, units {}", z9.descriptor(), z9.order(), z9.unit_count());
    let five = z9.element(5);
    let seven = z9.element(7);
    println!("  5 + 7 = {}", five.add(&seven).index());
    println!("  3 * 3 = {} (pi^2 vanishes)", z9.element(3).mul(&z9.element(3)).index());
    println!("  inv(2) = {}", z9.element(2).inv().unwrap().index());
    println!("  valuation(6) = {}, valuation(0) = {}", z9.element(6).valuation(), z9.zero().valuation());
    println!("  text form of 5 (little-endian base-3 digits): {}", five);

    // F_9[t]/(t^2): the polynomial family over F_9 = F_3[x]/(x^2 + 1)
    let f9t2 = Ring::new(3, 2, 2, Family::Polynomial).unwrap();
    let poly: Vec<String> = f9t2.field_poly().iter().map(|c| c.to_string()).collect();
    println!(
        "\n{}: order {}, units {}, field poly (low-first) {}",
        f9t2.descriptor(),
        f9t2.order(),
        f9t2.unit_count(),
        poly.join(",")
    );
    let x = f9t2.from_digits(&[0, 1]); // the residue x of F_9
    println!("  x * x = {} (reduction by x^2 + 1)", x.mul(&x).index());
    let t = f9t2.uniformizer();
    println!("  uniformizer t = {}, t^2 = {}", t, t.mul(&t).index());

    // every nonzero element factors as unit * pi^v
    let a = f9t2.element(36);
    let v = a.valuation();
    println!("  element 36 has valuation {v}");

    // enumeration is deterministic and index-ordered
    let z27 = Ring::make(3, 1, 3).unwrap();
    let units: Vec<u64> = z27.units().map(|u| u.index()).take(6) .collect();
    println!("\n{}: first units {:?}, |R^*| = {}", z27.descriptor(), units, z27.unit_count());
}
