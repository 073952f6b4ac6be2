//! Exercises the expander mixing lemma and the degree-variance bound on
//! seeded random subset pairs of the product graph.
//!
//! Run with `cargo run --release --example mixing_variance`.

use chainring::graphs::build_product_graph;
use chainring::harness::trial_rng;
use chainring::ring::Ring;
use rand::seq::index::sample;
use rand::Rng;

fn main() {
    let ring = Ring::make(3, 1, 2).unwrap();
    let g = build_product_graph(&ring, 2).unwrap();
    let m = g.part_size();
    println!(
        "product graph over {}: |A| = {m}, deg = {}, lambda3 = {:.6}",
        ring.descriptor(),
        g.deg_a(),
        g.third_eigenvalue()
    );

    let mut worst = 0.0f64;
    let trials = 2000;
    for trial in 0..trials {
        let mut rng = trial_rng(42, trial);
        let sx = rng.gen_range(1..=m);
        let sy = rng.gen_range(1..=m);
        let xs = sample(&mut rng, m, sx).into_vec();
        let ys = sample(&mut rng, m, sy).into_vec();

        let mix = g.mixing_check(&xs, &ys).unwrap();
        assert!(mix.pass);
        if mix.bound > 0.0 {
            worst = worst.max((mix.edges_observed as f64 - mix.edges_predicted).abs() / mix.bound);
        }

        let var = g.variance_check(&xs, &ys).unwrap();
        assert!(var.pass);
    }
    println!("{trials} random (X, Y) pairs: all inside the mixing and variance bounds");
    println!("worst observed |e(X,Y) - prediction| / bound = {worst:.4}");

    // the edge cases the lemma pins exactly
    let all: Vec<usize> = (0..m).collect();
    let rep = g.mixing_check(&all, &all).unwrap();
    println!(
        "X = A, Y = B: e = {} = deg * |A| = {}, deviation {:.1e}",
        rep.edges_observed,
        g.deg_a() * m,
        (rep.edges_observed as f64 - rep.edges_predicted).abs()
    );
}
