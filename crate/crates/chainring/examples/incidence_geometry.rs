//! Point-line incidences in R^2: the deviation bound, rich lines, and the
//! pinned point that lies on many of them.
//!
//! Run with `cargo run --release --example incidence_geometry`.

use chainring::counting::PointSet;
use chainring::geometry::{all_lines, enumerate_graph_lines, incidences, pinned_point, rich_lines};
use chainring::harness::{random_point_set, trial_rng, Constraint};
use chainring::ring::Ring;
use rand::seq::index::sample;
use rand::Rng;

fn main() {
    let ring = Ring::make(3, 1, 2).unwrap();

    let graph_lines = enumerate_graph_lines(&ring);
    let every_line = all_lines(&ring);
    println!(
        "lines over {}: {} of the form y = ax + b, {} coefficient classes in all",
        ring.descriptor(),
        graph_lines.len(),
        every_line.len()
    );

    // the exact full-grid incidence count
    let e = PointSet::full_space(&ring, 2);
    let rep = incidences(&e, &graph_lines);
    println!(
        "I((Z/9)^2, all graph lines) = {} (main term {:.0}, deviation 0)",
        rep.observed, rep.main_term
    );

    // random incidence configurations against the bound
    let mut passes = 0;
    for trial in 0..500u64 {
        let mut rng = trial_rng(13, trial);
        let se = rng.gen_range(0..=81);
        let sl = rng.gen_range(0..=every_line.len());
        let e = random_point_set(&ring, 2, se, &mut rng, Constraint::None).unwrap();
        let picks = sample(&mut rng, every_line.len(), sl);
        let lines: Vec<_> = picks.iter().map(|i| every_line[i].clone()).collect();
        if incidences(&e, &lines).pass {
            passes += 1;
        }
    }
    println!("500 random (E, L): {passes} within the incidence bound");

    // rich lines and the pinned point on the full plane
    let rich = rich_lines(&e, None);
    println!(
        "\nrich lines (>= {} points of E): {} of {} graph lines; q^2r/4 floor asserted: {:?}",
        rich.threshold,
        rich.lines.len(),
        graph_lines.len(),
        rich.count_ok
    );
    let pin = pinned_point(&e).unwrap();
    println!("pinned point {} lies on {} rich lines", pin.z, pin.rich_line_count);

    // over F_9 the pinned-point hypothesis |E| >= 8q is reachable
    let f9 = Ring::make(3, 2, 1).unwrap();
    let mut rng = trial_rng(13, 999);
    let e = random_point_set(&f9, 2, 75, &mut rng, Constraint::None).unwrap();
    let pin = pinned_point(&e).unwrap();
    println!(
        "over {} with |E| = 75: pinned point on {} rich lines (guarantee asserted: {:?})",
        f9.descriptor(),
        pin.rich_line_count,
        pin.guarantee_ok
    );
}
