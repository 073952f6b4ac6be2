//! Pinned triangle areas in R^2 (direct enumeration against the
//! constructive rich-line pipeline) and pinned 3-dimensional volumes
//! (direct enumeration against the slice-and-scale inductive path).
//!
//! Run with `cargo run --release --example pinned_areas_volumes`.

use chainring::counting::PointSet;
use chainring::geometry::{pinned_areas, pinned_point, pinned_volumes};
use chainring::harness::{random_point_set, trial_rng, Constraint};
use chainring::linalg::PointVec;
use chainring::ring::Ring;

fn main() {
    let ring = Ring::make(3, 1, 2).unwrap();

    // areas pinned at the origin of the full plane: every value shows up
    let e = PointSet::full_space(&ring, 2);
    let rep = pinned_areas(&e, &PointVec::zero(&ring, 2)).unwrap();
    println!(
        "E = (Z/9)^2 pinned at 0: {} distinct areas; constructive pipeline found {} (subset: {})",
        rep.direct.len(),
        rep.constructive.len(),
        rep.subset_ok
    );

    // a random set: pin at the point on the most rich lines
    let mut rng = trial_rng(17, 0);
    let e = random_point_set(&ring, 2, 60, &mut rng, Constraint::None).unwrap();
    let pin = pinned_point(&e).unwrap();
    let rep = pinned_areas(&e, &pin.z).unwrap();
    println!(
        "random |E| = 60 pinned at {}: direct {}, constructive {} from {} selected points ({} dropped)",
        pin.z,
        rep.direct.len(),
        rep.constructive.len(),
        rep.selected,
        rep.dropped
    );
    assert!(rep.subset_ok);

    // volumes in R^3: the slice-and-scale path stays inside the brute set
    let cube = PointSet::full_space(&Ring::make(3, 1, 1).unwrap(), 3);
    let rep = pinned_volumes(&cube).unwrap();
    println!(
        "\nE = (F_3)^3: volumes {:?} via z = {}, slice x3 = {} of size {}",
        rep.brute.iter().collect::<Vec<_>>(),
        rep.z,
        rep.slice_level,
        rep.slice_size
    );

    let mut rng = trial_rng(17, 1);
    let e = random_point_set(&ring, 3, 200, &mut rng, Constraint::None).unwrap();
    let rep = pinned_volumes(&e).unwrap();
    println!(
        "random |E| = 200 in (Z/9)^3: brute volume set {}, inductive path {} (subset: {})",
        rep.brute.len(),
        rep.inductive.as_ref().map_or(0, |s| s.len()),
        rep.subset_ok
    );
}
