//! Monochromatic sum-product witnesses: given `X1, X2 ⊆ R^*`, find units
//! `x, y` with `x + y ∈ X1` and `x · y ∈ X2`.
//!
//! Two routes are implemented and must agree. The direct route scans
//! `R^* × R^*`. The spectral route completes the square: a witness with
//! `x + y = x1` and `x y = x2` exists iff `(x1/2)^2 - x2` is a square
//! `z^2` (then `x = x1/2 - z`, `y = x1/2 + z`; `x` and `y` are units
//! automatically because their product is). Solutions with a *unit* `z` are
//! exactly the edges between two vertex sets of the Erdős–Rényi graph
//! `E_{q,3}(R)` built from the squared data, which is what the edge
//! lower bound is stated for; solutions with a non-unit `z` are picked up by
//! the residual square scan so the two finders agree exactly.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::graphs::{build_er_graph_with_guard, BipartiteGraph};
use crate::linalg::PointVec;
use crate::ring::{Ring, RingElement};

#[derive(Debug, Error)]
pub enum SumProductError {
    #[error("set member with index {0} is not a unit")]
    NonUnitMember(u64),
    #[error("requested size {0} exceeds the unit count {1}")]
    SizeTooLarge(usize, u64),
    #[error(transparent)]
    Graph(#[from] crate::graphs::GraphError),
}

/// A pair of unit subsets, sorted by element index.
#[derive(Debug, Clone)]
pub struct UnitSetPair {
    ring: Ring,
    x1: Vec<u64>,
    x2: Vec<u64>,
}

impl UnitSetPair {
    pub fn new(
        ring: &Ring,
        x1: impl IntoIterator<Item = RingElement>,
        x2: impl IntoIterator<Item = RingElement>,
    ) -> Result<UnitSetPair, SumProductError> {
        let to_indices = |it: &mut dyn Iterator<Item = RingElement>| -> Result<Vec<u64>, SumProductError> {
            let mut v = Vec::new();
            for e in it {
                if !e.is_unit() {
                    return Err(SumProductError::NonUnitMember(e.index()));
                }
                v.push(e.index());
            }
            v.sort_unstable();
            v.dedup();
            Ok(v)
        };
        let x1 = to_indices(&mut x1.into_iter())?;
        let x2 = to_indices(&mut x2.into_iter())?;
        Ok(UnitSetPair { ring: ring.clone(), x1, x2 })
    }

    pub fn from_indices(ring: &Ring, x1: &[u64], x2: &[u64]) -> Result<UnitSetPair, SumProductError> {
        UnitSetPair::new(
            ring,
            x1.iter().map(|&i| ring.element(i)),
            x2.iter().map(|&i| ring.element(i)),
        )
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn x1(&self) -> &[u64] {
        &self.x1
    }

    pub fn x2(&self) -> &[u64] {
        &self.x2
    }

    /// `q^{4r-1} / (q^r - q^{r-1})^2`, the size threshold above which a
    /// witness is guaranteed.
    pub fn ring_threshold(ring: &Ring) -> f64 {
        let q = ring.q() as f64;
        let r = ring.r() as f64;
        q.powf(4.0 * r - 1.0) / ((ring.unit_count() as f64) * (ring.unit_count() as f64))
    }

    /// Exact integer form of `|X1||X2| > q^{4r-1} / (q^r - q^{r-1})^2`.
    pub fn meets_ring_threshold(&self) -> bool {
        let units = self.ring.unit_count() as u128;
        let lhs = self.x1.len() as u128 * self.x2.len() as u128 * units * units;
        let q = self.ring.q() as u128;
        let rhs = (0..4 * self.ring.r() - 1).fold(1u128, |acc, _| acc * q);
        lhs > rhs
    }

    /// Exact form of the finite-field threshold `|X1||X2| > 2q` (meaningful
    /// at `r = 1`).
    pub fn meets_field_threshold(&self) -> bool {
        self.x1.len() as u128 * self.x2.len() as u128 > 2 * self.ring.q() as u128
    }
}

/// First witness in canonical scan order (`x` ascending, then `y`), by
/// exhaustive search over `R^* × R^*`.
pub fn find_witness_direct(pair: &UnitSetPair) -> Option<(RingElement, RingElement)> {
    let ring = pair.ring();
    let in_x1 = member_mask(ring, &pair.x1);
    let in_x2 = member_mask(ring, &pair.x2);
    let units: Vec<u64> = ring.units().map(|u| u.index()).collect();
    for &x in &units {
        for &y in &units {
            if in_x1[ring.add_idx(x, y) as usize] && in_x2[ring.mul_idx(x, y) as usize] {
                return Some((ring.element(x), ring.element(y)));
            }
        }
    }
    None
}

fn member_mask(ring: &Ring, set: &[u64]) -> Vec<bool> {
    let mut mask = vec![false; ring.order() as usize];
    for &i in set {
        mask[i as usize] = true;
    }
    mask
}

/// Outcome of the spectral route for one pair.
#[derive(Debug, Clone)]
pub struct SpectralReport {
    pub witness: Option<(RingElement, RingElement)>,
    /// Whether the witness came from a unit `z`, i.e. from an actual edge of
    /// the Erdős–Rényi graph rather than the non-unit residual scan.
    pub via_edge: bool,
    /// Exact `e(U, V)`.
    pub edges: u64,
    /// `|A1||A2||A3||A4|/q^r - q^{(2r-1)/2} sqrt(|A1||A2||A3||A4|)`.
    pub lower_bound: f64,
    pub bound_ok: bool,
    pub u_size: u64,
    pub v_size: u64,
    /// Vertices lost to class collisions when forming `U` and `V` (the
    /// middle/last coordinate pins the representative, so this stays 0; it
    /// is tracked rather than assumed).
    pub collapsed: u64,
    pub a1_size: u64,
    pub a2_size: u64,
    pub a3_size: u64,
    pub a4_size: u64,
    /// `2|A1| >= |X1|` (each square has at most two unit roots).
    pub a1_ok: bool,
    /// `2|A3| >= |X3| = |R^*|`.
    pub a3_ok: bool,
}

/// Prebuilt Erdős–Rényi machinery for one ring, reused across pairs.
pub struct SpectralContext {
    ring: Ring,
    graph: BipartiteGraph,
    /// `roots[w]` = all `z` with `z^2 = w`, ascending.
    roots: Vec<Vec<u64>>,
    /// `{z^2 : z ∈ R^*}`, ascending.
    unit_squares: Vec<u64>,
    half: u64,
}

impl SpectralContext {
    pub fn new(ring: &Ring) -> Result<SpectralContext, SumProductError> {
        SpectralContext::with_guard(ring, crate::graphs::part_size_guard())
    }

    pub fn with_guard(ring: &Ring, max_part: usize) -> Result<SpectralContext, SumProductError> {
        let graph = build_er_graph_with_guard(ring, 3, max_part)?;
        let order = ring.order() as usize;
        let mut roots = vec![Vec::new(); order];
        for z in 0..ring.order() {
            roots[ring.mul_idx(z, z) as usize].push(z);
        }
        let unit_squares: BTreeSet<u64> =
            ring.units().map(|z| ring.mul_idx(z.index(), z.index())).collect();
        // p is odd, so 2 is always a unit
        let half = ring.inv_idx(ring.int_embed(2).index()).expect("2 is a unit for odd p");
        Ok(SpectralContext {
            ring: ring.clone(),
            graph,
            roots,
            unit_squares: unit_squares.into_iter().collect(),
            half,
        })
    }

    pub fn graph(&self) -> &BipartiteGraph {
        &self.graph
    }

    /// Squares of units, `{z^2 : z ∈ R^*}`.
    pub fn unit_squares(&self) -> &[u64] {
        &self.unit_squares
    }

    pub fn find_witness(&self, pair: &UnitSetPair) -> SpectralReport {
        let ring = &self.ring;
        assert!(pair.ring() == ring, "pair belongs to a different ring");
        let a1: BTreeSet<u64> = pair
            .x1
            .iter()
            .map(|&x1| {
                let s = ring.mul_idx(self.half, x1);
                ring.mul_idx(s, s)
            })
            .collect();
        let a2: BTreeSet<u64> = pair.x2.iter().map(|&x2| ring.neg_idx(x2)).collect();
        let a3 = &self.unit_squares;

        // U = classes of (a3, 1, a1); V = classes of (-a4, a2, 1). An edge
        // means a3*(-a4) + a2 + a1 = 0, i.e. (x1/2)^2 - x2 = (z z')^2.
        let mut u_set = BTreeSet::new();
        for &s in a3 {
            for &a in &a1 {
                let v = PointVec::from_indices(ring, &[s, 1, a]);
                u_set.insert(self.graph.class_index(&v).expect("unit coordinate present"));
            }
        }
        let mut v_set = BTreeSet::new();
        for &s in a3 {
            for &a in &a2 {
                let v = PointVec::from_indices(ring, &[ring.neg_idx(s), a, 1]);
                v_set.insert(self.graph.class_index(&v).expect("unit coordinate present"));
            }
        }
        let u_ids: Vec<usize> = u_set.into_iter().collect();
        let v_ids: Vec<usize> = v_set.into_iter().collect();
        let collapsed = (a3.len() as u64 * a1.len() as u64 - u_ids.len() as u64)
            + (a3.len() as u64 * a2.len() as u64 - v_ids.len() as u64);
        let edges = self.graph.edges_between(&u_ids, &v_ids).expect("ids in range");

        let product =
            a1.len() as f64 * a2.len() as f64 * a3.len() as f64 * a3.len() as f64;
        let q = ring.q() as f64;
        let r = ring.r() as f64;
        let lower_bound = product / ring.order() as f64 - q.powf((2.0 * r - 1.0) / 2.0) * product.sqrt();
        let bound_ok = edges as f64 >= lower_bound - 1e-6;

        // Witness reconstruction: smallest (x1, x2, z) with
        // z^2 = (x1/2)^2 - x2, preferring unit z (edge-backed).
        let mut fallback: Option<(u64, u64)> = None;
        let mut witness: Option<(u64, u64)> = None;
        let mut via_edge = false;
        'outer: for &x1 in &pair.x1 {
            let s = ring.mul_idx(self.half, x1);
            let s2 = ring.mul_idx(s, s);
            for &x2 in &pair.x2 {
                let w = ring.sub_idx(s2, x2);
                for &z in &self.roots[w as usize] {
                    let cand = (ring.sub_idx(s, z), ring.add_idx(s, z));
                    if ring.is_unit_idx(z) {
                        witness = Some(cand);
                        via_edge = true;
                        break 'outer;
                    } else if fallback.is_none() {
                        fallback = Some(cand);
                    }
                }
            }
        }
        let found = witness.or(fallback);
        // unit z solutions and edges are two views of the same equation
        debug_assert_eq!(via_edge, edges > 0);
        let witness = found.map(|(x, y)| (ring.element(x), ring.element(y)));
        if let Some((x, y)) = &witness {
            debug_assert!(x.is_unit() && y.is_unit());
            debug_assert!(pair.x1.binary_search(&x.add(y).index()).is_ok());
            debug_assert!(pair.x2.binary_search(&x.mul(y).index()).is_ok());
        }

        SpectralReport {
            witness,
            via_edge,
            edges,
            lower_bound,
            bound_ok,
            u_size: u_ids.len() as u64,
            v_size: v_ids.len() as u64,
            collapsed,
            a1_size: a1.len() as u64,
            a2_size: a2.len() as u64,
            a3_size: a3.len() as u64,
            a4_size: a3.len() as u64,
            a1_ok: 2 * a1.len() >= pair.x1.len(),
            a3_ok: 2 * a3.len() as u64 >= ring.unit_count(),
        }
    }
}

/// Builds the context and runs the spectral route once. Prefer
/// [`SpectralContext`] when checking many pairs over one ring.
pub fn find_witness_spectral(pair: &UnitSetPair) -> Result<SpectralReport, SumProductError> {
    Ok(SpectralContext::new(pair.ring())?.find_witness(pair))
}

/// One row of a [`threshold_sweep`].
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub size1: usize,
    pub size2: usize,
    pub trials: u32,
    pub found: u32,
    pub above_ring_threshold: bool,
    pub above_field_threshold: Option<bool>,
    /// True unless an above-threshold trial failed to produce a witness.
    pub ok: bool,
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
}

/// Seeded witness-rate sweep over random unit-set pairs of the given sizes.
/// Asserts a 100% rate whenever the size product clears the ring threshold,
/// and additionally the `2q` field threshold at `r = 1`.
pub fn threshold_sweep(
    ring: &Ring,
    sizes: &[(usize, usize)],
    trials: u32,
    seed: u64,
) -> Result<SweepReport, SumProductError> {
    use rand::SeedableRng;

    let units: Vec<u64> = ring.units().map(|u| u.index()).collect();
    let mut rows = Vec::with_capacity(sizes.len());
    for (row_idx, &(s1, s2)) in sizes.iter().enumerate() {
        if s1 > units.len() || s2 > units.len() {
            return Err(SumProductError::SizeTooLarge(s1.max(s2), ring.unit_count()));
        }
        let mut found = 0u32;
        for trial in 0..trials {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(((row_idx as u64) << 32) | trial as u64);
            let x1 = sample_units(&units, s1, &mut rng);
            let x2 = sample_units(&units, s2, &mut rng);
            let pair = UnitSetPair::from_indices(ring, &x1, &x2)?;
            if find_witness_direct(&pair).is_some() {
                found += 1;
            }
        }
        // the thresholds depend only on the sizes
        let uc = ring.unit_count() as u128;
        let q = ring.q() as u128;
        let above_ring = s1 as u128 * s2 as u128 * uc * uc
            > (0..4 * ring.r() - 1).fold(1u128, |acc, _| acc * q);
        let above_field = s1 as u128 * s2 as u128 > 2 * q;
        let asserted = above_ring || (ring.r() == 1 && above_field);
        rows.push(SweepRow {
            size1: s1,
            size2: s2,
            trials,
            found,
            above_ring_threshold: above_ring,
            above_field_threshold: (ring.r() == 1).then_some(above_field),
            ok: !asserted || found == trials,
        });
    }
    Ok(SweepReport { rows })
}

fn sample_units(units: &[u64], size: usize, rng: &mut impl rand::Rng) -> Vec<u64> {
    rand::seq::index::sample(rng, units.len(), size).iter().map(|i| units[i]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Family;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn z9() -> Ring {
        Ring::new(3, 1, 2, Family::Cyclic).unwrap()
    }

    #[test]
    fn unit_set_pair_rejects_nonunits() {
        let r = z9();
        let err = UnitSetPair::from_indices(&r, &[1, 3], &[2]).unwrap_err();
        assert!(matches!(err, SumProductError::NonUnitMember(3)));
    }

    #[test]
    fn direct_witness_example() {
        let r = z9();
        let pair = UnitSetPair::from_indices(&r, &[1], &[7]).unwrap();
        let (x, y) = find_witness_direct(&pair).unwrap();
        assert_eq!((x.index(), y.index()), (2, 8));
    }

    #[test]
    fn direct_witness_full_units() {
        let r = z9();
        let units: Vec<u64> = r.units().map(|u| u.index()).collect();
        let pair = UnitSetPair::from_indices(&r, &units, &units).unwrap();
        assert!(find_witness_direct(&pair).is_some());
        assert!(pair.meets_field_threshold());
    }

    #[test]
    fn empty_x2_has_no_witness_and_no_edges() {
        let r = z9();
        let pair = UnitSetPair::from_indices(&r, &[1, 2], &[]).unwrap();
        assert!(find_witness_direct(&pair).is_none());
        let rep = find_witness_spectral(&pair).unwrap();
        assert!(rep.witness.is_none());
        assert_eq!(rep.edges, 0);
    }

    #[test]
    fn squares_of_units_have_at_most_two_roots() {
        for ring in [
            z9(),
            Ring::make(5, 1, 2).unwrap(),
            Ring::make(3, 1, 3).unwrap(),
            Ring::new(3, 2, 2, Family::Polynomial).unwrap(),
        ] {
            let ctx = SpectralContext::new(&ring).unwrap();
            assert!(2 * ctx.unit_squares().len() as u64 >= ring.unit_count());
            for &w in ctx.unit_squares() {
                let unit_roots =
                    ctx.roots[w as usize].iter().filter(|&&z| ring.is_unit_idx(z)).count();
                assert!(unit_roots <= 2, "square {w} has {unit_roots} unit roots");
            }
        }
    }

    #[test]
    fn spectral_agrees_with_direct_on_seeded_pairs() {
        for ring in [z9(), Ring::make(5, 1, 2).unwrap()] {
            let ctx = SpectralContext::new(&ring).unwrap();
            let units: Vec<u64> = ring.units().map(|u| u.index()).collect();
            let mut rng = ChaCha8Rng::seed_from_u64(101);
            for _ in 0..300 {
                let s1 = rng.gen_range(1..=units.len());
                let s2 = rng.gen_range(1..=units.len());
                let x1 = sample_units(&units, s1, &mut rng);
                let x2 = sample_units(&units, s2, &mut rng);
                let pair = UnitSetPair::from_indices(&ring, &x1, &x2).unwrap();
                let direct = find_witness_direct(&pair);
                let rep = ctx.find_witness(&pair);
                assert_eq!(direct.is_some(), rep.witness.is_some(), "{}", ring.descriptor());
                assert!(rep.bound_ok);
                assert!(rep.a1_ok && rep.a3_ok);
                assert_eq!(rep.collapsed, 0);
                assert_eq!(rep.via_edge, rep.edges > 0);
                if let Some((x, y)) = rep.witness {
                    assert!(x.is_unit() && y.is_unit());
                    assert!(x1.contains(&x.add(&y).index()));
                    assert!(x2.contains(&x.mul(&y).index()));
                }
            }
        }
    }

    #[test]
    fn nonunit_z_cases_are_found_by_both_routes() {
        // all witnesses of X1 = X2 = {4} over Z/9 have z = (y-x)/2 non-unit,
        // so the edge count is zero but both finders still succeed
        let r = z9();
        let pair = UnitSetPair::from_indices(&r, &[4], &[4]).unwrap();
        assert!(find_witness_direct(&pair).is_some());
        let rep = find_witness_spectral(&pair).unwrap();
        assert_eq!(rep.edges, 0);
        assert!(!rep.via_edge);
        let (x, y) = rep.witness.unwrap();
        assert_eq!(x.add(&y).index(), 4);
        assert_eq!(x.mul(&y).index(), 4);
    }

    #[test]
    fn threshold_sweep_full_sizes_always_find() {
        let r = z9();
        let report = threshold_sweep(&r, &[(6, 6), (4, 6), (2, 2)], 40, 7).unwrap();
        assert_eq!(report.rows.len(), 3);
        let full = &report.rows[0];
        assert_eq!(full.found, full.trials);
        assert!(report.rows.iter().all(|row| row.ok));
    }

    #[test]
    fn z9_pairs_with_product_at_least_21_always_have_witnesses() {
        // exhaustive over all unit-subset pairs: the desk-scale analogue of
        // the threshold statement (the formal threshold 60.75 is out of
        // reach at q^r = 9)
        let r = z9();
        let units: Vec<u64> = r.units().map(|u| u.index()).collect();
        assert_eq!(units.len(), 6);
        for m1 in 1u32..64 {
            let x1: Vec<u64> =
                (0..6).filter(|i| m1 & (1 << i) != 0).map(|i| units[i as usize]).collect();
            for m2 in 1u32..64 {
                let x2: Vec<u64> =
                    (0..6).filter(|i| m2 & (1 << i) != 0).map(|i| units[i as usize]).collect();
                if x1.len() * x2.len() < 21 {
                    continue;
                }
                let pair = UnitSetPair::from_indices(&r, &x1, &x2).unwrap();
                assert!(
                    find_witness_direct(&pair).is_some(),
                    "no witness for X1={x1:?} X2={x2:?}"
                );
            }
        }
    }

    #[test]
    fn cilleruelo_threshold_at_z5() {
        // r = 1: every unit-subset pair with |X1||X2| > 2q has a witness
        let r = Ring::make(5, 1, 1).unwrap();
        let units: Vec<u64> = r.units().map(|u| u.index()).collect();
        for m1 in 1u32..16 {
            let x1: Vec<u64> =
                (0..4).filter(|i| m1 & (1 << i) != 0).map(|i| units[i as usize]).collect();
            for m2 in 1u32..16 {
                let x2: Vec<u64> =
                    (0..4).filter(|i| m2 & (1 << i) != 0).map(|i| units[i as usize]).collect();
                if x1.len() * x2.len() <= 10 {
                    continue;
                }
                let pair = UnitSetPair::from_indices(&r, &x1, &x2).unwrap();
                assert!(find_witness_direct(&pair).is_some());
            }
        }
    }

    #[test]
    fn ring_threshold_formula() {
        let z25 = Ring::make(5, 1, 2).unwrap();
        assert!((UnitSetPair::ring_threshold(&z25) - 78125.0 / 400.0).abs() < 1e-9);
        let pair = UnitSetPair::from_indices(
            &z25,
            &z25.units().map(|u| u.index()).collect::<Vec<_>>()[..14],
            &z25.units().map(|u| u.index()).collect::<Vec<_>>()[..14],
        )
        .unwrap();
        assert!(pair.meets_ring_threshold()); // 196 > 195.3125
    }
}
