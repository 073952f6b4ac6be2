//! Lines in `R^2`, point–line incidences, rich lines, the pinned point, and
//! pinned areas/volumes.
//!
//! A line is the solution set of `a x + b y + c = 0` with
//! `(a, b, c) ∉ (R^0)^3`, identified with the projective class of its
//! coefficient vector. Lines with a unit `y`-coefficient are exactly those
//! representable as `y = a x + b` ("graph" lines); only those enter the
//! rich-line machinery, matching the counting statements, while the
//! incidence bound accepts arbitrary coefficient classes (including the
//! empty lines with `a, b` non-units and `c` a unit).

use std::collections::{BTreeSet, HashSet};

use thiserror::Error;

use crate::counting::{deviation_check, PointSet};
use crate::linalg::{det2_pinned, proj_class, proj_representatives, PointVec, ProjClass};
use crate::ring::Ring;

/// Enumeration ceiling for the brute-force volume sets.
pub const VOLUME_ENUM_GUARD: u128 = 200_000_000;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("coefficient vector lies in (R^0)^3 and defines no line")]
    InvalidLine,
    #[error("the point set is empty")]
    EmptySet,
    #[error("the pin must belong to the point set")]
    PinOutsideSet,
    #[error("operation needs points of R^{expected}, got R^{got}")]
    WrongDimension { expected: usize, got: usize },
    #[error("enumeration guard exceeded: {0}")]
    GuardExceeded(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LineKind {
    /// Representable as `y = slope * x + intercept`; contains exactly `q^r`
    /// points.
    Graph { slope: u64, intercept: u64 },
    /// Any other admissible coefficient class.
    General,
}

/// A line of `R^2`, canonicalized by its coefficient class.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Line {
    class: ProjClass,
    kind: LineKind,
}

impl Line {
    /// Line `a x + b y + c = 0`. The kind is derived: a unit `b` makes the
    /// line a graph `y = (-a/b) x + (-c/b)`.
    pub fn new(ring: &Ring, a: u64, b: u64, c: u64) -> Result<Line, GeometryError> {
        let coeffs = PointVec::from_indices(ring, &[a, b, c]);
        let class = proj_class(&coeffs).map_err(|_| GeometryError::InvalidLine)?;
        let kind = match ring.inv_idx(b) {
            Some(binv) => {
                let nb = ring.neg_idx(binv);
                LineKind::Graph { slope: ring.mul_idx(nb, a), intercept: ring.mul_idx(nb, c) }
            }
            None => LineKind::General,
        };
        Ok(Line { class, kind })
    }

    /// The graph line `y = slope * x + intercept`.
    pub fn from_slope_intercept(ring: &Ring, slope: u64, intercept: u64) -> Line {
        let coeffs = PointVec::from_indices(ring, &[slope, ring.neg_idx(1), intercept]);
        let class = proj_class(&coeffs).expect("-1 is a unit");
        Line { class, kind: LineKind::Graph { slope, intercept } }
    }

    pub fn from_class(class: ProjClass) -> Line {
        let rep = class.rep();
        let ring = rep.ring().clone();
        let [a, b, c] = [rep.indices()[0], rep.indices()[1], rep.indices()[2]];
        Line::new(&ring, a, b, c).expect("class representatives are admissible")
    }

    pub fn coeffs(&self) -> &ProjClass {
        &self.class
    }

    pub fn kind(&self) -> LineKind {
        self.kind
    }

    pub fn is_graph(&self) -> bool {
        matches!(self.kind, LineKind::Graph { .. })
    }

    /// Incidence `a x + b y + c = 0`, invariant under scaling of the
    /// coefficient class.
    pub fn contains(&self, p: &PointVec) -> bool {
        assert_eq!(p.dim(), 2, "incidence is defined for points of R^2");
        let ring = p.ring();
        let rep = self.class.rep().indices();
        let mut acc = rep[2];
        acc = ring.add_idx(acc, ring.mul_idx(rep[0], p.indices()[0]));
        acc = ring.add_idx(acc, ring.mul_idx(rep[1], p.indices()[1]));
        acc == 0
    }

    /// The point set of a graph line (`q^r` points); `None` for general
    /// lines.
    pub fn points(&self) -> Option<Vec<PointVec>> {
        let LineKind::Graph { slope, intercept } = self.kind else {
            return None;
        };
        let ring = self.class.rep().ring();
        Some(
            (0..ring.order())
                .map(|x| {
                    let y = ring.add_idx(ring.mul_idx(slope, x), intercept);
                    PointVec::from_indices(ring, &[x, y])
                })
                .collect(),
        )
    }
}

impl std::fmt::Debug for Line {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self}")
    }
}

impl std::fmt::Display for Line {
    /// `[a|b|c]` in the canonical projective representative.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rep = self.class.rep();
        write!(f, "[{}|{}|{}]", rep.coord(0), rep.coord(1), rep.coord(2))
    }
}

/// All `q^{2r}` graph lines `y = a x + b`, ascending by `(slope, intercept)`.
pub fn enumerate_graph_lines(ring: &Ring) -> Vec<Line> {
    let order = ring.order();
    let mut out = Vec::with_capacity((order * order) as usize);
    for slope in 0..order {
        for intercept in 0..order {
            out.push(Line::from_slope_intercept(ring, slope, intercept));
        }
    }
    out
}

/// Every admissible line: one per projective class of `R^3 \ (R^0)^3`.
pub fn all_lines(ring: &Ring) -> Vec<Line> {
    proj_representatives(ring, 3)
        .into_iter()
        .map(|rep| Line::from_class(proj_class(&rep).expect("representatives are admissible")))
        .collect()
}

#[derive(Debug, Clone)]
pub struct IncidenceReport {
    pub observed: u64,
    pub main_term: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Exact `I(E, L)` plus the deviation check
/// `|I - |E||L|/q^r| <= q^{(2r-1)/2} sqrt(|E||L|)`.
pub fn incidences(e: &PointSet, lines: &[Line]) -> IncidenceReport {
    assert_eq!(e.dim(), 2, "incidences are counted in R^2");
    let mut observed = 0u64;
    for line in lines {
        for p in e.points() {
            if line.contains(p) {
                observed += 1;
            }
        }
    }
    // the incidence bound is the d = 2 deviation factor q^{2r-1}
    let (main_term, bound, pass) = deviation_check(e.ring(), 2, e.len(), lines.len(), observed);
    IncidenceReport { observed, main_term, bound, pass }
}

#[derive(Debug, Clone)]
pub struct RichLinesReport {
    pub threshold: u64,
    pub lines: Vec<Line>,
    /// Whether `|E| >= 3 q^{2r-1}`, the hypothesis of the count bound.
    pub qualifies: bool,
    /// `count >= q^{2r}/4`, asserted only when `qualifies`.
    pub count_ok: Option<bool>,
}

/// All graph lines carrying at least `threshold` points of `E`
/// (default `q^{r-1} + 1`).
pub fn rich_lines(e: &PointSet, threshold: Option<u64>) -> RichLinesReport {
    assert_eq!(e.dim(), 2);
    let ring = e.ring();
    let order = ring.order();
    let threshold = threshold.unwrap_or(order / ring.q() + 1);
    // each point lies on exactly one line of every slope
    let mut counts = vec![0u64; (order * order) as usize];
    for p in e.points() {
        let [x, y] = [p.indices()[0], p.indices()[1]];
        for slope in 0..order {
            let intercept = ring.sub_idx(y, ring.mul_idx(slope, x));
            counts[(slope * order + intercept) as usize] += 1;
        }
    }
    let mut lines = Vec::new();
    for slope in 0..order {
        for intercept in 0..order {
            if counts[(slope * order + intercept) as usize] >= threshold {
                lines.push(Line::from_slope_intercept(ring, slope, intercept));
            }
        }
    }
    let qualifies = e.len() as u128 * ring.q() as u128 >= 3 * order as u128 * order as u128;
    let count_ok = qualifies.then(|| 4 * lines.len() as u128 >= order as u128 * order as u128);
    RichLinesReport { threshold, lines, qualifies, count_ok }
}

#[derive(Debug, Clone)]
pub struct PinnedPointReport {
    pub z: PointVec,
    pub rich_line_count: u64,
    /// Whether `|E| >= 8 q^{2r-1}`, the hypothesis of the guarantee.
    pub guarantee_applies: bool,
    /// `count >= q^r / 8`, asserted only when the hypothesis holds.
    pub guarantee_ok: Option<bool>,
}

/// The point of `E` lying on the most rich lines (ties broken by canonical
/// point order).
pub fn pinned_point(e: &PointSet) -> Result<PinnedPointReport, GeometryError> {
    if e.is_empty() {
        return Err(GeometryError::EmptySet);
    }
    let ring = e.ring();
    let order = ring.order();
    let rich = rich_lines(e, None);
    let rich_pairs: HashSet<(u64, u64)> = rich
        .lines
        .iter()
        .map(|l| match l.kind() {
            LineKind::Graph { slope, intercept } => (slope, intercept),
            LineKind::General => unreachable!("rich lines are graph lines"),
        })
        .collect();
    let mut best: Option<(&PointVec, u64)> = None;
    for p in e.points() {
        let [x, y] = [p.indices()[0], p.indices()[1]];
        let mut count = 0u64;
        for slope in 0..order {
            let intercept = ring.sub_idx(y, ring.mul_idx(slope, x));
            if rich_pairs.contains(&(slope, intercept)) {
                count += 1;
            }
        }
        if best.as_ref().is_none_or(|&(_, c)| count > c) {
            best = Some((p, count));
        }
    }
    let (z, rich_line_count) = best.expect("nonempty set");
    let guarantee_applies = e.len() as u128 * ring.q() as u128 >= 8 * order as u128 * order as u128;
    let guarantee_ok = guarantee_applies.then(|| 8 * rich_line_count as u128 >= order as u128);
    Ok(PinnedPointReport { z: z.clone(), rich_line_count, guarantee_applies, guarantee_ok })
}

#[derive(Debug, Clone)]
pub struct PinnedAreasReport {
    /// `{ det(x - z, y - z) : x, y in E }`, by exhaustive enumeration.
    pub direct: BTreeSet<u64>,
    /// The proof pipeline's `F · G` value set.
    pub constructive: BTreeSet<u64>,
    /// Size of the one-point-per-rich-line selection `F`.
    pub selected: u64,
    /// Selected candidates dropped to keep the no-two-on-one-line property.
    pub dropped: u64,
    /// `constructive ⊆ direct`; the pipeline only produces genuine areas.
    pub subset_ok: bool,
}

/// The pinned-area set at `z` together with the constructive pipeline of the
/// proof: translate `z` to the origin, select one point per rich line
/// through `z` (smallest canonical index, verified to keep the
/// no-two-points-on-one-line property), rotate `E` to
/// `G = {(-p2, p1)}`, and collect `F · G`.
pub fn pinned_areas(e: &PointSet, z: &PointVec) -> Result<PinnedAreasReport, GeometryError> {
    if e.dim() != 2 {
        return Err(GeometryError::WrongDimension { expected: 2, got: e.dim() });
    }
    if !e.contains(z) {
        return Err(GeometryError::PinOutsideSet);
    }
    let ring = e.ring();
    let order = ring.order();

    let mut direct = BTreeSet::new();
    for x in e.points() {
        for y in e.points() {
            direct.insert(det2_pinned(ring, x.indices(), y.indices(), z.indices()));
        }
    }

    // slopes of the rich lines through z, in the translated frame
    let rich = rich_lines(e, None);
    let mut slopes: Vec<u64> = rich
        .lines
        .iter()
        .filter(|l| l.contains(z))
        .map(|l| match l.kind() {
            LineKind::Graph { slope, .. } => slope,
            LineKind::General => unreachable!(),
        })
        .collect();
    slopes.sort_unstable();

    let translated: Vec<PointVec> = e.points().iter().map(|p| p.sub(z)).collect();
    let mut selected: Vec<&PointVec> = Vec::new();
    let mut dropped = 0u64;
    for &slope in &slopes {
        let candidate = translated
            .iter()
            .filter(|p| {
                p.indices() != [0, 0]
                    && p.indices()[1] == ring.mul_idx(slope, p.indices()[0])
            })
            .min_by_key(|p| p.point_index());
        let Some(p) = candidate else { continue };
        // keep only if p shares no origin line y = b x with an earlier pick
        let clash = selected.iter().any(|f| {
            (0..order).any(|b| {
                f.indices()[1] == ring.mul_idx(b, f.indices()[0])
                    && p.indices()[1] == ring.mul_idx(b, p.indices()[0])
            })
        });
        if clash {
            dropped += 1;
        } else {
            selected.push(p);
        }
    }

    let mut constructive = BTreeSet::new();
    for f in &selected {
        for p in &translated {
            // g = (-p2, p1)
            let g0 = ring.neg_idx(p.indices()[1]);
            let g1 = p.indices()[0];
            let dot = ring.add_idx(
                ring.mul_idx(f.indices()[0], g0),
                ring.mul_idx(f.indices()[1], g1),
            );
            constructive.insert(dot);
        }
    }
    let subset_ok = constructive.is_subset(&direct);
    Ok(PinnedAreasReport {
        direct,
        constructive,
        selected: selected.len() as u64,
        dropped,
        subset_ok,
    })
}

#[derive(Debug, Clone)]
pub struct PinnedVolumesReport {
    /// The pin: the smallest-index point whose last coordinate differs from
    /// the richest slice level by a unit, falling back to the first point.
    pub z: PointVec,
    /// The slice level `t` maximizing `|E ∩ {x_d = t}|` and the slice size.
    pub slice_level: u64,
    pub slice_size: u64,
    /// `V_d^z(E)` by exhaustive enumeration.
    pub brute: BTreeSet<u64>,
    /// The inductive proof path `(z_d - t) * V_{d-1}(slice)`, if a unit
    /// pivot exists.
    pub inductive: Option<BTreeSet<u64>>,
    /// `inductive ⊆ brute` (vacuously true when no inductive path exists).
    pub subset_ok: bool,
    /// Whether `|E| >= 8 q^{r-1} q^{r(d-1)}`, the hypothesis of the fill-up
    /// claim.
    pub guarantee_applies: bool,
}

/// Pinned 3-dimensional volume set with the inductive cross-check: find the
/// richest hyperplane slice `x_3 = t`, form the planar volume set of its
/// projection, and scale by the unit `z_3 - t` via the bordered-determinant
/// identity.
pub fn pinned_volumes(e: &PointSet) -> Result<PinnedVolumesReport, GeometryError> {
    if e.dim() != 3 {
        return Err(GeometryError::WrongDimension { expected: 3, got: e.dim() });
    }
    if e.is_empty() {
        return Err(GeometryError::EmptySet);
    }
    let n = e.len() as u128;
    if n * n * n > VOLUME_ENUM_GUARD {
        return Err(GeometryError::GuardExceeded(format!("|E|^3 = {}^3", e.len())));
    }
    let ring = e.ring();
    let order = ring.order();

    let mut slice_counts = vec![0u64; order as usize];
    for p in e.points() {
        slice_counts[p.indices()[2] as usize] += 1;
    }
    let slice_level = (0..order).max_by_key(|&t| (slice_counts[t as usize], std::cmp::Reverse(t))).unwrap();
    let slice_size = slice_counts[slice_level as usize];

    let z = e
        .points()
        .iter()
        .find(|p| ring.is_unit_idx(ring.sub_idx(p.indices()[2], slice_level)))
        .or_else(|| e.points().first())
        .expect("nonempty set")
        .clone();
    let pivot = ring.sub_idx(z.indices()[2], slice_level);

    let mut brute = BTreeSet::new();
    for x in e.points() {
        let cx: Vec<u64> = (0..3).map(|i| ring.sub_idx(x.indices()[i], z.indices()[i])).collect();
        for y in e.points() {
            let cy: Vec<u64> = (0..3).map(|i| ring.sub_idx(y.indices()[i], z.indices()[i])).collect();
            for w in e.points() {
                let cw: Vec<u64> = (0..3).map(|i| ring.sub_idx(w.indices()[i], z.indices()[i])).collect();
                brute.insert(det3(ring, &cx, &cy, &cw));
            }
        }
    }

    let inductive = if ring.is_unit_idx(pivot) {
        // project the slice to its first two coordinates (injective: the
        // third coordinate is constant there)
        let slice: Vec<Vec<u64>> = e
            .points()
            .iter()
            .filter(|p| p.indices()[2] == slice_level)
            .map(|p| vec![p.indices()[0], p.indices()[1]])
            .collect();
        let mut planar = BTreeSet::new();
        for x in &slice {
            for y in &slice {
                for w in &slice {
                    planar.insert(det2_pinned(ring, x, y, w));
                }
            }
        }
        Some(planar.into_iter().map(|v| ring.mul_idx(pivot, v)).collect::<BTreeSet<u64>>())
    } else {
        None
    };
    let subset_ok = inductive.as_ref().is_none_or(|ind| ind.is_subset(&brute));
    let q = ring.q() as u128;
    let rr = ring.r();
    let needed = 8u128 * q.pow(rr - 1) * q.pow(2 * rr);
    let guarantee_applies = e.len() as u128 >= needed;
    Ok(PinnedVolumesReport {
        z,
        slice_level,
        slice_size,
        brute,
        inductive,
        subset_ok,
        guarantee_applies,
    })
}

fn det3(ring: &Ring, a: &[u64], b: &[u64], c: &[u64]) -> u64 {
    // columns a, b, c
    let m00 = ring.sub_idx(ring.mul_idx(b[1], c[2]), ring.mul_idx(b[2], c[1]));
    let m01 = ring.sub_idx(ring.mul_idx(b[0], c[2]), ring.mul_idx(b[2], c[0]));
    let m02 = ring.sub_idx(ring.mul_idx(b[0], c[1]), ring.mul_idx(b[1], c[0]));
    let t0 = ring.mul_idx(a[0], m00);
    let t1 = ring.mul_idx(a[1], m01);
    let t2 = ring.mul_idx(a[2], m02);
    ring.add_idx(ring.sub_idx(t0, t1), t2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Family;
    use rand::seq::index::sample;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn z9() -> Ring {
        Ring::new(3, 1, 2, Family::Cyclic).unwrap()
    }

    fn f3() -> Ring {
        Ring::make(3, 1, 1).unwrap()
    }

    #[test]
    fn graph_line_counts() {
        let r = z9();
        let lines = enumerate_graph_lines(&r);
        assert_eq!(lines.len(), 81);
        let distinct: HashSet<&ProjClass> = lines.iter().map(|l| l.coeffs()).collect();
        assert_eq!(distinct.len(), 81);
        for l in &lines {
            assert_eq!(l.points().unwrap().len(), 9);
        }
        let f3 = f3();
        let lines = enumerate_graph_lines(&f3);
        assert_eq!(lines.len(), 9);
        for l in &lines {
            assert_eq!(l.points().unwrap().len(), 3);
        }
    }

    #[test]
    fn graph_lines_intersect_in_at_most_q_to_r_minus_1_points() {
        let r = z9();
        let lines = enumerate_graph_lines(&r);
        for i in 0..lines.len() {
            let pi: HashSet<u64> = lines[i].points().unwrap().iter().map(|p| p.point_index()).collect();
            for l in lines.iter().skip(i + 1) {
                let common = l.points().unwrap().iter().filter(|p| pi.contains(&p.point_index())).count();
                assert!(common <= 3, "lines share {common} points");
            }
        }
    }

    #[test]
    fn line_kinds_and_empty_lines() {
        let r = z9();
        // x = c style line: (1, 0, 7) is general but nonempty
        let l = Line::new(&r, 1, 0, 7).unwrap();
        assert!(!l.is_graph());
        assert!(l.contains(&PointVec::from_indices(&r, &[2, 5])));
        // a, b nonunits with c a unit: admissible but empty
        let l = Line::new(&r, 3, 6, 1).unwrap();
        assert!(!l.is_graph());
        for pidx in 0..81 {
            assert!(!l.contains(&PointVec::from_point_index(&r, 2, pidx)));
        }
        assert!(matches!(Line::new(&r, 3, 6, 0), Err(GeometryError::InvalidLine)));
    }

    #[test]
    fn incidences_full_grid() {
        let r = z9();
        let e = PointSet::full_space(&r, 2);
        let lines = enumerate_graph_lines(&r);
        let rep = incidences(&e, &lines);
        assert_eq!(rep.observed, 729);
        assert!((rep.observed as f64 - rep.main_term).abs() < 1e-9);
        assert!(rep.pass);

        let empty = PointSet::new(&r, 2, vec![]);
        let rep = incidences(&empty, &lines);
        assert_eq!(rep.observed, 0);
        assert!(rep.pass);
    }

    #[test]
    fn incidences_random_all_pass() {
        let r = z9();
        let universe = all_lines(&r);
        assert_eq!(universe.len(), 117);
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for _ in 0..300 {
            let se = rng.gen_range(0..=81);
            let sl = rng.gen_range(0..=universe.len());
            let e_idx: Vec<u64> = sample(&mut rng, 81, se).iter().map(|i| i as u64).collect();
            let e = PointSet::from_point_indices(&r, 2, &e_idx);
            let lines: Vec<Line> =
                sample(&mut rng, universe.len(), sl).iter().map(|i| universe[i].clone()).collect();
            assert!(incidences(&e, &lines).pass);
        }
    }

    #[test]
    fn rich_lines_full_plane() {
        let r = z9();
        let e = PointSet::full_space(&r, 2);
        let rep = rich_lines(&e, None);
        assert_eq!(rep.threshold, 4);
        assert_eq!(rep.lines.len(), 81);
        assert!(rep.qualifies); // 81 = 3 * 27
        assert_eq!(rep.count_ok, Some(true));

        let empty = PointSet::new(&r, 2, vec![]);
        assert!(rich_lines(&empty, None).lines.is_empty());
    }

    #[test]
    fn rich_lines_single_line() {
        let r = z9();
        let l = Line::from_slope_intercept(&r, 2, 5);
        let e = PointSet::new(&r, 2, l.points().unwrap());
        let rep = rich_lines(&e, None);
        assert!(rep.lines.contains(&l));
        assert!(!rep.qualifies);
        assert!(rep.count_ok.is_none());
    }

    #[test]
    fn pinned_point_full_plane() {
        let r = z9();
        let e = PointSet::full_space(&r, 2);
        let rep = pinned_point(&e).unwrap();
        assert_eq!(rep.rich_line_count, 9); // every slope line through z is rich
        assert!(!rep.guarantee_applies); // 81 < 8 * 27
        assert!(rep.guarantee_ok.is_none());
    }

    #[test]
    fn pinned_point_collinear_f3() {
        let r = f3();
        let l = Line::from_slope_intercept(&r, 1, 0);
        let e = PointSet::new(&r, 2, l.points().unwrap());
        let rep = pinned_point(&e).unwrap();
        assert_eq!(rep.rich_line_count, 1);
        assert!(matches!(pinned_point(&PointSet::new(&r, 2, vec![])), Err(GeometryError::EmptySet)));
    }

    #[test]
    fn pinned_point_guarantee_at_f9() {
        // q = 9, r = 1: sets of size >= 72 satisfy the hypothesis
        let f9 = Ring::make(3, 2, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        for _ in 0..10 {
            let size = rng.gen_range(72..=81);
            let idx: Vec<u64> = sample(&mut rng, 81, size).iter().map(|i| i as u64).collect();
            let e = PointSet::from_point_indices(&f9, 2, &idx);
            let rep = pinned_point(&e).unwrap();
            assert!(rep.guarantee_applies);
            assert_eq!(rep.guarantee_ok, Some(true), "count {}", rep.rich_line_count);
        }
    }

    #[test]
    fn pinned_areas_full_plane() {
        let r = z9();
        let e = PointSet::full_space(&r, 2);
        let z = PointVec::zero(&r, 2);
        let rep = pinned_areas(&e, &z).unwrap();
        assert_eq!(rep.direct.len(), 9);
        assert!(rep.subset_ok);
        assert_eq!(rep.constructive.len(), 9);
    }

    #[test]
    fn pinned_areas_on_a_line_are_zero() {
        let r = z9();
        let l = Line::from_slope_intercept(&r, 2, 0);
        let e = PointSet::new(&r, 2, l.points().unwrap());
        let z = PointVec::zero(&r, 2);
        let rep = pinned_areas(&e, &z).unwrap();
        assert_eq!(rep.direct.iter().copied().collect::<Vec<_>>(), vec![0]);
        assert!(rep.subset_ok);
    }

    #[test]
    fn pinned_areas_rejects_outside_pin() {
        let r = z9();
        let e = PointSet::from_point_indices(&r, 2, &[1, 2, 3]);
        let z = PointVec::from_point_index(&r, 2, 80);
        assert!(matches!(pinned_areas(&e, &z), Err(GeometryError::PinOutsideSet)));
    }

    #[test]
    fn pinned_areas_constructive_subset_on_random_sets() {
        let r = z9();
        let mut rng = ChaCha8Rng::seed_from_u64(73);
        for _ in 0..30 {
            let size = rng.gen_range(10..=81);
            let idx: Vec<u64> = sample(&mut rng, 81, size).iter().map(|i| i as u64).collect();
            let e = PointSet::from_point_indices(&r, 2, &idx);
            let z = pinned_point(&e).unwrap().z;
            let rep = pinned_areas(&e, &z).unwrap();
            assert!(rep.subset_ok);
            for v in &rep.constructive {
                assert!(rep.direct.contains(v));
            }
        }
    }

    #[test]
    fn pinned_areas_translation_invariance() {
        let r = z9();
        let mut rng = ChaCha8Rng::seed_from_u64(79);
        let idx: Vec<u64> = sample(&mut rng, 81, 40).iter().map(|i| i as u64).collect();
        let e = PointSet::from_point_indices(&r, 2, &idx);
        let z = e.points()[0].clone();
        let base = pinned_areas(&e, &z).unwrap();
        for vidx in 0..81u64 {
            let v = PointVec::from_point_index(&r, 2, vidx);
            let shifted = PointSet::new(&r, 2, e.points().iter().map(|p| p.add(&v)).collect());
            let rep = pinned_areas(&shifted, &z.add(&v)).unwrap();
            assert_eq!(rep.direct, base.direct);
        }
    }

    #[test]
    fn pinned_volumes_f3_cube() {
        let r = f3();
        let e = PointSet::full_space(&r, 3);
        let rep = pinned_volumes(&e).unwrap();
        assert_eq!(rep.brute.iter().copied().collect::<Vec<_>>(), vec![0, 1, 2]);
        assert!(rep.subset_ok);
        assert!(rep.inductive.is_some());
    }

    #[test]
    fn pinned_volumes_collinear() {
        let r = z9();
        let pts: Vec<PointVec> =
            (0..9u64).map(|t| PointVec::from_indices(&r, &[t, 0, 0])).collect();
        let e = PointSet::new(&r, 3, pts);
        let rep = pinned_volumes(&e).unwrap();
        assert_eq!(rep.brute.iter().copied().collect::<Vec<_>>(), vec![0]);
        assert!(rep.subset_ok);
    }

    #[test]
    fn pinned_volumes_random_inductive_subset() {
        let r = z9();
        let mut rng = ChaCha8Rng::seed_from_u64(83);
        for _ in 0..5 {
            let size = rng.gen_range(50..=200);
            let idx: Vec<u64> = sample(&mut rng, 729, size).iter().map(|i| i as u64).collect();
            let e = PointSet::from_point_indices(&r, 3, &idx);
            let rep = pinned_volumes(&e).unwrap();
            assert!(rep.subset_ok);
            assert!(rep.inductive.is_some());
            assert!(!rep.inductive.unwrap().is_empty());
        }
    }

    #[test]
    fn bordered_determinant_identity() {
        // det of the (d+1)-bordered matrix equals z_d times the d-minor when
        // the slice coordinates vanish
        let r = z9();
        let mut rng = ChaCha8Rng::seed_from_u64(89);
        for _ in 0..1000 {
            let xs: Vec<Vec<u64>> = (0..3)
                .map(|_| vec![rng.gen_range(0..9), rng.gen_range(0..9), 0])
                .collect();
            let zd = *[1u64, 2, 4, 5, 7, 8].get(rng.gen_range(0..6)).unwrap();
            let z = [rng.gen_range(0..9), rng.gen_range(0..9), zd];
            // 4x4 with first row of ones, columns x1 x2 x3 z
            let mut entries = vec![1u64, 1, 1, 1];
            for row in 0..3 {
                for x in &xs {
                    entries.push(x[row]);
                }
                entries.push(z[row]);
            }
            let big = crate::linalg::SquareMatrix::from_indices(&r, 4, entries);
            let mut small_entries = vec![1u64, 1, 1];
            for row in 0..2 {
                for x in &xs {
                    small_entries.push(x[row]);
                }
            }
            let small = crate::linalg::SquareMatrix::from_indices(&r, 3, small_entries);
            let lhs = big.det().unwrap().index();
            let rhs = r.mul_idx(zd, small.det().unwrap().index());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn incidence_count_equals_er_graph_edges() {
        // duality: points map to [x1, x2, 1], lines to their coefficient
        // classes; incidences equal edges in E_{q,3}(R)
        let r = z9();
        let g = crate::graphs::build_er_graph(&r, 3).unwrap();
        let universe = all_lines(&r);
        let mut rng = ChaCha8Rng::seed_from_u64(97);
        for _ in 0..20 {
            let se = rng.gen_range(1..=81);
            let sl = rng.gen_range(1..=universe.len());
            let e_idx: Vec<u64> = sample(&mut rng, 81, se).iter().map(|i| i as u64).collect();
            let e = PointSet::from_point_indices(&r, 2, &e_idx);
            let lines: Vec<Line> =
                sample(&mut rng, universe.len(), sl).iter().map(|i| universe[i].clone()).collect();
            let geometric = incidences(&e, &lines).observed;
            let xs: Vec<usize> = e
                .points()
                .iter()
                .map(|p| {
                    let v = PointVec::from_indices(&r, &[p.indices()[0], p.indices()[1], 1]);
                    g.class_index(&v).unwrap()
                })
                .collect();
            let ys: Vec<usize> =
                lines.iter().map(|l| g.class_index(l.coeffs().rep()).unwrap()).collect();
            let edges = g.edges_between(&xs, &ys).unwrap();
            assert_eq!(geometric, edges);
        }
    }
}
