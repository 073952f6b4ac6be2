//! Dot-product statistics over point sets: pair counts against the
//! `q^{(d-1)(r-1/2)}` deviation bound, the `ν(t)` spectrum and its energy
//! bound, distinct dot-product supports, the simplex congruence-class
//! census, and permanent value sets.
//!
//! Every inequality whose two sides are integers is checked in exact integer
//! arithmetic (both sides multiplied through by `q^r` and squared where
//! needed); floats appear only in report fields.

use std::collections::{BTreeSet, HashSet};

use thiserror::Error;

use crate::linalg::{proj_representatives, PointVec, SquareMatrix};
use crate::ring::{Ring, RingElement};

/// Enumeration ceilings for the census operations.
pub const TUPLE_ENUM_GUARD: u128 = 100_000_000;
/// Largest base-set size for the exact `k = 2` permanent value set.
pub const PERMANENT_SET_MAX_BASE: usize = 81;

#[derive(Debug, Error)]
pub enum CountingError {
    #[error("lambda must be a unit (index {0}); use count_pairs_any_lambda to explore")]
    NonUnitLambda(u64),
    #[error("the first set must avoid (R^0)^d")]
    NonunitCubeOverlap,
    #[error("enumeration guard exceeded: {0}")]
    GuardExceeded(String),
    #[error("gcd(k, q^r) = 1 required: k = {k} is divisible by p = {p}")]
    GcdViolation { k: usize, p: u64 },
    #[error("the base set contains no unit, so the reduced permanent family is undefined")]
    NoUnitInSet,
    #[error("unsupported order k = {0} (need 2 <= k <= 8)")]
    UnsupportedOrder(usize),
    #[error(transparent)]
    Linalg(#[from] crate::linalg::LinalgError),
}

/// A finite set of points of `R^d`, deduplicated and sorted by canonical
/// point index, so iteration order is reproducible.
#[derive(Clone, PartialEq, Eq)]
pub struct PointSet {
    ring: Ring,
    d: usize,
    points: Vec<PointVec>,
}

impl PointSet {
    pub fn new(ring: &Ring, d: usize, mut points: Vec<PointVec>) -> PointSet {
        for p in &points {
            assert!(p.ring() == ring && p.dim() == d, "point outside R^{d}");
        }
        points.sort_by_key(|p| p.point_index());
        points.dedup_by_key(|p| p.point_index());
        PointSet { ring: ring.clone(), d, points }
    }

    pub fn from_point_indices(ring: &Ring, d: usize, indices: &[u64]) -> PointSet {
        let points = indices.iter().map(|&i| PointVec::from_point_index(ring, d, i)).collect();
        PointSet::new(ring, d, points)
    }

    /// All of `R^d`.
    pub fn full_space(ring: &Ring, d: usize) -> PointSet {
        let total = space_size(ring, d);
        PointSet::from_point_indices(ring, d, &(0..total).collect::<Vec<_>>())
    }

    /// `R^d \ (R^0)^d`.
    pub fn outside_nonunit_cube(ring: &Ring, d: usize) -> PointSet {
        let total = space_size(ring, d);
        let points = (0..total)
            .map(|i| PointVec::from_point_index(ring, d, i))
            .filter(|p| !p.all_nonunit())
            .collect();
        PointSet::new(ring, d, points)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[PointVec] {
        &self.points
    }

    pub fn contains(&self, p: &PointVec) -> bool {
        self.points.binary_search_by_key(&p.point_index(), |q| q.point_index()).is_ok()
    }

    pub fn avoids_nonunit_cube(&self) -> bool {
        self.points.iter().all(|p| !p.all_nonunit())
    }
}

impl std::fmt::Debug for PointSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PointSet(|E|={}, d={}, {})", self.len(), self.d, self.ring.descriptor())
    }
}

fn space_size(ring: &Ring, d: usize) -> u64 {
    let total = (0..d).try_fold(1u64, |acc, _| acc.checked_mul(ring.order()));
    let total = total.expect("space size fits u64");
    assert!(total <= 1 << 24, "R^d too large to materialize");
    total
}

fn pow_u128(base: u64, exp: u32) -> u128 {
    (0..exp).fold(1u128, |acc, _| acc * base as u128)
}

/// Observed count against a `main_term ± bound` prediction. `pass` is decided
/// in exact integer arithmetic by the producing operation.
#[derive(Debug, Clone)]
pub struct PairCountReport {
    pub observed: u64,
    pub main_term: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Exact `N_λ(E, F)` plus the deviation check
/// `|N_λ - |E||F|/q^r| <= q^{(d-1)(r-1/2)} sqrt(|E||F|)`.
///
/// The underlying estimate is stated for unit `λ`; non-unit `λ` is rejected
/// here and available through [`count_pairs_any_lambda`] for exploration.
pub fn count_pairs(
    e: &PointSet,
    f: &PointSet,
    lambda: &RingElement,
) -> Result<PairCountReport, CountingError> {
    if !lambda.is_unit() {
        return Err(CountingError::NonUnitLambda(lambda.index()));
    }
    Ok(count_pairs_any_lambda(e, f, lambda))
}

/// Same census as [`count_pairs`] without the unit-`λ` gate. The bound is
/// reported but only proved for units.
pub fn count_pairs_any_lambda(e: &PointSet, f: &PointSet, lambda: &RingElement) -> PairCountReport {
    assert!(e.ring() == f.ring() && e.dim() == f.dim(), "mismatched point sets");
    let ring = e.ring();
    let target = lambda.index();
    let mut observed = 0u64;
    for x in e.points() {
        for y in f.points() {
            if x.dot(y).index() == target {
                observed += 1;
            }
        }
    }
    let (main_term, bound, pass) = deviation_check(ring, e.dim(), e.len(), f.len(), observed);
    PairCountReport { observed, main_term, bound, pass }
}

/// Shared exact check for `|N - ef/q^r| <= q^{(d-1)(r-1/2)} sqrt(ef)`:
/// both sides are multiplied by `q^r` and squared, which keeps everything
/// in integers.
pub(crate) fn deviation_check(
    ring: &Ring,
    d: usize,
    e_len: usize,
    f_len: usize,
    observed: u64,
) -> (f64, f64, bool) {
    let qr = ring.order();
    let ef = e_len as u128 * f_len as u128;
    let main_term = ef as f64 / qr as f64;
    let factor = pow_u128(ring.q(), (d as u32 - 1) * (2 * ring.r() - 1));
    let bound = (factor as f64 * ef as f64).sqrt();
    let dev = (qr as i128 * observed as i128) - ef as i128;
    let pass = (dev * dev) as u128 <= pow_u128(qr, 2) * factor * ef;
    (main_term, bound, pass)
}

/// Result of the exhaustive `d = 1` sweep over every subset pair and every
/// unit `λ`.
#[derive(Debug, Clone)]
pub struct NicaExhaustive {
    pub checks: u64,
    pub failures: u64,
    pub worst_ratio: f64,
}

/// Checks the pair-count deviation bound for *all* subset pairs of `R^1` and
/// all unit `λ`, by bitmask enumeration. Guarded to `q^r <= 12`.
pub fn nica_exhaustive_d1(ring: &Ring) -> Result<NicaExhaustive, CountingError> {
    let m = ring.order();
    if m > 12 {
        return Err(CountingError::GuardExceeded(format!(
            "exhaustive subset sweep needs q^r <= 12, got {m}"
        )));
    }
    let m = m as usize;
    let qr = ring.order() as i128;
    let units: Vec<u64> = ring.units().map(|u| u.index()).collect();
    let mut checks = 0u64;
    let mut failures = 0u64;
    let mut worst_ratio = 0.0f64;
    for &lambda in &units {
        // match_mask[a] = bitmask of b with a*b = lambda
        let mut match_mask = vec![0u16; m];
        for a in 0..m {
            for b in 0..m {
                if ring.mul_idx(a as u64, b as u64) == lambda {
                    match_mask[a] |= 1 << b;
                }
            }
        }
        for emask in 0u32..(1 << m) {
            let e_members: Vec<usize> = (0..m).filter(|&a| emask & (1 << a) != 0).collect();
            let e_len = e_members.len() as i128;
            for fmask in 0u32..(1 << m) {
                let f_len = (fmask.count_ones()) as i128;
                let mut n = 0i128;
                for &a in &e_members {
                    n += (match_mask[a] as u32 & fmask).count_ones() as i128;
                }
                let ef = e_len * f_len;
                // d = 1: |N - ef/q^r| <= sqrt(ef), exactly.
                let dev = qr * n - ef;
                checks += 1;
                if dev * dev > qr * qr * ef {
                    failures += 1;
                }
                if ef > 0 {
                    let ratio = (dev.unsigned_abs() as f64 / qr as f64) / (ef as f64).sqrt();
                    if ratio > worst_ratio {
                        worst_ratio = ratio;
                    }
                }
            }
        }
    }
    Ok(NicaExhaustive { checks, failures, worst_ratio })
}

/// The distribution `ν(t) = |{(x, y) in F x G : x·y = t}|`.
#[derive(Debug, Clone)]
pub struct NuSpectrum {
    /// `counts[t]` indexed by element index.
    pub counts: Vec<u64>,
    pub total: u64,
    pub energy: u128,
    pub support: u64,
}

/// Energy bound report:
/// `sum ν(t)^2 <= |F|^2|G|^2/q^r + q^{(d-1)(2r-1)} |F||G| m`.
#[derive(Debug, Clone)]
pub struct EnergyReport {
    pub energy: u128,
    pub rhs: f64,
    pub line_mass: u64,
    pub pass: bool,
}

/// Computes the ν-spectrum and checks the energy bound. Requires
/// `F ∩ (R^0)^d = ∅`.
pub fn nu_spectrum(f: &PointSet, g: &PointSet) -> Result<(NuSpectrum, EnergyReport), CountingError> {
    assert!(f.ring() == g.ring() && f.dim() == g.dim(), "mismatched point sets");
    if !f.avoids_nonunit_cube() {
        return Err(CountingError::NonunitCubeOverlap);
    }
    let ring = f.ring();
    let order = ring.order() as usize;
    let mut counts = vec![0u64; order];
    for x in f.points() {
        for y in g.points() {
            counts[x.dot(y).index() as usize] += 1;
        }
    }
    let total: u64 = counts.iter().sum();
    debug_assert_eq!(total as usize, f.len() * g.len());
    let energy: u128 = counts.iter().map(|&c| c as u128 * c as u128).sum();
    let support = counts.iter().filter(|&&c| c > 0).count() as u64;
    let spectrum = NuSpectrum { counts, total, energy, support };

    let m = max_line_mass(f);
    let ef = f.len() as u128 * g.len() as u128;
    let qr = ring.order() as u128;
    let factor = pow_u128(ring.q(), (f.dim() as u32 - 1) * (2 * ring.r() - 1));
    // energy * q^r <= (ef)^2 + factor * ef * m * q^r, all in integers
    let pass = energy * qr <= ef * ef + factor * ef * m as u128 * qr;
    let rhs = (ef * ef) as f64 / qr as f64 + (factor * ef * m as u128) as f64;
    Ok((spectrum, EnergyReport { energy, rhs, line_mass: m, pass }))
}

/// `max |F ∩ l_x|` over the projective classes of `R^d \ (R^0)^d`
/// (the orbit `l_x` only depends on the class of `x`).
pub fn max_line_mass(f: &PointSet) -> u64 {
    let ring = f.ring();
    let mut best = 0u64;
    for rep in proj_representatives(ring, f.dim()) {
        let mut mass = 0u64;
        for s in ring.units() {
            if f.contains(&rep.scale(&s)) {
                mass += 1;
            }
        }
        best = best.max(mass);
    }
    best
}

/// Distinct dot-product report: the support of ν plus the Cauchy–Schwarz
/// chain `support >= (|F||G|)^2 / energy >= (|F||G|)^2 / rhs`.
#[derive(Debug, Clone)]
pub struct DistinctDotsReport {
    /// Element indices attaining at least one pair.
    pub support: BTreeSet<u64>,
    pub support_size: u64,
    /// `(|F||G|)^2 / energy`, the proof's lower bound for the support.
    pub cs_lower: f64,
    /// `q^r`, the ceiling the support is compared against.
    pub main_term: u64,
    /// `m q^{(d-1)(2r-1)+r}` vs `|F||G|`: the theorem's smallness ratio.
    pub threshold_ratio: f64,
    pub energy: u128,
    pub pass: bool,
}

pub fn distinct_dots(f: &PointSet, g: &PointSet) -> Result<DistinctDotsReport, CountingError> {
    let (spectrum, energy_report) = nu_spectrum(f, g)?;
    let ring = f.ring();
    let support: BTreeSet<u64> =
        spectrum.counts.iter().enumerate().filter(|(_, &c)| c > 0).map(|(t, _)| t as u64).collect();
    let total = spectrum.total as u128;
    // support * energy >= total^2 (Cauchy–Schwarz), exact in integers; and
    // energy is below the proved right-hand side.
    let cs_ok = spectrum.support as u128 * spectrum.energy >= total * total;
    let pass = (total == 0 || cs_ok) && energy_report.pass;
    let cs_lower = if spectrum.energy == 0 { 0.0 } else { (total * total) as f64 / spectrum.energy as f64 };
    let factor = pow_u128(ring.q(), (f.dim() as u32 - 1) * (2 * ring.r() - 1)) * ring.order() as u128;
    let threshold_ratio = if total == 0 {
        f64::INFINITY
    } else {
        (energy_report.line_mass as u128 * factor) as f64 / total as f64
    };
    Ok(DistinctDotsReport {
        support_size: spectrum.support,
        support,
        cs_lower,
        main_term: ring.order(),
        threshold_ratio,
        energy: spectrum.energy,
        pass,
    })
}

/// Which label tuples the simplex census counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimplexMode {
    /// Only tuples whose pairwise products are all units (the edge-coloring
    /// census with color set `R^*`). The default.
    UnitsOnly,
    /// All pairwise-product label tuples.
    AllValues,
}

#[derive(Debug, Clone)]
pub struct SimplexReport {
    /// Number of distinct `(x_i · x_j)_{i<j}` label tuples over ordered
    /// `(k+1)`-tuples of distinct points.
    pub classes: u64,
    /// `q^{r * C(k+1, 2)}`, the census ceiling.
    pub ceiling: f64,
    pub ratio: f64,
}

/// Census of dot-product congruence classes of `k`-simplices in `E`.
/// Degenerate tuples (repeated points) are excluded.
pub fn simplex_classes(e: &PointSet, k: usize, mode: SimplexMode) -> Result<SimplexReport, CountingError> {
    let n = e.len();
    let tuple_len = k + 1;
    let cost = (0..tuple_len).try_fold(1u128, |acc, _| acc.checked_mul(n as u128));
    match cost {
        Some(c) if c <= TUPLE_ENUM_GUARD => {}
        _ => {
            return Err(CountingError::GuardExceeded(format!(
                "|E|^(k+1) = {n}^{tuple_len} exceeds {TUPLE_ENUM_GUARD}"
            )))
        }
    }
    let ring = e.ring();
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut chosen: Vec<usize> = Vec::with_capacity(tuple_len);
    let mut labels: Vec<u64> = Vec::with_capacity(tuple_len * (tuple_len - 1) / 2);
    let mut used = vec![false; n];
    census_rec(e, ring, tuple_len, mode, &mut chosen, &mut used, &mut labels, &mut seen);
    let classes = seen.len() as u64;
    let pairs = (tuple_len * (tuple_len - 1) / 2) as u32;
    let ceiling = (ring.order() as f64).powi(pairs as i32);
    Ok(SimplexReport { classes, ceiling, ratio: classes as f64 / ceiling })
}

fn census_rec(
    e: &PointSet,
    ring: &Ring,
    tuple_len: usize,
    mode: SimplexMode,
    chosen: &mut Vec<usize>,
    used: &mut [bool],
    labels: &mut Vec<u64>,
    seen: &mut HashSet<Vec<u64>>,
) {
    if chosen.len() == tuple_len {
        seen.insert(labels.clone());
        return;
    }
    let pts = e.points();
    for i in 0..pts.len() {
        if used[i] {
            continue;
        }
        let mut pushed = 0usize;
        let mut ok = true;
        for &j in chosen.iter() {
            let t = pts[j].dot(&pts[i]).index();
            if mode == SimplexMode::UnitsOnly && !ring.is_unit_idx(t) {
                ok = false;
                break;
            }
            labels.push(t);
            pushed += 1;
        }
        if ok {
            chosen.push(i);
            used[i] = true;
            census_rec(e, ring, tuple_len, mode, chosen, used, labels, seen);
            used[i] = false;
            chosen.pop();
        }
        labels.truncate(labels.len() - pushed);
    }
}

#[derive(Debug, Clone)]
pub struct PermanentSetReport {
    /// Element indices attained as permanents.
    pub values: BTreeSet<u64>,
    /// `q^r`.
    pub main_term: u64,
    /// The size threshold `q^{((k-1)(2r-1)+r)/(2k-1)}` above which the value
    /// set is claimed to fill up.
    pub threshold: f64,
    /// The unit scaled out by the reduction, for `k >= 3`.
    pub reduced_u: Option<u64>,
}

/// The permanent value set `P_k(A^k)`. For `k = 2` this is the exact set
/// over all row choices; for `k >= 3` full enumeration of `M_k(A^k)` is
/// intractable and the set is taken over the reduced family `M(u, x, y)`
/// (rows `x`, `y` and `k-2` constant rows `u`), which is the family the
/// fill-up claim is actually proved with.
pub fn permanent_value_set(
    ring: &Ring,
    a: &[RingElement],
    k: usize,
) -> Result<PermanentSetReport, CountingError> {
    if !(2..=8).contains(&k) {
        return Err(CountingError::UnsupportedOrder(k));
    }
    if (k as u64).is_multiple_of(ring.p()) {
        return Err(CountingError::GcdViolation { k, p: ring.p() });
    }
    let mut base: Vec<u64> = a.iter().map(|x| x.index()).collect();
    base.sort_unstable();
    base.dedup();
    let threshold = (ring.q() as f64)
        .powf(((k as f64 - 1.0) * (2.0 * ring.r() as f64 - 1.0) + ring.r() as f64) / (2.0 * k as f64 - 1.0));

    if k == 2 {
        if base.len() > PERMANENT_SET_MAX_BASE {
            return Err(CountingError::GuardExceeded(format!(
                "k = 2 value set needs |A| <= {PERMANENT_SET_MAX_BASE}"
            )));
        }
        // Per [[a,b],[c,d]] = ad + bc, so the set is D + D with D = A*A.
        let mut products = BTreeSet::new();
        for &x in &base {
            for &y in &base {
                products.insert(ring.mul_idx(x, y));
            }
        }
        let mut values = BTreeSet::new();
        for &u in &products {
            for &v in &products {
                values.insert(ring.add_idx(u, v));
            }
        }
        return Ok(PermanentSetReport { values, main_term: ring.order(), threshold, reduced_u: None });
    }

    let tuples = (0..2 * k).try_fold(1u128, |acc, _| acc.checked_mul(base.len() as u128));
    match tuples {
        Some(c) if c <= TUPLE_ENUM_GUARD => {}
        _ => {
            return Err(CountingError::GuardExceeded(format!(
                "|A|^(2k) = {}^{} exceeds {TUPLE_ENUM_GUARD}",
                base.len(),
                2 * k
            )))
        }
    }
    let u = *base.iter().find(|&&x| ring.is_unit_idx(x)).ok_or(CountingError::NoUnitInSet)?;
    // enumerate A^k once, caching each tuple and its coordinate sum
    let mut pool: Vec<(Vec<u64>, u64)> = Vec::new();
    let mut stack = vec![0usize; k];
    loop {
        let tuple: Vec<u64> = stack.iter().map(|&i| base[i]).collect();
        let sum = tuple.iter().fold(0u64, |acc, &x| ring.add_idx(acc, x));
        pool.push((tuple, sum));
        let mut pos = k;
        while pos > 0 {
            stack[pos - 1] += 1;
            if stack[pos - 1] < base.len() {
                break;
            }
            stack[pos - 1] = 0;
            pos -= 1;
        }
        if pos == 0 {
            break;
        }
    }
    let scale = reduction_scale(ring, u, k);
    let mut values = BTreeSet::new();
    for (x, sx) in &pool {
        for (y, sy) in &pool {
            // Per(M(u,x,y)) = (k-2)! u^{k-2} (S_x S_y - x·y)
            let mut xy = 0u64;
            for (&xi, &yi) in x.iter().zip(y) {
                xy = ring.add_idx(xy, ring.mul_idx(xi, yi));
            }
            let core = ring.sub_idx(ring.mul_idx(*sx, *sy), xy);
            values.insert(ring.mul_idx(scale, core));
        }
    }
    Ok(PermanentSetReport { values, main_term: ring.order(), threshold, reduced_u: Some(u) })
}

/// `(k-2)! * u^(k-2)` as a ring element.
fn reduction_scale(ring: &Ring, u: u64, k: usize) -> u64 {
    let fact: u64 = (1..=(k as u64).saturating_sub(2)).product::<u64>().max(1);
    ring.mul_idx(ring.int_embed(fact).index(), ring.pow_idx(u, k as u64 - 2))
}

/// Closed form for the permanent of `M(u, x, y)` (rows `x`, `y`, and `k-2`
/// rows of the constant `u`):
/// `(k-2)! u^{k-2} * sum_i x_i (S_y - y_i)`.
pub fn reduced_permanent(ring: &Ring, u: u64, x: &[u64], y: &[u64]) -> u64 {
    let k = x.len();
    debug_assert_eq!(k, y.len());
    let sy = y.iter().fold(0u64, |acc, &v| ring.add_idx(acc, v));
    let mut acc = 0u64;
    for (&xi, &yi) in x.iter().zip(y) {
        acc = ring.add_idx(acc, ring.mul_idx(xi, ring.sub_idx(sy, yi)));
    }
    ring.mul_idx(reduction_scale(ring, u, k), acc)
}

/// Dual evaluation of the reduction identity: the Ryser permanent of
/// `M(u, x, y)` against the closed form. Returns whether they agree.
pub fn permanent_reduction_check(
    u: &RingElement,
    x: &PointVec,
    y: &PointVec,
) -> Result<bool, CountingError> {
    let ring = u.ring().clone();
    assert!(x.ring() == &ring && y.ring() == &ring, "mixed-ring operands");
    let k = x.dim();
    assert_eq!(k, y.dim(), "row length mismatch");
    if !(2..=8).contains(&k) {
        return Err(CountingError::UnsupportedOrder(k));
    }
    if !u.is_unit() {
        return Err(CountingError::NonUnitLambda(u.index()));
    }
    let mut entries = Vec::with_capacity(k * k);
    entries.extend_from_slice(x.indices());
    entries.extend_from_slice(y.indices());
    for _ in 2..k {
        entries.extend(std::iter::repeat_n(u.index(), k));
    }
    let m = SquareMatrix::from_indices(&ring, k, entries);
    let direct = m.permanent().expect("k <= 8").index();
    let closed = reduced_permanent(&ring, u.index(), x.indices(), y.indices());
    Ok(direct == closed)
}
