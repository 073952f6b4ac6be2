//! Vectors and small matrices over a chain ring.
//!
//! Determinants use Leibniz/cofactor expansion and permanents use Ryser
//! inclusion-exclusion: both need only `+`, `-`, `*`, which matters because
//! the ring has zero divisors and pivot-based elimination is unsound without
//! unit pivots. A naive permutation-sum permanent is kept as the independent
//! cross-check for the Ryser path.

use std::fmt;

use itertools::Itertools;
use thiserror::Error;

use crate::ring::{Ring, RingElement};

/// Cofactor expansion is exponential; every experiment needs at most 4x4.
pub const MAX_DET_SIZE: usize = 6;
/// Ryser is `2^k * k`; 8 keeps it interactive.
pub const MAX_PERMANENT_SIZE: usize = 8;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("matrix size {0} exceeds the supported maximum {1}")]
    MatrixTooLarge(usize, usize),
    #[error("vector has no unit coordinate")]
    NoUnitCoordinate,
}

/// A point of `R^d`, stored as canonical coordinate indices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PointVec {
    ring: Ring,
    coords: Vec<u64>,
}

impl PointVec {
    pub fn new(elements: Vec<RingElement>) -> PointVec {
        assert!(!elements.is_empty(), "points need at least one coordinate");
        let ring = elements[0].ring().clone();
        for e in &elements[1..] {
            assert!(e.ring() == &ring, "coordinates from mixed rings");
        }
        let coords = elements.iter().map(|e| e.index()).collect();
        PointVec { ring, coords }
    }

    pub fn from_indices(ring: &Ring, coords: &[u64]) -> PointVec {
        assert!(!coords.is_empty());
        for &c in coords {
            assert!(c < ring.order(), "coordinate index out of range");
        }
        PointVec { ring: ring.clone(), coords: coords.to_vec() }
    }

    /// Decodes a point from its index in `[0, order^d)`, base-`order`
    /// little-endian.
    pub fn from_point_index(ring: &Ring, d: usize, mut pidx: u64) -> PointVec {
        let order = ring.order();
        let mut coords = vec![0u64; d];
        for c in coords.iter_mut() {
            *c = pidx % order;
            pidx /= order;
        }
        PointVec { ring: ring.clone(), coords }
    }

    /// The canonical index of the point in `[0, order^d)`.
    pub fn point_index(&self) -> u64 {
        let order = self.ring.order() as u128;
        let mut acc = 0u128;
        for &c in self.coords.iter().rev() {
            acc = acc * order + c as u128;
        }
        u64::try_from(acc).expect("point index fits u64 at desk scale")
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coord(&self, i: usize) -> RingElement {
        self.ring.element(self.coords[i])
    }

    pub fn indices(&self) -> &[u64] {
        &self.coords
    }

    /// True iff the point lies in `(R^0)^d`.
    pub fn all_nonunit(&self) -> bool {
        self.coords.iter().all(|&c| !self.ring.is_unit_idx(c))
    }

    pub fn dot(&self, other: &PointVec) -> RingElement {
        assert!(self.ring == other.ring, "mixed-ring operands");
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        let mut acc = 0u64;
        for (&a, &b) in self.coords.iter().zip(&other.coords) {
            acc = self.ring.add_idx(acc, self.ring.mul_idx(a, b));
        }
        self.ring.element(acc)
    }

    pub fn add(&self, other: &PointVec) -> PointVec {
        assert!(self.ring == other.ring && self.dim() == other.dim());
        let coords = self.coords.iter().zip(&other.coords).map(|(&a, &b)| self.ring.add_idx(a, b)).collect();
        PointVec { ring: self.ring.clone(), coords }
    }

    pub fn sub(&self, other: &PointVec) -> PointVec {
        assert!(self.ring == other.ring && self.dim() == other.dim());
        let coords = self.coords.iter().zip(&other.coords).map(|(&a, &b)| self.ring.sub_idx(a, b)).collect();
        PointVec { ring: self.ring.clone(), coords }
    }

    pub fn scale(&self, s: &RingElement) -> PointVec {
        assert!(self.ring == *s.ring(), "mixed-ring operands");
        let coords = self.coords.iter().map(|&a| self.ring.mul_idx(s.index(), a)).collect();
        PointVec { ring: self.ring.clone(), coords }
    }

    pub fn zero(ring: &Ring, d: usize) -> PointVec {
        PointVec { ring: ring.clone(), coords: vec![0; d] }
    }
}

impl fmt::Debug for PointVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PointVec {
    /// `(e1|e2|...|ed)` with each element in ring text form.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..self.dim()).map(|i| self.coord(i).to_string()).collect();
        write!(f, "({})", parts.join("|"))
    }
}

/// The unit-scaling equivalence class of a point outside `(R^0)^d`,
/// represented by the scaling that sends the first unit coordinate to 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProjClass {
    rep: PointVec,
}

impl ProjClass {
    pub fn rep(&self) -> &PointVec {
        &self.rep
    }
}

impl fmt::Debug for ProjClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.rep)
    }
}

/// Canonicalizes `x` under unit scaling. Fails on points of `(R^0)^d`,
/// which have no class.
pub fn proj_class(x: &PointVec) -> Result<ProjClass, LinalgError> {
    let ring = x.ring();
    let pivot = x
        .indices()
        .iter()
        .position(|&c| ring.is_unit_idx(c))
        .ok_or(LinalgError::NoUnitCoordinate)?;
    let inv = ring.inv_idx(x.indices()[pivot]).expect("pivot is a unit");
    let coords: Vec<u64> = x.indices().iter().map(|&c| ring.mul_idx(inv, c)).collect();
    Ok(ProjClass { rep: PointVec { ring: ring.clone(), coords } })
}

/// The orbit `l_x = { s*x : s in R^* }`, in ascending unit order. For any
/// point with a unit coordinate the orbit has exactly `|R^*|` members.
pub fn line_through_origin(x: &PointVec) -> Result<Vec<PointVec>, LinalgError> {
    if x.all_nonunit() {
        return Err(LinalgError::NoUnitCoordinate);
    }
    Ok(x.ring().units().map(|s| x.scale(&s)).collect())
}

/// Deterministic list of projective class representatives of
/// `R^d \ (R^0)^d`, ascending by representative point index.
pub fn proj_representatives(ring: &Ring, d: usize) -> Vec<PointVec> {
    let order = ring.order();
    let total = (0..d).fold(1u64, |acc, _| acc * order);
    let mut reps = Vec::new();
    let mut seen = vec![false; total as usize];
    for pidx in 0..total {
        if seen[pidx as usize] {
            continue;
        }
        let x = PointVec::from_point_index(ring, d, pidx);
        if x.all_nonunit() {
            continue;
        }
        // mark the whole orbit; the first index visited is the smallest
        for s in ring.units() {
            seen[x.scale(&s).point_index() as usize] = true;
        }
        let rep = proj_class(&x).expect("not all-non-unit").rep.clone();
        reps.push(rep);
    }
    reps
}

/// A `k x k` matrix over a chain ring, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct SquareMatrix {
    ring: Ring,
    k: usize,
    entries: Vec<u64>,
}

impl SquareMatrix {
    pub fn from_rows(rows: Vec<Vec<RingElement>>) -> SquareMatrix {
        let k = rows.len();
        assert!(k > 0 && rows.iter().all(|r| r.len() == k), "matrix must be square");
        let ring = rows[0][0].ring().clone();
        let mut entries = Vec::with_capacity(k * k);
        for row in &rows {
            for e in row {
                assert!(e.ring() == &ring, "entries from mixed rings");
                entries.push(e.index());
            }
        }
        SquareMatrix { ring, k, entries }
    }

    pub fn from_indices(ring: &Ring, k: usize, entries: Vec<u64>) -> SquareMatrix {
        assert_eq!(entries.len(), k * k);
        SquareMatrix { ring: ring.clone(), k, entries }
    }

    pub fn identity(ring: &Ring, k: usize) -> SquareMatrix {
        let mut entries = vec![0u64; k * k];
        for i in 0..k {
            entries[i * k + i] = 1;
        }
        SquareMatrix { ring: ring.clone(), k, entries }
    }

    pub fn size(&self) -> usize {
        self.k
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn entry(&self, i: usize, j: usize) -> RingElement {
        self.ring.element(self.entries[i * self.k + j])
    }

    pub fn matmul(&self, other: &SquareMatrix) -> SquareMatrix {
        assert!(self.ring == other.ring && self.k == other.k);
        let k = self.k;
        let mut entries = vec![0u64; k * k];
        for i in 0..k {
            for j in 0..k {
                let mut acc = 0u64;
                for l in 0..k {
                    acc = self.ring.add_idx(acc, self.ring.mul_idx(self.entries[i * k + l], other.entries[l * k + j]));
                }
                entries[i * k + j] = acc;
            }
        }
        SquareMatrix { ring: self.ring.clone(), k, entries }
    }

    /// Leibniz determinant by cofactor expansion along the first row.
    pub fn det(&self) -> Result<RingElement, LinalgError> {
        if self.k > MAX_DET_SIZE {
            return Err(LinalgError::MatrixTooLarge(self.k, MAX_DET_SIZE));
        }
        Ok(self.ring.element(det_rec(&self.ring, &self.entries, self.k)))
    }

    /// Permanent by Ryser inclusion-exclusion (`2^k * k` ring operations).
    pub fn permanent(&self) -> Result<RingElement, LinalgError> {
        if self.k > MAX_PERMANENT_SIZE {
            return Err(LinalgError::MatrixTooLarge(self.k, MAX_PERMANENT_SIZE));
        }
        let k = self.k;
        let ring = &self.ring;
        let mut acc = 0u64;
        for mask in 1u32..(1 << k) {
            // product over rows of the row sum restricted to the columns in mask
            let mut prod = 1u64;
            for i in 0..k {
                let mut s = 0u64;
                for j in 0..k {
                    if mask & (1 << j) != 0 {
                        s = ring.add_idx(s, self.entries[i * k + j]);
                    }
                }
                prod = ring.mul_idx(prod, s);
            }
            // sign (-1)^(k - |S|)
            if (k as u32 - mask.count_ones()).is_multiple_of(2) {
                acc = ring.add_idx(acc, prod);
            } else {
                acc = ring.sub_idx(acc, prod);
            }
        }
        Ok(ring.element(acc))
    }

    /// Naive `k!`-term permutation sum; the independent oracle for
    /// [`SquareMatrix::permanent`].
    pub fn permanent_naive(&self) -> Result<RingElement, LinalgError> {
        if self.k > MAX_PERMANENT_SIZE {
            return Err(LinalgError::MatrixTooLarge(self.k, MAX_PERMANENT_SIZE));
        }
        let k = self.k;
        let ring = &self.ring;
        let mut acc = 0u64;
        for perm in (0..k).permutations(k) {
            let mut prod = 1u64;
            for (i, &j) in perm.iter().enumerate() {
                prod = ring.mul_idx(prod, self.entries[i * k + j]);
            }
            acc = ring.add_idx(acc, prod);
        }
        Ok(ring.element(acc))
    }
}

impl fmt::Debug for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.k;
        let rows: Vec<String> = (0..k)
            .map(|i| (0..k).map(|j| self.entry(i, j).to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

fn det_rec(ring: &Ring, m: &[u64], k: usize) -> u64 {
    if k == 1 {
        return m[0];
    }
    if k == 2 {
        return ring.sub_idx(ring.mul_idx(m[0], m[3]), ring.mul_idx(m[1], m[2]));
    }
    let mut acc = 0u64;
    let mut minor = vec![0u64; (k - 1) * (k - 1)];
    for col in 0..k {
        let a = m[col];
        if a == 0 {
            continue;
        }
        let mut t = 0;
        for i in 1..k {
            for j in 0..k {
                if j != col {
                    minor[t] = m[i * k + j];
                    t += 1;
                }
            }
        }
        let term = ring.mul_idx(a, det_rec(ring, &minor, k - 1));
        if col % 2 == 0 {
            acc = ring.add_idx(acc, term);
        } else {
            acc = ring.sub_idx(acc, term);
        }
    }
    acc
}

/// `det(x - z, y - z)` for three points of `R^2`, at the index level.
pub fn det2_pinned(ring: &Ring, x: &[u64], y: &[u64], z: &[u64]) -> u64 {
    let a = ring.sub_idx(x[0], z[0]);
    let b = ring.sub_idx(y[0], z[0]);
    let c = ring.sub_idx(x[1], z[1]);
    let d = ring.sub_idx(y[1], z[1]);
    ring.sub_idx(ring.mul_idx(a, d), ring.mul_idx(b, c))
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
    fn dot_product_examples() {
        let r = z9();
        let e1 = PointVec::from_indices(&r, &[1, 0]);
        let e2 = PointVec::from_indices(&r, &[0, 1]);
        assert!(e1.dot(&e2).is_zero());
        let x = PointVec::from_indices(&r, &[2, 3]);
        let y = PointVec::from_indices(&r, &[3, 3]);
        assert_eq!(x.dot(&y).index(), 6);
        let zero = PointVec::zero(&r, 2);
        assert!(x.dot(&zero).is_zero());
    }

    #[test]
    fn determinant_examples() {
        let r = z9();
        assert_eq!(SquareMatrix::identity(&r, 2).det().unwrap(), r.one());
        let pi2 = SquareMatrix::from_indices(&r, 2, vec![3, 0, 0, 3]);
        assert!(pi2.det().unwrap().is_zero());
        let m = SquareMatrix::from_indices(&r, 2, vec![1, 2, 3, 4]);
        assert_eq!(m.det().unwrap().index(), 7); // 4 - 6 mod 9
        let big = SquareMatrix::identity(&r, 7);
        assert!(matches!(big.det(), Err(LinalgError::MatrixTooLarge(7, _))));
    }

    #[test]
    fn permanent_examples() {
        let r = z9();
        assert_eq!(SquareMatrix::identity(&r, 2).permanent().unwrap(), r.one());
        let m = SquareMatrix::from_indices(&r, 2, vec![1, 2, 3, 4]);
        assert_eq!(m.permanent().unwrap().index(), 1); // 4 + 6 mod 9
        let ones = SquareMatrix::from_indices(&r, 3, vec![1; 9]);
        assert_eq!(ones.permanent().unwrap().index(), 6); // 3!
        assert_eq!(ones.permanent_naive().unwrap().index(), 6);
    }

    #[test]
    fn ryser_matches_naive_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for ring in [z9(), Ring::new(3, 2, 2, Family::Polynomial).unwrap()] {
            for _ in 0..250 {
                let k = rng.gen_range(1..=4);
                let entries: Vec<u64> = (0..k * k).map(|_| rng.gen_range(0..ring.order())).collect();
                let m = SquareMatrix::from_indices(&ring, k, entries);
                assert_eq!(m.permanent().unwrap(), m.permanent_naive().unwrap());
            }
        }
    }

    #[test]
    fn det_is_multiplicative_on_2x2() {
        let r = z9();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..10_000 {
            let a = SquareMatrix::from_indices(&r, 2, (0..4).map(|_| rng.gen_range(0..9)).collect());
            let b = SquareMatrix::from_indices(&r, 2, (0..4).map(|_| rng.gen_range(0..9)).collect());
            let lhs = a.matmul(&b).det().unwrap();
            let rhs = a.det().unwrap().mul(&b.det().unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn proj_class_examples() {
        let r = z9();
        let x = PointVec::from_indices(&r, &[2, 4]);
        assert_eq!(proj_class(&x).unwrap().rep().indices(), &[1, 2]);
        let y = PointVec::from_indices(&r, &[3, 1]);
        assert_eq!(proj_class(&y).unwrap().rep().indices(), &[3, 1]);
        let bad = PointVec::from_indices(&r, &[3, 3]);
        assert!(matches!(proj_class(&bad), Err(LinalgError::NoUnitCoordinate)));
    }

    #[test]
    fn proj_class_is_scaling_invariant_exhaustively() {
        let r = z9();
        for pidx in 0..81u64 {
            let x = PointVec::from_point_index(&r, 2, pidx);
            if x.all_nonunit() {
                continue;
            }
            let cls = proj_class(&x).unwrap();
            for t in r.units() {
                assert_eq!(proj_class(&x.scale(&t)).unwrap(), cls);
            }
        }
    }

    #[test]
    fn line_through_origin_examples() {
        let r = z9();
        let x = PointVec::from_indices(&r, &[1, 0]);
        let line = line_through_origin(&x).unwrap();
        assert_eq!(line.len(), 6);
        for p in &line {
            assert_eq!(p.indices()[1], 0);
            assert!(r.is_unit_idx(p.indices()[0]));
        }
        let diag = PointVec::from_indices(&r, &[1, 1]);
        let line = line_through_origin(&diag).unwrap();
        assert!(line.contains(&PointVec::from_indices(&r, &[2, 2])));
        // orbit size |R^*| for every valid point
        for pidx in 0..81u64 {
            let x = PointVec::from_point_index(&r, 2, pidx);
            if x.all_nonunit() {
                continue;
            }
            let orbit = line_through_origin(&x).unwrap();
            let mut idx: Vec<u64> = orbit.iter().map(|p| p.point_index()).collect();
            idx.sort_unstable();
            idx.dedup();
            assert_eq!(idx.len() as u64, r.unit_count());
        }
    }

    #[test]
    fn projective_counts_match_the_er_vertex_formula() {
        // q^{(d-1)(r-1)} (q^d - 1)/(q - 1) over the (q, r, d) grid
        for (ring, d) in [
            (Ring::make(3, 1, 1).unwrap(), 2),
            (Ring::make(3, 1, 1).unwrap(), 3),
            (z9(), 2),
            (z9(), 3),
            (Ring::make(3, 2, 1).unwrap(), 2),
            (Ring::make(3, 2, 1).unwrap(), 3),
            (Ring::new(3, 2, 2, Family::Polynomial).unwrap(), 2),
            (Ring::new(3, 2, 2, Family::Polynomial).unwrap(), 3),
        ] {
            let q = ring.q();
            let r = ring.r();
            let formula = q.pow((d as u32 - 1) * (r - 1)) * ((q.pow(d as u32) - 1) / (q - 1));
            assert_eq!(proj_representatives(&ring, d).len() as u64, formula, "{} d={d}", ring.descriptor());
        }
    }

    #[test]
    fn point_text_form() {
        let r = z9();
        let x = PointVec::from_indices(&r, &[5, 0]);
        assert_eq!(x.to_string(), "(2,1|0,0)");
    }
}
