//! The product graph `P_{q,r}(R)` and Erdős–Rényi graph `E_{q,d}(R)`,
//! their singular spectra, and the mixing / variance inequalities.
//!
//! Both graphs are biregular and bipartite, so the adjacency spectrum is the
//! signed multiset `{±σ_i}` of the biadjacency singular values, `λ_1 = σ_1`
//! equals the degree, and the third eigenvalue `λ_3` of the mixing lemma is
//! the second singular value `σ_2`. Spectra are computed once per graph on
//! the biadjacency (half the dimension of the full adjacency) and cached.

use std::collections::HashMap;
use std::io::{self, Write};

use nalgebra::DMatrix;
use once_cell::sync::OnceCell;
use thiserror::Error;

use crate::linalg::{proj_class, proj_representatives, PointVec};
use crate::ring::Ring;

/// Default per-part size guard; larger graphs are rejected, not subsampled.
/// Override with the `CHAINRING_MAX_PART` environment variable.
pub const DEFAULT_MAX_PART: usize = 20_000;

pub fn part_size_guard() -> usize {
    std::env::var("CHAINRING_MAX_PART")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_MAX_PART)
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("part size {0} exceeds the guard {1} (set CHAINRING_MAX_PART to raise it)")]
    PartTooLarge(usize, usize),
    #[error("graph is not biregular (row degrees differ)")]
    NotBiregular,
    #[error("vertex id {0} is outside the part of size {1}")]
    VertexOutOfRange(usize, usize),
    #[error("the Erdős–Rényi graph needs dimension d >= 2 (got {0})")]
    DimensionTooSmall(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphKind {
    /// Parts `R^d \ (R^0)^d`, edge iff `x . y = 1`.
    Product,
    /// Parts the projective classes of `R^d \ (R^0)^d`, edge iff `x . y = 0`.
    ErdosRenyi,
}

/// One mixing-lemma evaluation: `|e(X,Y) - a|X||Y|/|B|| <= lambda_3 sqrt(|X||Y|)`.
#[derive(Debug, Clone)]
pub struct MixingReport {
    pub edges_observed: u64,
    pub edges_predicted: f64,
    pub bound: f64,
    pub lambda3: f64,
    pub pass: bool,
}

/// One variance-theorem evaluation:
/// `sum_{u in U} (N_V(u) - a|V|/|B|)^2 <= lambda_3^2 |V|`.
#[derive(Debug, Clone)]
pub struct VarianceReport {
    pub lhs: f64,
    pub rhs: f64,
    pub lambda3: f64,
    pub pass: bool,
}

/// A biregular bipartite graph with labelled vertices. Parts A and B are
/// disjoint copies of the same labelled universe; a label may be adjacent to
/// its own copy (`x . x = 1` is allowed by the construction).
pub struct BipartiteGraph {
    ring: Ring,
    d: usize,
    kind: GraphKind,
    labels: Vec<PointVec>,
    words: usize,
    rows: Vec<u64>,
    deg_a: usize,
    deg_b: usize,
    index_of: HashMap<Vec<u64>, usize>,
    singvals: OnceCell<Vec<f64>>,
}

pub fn build_product_graph(ring: &Ring, d: usize) -> Result<BipartiteGraph, GraphError> {
    build_product_graph_with_guard(ring, d, part_size_guard())
}

pub fn build_product_graph_with_guard(
    ring: &Ring,
    d: usize,
    max_part: usize,
) -> Result<BipartiteGraph, GraphError> {
    let order = ring.order();
    let total = (0..d).fold(1u128, |acc, _| acc * order as u128);
    let expected = total - (0..d).fold(1u128, |acc, _| acc * ring.nonunit_count() as u128);
    if expected as usize > max_part {
        return Err(GraphError::PartTooLarge(expected as usize, max_part));
    }
    let mut labels = Vec::with_capacity(expected as usize);
    for pidx in 0..total as u64 {
        let x = PointVec::from_point_index(ring, d, pidx);
        if !x.all_nonunit() {
            labels.push(x);
        }
    }
    BipartiteGraph::from_labels(ring, d, GraphKind::Product, labels, |x, y| x.dot(y).index() == 1)
}

pub fn build_er_graph(ring: &Ring, d: usize) -> Result<BipartiteGraph, GraphError> {
    build_er_graph_with_guard(ring, d, part_size_guard())
}

pub fn build_er_graph_with_guard(
    ring: &Ring,
    d: usize,
    max_part: usize,
) -> Result<BipartiteGraph, GraphError> {
    if d < 2 {
        return Err(GraphError::DimensionTooSmall(d));
    }
    let q = ring.q();
    let r = ring.r();
    let expected = q.pow((d as u32 - 1) * (r - 1)) * ((q.pow(d as u32) - 1) / (q - 1));
    if expected as usize > max_part {
        return Err(GraphError::PartTooLarge(expected as usize, max_part));
    }
    let labels = proj_representatives(ring, d);
    debug_assert_eq!(labels.len() as u64, expected);
    // x . y = 0 is invariant under unit scaling of either argument, so the
    // incidence is well-defined on classes.
    BipartiteGraph::from_labels(ring, d, GraphKind::ErdosRenyi, labels, |x, y| x.dot(y).is_zero())
}

impl BipartiteGraph {
    fn from_labels(
        ring: &Ring,
        d: usize,
        kind: GraphKind,
        labels: Vec<PointVec>,
        adjacent: impl Fn(&PointVec, &PointVec) -> bool,
    ) -> Result<BipartiteGraph, GraphError> {
        let m = labels.len();
        let words = m.div_ceil(64);
        let mut rows = vec![0u64; m * words];
        let mut deg_a = None;
        let mut col_degs = vec![0usize; m];
        for i in 0..m {
            let mut row_deg = 0usize;
            for j in 0..m {
                if adjacent(&labels[i], &labels[j]) {
                    rows[i * words + j / 64] |= 1 << (j % 64);
                    row_deg += 1;
                    col_degs[j] += 1;
                }
            }
            match deg_a {
                None => deg_a = Some(row_deg),
                Some(a) if a != row_deg => return Err(GraphError::NotBiregular),
                _ => {}
            }
        }
        let deg_a = deg_a.unwrap_or(0);
        let deg_b = col_degs.first().copied().unwrap_or(0);
        if col_degs.iter().any(|&c| c != deg_b) {
            return Err(GraphError::NotBiregular);
        }
        let index_of = labels.iter().enumerate().map(|(i, l)| (l.indices().to_vec(), i)).collect();
        Ok(BipartiteGraph {
            ring: ring.clone(),
            d,
            kind,
            labels,
            words,
            rows,
            deg_a,
            deg_b,
            index_of,
            singvals: OnceCell::new(),
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn dimension(&self) -> usize {
        self.d
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    /// |A| (= |B|; the two parts are copies of the same labelled set).
    pub fn part_size(&self) -> usize {
        self.labels.len()
    }

    pub fn deg_a(&self) -> usize {
        self.deg_a
    }

    pub fn deg_b(&self) -> usize {
        self.deg_b
    }

    pub fn labels(&self) -> &[PointVec] {
        &self.labels
    }

    pub fn is_edge(&self, a: usize, b: usize) -> bool {
        self.rows[a * self.words + b / 64] & (1 << (b % 64)) != 0
    }

    /// A-part index of a labelled vertex (exact label match).
    pub fn vertex_index(&self, label: &PointVec) -> Option<usize> {
        self.index_of.get(label.indices()).copied()
    }

    /// Class index of an arbitrary point of `R^d \ (R^0)^d` (Erdős–Rényi
    /// graphs canonicalize first).
    pub fn class_index(&self, x: &PointVec) -> Option<usize> {
        match self.kind {
            GraphKind::Product => self.vertex_index(x),
            GraphKind::ErdosRenyi => {
                let cls = proj_class(x).ok()?;
                self.vertex_index(cls.rep())
            }
        }
    }

    pub fn neighbors(&self, a: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.deg_a);
        for j in 0..self.part_size() {
            if self.is_edge(a, j) {
                out.push(j);
            }
        }
        out
    }

    /// Descending singular values of the biadjacency, computed once. The
    /// adjacency spectrum of the bipartite graph is `{±σ_i}`.
    pub fn singular_values(&self) -> &[f64] {
        self.singvals.get_or_init(|| {
            let m = self.part_size();
            let mat = DMatrix::from_fn(m, m, |i, j| if self.is_edge(i, j) { 1.0 } else { 0.0 });
            let mut sv: Vec<f64> = mat.svd(false, false).singular_values.iter().copied().collect();
            sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
            sv
        })
    }

    /// `σ_1`, equal to the common degree for these graphs.
    pub fn sigma1(&self) -> f64 {
        self.singular_values().first().copied().unwrap_or(0.0)
    }

    /// The third adjacency eigenvalue `λ_3 = σ_2` used by the mixing lemma.
    pub fn third_eigenvalue(&self) -> f64 {
        self.singular_values().get(1).copied().unwrap_or(0.0)
    }

    /// The proved ceiling for `λ_3`: `sqrt(q^{(d-1)(2r-1)})` for the product
    /// graph and `sqrt(q^{(d-2)(2r-1)})` for the Erdős–Rényi graph.
    pub fn spectral_bound(&self) -> f64 {
        let q = self.ring.q() as f64;
        let r = self.ring.r() as f64;
        let d = self.d as f64;
        let e = match self.kind {
            GraphKind::Product => (d - 1.0) * (2.0 * r - 1.0),
            GraphKind::ErdosRenyi => (d - 2.0) * (2.0 * r - 1.0),
        };
        q.powf(e / 2.0)
    }

    fn part_mask(&self, ids: &[usize]) -> Result<Vec<u64>, GraphError> {
        let m = self.part_size();
        let mut mask = vec![0u64; self.words];
        for &id in ids {
            if id >= m {
                return Err(GraphError::VertexOutOfRange(id, m));
            }
            mask[id / 64] |= 1 << (id % 64);
        }
        Ok(mask)
    }

    /// Exact `e(X, Y)` by bit counting.
    pub fn edges_between(&self, xs: &[usize], ys: &[usize]) -> Result<u64, GraphError> {
        let ymask = self.part_mask(ys)?;
        let m = self.part_size();
        let mut count = 0u64;
        for &x in xs {
            if x >= m {
                return Err(GraphError::VertexOutOfRange(x, m));
            }
            let row = &self.rows[x * self.words..(x + 1) * self.words];
            for (w, y) in row.iter().zip(&ymask) {
                count += (w & y).count_ones() as u64;
            }
        }
        Ok(count)
    }

    /// Expander mixing lemma check for `X ⊆ A`, `Y ⊆ B`.
    pub fn mixing_check(&self, xs: &[usize], ys: &[usize]) -> Result<MixingReport, GraphError> {
        let observed = self.edges_between(xs, ys)?;
        let predicted = self.deg_a as f64 * xs.len() as f64 * ys.len() as f64 / self.part_size() as f64;
        let lambda3 = self.third_eigenvalue();
        let bound = lambda3 * ((xs.len() as f64) * (ys.len() as f64)).sqrt();
        let pass = (observed as f64 - predicted).abs() <= bound + 1e-6;
        Ok(MixingReport { edges_observed: observed, edges_predicted: predicted, bound, lambda3, pass })
    }

    /// Degree-variance check for `U ⊆ A`, `V ⊆ B`.
    pub fn variance_check(&self, us: &[usize], vs: &[usize]) -> Result<VarianceReport, GraphError> {
        let vmask = self.part_mask(vs)?;
        let m = self.part_size();
        let mean = self.deg_a as f64 * vs.len() as f64 / m as f64;
        let mut lhs = 0.0;
        for &u in us {
            if u >= m {
                return Err(GraphError::VertexOutOfRange(u, m));
            }
            let row = &self.rows[u * self.words..(u + 1) * self.words];
            let nv: u64 = row.iter().zip(&vmask).map(|(w, v)| (w & v).count_ones() as u64).sum();
            let dev = nv as f64 - mean;
            lhs += dev * dev;
        }
        let lambda3 = self.third_eigenvalue();
        let rhs = lambda3 * lambda3 * vs.len() as f64;
        Ok(VarianceReport { lhs, rhs, lambda3, pass: lhs <= rhs + 1e-6 })
    }

    /// BFS connectivity over the full bipartite vertex set. Disconnected
    /// graphs (e.g. the d = 2 Erdős–Rényi matchings) make the "third
    /// eigenvalue" identification `λ_3 = σ_2` ambiguous, so callers report
    /// this flag alongside spectra instead of silently assuming it.
    pub fn is_connected(&self) -> bool {
        let m = self.part_size();
        if m == 0 {
            return true;
        }
        let mut seen_a = vec![false; m];
        let mut seen_b = vec![false; m];
        let mut queue = vec![(0usize, true)];
        seen_a[0] = true;
        while let Some((v, in_a)) = queue.pop() {
            if in_a {
                let row = &self.rows[v * self.words..(v + 1) * self.words];
                for j in 0..m {
                    if row[j / 64] & (1 << (j % 64)) != 0 && !seen_b[j] {
                        seen_b[j] = true;
                        queue.push((j, false));
                    }
                }
            } else {
                for i in 0..m {
                    if self.is_edge(i, v) && !seen_a[i] {
                        seen_a[i] = true;
                        queue.push((i, true));
                    }
                }
            }
        }
        seen_a.iter().all(|&s| s) && seen_b.iter().all(|&s| s)
    }

    /// Dense `(2m)^2` adjacency of the full bipartite graph, for
    /// cross-validation against an independent eigensolver.
    pub fn adjacency_matrix(&self) -> Vec<Vec<f64>> {
        let m = self.part_size();
        let mut a = vec![vec![0.0; 2 * m]; 2 * m];
        for i in 0..m {
            for j in 0..m {
                if self.is_edge(i, j) {
                    a[i][m + j] = 1.0;
                    a[m + j][i] = 1.0;
                }
            }
        }
        a
    }

    /// Writes the adjacency dump: a header line
    /// `part_a=<m> part_b=<n> deg_a=<a> deg_b=<b>`, then one line per
    /// A-vertex with its label, a colon, and space-separated neighbor ids.
    pub fn dump(&self, w: &mut impl Write) -> io::Result<()> {
        writeln!(
            w,
            "part_a={} part_b={} deg_a={} deg_b={}",
            self.part_size(),
            self.part_size(),
            self.deg_a,
            self.deg_b
        )?;
        for (i, label) in self.labels.iter().enumerate() {
            let nbrs: Vec<String> = self.neighbors(i).iter().map(|j| j.to_string()).collect();
            writeln!(w, "{label}: {}", nbrs.join(" "))?;
        }
        Ok(())
    }

    /// Writes the spectrum dump: descending singular values, one per line,
    /// 12 significant digits.
    pub fn dump_spectrum(&self, w: &mut impl Write) -> io::Result<()> {
        for s in self.singular_values() {
            writeln!(w, "{s:.11e}")?;
        }
        Ok(())
    }
}

impl std::fmt::Debug for BipartiteGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "BipartiteGraph({:?}, {}, d={}, |A|={}, deg={})",
            self.kind,
            self.ring.descriptor(),
            self.d,
            self.part_size(),
            self.deg_a
        )
    }
}

/// Eigenvalues of a dense symmetric matrix by cyclic Jacobi rotations,
/// descending. Deliberately independent of the SVD route so the two can
/// cross-check each other.
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    if n == 0 {
        return Vec::new();
    }
    let scale: f64 = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
    for _sweep in 0..200 {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[p][q] * a[p][q];
            }
        }
        if off.sqrt() <= 1e-13 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let app = a[p][p];
                let aqq = a[q][q];
                a[p][p] = app - t * apq;
                a[q][q] = aqq + t * apq;
                a[p][q] = 0.0;
                a[q][p] = 0.0;
                for k in 0..n {
                    if k != p && k != q {
                        let akp = a[k][p];
                        let akq = a[k][q];
                        a[k][p] = c * akp - s * akq;
                        a[p][k] = a[k][p];
                        a[k][q] = s * akp + c * akq;
                        a[q][k] = a[k][q];
                    }
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    eig.sort_by(|x, y| y.partial_cmp(x).unwrap());
    eig
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Family;
    use rand::seq::index::sample;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn z9() -> Ring {
        Ring::new(3, 1, 2, Family::Cyclic).unwrap()
    }

    fn f3() -> Ring {
        Ring::make(3, 1, 1).unwrap()
    }

    #[test]
    fn product_graph_structure() {
        let g = build_product_graph(&f3(), 2).unwrap();
        assert_eq!(g.part_size(), 8);
        assert_eq!(g.deg_a(), 3);
        assert_eq!(g.deg_b(), 3);

        let g = build_product_graph(&z9(), 2).unwrap();
        assert_eq!(g.part_size(), 72);
        assert_eq!(g.deg_a(), 9);
        assert!(g.third_eigenvalue() <= 27f64.sqrt() + 1e-6);
    }

    #[test]
    fn er_graph_structure() {
        let g = build_er_graph(&z9(), 3).unwrap();
        assert_eq!(g.part_size(), 117);
        assert_eq!(g.deg_a(), 12);
        assert!(g.third_eigenvalue() <= 27f64.sqrt() + 1e-6);

        let g = build_er_graph(&f3(), 3).unwrap();
        assert_eq!(g.part_size(), 13); // projective plane of order 3
        assert_eq!(g.deg_a(), 4);
        assert!(g.third_eigenvalue() <= 3f64.sqrt() + 1e-6);
    }

    #[test]
    fn sigma1_equals_degree() {
        for g in [
            build_product_graph(&f3(), 2).unwrap(),
            build_product_graph(&z9(), 2).unwrap(),
            build_er_graph(&z9(), 3).unwrap(),
        ] {
            let rel = (g.sigma1() - g.deg_a() as f64).abs() / g.deg_a() as f64;
            assert!(rel < 1e-9, "sigma1 {} vs degree {}", g.sigma1(), g.deg_a());
        }
    }

    #[test]
    fn third_eigenvalue_of_special_graphs() {
        // complete bipartite: rank-1 biadjacency, sigma2 = 0
        let ring = f3();
        let labels: Vec<PointVec> =
            (0..4).map(|i| PointVec::from_point_index(&ring, 2, i)).collect();
        let g = BipartiteGraph::from_labels(&ring, 2, GraphKind::Product, labels.clone(), |_, _| true)
            .unwrap();
        assert!(g.third_eigenvalue().abs() < 1e-9);
        // perfect matching: identity biadjacency, sigma2 = 1
        let g = BipartiteGraph::from_labels(&ring, 2, GraphKind::Product, labels, |x, y| {
            x.point_index() == y.point_index()
        })
        .unwrap();
        assert!((g.third_eigenvalue() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn spectrum_matches_independent_jacobi_at_3_1_2() {
        let g = build_product_graph(&f3(), 2).unwrap();
        let eig = jacobi_eigenvalues(g.adjacency_matrix());
        let sv = g.singular_values();
        // adjacency spectrum is {±σ_i}
        let mut expected: Vec<f64> = sv.iter().flat_map(|&s| [s, -s]).collect();
        expected.sort_by(|x, y| y.partial_cmp(x).unwrap());
        assert_eq!(eig.len(), expected.len());
        for (e, x) in eig.iter().zip(&expected) {
            assert!((e - x).abs() < 1e-8, "{e} vs {x}");
        }
    }

    #[test]
    fn mixing_full_parts_is_exact() {
        let g = build_product_graph(&z9(), 2).unwrap();
        let all: Vec<usize> = (0..g.part_size()).collect();
        let rep = g.mixing_check(&all, &all).unwrap();
        assert_eq!(rep.edges_observed, (g.deg_a() * g.part_size()) as u64);
        assert!((rep.edges_observed as f64 - rep.edges_predicted).abs() < 1e-9);
        assert!(rep.pass);
    }

    #[test]
    fn mixing_single_vertex_neighborhood() {
        let g = build_product_graph(&z9(), 2).unwrap();
        let ys = g.neighbors(0);
        let rep = g.mixing_check(&[0], &ys).unwrap();
        assert_eq!(rep.edges_observed, g.deg_a() as u64);
        assert!(rep.pass);
    }

    #[test]
    fn mixing_and_variance_on_seeded_random_subsets() {
        let g = build_product_graph(&z9(), 2).unwrap();
        let m = g.part_size();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..1000 {
            let xs = sample(&mut rng, m, m / 3).into_vec();
            let ys = sample(&mut rng, m, m / 2).into_vec();
            assert!(g.mixing_check(&xs, &ys).unwrap().pass);
            assert!(g.variance_check(&xs, &ys).unwrap().pass);
        }
    }

    #[test]
    fn variance_trivial_cases() {
        let g = build_er_graph(&z9(), 3).unwrap();
        let all: Vec<usize> = (0..g.part_size()).collect();
        let rep = g.variance_check(&all, &all).unwrap();
        assert!(rep.lhs.abs() < 1e-9); // N_V(u) = deg exactly
        let rep = g.variance_check(&[], &all).unwrap();
        assert_eq!(rep.lhs, 0.0);
        assert!(rep.pass);
    }

    #[test]
    fn out_of_part_ids_are_rejected() {
        let g = build_er_graph(&f3(), 3).unwrap();
        assert!(matches!(g.mixing_check(&[99], &[0]), Err(GraphError::VertexOutOfRange(99, _))));
    }

    #[test]
    fn size_guard_rejects_not_subsamples() {
        let err = build_product_graph_with_guard(&z9(), 2, 10).unwrap_err();
        assert!(matches!(err, GraphError::PartTooLarge(72, 10)));
    }

    #[test]
    fn er_edges_do_not_depend_on_representatives() {
        // recompute adjacency from randomly scaled class members
        let ring = z9();
        let g = build_er_graph(&ring, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        use rand::Rng;
        for i in 0..g.part_size() {
            for j in 0..g.part_size() {
                let units: Vec<_> = ring.units().collect();
                let s = &units[rng.gen_range(0..units.len())];
                let t = &units[rng.gen_range(0..units.len())];
                let xi = g.labels()[i].scale(s);
                let yj = g.labels()[j].scale(t);
                assert_eq!(g.is_edge(i, j), xi.dot(&yj).is_zero());
            }
        }
    }

    #[test]
    fn er_d2_is_a_perfect_matching_and_disconnected() {
        let g = build_er_graph(&z9(), 2).unwrap();
        assert_eq!(g.part_size(), 12);
        assert_eq!(g.deg_a(), 1);
        assert!(!g.is_connected());
        assert!((g.third_eigenvalue() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn grid_graphs_are_connected_when_degree_is_nontrivial() {
        assert!(build_product_graph(&z9(), 2).unwrap().is_connected());
        assert!(build_er_graph(&z9(), 3).unwrap().is_connected());
    }

    #[test]
    fn dump_format() {
        let g = build_er_graph(&f3(), 2).unwrap();
        let mut buf = Vec::new();
        g.dump(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "part_a=4 part_b=4 deg_a=1 deg_b=1");
        assert_eq!(lines.clone().count(), 4);
        assert!(lines.next().unwrap().contains(": "));
        let mut buf = Vec::new();
        g.dump_spectrum(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 4);
    }
}
