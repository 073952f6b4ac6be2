//! Experiment orchestration: seeded random set generation, dispatch across
//! the experiment modules, and CSV/JSON report emission.
//!
//! Reports are byte-identical for identical configs: every trial draws from
//! its own ChaCha stream split off the master seed by counter, all sets are
//! kept in canonical order, and floats are formatted at fixed precision.
//! Wall-clock timing therefore never enters a report; the CLI prints it to
//! stderr.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::counting::{
    self, count_pairs, distinct_dots, nu_spectrum, simplex_classes, CountingError, PointSet,
    SimplexMode,
};
use crate::geometry::{self, GeometryError};
use crate::graphs::{
    build_er_graph_with_guard, build_product_graph_with_guard, part_size_guard, BipartiteGraph,
    GraphError, GraphKind,
};
use crate::linalg::{PointVec, SquareMatrix};
use crate::ring::{Ring, RingError};
use crate::sumproduct::{
    find_witness_direct, threshold_sweep, SpectralContext, SumProductError, UnitSetPair,
};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error("requested size {0} exceeds the {1}-element universe")]
    SizeExceedsUniverse(u64, u64),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Counting(#[from] CountingError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    SumProduct(#[from] SumProductError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Nica,
    Mixing,
    Variance,
    Energy,
    DistinctDots,
    Simplices,
    Incidences,
    RichLines,
    PinnedAreas,
    Volumes,
    Permanents,
    SumProduct,
    Spectrum,
}

impl Experiment {
    pub const ALL: [Experiment; 13] = [
        Experiment::Nica,
        Experiment::Mixing,
        Experiment::Variance,
        Experiment::Energy,
        Experiment::DistinctDots,
        Experiment::Simplices,
        Experiment::Incidences,
        Experiment::RichLines,
        Experiment::PinnedAreas,
        Experiment::Volumes,
        Experiment::Permanents,
        Experiment::SumProduct,
        Experiment::Spectrum,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Nica => "nica",
            Experiment::Mixing => "mixing",
            Experiment::Variance => "variance",
            Experiment::Energy => "energy",
            Experiment::DistinctDots => "distinct-dots",
            Experiment::Simplices => "simplices",
            Experiment::Incidences => "incidences",
            Experiment::RichLines => "rich-lines",
            Experiment::PinnedAreas => "pinned-areas",
            Experiment::Volumes => "volumes",
            Experiment::Permanents => "permanents",
            Experiment::SumProduct => "sumproduct",
            Experiment::Spectrum => "spectrum",
        }
    }
}

impl std::str::FromStr for Experiment {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Experiment, HarnessError> {
        Experiment::ALL
            .iter()
            .find(|e| e.name() == s)
            .copied()
            .ok_or_else(|| HarnessError::Config(format!("unknown experiment `{s}`")))
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// Constraint on the sampling universe of [`random_point_set`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    None,
    /// Exclude `(R^0)^d`.
    AvoidNonunitCube,
    /// Every coordinate a unit.
    UnitsOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub ring: Ring,
    pub d: usize,
    pub k: usize,
    pub graph: GraphKind,
    pub mode: SimplexMode,
    pub seed: u64,
    pub trials: u32,
    /// One tuple per requested size combination; empty means the
    /// experiment default.
    pub sizes: Vec<Vec<u64>>,
    pub max_part: usize,
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment, ring: Ring) -> ExperimentConfig {
        ExperimentConfig {
            experiment,
            ring,
            d: 2,
            k: 2,
            graph: GraphKind::Product,
            mode: SimplexMode::UnitsOnly,
            seed: 1,
            trials: 100,
            sizes: Vec::new(),
            max_part: part_size_guard(),
        }
    }

    fn echo(&self) -> String {
        let sizes: Vec<String> = self
            .sizes
            .iter()
            .map(|t| t.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        format!(
            "experiment={} ring={} d={} k={} graph={} mode={} seed={} trials={} sizes=[{}]",
            self.experiment,
            self.ring.descriptor(),
            self.d,
            self.k,
            match self.graph {
                GraphKind::Product => "product",
                GraphKind::ErdosRenyi => "er",
            },
            match self.mode {
                SimplexMode::UnitsOnly => "units-only",
                SimplexMode::AllValues => "all-values",
            },
            self.seed,
            self.trials,
            sizes.join(";")
        )
    }
}

/// One flat report row; unused columns stay empty so every experiment fits
/// the same table.
#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub experiment: String,
    pub family: String,
    pub p: u64,
    pub n: u32,
    pub r: u32,
    pub d: Option<u64>,
    pub k: Option<u64>,
    pub trial: Option<u32>,
    pub size1: Option<u64>,
    pub size2: Option<u64>,
    pub observed: Option<f64>,
    pub main_term: Option<f64>,
    pub bound: Option<f64>,
    pub pass: bool,
}

impl Row {
    fn new(cfg: &ExperimentConfig) -> Row {
        Row {
            experiment: cfg.experiment.name().to_string(),
            family: cfg.ring.family().to_string(),
            p: cfg.ring.p(),
            n: cfg.ring.n(),
            r: cfg.ring.r(),
            d: None,
            k: None,
            trial: None,
            size1: None,
            size2: None,
            observed: None,
            main_term: None,
            bound: None,
            pass: true,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub rows: usize,
    pub failures: usize,
    pub pass_rate: f64,
    /// Largest `|observed - main_term|` over rows carrying both.
    pub max_deviation: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub config: String,
    pub rows: Vec<Row>,
    pub summary: Summary,
}

impl ExperimentReport {
    fn assemble(config: String, rows: Vec<Row>) -> ExperimentReport {
        let failures = rows.iter().filter(|r| !r.pass).count();
        let pass_rate = if rows.is_empty() {
            1.0
        } else {
            (rows.len() - failures) as f64 / rows.len() as f64
        };
        let max_deviation = rows
            .iter()
            .filter_map(|r| match (r.observed, r.main_term) {
                (Some(o), Some(m)) => Some((o - m).abs()),
                _ => None,
            })
            .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.max(v))));
        let summary = Summary { rows: rows.len(), failures, pass_rate, max_deviation };
        ExperimentReport { config, rows, summary }
    }

    pub fn all_pass(&self) -> bool {
        self.summary.failures == 0
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Csv => self.to_csv(),
            ReportFormat::Json => self.to_json(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# config: {}\n", self.config));
        out.push_str("experiment,family,p,n,r,d,k,trial,size1,size2,observed,main_term,bound,pass\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                row.experiment,
                row.family,
                row.p,
                row.n,
                row.r,
                fmt_opt_u(row.d),
                fmt_opt_u(row.k),
                row.trial.map_or(String::new(), |t| t.to_string()),
                fmt_opt_u(row.size1),
                fmt_opt_u(row.size2),
                fmt_opt_f(row.observed),
                fmt_opt_f(row.main_term),
                fmt_opt_f(row.bound),
                row.pass
            ));
        }
        out.push_str(&format!(
            "# summary: rows={} failures={} pass_rate={} max_deviation={}\n",
            self.summary.rows,
            self.summary.failures,
            fmt_f(self.summary.pass_rate),
            fmt_opt_f(self.summary.max_deviation)
        ));
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

fn fmt_opt_u(v: Option<u64>) -> String {
    v.map_or(String::new(), |x| x.to_string())
}

fn fmt_f(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 9.0e15 {
        format!("{}", v as i64)
    } else {
        format!("{v:.9e}")
    }
}

fn fmt_opt_f(v: Option<f64>) -> String {
    v.map_or(String::new(), fmt_f)
}

/// The per-trial generator: stream `index` of the master seed, so trials
/// are independent of execution order.
pub fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform sample of `size` distinct points from the constrained universe,
/// reproducible from the generator state.
pub fn random_point_set(
    ring: &Ring,
    d: usize,
    size: u64,
    rng: &mut ChaCha8Rng,
    constraint: Constraint,
) -> Result<PointSet, HarnessError> {
    let universe = constrained_universe(ring, d, constraint);
    if size > universe.len() as u64 {
        return Err(HarnessError::SizeExceedsUniverse(size, universe.len() as u64));
    }
    let picks = rand::seq::index::sample(rng, universe.len(), size as usize);
    let indices: Vec<u64> = picks.iter().map(|i| universe[i]).collect();
    Ok(PointSet::from_point_indices(ring, d, &indices))
}

fn constrained_universe(ring: &Ring, d: usize, constraint: Constraint) -> Vec<u64> {
    let total = (0..d).fold(1u64, |acc, _| acc * ring.order());
    (0..total)
        .filter(|&pidx| match constraint {
            Constraint::None => true,
            Constraint::AvoidNonunitCube => {
                !PointVec::from_point_index(ring, d, pidx).all_nonunit()
            }
            Constraint::UnitsOnly => PointVec::from_point_index(ring, d, pidx)
                .indices()
                .iter()
                .all(|&c| ring.is_unit_idx(c)),
        })
        .collect()
}

fn universe_size(ring: &Ring, d: usize, constraint: Constraint) -> u64 {
    constrained_universe(ring, d, constraint).len() as u64
}

/// Runs one experiment and assembles its report. The exit-code contract of
/// the CLI maps `summary.failures > 0` to a nonzero status.
pub fn run(cfg: &ExperimentConfig) -> Result<ExperimentReport, HarnessError> {
    let rows = match cfg.experiment {
        Experiment::Nica => nica_rows(cfg)?,
        Experiment::Mixing => mixing_rows(cfg, false)?,
        Experiment::Variance => mixing_rows(cfg, true)?,
        Experiment::Energy => energy_rows(cfg, false)?,
        Experiment::DistinctDots => energy_rows(cfg, true)?,
        Experiment::Simplices => simplex_rows(cfg)?,
        Experiment::Incidences => incidence_rows(cfg)?,
        Experiment::RichLines => rich_line_rows(cfg)?,
        Experiment::PinnedAreas => pinned_area_rows(cfg)?,
        Experiment::Volumes => volume_rows(cfg)?,
        Experiment::Permanents => permanent_rows(cfg)?,
        Experiment::SumProduct => sumproduct_rows(cfg)?,
        Experiment::Spectrum => spectrum_rows(cfg)?,
    };
    Ok(ExperimentReport::assemble(cfg.echo(), rows))
}

/// Runs the experiment per size tuple and aggregates one rate row per size.
/// `sumproduct` sweeps report the witness rate and assert it only above the
/// thresholds; all other experiments assert their inequality on every trial.
pub fn sweep(cfg: &ExperimentConfig) -> Result<ExperimentReport, HarnessError> {
    let sizes = if cfg.sizes.is_empty() { default_sizes(cfg)? } else { cfg.sizes.clone() };
    let mut rows = Vec::new();
    if cfg.experiment == Experiment::SumProduct {
        let pairs: Vec<(usize, usize)> = sizes.iter().map(|t| size_pair(t)).collect();
        let report = threshold_sweep(&cfg.ring, &pairs, cfg.trials, cfg.seed)?;
        for sr in report.rows {
            let mut row = Row::new(cfg);
            row.size1 = Some(sr.size1 as u64);
            row.size2 = Some(sr.size2 as u64);
            row.observed = Some(sr.found as f64);
            row.main_term = Some(sr.trials as f64);
            row.bound = Some(sr.found as f64 / sr.trials.max(1) as f64);
            row.pass = sr.ok;
            rows.push(row);
        }
    } else {
        for tuple in sizes {
            let mut sub = cfg.clone();
            sub.sizes = vec![tuple.clone()];
            let rep = run(&sub)?;
            let passes = rep.rows.iter().filter(|r| r.pass).count();
            let mut row = Row::new(cfg);
            row.d = rep.rows.first().and_then(|r| r.d);
            row.k = rep.rows.first().and_then(|r| r.k);
            row.size1 = tuple.first().copied();
            row.size2 = tuple.get(1).copied();
            row.observed = Some(passes as f64);
            row.main_term = Some(rep.rows.len() as f64);
            row.bound = Some(if rep.rows.is_empty() { 1.0 } else { passes as f64 / rep.rows.len() as f64 });
            row.pass = rep.all_pass();
            rows.push(row);
        }
    }
    Ok(ExperimentReport::assemble(format!("sweep {}", cfg.echo()), rows))
}

fn size_pair(tuple: &[u64]) -> (usize, usize) {
    let a = tuple.first().copied().unwrap_or(1) as usize;
    let b = tuple.get(1).copied().unwrap_or(a as u64) as usize;
    (a, b)
}

fn default_sizes(cfg: &ExperimentConfig) -> Result<Vec<Vec<u64>>, HarnessError> {
    let ring = &cfg.ring;
    let full = universe_size(ring, cfg.d, Constraint::None);
    Ok(match cfg.experiment {
        Experiment::Nica => vec![vec![full.min(40), full.min(40)]],
        Experiment::Mixing | Experiment::Variance => {
            vec![vec![0, 0]] // filled from the graph size at run time
        }
        Experiment::Energy | Experiment::DistinctDots => {
            let constrained = universe_size(ring, cfg.d, Constraint::AvoidNonunitCube);
            vec![vec![constrained.min(40), full.min(40)]]
        }
        Experiment::Simplices => vec![vec![full.min(12)]],
        Experiment::Incidences => vec![vec![full.min(40), 40]],
        Experiment::RichLines => {
            let q = ring.q();
            let needed = 3 * ring.order() * ring.order() / q;
            vec![vec![needed.min(full)]]
        }
        Experiment::PinnedAreas => vec![vec![full.min(60)]],
        Experiment::Volumes => vec![vec![universe_size(ring, 3, Constraint::None).min(150)]],
        Experiment::Permanents => vec![vec![ring.order().min(6)]],
        Experiment::SumProduct => {
            let u = ring.unit_count();
            vec![vec![u.div_ceil(2), u.div_ceil(2)]]
        }
        Experiment::Spectrum => vec![vec![0]],
    })
}

fn sizes_or_default(cfg: &ExperimentConfig) -> Result<Vec<Vec<u64>>, HarnessError> {
    if cfg.sizes.is_empty() { default_sizes(cfg) } else { Ok(cfg.sizes.clone()) }
}

fn build_graph(cfg: &ExperimentConfig) -> Result<BipartiteGraph, HarnessError> {
    Ok(match cfg.graph {
        GraphKind::Product => build_product_graph_with_guard(&cfg.ring, cfg.d, cfg.max_part)?,
        GraphKind::ErdosRenyi => build_er_graph_with_guard(&cfg.ring, cfg.d, cfg.max_part)?,
    })
}

fn nica_rows(cfg: &ExperimentConfig) -> Result<Vec<Row>, HarnessError> {
    let ring = &cfg.ring;
    let units: Vec<u64> = ring.units().map(|u| u.index()).collect();
    let mut rows = Vec::new();
    let mut stream = 0u64;
    for tuple in sizes_or_default(cfg)? {
        let (se, sf) = (tuple[0], tuple.get(1).copied().unwrap_or(tuple[0]));
        for trial in 0..cfg.trials {
            let mut rng = trial_rng(cfg.seed, stream);
            stream += 1;
            let e = random_point_set(ring, cfg.d, se, &mut rng, Constraint::None)?;
            let f = random_point_set(ring, cfg.d, sf, &mut rng, Constraint::None)?;
            use rand::Rng;
            let lambda = ring.element(units[rng.gen_range(0..units.len())]);
            let rep = count_pairs(&e, &f, &lambda)?;
            let mut row = Row::new(cfg);
            row.d = Some(cfg.d as u64);
            row.trial = Some(trial);
            row.size1 = Some(se);
            row.size2 = Some(sf);
            row.observed = Some(rep.observed as f64);
            row.main_term = Some(rep.main_term);
            row.bound = Some(rep.bound);
            row.pass = rep.pass;
            rows.push(row);
        }
    }
    Ok(rows)
}

fn mixing_rows(cfg: &ExperimentConfig, variance: bool) -> Result<Vec<Row>, HarnessError> {
    let graph = build_graph(cfg)?;
    let m = graph.part_size();
    let mut rows = Vec::new();
    let mut stream = 0u64;
    for tuple in sizes_or_default(cfg)? {
        let sx = if tuple[0] == 0 { (m / 3).max(1) as u64 } else { tuple[0] };
        let sy = match tuple.get(1).copied() {
            Some(0) | None => (m / 2).max(1) as u64,
            Some(v) => v,
        };
        if sx > m as u64 || sy > m as u64 {
            return Err(HarnessError::SizeExceedsUniverse(sx.max(sy), m as u64));
        }
        for trial in 0..cfg.trials {
            let mut rng = trial_rng(cfg.seed, stream);
            stream += 1;
            let xs = rand::seq::index::sample(&mut rng, m, sx as usize).into_vec();
            let ys = rand::seq::index::sample(&mut rng, m, sy as usize).into_vec();
            let mut row = Row::new(cfg);
            row.d = Some(cfg.d as u64);
            row.trial = Some(trial);
            row.size1 = Some(sx);
            row.size2 = Some(sy);
            if variance {
                let rep = graph.variance_check(&xs, &ys)?;
                row.observed = Some(rep.lhs);
                row.bound = Some(rep.rhs);
                row.pass = rep.pass;
            } else {
                let rep = graph.mixing_check(&xs, &ys)?;
                row.observed = Some(rep.edges_observed as f64);
                row.main_term = Some(rep.edges_predicted);
                row.bound = Some(rep.bound);
                row.pass = rep.pass;
            }
            rows.push(row);
        }
    }
    Ok(rows)
}

fn energy_rows(cfg: &ExperimentConfig, distinct: bool) -> Result<Vec<Row>, HarnessError> {
    let ring = &cfg.ring;
    let mut rows = Vec::new();
    let mut stream = 0u64;
    for tuple in sizes_or_default(cfg)? {
        let (sf, sg) = (tuple[0], tuple.get(1).copied().unwrap_or(tuple[0]));
        for trial in 0..cfg.trials {
            let mut rng = trial_rng(cfg.seed, stream);
            stream += 1;
            let f = random_point_set(ring, cfg.d, sf, &mut rng, Constraint::AvoidNonunitCube)?;
            let g = random_point_set(ring, cfg.d, sg, &mut rng, Constraint::None)?;
            let mut row = Row::new(cfg);
            row.d = Some(cfg.d as u64);
            row.trial = Some(trial);
            row.size1 = Some(sf);
            row.size2 = Some(sg);
            if distinct {
                let rep = distinct_dots(&f, &g)?;
                row.observed = Some(rep.support_size as f64);
                row.main_term = Some(rep.main_term as f64);
                row.bound = Some(rep.cs_lower);
                row.pass = rep.pass;
            } else {
                let (nu, rep) = nu_spectrum(&f, &g)?;
                row.observed = Some(nu.energy as f64);
                row.main_term = Some((nu.total as f64) * (nu.total as f64) / ring.order() as f64);
                row.bound = Some(rep.rhs);
                row.pass = rep.pass;
            }
            rows.push(row);
        }
    }
    Ok(rows)
}

fn simplex_rows(cfg: &ExperimentConfig) -> Result<Vec<Row>, HarnessError> {
    let ring = &cfg.ring;
    let mut rows = Vec::new();
    let mut stream = 0u64;
    for tuple in sizes_or_default(cfg)? {
        for trial in 0..cfg.trials {
            let mut rng = trial_rng(cfg.seed, stream);
            stream += 1;
            let e = random_point_set(ring, cfg.d, tuple[0], &mut rng, Constraint::None)?;
            let rep = simplex_classes(&e, cfg.k, cfg.mode)?;
            let mut row = Row::new(cfg);
            row.d = Some(cfg.d as u64);
            row.k = Some(cfg.k as u64);
            row.trial = Some(trial);
            row.size1 = Some(tuple[0]);
            row.observed = Some(rep.classes as f64);
            row.main_term = Some(rep.ceiling);
            row.bound = Some(rep.ratio);
            rows.push(row);
        }
    }
    Ok(rows)
}

fn incidence_rows(cfg: &ExperimentConfig) -> Result<Vec<Row>, HarnessError> {
    let ring = &cfg.ring;
    let lines = geometry::all_lines(ring);
    let mut rows = Vec::new();
    let mut stream = 0u64;
    for tuple in sizes_or_default(cfg)? {
        let (se, sl) = (tuple[0], tuple.get(1).copied().unwrap_or(tuple[0]));
        if sl > lines.len() as u64 {
            return Err(HarnessError::SizeExceedsUniverse(sl, lines.len() as u64));
        }
        for trial in 0..cfg.trials {
            let mut rng = trial_rng(cfg.seed, stream);
            stream += 1;
            let e = random_point_set(ring, 2, se, &mut rng, Constraint::None)?;
            let picks = rand::seq::index::sample(&mut rng, lines.len(), sl as usize);
            let sample: Vec<geometry::Line> = picks.iter().map(|i| lines[i].clone()).collect();
            let rep = geometry::incidences(&e, &sample);
            let mut row = Row::new(cfg);
            row.d = Some(2);
            row.trial = Some(trial);
            row.size1 = Some(se);
            row.size2 = Some(sl);
            row.observed = Some(rep.observed as f64);
            row.main_term = Some(rep.main_term);
            row.bound = Some(rep.bound);
            row.pass = rep.pass;
            rows.push(row);
        }
    }
    Ok(rows)
}

fn rich_line_rows(cfg: &ExperimentConfig) -> Result<Vec<Row>, HarnessError> {
    let ring = &cfg.ring;
    let q2r = (ring.order() * ring.order()) as f64;
    let mut rows = Vec::new();
    let mut stream = 0u64;
    for tuple in sizes_or_default(cfg)? {
        for trial in 0..cfg.trials {
            let mut rng = trial_rng(cfg.seed, stream);
            stream += 1;
            let e = random_point_set(ring, 2, tuple[0], &mut rng, Constraint::None)?;
            let rep = geometry::rich_lines(&e, None);
            let mut row = Row::new(cfg);
            row.d = Some(2);
            row.trial = Some(trial);
            row.size1 = Some(tuple[0]);
            row.observed = Some(rep.lines.len() as f64);
            row.main_term = Some(q2r / 4.0);
            row.pass = rep.count_ok.unwrap_or(true);
            rows.push(row);
        }
    }
    Ok(rows)
}

fn pinned_area_rows(cfg: &ExperimentConfig) -> Result<Vec<Row>, HarnessError> {
    let ring = &cfg.ring;
    let mut rows = Vec::new();
    let mut stream = 0u64;
    for tuple in sizes_or_default(cfg)? {
        for trial in 0..cfg.trials {
            let mut rng = trial_rng(cfg.seed, stream);
            stream += 1;
            let e = random_point_set(ring, 2, tuple[0].max(1), &mut rng, Constraint::None)?;
            let pin = geometry::pinned_point(&e)?;
            let rep = geometry::pinned_areas(&e, &pin.z)?;
            let mut row = Row::new(cfg);
            row.d = Some(2);
            row.trial = Some(trial);
            row.size1 = Some(tuple[0]);
            row.observed = Some(rep.constructive.len() as f64);
            row.main_term = Some(rep.direct.len() as f64);
            row.bound = Some(ring.order() as f64);
            row.pass = rep.subset_ok && pin.guarantee_ok.unwrap_or(true);
            rows.push(row);
        }
    }
    Ok(rows)
}

fn volume_rows(cfg: &ExperimentConfig) -> Result<Vec<Row>, HarnessError> {
    if cfg.d != 3 {
        return Err(HarnessError::Config(format!("volumes needs --d 3, got {}", cfg.d)));
    }
    let ring = &cfg.ring;
    let mut rows = Vec::new();
    let mut stream = 0u64;
    for tuple in sizes_or_default(cfg)? {
        for trial in 0..cfg.trials {
            let mut rng = trial_rng(cfg.seed, stream);
            stream += 1;
            let e = random_point_set(ring, 3, tuple[0].max(1), &mut rng, Constraint::None)?;
            let rep = geometry::pinned_volumes(&e)?;
            let mut row = Row::new(cfg);
            row.d = Some(3);
            row.trial = Some(trial);
            row.size1 = Some(tuple[0]);
            row.observed = Some(rep.brute.len() as f64);
            row.main_term = Some(ring.order() as f64);
            row.bound = rep.inductive.as_ref().map(|s| s.len() as f64);
            row.pass = rep.subset_ok;
            rows.push(row);
        }
    }
    Ok(rows)
}

fn permanent_rows(cfg: &ExperimentConfig) -> Result<Vec<Row>, HarnessError> {
    use rand::Rng;
    let ring = &cfg.ring;
    let k = cfg.k;
    if !(2..=8).contains(&k) {
        return Err(HarnessError::Config(format!("permanents needs 2 <= k <= 8, got {k}")));
    }
    let units: Vec<u64> = ring.units().map(|u| u.index()).collect();
    let mut rows = Vec::new();
    for trial in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, trial as u64);
        // dual evaluation: Ryser vs the naive permutation sum
        let entries: Vec<u64> = (0..k * k).map(|_| rng.gen_range(0..ring.order())).collect();
        let m = SquareMatrix::from_indices(ring, k, entries);
        let ryser = m.permanent().map_err(CountingError::from)?.index();
        let naive = m.permanent_naive().map_err(CountingError::from)?.index();
        let mut row = Row::new(cfg);
        row.k = Some(k as u64);
        row.trial = Some(trial);
        row.observed = Some(ryser as f64);
        row.main_term = Some(naive as f64);
        row.pass = ryser == naive;
        rows.push(row);

        // reduction identity on a random (u, x, y)
        let u = ring.element(units[rng.gen_range(0..units.len())]);
        let x = PointVec::from_indices(ring, &(0..k).map(|_| rng.gen_range(0..ring.order())).collect::<Vec<_>>());
        let y = PointVec::from_indices(ring, &(0..k).map(|_| rng.gen_range(0..ring.order())).collect::<Vec<_>>());
        let ok = counting::permanent_reduction_check(&u, &x, &y)?;
        let mut row = Row::new(cfg);
        row.k = Some(k as u64);
        row.trial = Some(trial);
        row.size1 = Some(u.index());
        row.pass = ok;
        rows.push(row);
    }
    // value-set cross-check at k = 2 against the direct {ad + bc} scan
    let size = sizes_or_default(cfg)?[0][0].min(ring.order());
    let mut rng = trial_rng(cfg.seed, cfg.trials as u64);
    let base = rand::seq::index::sample(&mut rng, ring.order() as usize, size as usize);
    let a: Vec<crate::ring::RingElement> = base.iter().map(|i| ring.element(i as u64)).collect();
    let rep = counting::permanent_value_set(ring, &a, 2)?;
    let mut oracle = std::collections::BTreeSet::new();
    for x in &a {
        for y in &a {
            for z in &a {
                for w in &a {
                    oracle.insert(x.mul(w).add(&y.mul(z)).index());
                }
            }
        }
    }
    let mut row = Row::new(cfg);
    row.k = Some(2);
    row.size1 = Some(size);
    row.observed = Some(rep.values.len() as f64);
    row.main_term = Some(oracle.len() as f64);
    row.pass = rep.values == oracle;
    rows.push(row);
    Ok(rows)
}

fn sumproduct_rows(cfg: &ExperimentConfig) -> Result<Vec<Row>, HarnessError> {
    let ring = &cfg.ring;
    let ctx = SpectralContext::with_guard(ring, cfg.max_part)?;
    let units: Vec<u64> = ring.units().map(|u| u.index()).collect();
    let mut rows = Vec::new();
    let mut stream = 0u64;
    for tuple in sizes_or_default(cfg)? {
        let (s1, s2) = size_pair(&tuple);
        if s1 > units.len() || s2 > units.len() {
            return Err(HarnessError::SizeExceedsUniverse(s1.max(s2) as u64, units.len() as u64));
        }
        for trial in 0..cfg.trials {
            let mut rng = trial_rng(cfg.seed, stream);
            stream += 1;
            let x1: Vec<u64> =
                rand::seq::index::sample(&mut rng, units.len(), s1).iter().map(|i| units[i]).collect();
            let x2: Vec<u64> =
                rand::seq::index::sample(&mut rng, units.len(), s2).iter().map(|i| units[i]).collect();
            let pair = UnitSetPair::from_indices(ring, &x1, &x2)?;
            let direct = find_witness_direct(&pair);
            let spectral = ctx.find_witness(&pair);
            let agree = direct.is_some() == spectral.witness.is_some();
            let witness_valid = match &spectral.witness {
                None => true,
                Some((x, y)) => {
                    x.is_unit()
                        && y.is_unit()
                        && pair.x1().binary_search(&x.add(y).index()).is_ok()
                        && pair.x2().binary_search(&x.mul(y).index()).is_ok()
                }
            };
            let threshold_ok = !pair.meets_ring_threshold() || direct.is_some();
            let field_ok =
                ring.r() != 1 || !pair.meets_field_threshold() || direct.is_some();
            let mut row = Row::new(cfg);
            row.trial = Some(trial);
            row.size1 = Some(s1 as u64);
            row.size2 = Some(s2 as u64);
            row.observed = Some(spectral.edges as f64);
            row.main_term = Some(spectral.lower_bound);
            row.pass = agree
                && witness_valid
                && spectral.bound_ok
                && spectral.a1_ok
                && spectral.a3_ok
                && threshold_ok
                && field_ok;
            rows.push(row);
        }
    }
    Ok(rows)
}

fn spectrum_rows(cfg: &ExperimentConfig) -> Result<Vec<Row>, HarnessError> {
    let graph = build_graph(cfg)?;
    let sigma2 = graph.third_eigenvalue();
    let bound = graph.spectral_bound();
    let mut rows = Vec::new();

    let mut row = Row::new(cfg);
    row.d = Some(cfg.d as u64);
    row.observed = Some(sigma2);
    row.bound = Some(bound);
    row.pass = sigma2 <= bound + 1e-6;
    rows.push(row);

    let mut row = Row::new(cfg);
    row.d = Some(cfg.d as u64);
    row.observed = Some(graph.sigma1());
    row.main_term = Some(graph.deg_a() as f64);
    row.pass = (graph.sigma1() - graph.deg_a() as f64).abs()
        <= 1e-9 * (graph.deg_a() as f64).max(1.0);
    rows.push(row);

    // connectivity is reported, not assumed: λ_3 = σ_2 presumes a simple
    // top singular value
    let mut row = Row::new(cfg);
    row.d = Some(cfg.d as u64);
    row.observed = Some(if graph.is_connected() { 1.0 } else { 0.0 });
    rows.push(row);
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Family;

    fn z9() -> Ring {
        Ring::new(3, 1, 2, Family::Cyclic).unwrap()
    }

    fn cfg(experiment: Experiment) -> ExperimentConfig {
        let mut c = ExperimentConfig::new(experiment, z9());
        c.trials = 8;
        c.seed = 7;
        c
    }

    #[test]
    fn all_experiments_run_clean_on_z9() {
        for exp in Experiment::ALL {
            let mut c = cfg(exp);
            if exp == Experiment::Volumes {
                c.d = 3;
            }
            if matches!(exp, Experiment::Mixing | Experiment::Variance | Experiment::Spectrum) {
                c.graph = GraphKind::Product;
            }
            let rep = run(&c).unwrap_or_else(|e| panic!("{exp} failed: {e}"));
            assert!(rep.all_pass(), "{exp} had failures:\n{}", rep.to_csv());
        }
    }

    #[test]
    fn reports_are_byte_identical_for_identical_configs() {
        let c = cfg(Experiment::Nica);
        let a = run(&c).unwrap();
        let b = run(&c).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn different_seeds_change_the_rows() {
        let mut c1 = cfg(Experiment::Nica);
        c1.trials = 20;
        let mut c2 = c1.clone();
        c2.seed = 8;
        let a = run(&c1).unwrap();
        let b = run(&c2).unwrap();
        assert_ne!(a.to_csv(), b.to_csv());
    }

    #[test]
    fn random_point_set_is_reproducible_and_respects_constraints() {
        let ring = z9();
        let mut rng1 = trial_rng(5, 0);
        let mut rng2 = trial_rng(5, 0);
        let a = random_point_set(&ring, 2, 20, &mut rng1, Constraint::AvoidNonunitCube).unwrap();
        let b = random_point_set(&ring, 2, 20, &mut rng2, Constraint::AvoidNonunitCube).unwrap();
        assert_eq!(
            a.points().iter().map(|p| p.point_index()).collect::<Vec<_>>(),
            b.points().iter().map(|p| p.point_index()).collect::<Vec<_>>()
        );
        assert!(a.avoids_nonunit_cube());

        // the constrained universe has 81 - 9 = 72 points
        let full = random_point_set(&ring, 2, 72, &mut rng1, Constraint::AvoidNonunitCube).unwrap();
        assert_eq!(full.len(), 72);
        assert!(matches!(
            random_point_set(&ring, 2, 73, &mut rng1, Constraint::AvoidNonunitCube),
            Err(HarnessError::SizeExceedsUniverse(73, 72))
        ));
    }

    #[test]
    fn units_only_universe() {
        let ring = z9();
        let mut rng = trial_rng(5, 1);
        let s = random_point_set(&ring, 2, 36, &mut rng, Constraint::UnitsOnly).unwrap();
        assert_eq!(s.len(), 36);
        for p in s.points() {
            assert!(p.indices().iter().all(|&c| ring.is_unit_idx(c)));
        }
    }

    #[test]
    fn unknown_experiment_is_a_usage_error() {
        let err = "frobnicate".parse::<Experiment>().unwrap_err();
        assert!(matches!(err, HarnessError::Config(_)));
    }

    #[test]
    fn sweep_reports_rates_per_size() {
        let mut c = cfg(Experiment::SumProduct);
        c.sizes = vec![vec![6, 6], vec![2, 2]];
        c.trials = 10;
        let rep = sweep(&c).unwrap();
        assert_eq!(rep.rows.len(), 2);
        assert_eq!(rep.rows[0].observed, Some(10.0)); // full unit sets always succeed
        assert!(rep.rows.iter().all(|r| r.pass));
    }

    #[test]
    fn spectrum_rows_carry_bound_and_connectivity() {
        let c = cfg(Experiment::Spectrum);
        let rep = run(&c).unwrap();
        assert_eq!(rep.rows.len(), 3);
        assert!(rep.all_pass());
        assert_eq!(rep.rows[2].observed, Some(1.0)); // product graph is connected
    }
}
