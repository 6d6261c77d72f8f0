//! Monte Carlo attack experiments.
//!
//! An experiment fixes an instance and an attack (both derived from the
//! master seed), then for each trial builds a fresh spanner, computes the
//! exact faulty extension `B⁺` and checks stretch on the surviving pairs.
//! Only `det_path_lb` looks at the sampled spanner; every other attack is
//! oblivious.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rayon::prelude::*;

use relspan_core::attacks::{self, Attack, AttackFamily};
use relspan_core::cover::{build_khst_cover, frt_cover, FixedProvider};
use relspan_core::graph::dijkstra;
use relspan_core::hst::{hst_mst_weight, ultrametric_to_khst_cover, Hst};
use relspan_core::hst_spanner::{self, SampleSets, Variant};
use relspan_core::instances;
use relspan_core::metric::{mst_weight, Metric, MetricInstance};
use relspan_core::num::{approx_le, ceil_tol, log2};
use relspan_core::path_spanner::{self as ps, LevelHierarchy};
use relspan_core::ppcs::SpdStrategy;
use relspan_core::reliable::{self, build_minor_free_spanner, MinorFreeConfig, MinorFreeSpanner};
use relspan_core::rng;
use relspan_core::spanner::{verify_stretch, Spanner};

use crate::config::{Config, Preset, VerifyMode};
use crate::formats::{self, FormatError};

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Core(#[from] relspan_core::Error),
    #[error("{0}")]
    Setup(String),
}

impl From<crate::config::ConfigError> for ExperimentError {
    fn from(e: crate::config::ConfigError) -> Self {
        ExperimentError::Setup(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, ExperimentError>;

fn setup(msg: impl Into<String>) -> ExperimentError {
    ExperimentError::Setup(msg.into())
}

const INSTANCE_TAG: u64 = 0x1_0000_0001;
const ATTACK_TAG: u64 = 0x1_0000_0002;
const COVER_TAG: u64 = 0x1_0000_0003;
const VERIFY_TAG: u64 = 0x1_0000_0004;

/// The point set an experiment runs on.
#[derive(Debug, Clone)]
pub enum Subject {
    Tree(Hst),
    Graph(MetricInstance),
}

impl Subject {
    pub fn n(&self) -> usize {
        match self {
            Subject::Tree(t) => t.n(),
            Subject::Graph(m) => m.n(),
        }
    }

    pub fn mst(&self) -> f64 {
        match self {
            Subject::Tree(t) => hst_mst_weight(t),
            Subject::Graph(m) => mst_weight(m),
        }
    }

    fn row(&self, u: usize) -> Vec<f64> {
        match self {
            Subject::Tree(t) => (0..t.n()).map(|v| t.dist(u, v)).collect(),
            Subject::Graph(m) => m.row(u),
        }
    }

    /// Order used by interval attacks: leaf preorder, or vertex ids.
    pub fn order(&self) -> Vec<usize> {
        match self {
            Subject::Tree(t) => t.leaf_order().to_vec(),
            Subject::Graph(m) => (0..m.n()).collect(),
        }
    }
}

impl Metric for Subject {
    fn len(&self) -> usize {
        self.n()
    }

    #[inline]
    fn dist(&self, u: usize, v: usize) -> f64 {
        match self {
            Subject::Tree(t) => t.dist(u, v),
            Subject::Graph(m) => m.dist(u, v),
        }
    }
}

/// Loads or generates the preset's instance.
pub fn load_subject(cfg: &Config) -> Result<Subject> {
    let seed = rng::derive(cfg.seed, INSTANCE_TAG);
    if let Some(path) = &cfg.instance {
        let text = formats::read_file(path)?;
        return Ok(if cfg.preset.hst_instance() {
            let k = if cfg.preset == Preset::Ultrametric2Eps { 1.0 } else { cfg.k };
            Subject::Tree(formats::parse_hst(&text, k)?)
        } else {
            Subject::Graph(formats::parse_instance(&text)?)
        });
    }
    let n = cfg.n;
    Ok(match cfg.preset {
        Preset::Khst => Subject::Tree(instances::random_hst(n, cfg.k, cfg.max_children, seed)?),
        Preset::KhstBd => Subject::Tree(instances::random_binary_hst(n, cfg.k, seed)?),
        Preset::Ultrametric2Eps => Subject::Tree(instances::random_ultrametric(n, cfg.max_children, seed)?),
        Preset::Path => Subject::Graph(MetricInstance::unit_path(n)?),
        Preset::TreeMetric => Subject::Graph(instances::random_tree_metric(n, cfg.max_weight, seed)?),
        Preset::MinorFree2Eps | Preset::Frt => {
            let (r, c) = grid_shape(n);
            Subject::Graph(instances::planar_grid(r, c, cfg.max_weight, seed)?)
        }
        Preset::General => return Err(setup("preset general needs an instance file")),
    })
}

/// `rows × cols` with `rows = ⌊√n⌋` and `cols = ⌊n/rows⌋`.
pub fn grid_shape(n: usize) -> (usize, usize) {
    let r = ((n as f64).sqrt() as usize).max(1);
    (r, (n / r).max(1))
}

/// Everything that does not depend on the trial seed.
pub struct Prepared {
    pub cfg: Config,
    pub subject: Subject,
    pub mst: f64,
    /// Trees of the cover for the composed presets, with their `k` and stretch.
    pub cover: Option<(Vec<Hst>, f64, f64)>,
    /// The oblivious attack; `None` for `det_path_lb`.
    pub attack: Option<Attack>,
    pub h: usize,
}

fn cover_trees(cfg: &Config, subject: &Subject) -> Result<Option<(Vec<Hst>, f64, f64)>> {
    Ok(match (cfg.preset, subject) {
        (Preset::Ultrametric2Eps, Subject::Tree(u)) => {
            let trees = ultrametric_to_khst_cover(u, cfg.eps)?;
            Some((trees, 1.0 / cfg.eps * (1.0 - 1e-9), 1.0 + cfg.eps))
        }
        (Preset::General, Subject::Graph(m)) => {
            let path = cfg.ppc.as_ref().ok_or_else(|| setup("preset general needs ppc = <file>"))?;
            let covers = formats::parse_ppcs(&formats::read_file(path)?, m.n())?;
            let c = build_khst_cover(m, &FixedProvider { covers }, cfg.k)?;
            Some((c.trees, c.k, c.rho))
        }
        (Preset::Frt, Subject::Graph(m)) => {
            let trees = cfg.frt_trees.unwrap_or_else(|| ceil_tol(log2(m.n().max(2) as f64)) as usize);
            let (c, _) =
                frt_cover(m, trees, cfg.frt_target, rng::derive(cfg.seed, COVER_TAG), cfg.frt_budget)?;
            Some((c.trees, c.k * (1.0 - 1e-9), c.rho))
        }
        _ => None,
    })
}

/// The fixed attack of an experiment.
pub fn make_attack(cfg: &Config, subject: &Subject) -> Result<Option<Attack>> {
    let n = subject.n();
    let seed = rng::derive(cfg.seed, ATTACK_TAG);
    let size = cfg.attack_size.resolve(n);
    Ok(Some(match cfg.attack {
        AttackFamily::RandomP => attacks::random_p(n, cfg.p, seed)?,
        AttackFamily::RandomSize => attacks::random_size(n, size, seed)?,
        AttackFamily::Interval => {
            let order = subject.order();
            attacks::interval_in(&order, (n - size) / 2, size)?
        }
        AttackFamily::Subtree => match subject {
            Subject::Tree(t) => attacks::subtree(t, size, seed)?,
            Subject::Graph(_) => return Err(setup("subtree attacks need an HST instance")),
        },
        AttackFamily::DetPathLb => return Ok(None),
        AttackFamily::HstLbTuple => {
            let ell = (n as f64).sqrt().round() as usize;
            if ell * ell != n {
                return Err(setup("hst_lb_tuple needs the star-of-stars instance (n = ell^2)"));
            }
            attacks::random_hst_lb_tuple(ell, seed)?
        }
        AttackFamily::PathObliviousLb => {
            let (_, grid) = attacks::path_scales(n, cfg.nu)?;
            let i = match cfg.lb_scale {
                Some(i) => i,
                None => *grid.scales.first().ok_or_else(|| setup("path too short for the interval grid"))?,
            };
            attacks::random_path_oblivious_lb(&grid, i, seed)?
        }
    }))
}

pub fn prepare(cfg: &Config) -> Result<Prepared> {
    let subject = load_subject(cfg)?;
    let mst = subject.mst();
    let cover = cover_trees(cfg, &subject)?;
    let attack = make_attack(cfg, &subject)?;
    let h = cfg.h.unwrap_or_else(|| ps::max_h(subject.n()));
    Ok(Prepared { cfg: cfg.clone(), subject, mst, cover, attack, h })
}

/// A sampled spanner together with what its `B⁺` oracle needs.
pub enum Extension {
    Hst(SampleSets),
    Path(LevelHierarchy),
    Compose(Vec<SampleSets>),
    MinorFree(Box<MinorFreeSpanner>),
}

pub struct Built {
    pub spanner: Spanner,
    pub ext: Extension,
    pub bound: f64,
}

impl Prepared {
    fn variant(&self) -> Variant {
        if self.cfg.preset == Preset::KhstBd {
            Variant::BoundedDegree
        } else {
            Variant::Basic
        }
    }

    /// Builds the spanner for one trial seed.
    pub fn build(&self, seed: u64) -> Result<Built> {
        let cfg = &self.cfg;
        match (&self.subject, &self.cover) {
            (_, Some((trees, k, rho))) => {
                let v = Variant::Basic;
                let (h, s) = reliable::compose_reliable_spanner(trees, &self.subject, cfg.nu, *k, cfg.c, seed, v)?;
                Ok(Built { spanner: h, ext: Extension::Compose(s), bound: v.stretch_bound(*k) * rho })
            }
            (Subject::Tree(t), None) => {
                let v = self.variant();
                let (h, s) = hst_spanner::build(t, cfg.nu, cfg.k, cfg.c, seed, v)?;
                Ok(Built { spanner: h, ext: Extension::Hst(s), bound: v.stretch_bound(cfg.k) })
            }
            (Subject::Graph(m), None) if cfg.preset == Preset::Path => {
                let w = m.path_weights().ok_or_else(|| setup("preset path needs a path instance"))?;
                let (h, hr) = ps::build_path_spanner(&w, cfg.nu, self.h, cfg.c, seed)?;
                Ok(Built { spanner: h, ext: Extension::Path(hr), bound: 1.0 })
            }
            (Subject::Graph(m), None) => {
                let strategy = if cfg.preset == Preset::TreeMetric { SpdStrategy::Tree } else { cfg.strategy };
                let mf = build_minor_free_spanner(
                    m,
                    &MinorFreeConfig { eps: cfg.eps, nu: cfg.nu, c: cfg.c, c_prime: cfg.c_prime, seed, strategy },
                )?;
                let bound = 2.0 * (1.0 + 8.0 * mf.eps);
                Ok(Built { spanner: mf.spanner.clone(), ext: Extension::MinorFree(Box::new(mf)), bound })
            }
        }
    }

    pub fn bplus(&self, built: &Built, b: &[bool]) -> Vec<bool> {
        match (&built.ext, &self.subject) {
            (Extension::Hst(s), Subject::Tree(t)) => hst_spanner::bplus_mask(t, s, b),
            (Extension::Path(hr), _) => ps::bplus_mask(hr, b),
            (Extension::Compose(s), _) => {
                let trees = &self.cover.as_ref().expect("composed presets keep their cover").0;
                reliable::compose_bplus(trees, s, b)
            }
            (Extension::MinorFree(mf), subject) => mf.bplus(subject, b),
            (Extension::Hst(_), Subject::Graph(_)) => unreachable!("HST spanners are built on trees"),
        }
    }
}

/// One CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub trial: usize,
    pub seed: u64,
    pub attack: &'static str,
    pub b: usize,
    pub bplus: usize,
    pub ratio: f64,
    pub max_stretch: f64,
    pub max_hops: u32,
    pub edges: usize,
    pub weight: f64,
    pub mst: f64,
    pub lightness: f64,
    /// Stretch, hop or domination violations found by the verifier.
    pub violations: usize,
    pub verified: bool,
}

pub const CSV_HEADER: &str = "trial,seed,attack,b,bplus,ratio,max_stretch,max_hops,edges,weight,mst,lightness";

impl Row {
    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.trial,
            self.seed,
            self.attack,
            self.b,
            self.bplus,
            self.ratio,
            self.max_stretch,
            self.max_hops,
            self.edges,
            self.weight,
            self.mst,
            self.lightness
        )
    }
}

/// Stretch and hop check of one trial: `(max stretch, max hops, violations)`.
fn check(prep: &Prepared, built: &Built, b: &[bool], bplus: &[bool], seed: u64) -> Option<(f64, u32, usize)> {
    let n = prep.subject.n();
    let mode = match prep.cfg.verify {
        VerifyMode::Auto if n <= 2048 => VerifyMode::Full,
        VerifyMode::Auto => VerifyMode::Sampled,
        m => m,
    };
    let dom = built.spanner.domination_violations(&prep.subject).len();
    match (mode, &built.ext) {
        (VerifyMode::Off, _) => None,
        (VerifyMode::Full, Extension::Path(hr)) => {
            let rep = ps::verify_path_stretch(hr, b, bplus);
            let hop_bound = 2 * hr.h + 1;
            let stretch = if rep.ok() {
                if rep.pairs > 0 { 1.0 } else { 0.0 }
            } else {
                verify_stretch(&built.spanner, &prep.subject, b, bplus, 1.0, false).max_ratio
            };
            let hop_bad = usize::from(rep.max_hops > hop_bound);
            Some((stretch, rep.max_hops as u32, rep.violation_count + hop_bad + dom))
        }
        (VerifyMode::Full, _) => {
            let rep = verify_stretch(&built.spanner, &prep.subject, b, bplus, built.bound, false);
            Some((rep.max_ratio, 0, rep.violation_count + dom))
        }
        (_, ext) => {
            // Sampled sources, all targets, Dijkstra in H ∖ B.
            let hop_bound = match ext {
                Extension::Path(hr) => Some(2 * hr.h + 1),
                _ => None,
            };
            let mut sources: Vec<usize> = (0..n).filter(|&v| !bplus[v]).collect();
            sources.shuffle(&mut rng::stream(seed, VERIFY_TAG));
            sources.truncate(prep.cfg.pair_samples);
            let g = built.spanner.graph();
            let (mut worst, mut hops, mut bad) = (0.0f64, 0u32, dom);
            for u in sources {
                let sp = dijkstra(&g, u, Some(b));
                let d = prep.subject.row(u);
                for v in (0..n).filter(|&v| v != u && !bplus[v]) {
                    let r = sp.dist[v] / d[v];
                    worst = worst.max(r);
                    hops = hops.max(sp.hops[v]);
                    if !approx_le(r, built.bound) || hop_bound.is_some_and(|hb| sp.hops[v] as usize > hb) {
                        bad += 1;
                    }
                }
            }
            Some((worst, hops, bad))
        }
    }
}

pub fn trial_seed(master: u64, trial: usize) -> u64 {
    rng::derive(master, trial as u64)
}

/// Builds, attacks and verifies one trial.
pub fn run_trial(prep: &Prepared, trial: usize) -> Result<Row> {
    let n = prep.subject.n();
    let seed = trial_seed(prep.cfg.seed, trial);
    let built = prep.build(seed)?;
    let attack = match &prep.attack {
        Some(a) => a.clone(),
        None => attacks::det_path_lb(n, prep.cfg.nu, &built.spanner)?.0,
    };
    let b = attack.mask(n);
    let bplus = prep.bplus(&built, &b);
    let nb = attack.b.len();
    let np = bplus.iter().filter(|&&x| x).count();
    let (max_stretch, max_hops, violations, verified) = match check(prep, &built, &b, &bplus, seed) {
        Some((s, h, v)) => (s, h, v, true),
        None => (0.0, 0, 0, false),
    };
    let weight = built.spanner.weight();
    Ok(Row {
        trial,
        seed,
        attack: attack.family.name(),
        b: nb,
        bplus: np,
        ratio: if nb == 0 { 0.0 } else { (np - nb) as f64 / nb as f64 },
        max_stretch,
        max_hops,
        edges: built.spanner.num_edges(),
        weight,
        mst: prep.mst,
        lightness: if prep.mst > 0.0 { weight / prep.mst } else { 0.0 },
        violations,
        verified,
    })
}

/// Aggregates over all trials.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Aggregate {
    pub trials: usize,
    pub mean_ratio: f64,
    /// `mean + 1.96·sd/√trials`.
    pub ci95_upper: f64,
    pub max_ratio: f64,
    pub mean_extra: f64,
    pub max_stretch: f64,
    pub max_hops: u32,
    pub mean_edges: f64,
    pub max_edges: usize,
    pub mean_weight: f64,
    pub mean_lightness: f64,
    pub max_lightness: f64,
    pub violations: usize,
}

impl Aggregate {
    pub fn of(rows: &[Row]) -> Aggregate {
        let t = rows.len();
        if t == 0 {
            return Aggregate::default();
        }
        let tf = t as f64;
        let mean = |f: &dyn Fn(&Row) -> f64| rows.iter().map(f).sum::<f64>() / tf;
        let mean_ratio = mean(&|r| r.ratio);
        let var = if t > 1 { rows.iter().map(|r| (r.ratio - mean_ratio).powi(2)).sum::<f64>() / (tf - 1.0) } else { 0.0 };
        Aggregate {
            trials: t,
            mean_ratio,
            ci95_upper: mean_ratio + 1.96 * (var / tf).sqrt(),
            max_ratio: rows.iter().map(|r| r.ratio).fold(0.0, f64::max),
            mean_extra: mean(&|r| (r.bplus - r.b) as f64),
            max_stretch: rows.iter().map(|r| r.max_stretch).fold(0.0, f64::max),
            max_hops: rows.iter().map(|r| r.max_hops).max().unwrap_or(0),
            mean_edges: mean(&|r| r.edges as f64),
            max_edges: rows.iter().map(|r| r.edges).max().unwrap_or(0),
            mean_weight: mean(&|r| r.weight),
            mean_lightness: mean(&|r| r.lightness),
            max_lightness: rows.iter().map(|r| r.lightness).fold(0.0, f64::max),
            violations: rows.iter().map(|r| r.violations).sum(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub header: String,
    pub rows: Vec<Row>,
    pub aggregate: Aggregate,
}

impl ExperimentResult {
    /// Header comment, CSV header, rows, then aggregate comment lines.
    pub fn to_csv(&self) -> String {
        let mut s = format!("# {}\n{CSV_HEADER}\n", self.header);
        for r in &self.rows {
            s.push_str(&r.csv());
            s.push('\n');
        }
        let a = &self.aggregate;
        let _ = writeln!(
            s,
            "# aggregate trials={} mean_ratio={} ci95_upper={} max_ratio={} mean_extra={} max_stretch={} max_hops={}",
            a.trials, a.mean_ratio, a.ci95_upper, a.max_ratio, a.mean_extra, a.max_stretch, a.max_hops
        );
        let _ = writeln!(
            s,
            "# aggregate mean_edges={} max_edges={} mean_weight={} mean_lightness={} max_lightness={} violations={}",
            a.mean_edges, a.max_edges, a.mean_weight, a.mean_lightness, a.max_lightness, a.violations
        );
        s
    }
}

/// Runs every trial (in parallel) and merges rows in trial order.
pub fn run_experiment(cfg: &Config) -> Result<ExperimentResult> {
    let prep = prepare(cfg)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| setup(e.to_string()))?;
    let rows: Vec<Row> = pool.install(|| (0..cfg.trials).into_par_iter().map(|t| run_trial(&prep, t)).collect::<Result<_>>())?;
    let aggregate = Aggregate::of(&rows);
    Ok(ExperimentResult { header: cfg.summary(), rows, aggregate })
}
