//! Reliable spanners from HST covers.
//!
//! * [`compose_reliable_spanner`]: one k-HST spanner per tree with the
//!   reliability budget split evenly, edges reweighted by the metric.
//! * [`build_minor_free_spanner`]: the stretch `2(1+O(ε))` construction on
//!   graphs with a shortest path decomposition. Children are ordered by the
//!   distance of their centers, leaves are sampled with probability `~1/j`
//!   along that order, and safety compares distances to cluster centers.
//! * [`worst_case_wrapper`]: rejection sampling that turns expected size and
//!   lightness into worst-case bounds.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng as _;

use crate::cover::{check_cover_params, for_each_khst, offsets, PpcProvider, SpdProvider};
use crate::error::{param, Error, Result};
use crate::hst::Hst;
use crate::hst_spanner::{self, SampleSets, Variant};
use crate::metric::{Metric, MetricInstance};
use crate::num::{approx_le, ln};
use crate::ppcs::{compute_spd, SpdStrategy};
use crate::rng;
use crate::spanner::{Provenance, Spanner};

/// Per-tree reliability `ν/τ`.
pub fn per_tree_nu(nu: f64, tau: usize) -> f64 {
    nu / tau.max(1) as f64
}

/// Union of k-HST spanners over the trees of a cover, each built with
/// `ν/τ` and its own seed; edges weighted by `d_X`. Returns the spanner and
/// the per-tree samples needed by [`compose_bplus`].
pub fn compose_reliable_spanner<M: Metric>(
    trees: &[Hst],
    m: &M,
    nu: f64,
    k: f64,
    c: f64,
    seed: u64,
    variant: Variant,
) -> Result<(Spanner, Vec<SampleSets>)> {
    if trees.is_empty() {
        return Err(Error::Empty);
    }
    if !(nu > 0.0 && nu < 1.0 / 6.0) {
        return Err(param("nu", nu, "0 < nu < 1/6"));
    }
    let n = m.len();
    let nu_t = per_tree_nu(nu, trees.len());
    let mut edges = Vec::new();
    let mut samples = Vec::with_capacity(trees.len());
    for (i, t) in trees.iter().enumerate() {
        if t.n() != n {
            return Err(param("n", t.n() as f64, "every tree spans the metric's points"));
        }
        let (h, s) = hst_spanner::build(t, nu_t, k, c, rng::derive(seed, i as u64), variant)?;
        edges.extend(h.edges().iter().map(|&(u, v, _)| (u, v, m.dist(u, v))));
        samples.push(s);
    }
    let prov = Provenance {
        construction: alloc::format!("compose-{}", variant.name()),
        seed,
        params: vec![("nu".into(), nu), ("k".into(), k), ("c".into(), c), ("tau".into(), trees.len() as f64)],
    };
    Ok((Spanner::new(n, edges, prov), samples))
}

/// `B⁺ = ⋃_T B⁺_T` from the exact per-tree oracles.
pub fn compose_bplus(trees: &[Hst], samples: &[SampleSets], b: &[bool]) -> Vec<bool> {
    let mut out = b.to_vec();
    for (t, s) in trees.iter().zip(samples) {
        for (o, x) in out.iter_mut().zip(hst_spanner::bplus_mask(t, s, b)) {
            *o |= x;
        }
    }
    out
}

/// Inclusion probability `min(1, c·ln n/(j·ν))` of the `j`-th leaf (1-based).
pub fn biased_probability(j: usize, n: usize, nu: f64, c: f64) -> f64 {
    (c * ln(n as f64) / (j as f64 * nu)).min(1.0)
}

/// `E|Z_x| = Σ_{j=1}^{s} p_j` for a node with `s` leaves.
pub fn expected_sample_size(s: usize, n: usize, nu: f64, c: f64) -> f64 {
    (1..=s).map(|j| biased_probability(j, n, nu, c)).sum()
}

/// `(c·ln n/ν)·H_s`, the harmonic-sum bound on `E|Z_x|`.
pub fn harmonic_bound(s: usize, n: usize, nu: f64, c: f64) -> f64 {
    let h: f64 = (1..=s).map(|j| 1.0 / j as f64).sum();
    c * ln(n as f64) / nu * h
}

/// Children reordered by `d(center(x), center(child))`, ties by child id.
pub fn order_by_centers<M: Metric>(t: &Hst, m: &M) -> Hst {
    t.reorder_children(|x, c| match (t.center(x), t.center(c)) {
        (Some(a), Some(b)) => m.dist(a, b),
        _ => 0.0,
    })
}

/// Pairs violating `d(x,v_i) ≤ d(x,v_j) + 2Γ_x/k` for `i < j` in the leaf
/// order of `L(x)`, counted over all internal nodes. Uses the running
/// maximum, so it is exact and linear per node.
pub fn claim_order_violations<M: Metric>(t: &Hst, m: &M, k: f64) -> usize {
    let mut bad = 0;
    for x in t.internal_nodes() {
        let Some(c) = t.center(x) else { continue };
        let slack = 2.0 * t.label(x) / k;
        let mut run = f64::NEG_INFINITY;
        for &v in t.leaves(x) {
            let d = m.dist(c, v);
            if !approx_le(run, d + slack) {
                bad += 1;
            }
            run = run.max(d);
        }
    }
    bad
}

/// One internal node of a sampled tree: its leaf range, center, label and
/// sample `Z_x`.
#[derive(Debug, Clone, PartialEq)]
pub struct BiasedNode {
    pub lo: u32,
    pub hi: u32,
    pub center: u32,
    pub label: f64,
    pub z: Vec<u32>,
}

/// The part of a sampled tree needed to evaluate attacks.
#[derive(Debug, Clone, PartialEq)]
pub struct BiasedTree {
    pub leaf_order: Vec<u32>,
    pub nodes: Vec<BiasedNode>,
}

impl BiasedTree {
    /// Marks every unsafe leaf: some ancestor `x` has no `y ∈ Z_x ∖ B` with
    /// `d(x,y) ≤ d(x,u) + 2Γ_x/k`.
    pub fn mark_unsafe<M: Metric>(&self, m: &M, b: &[bool], k: f64, out: &mut [bool]) {
        for nd in &self.nodes {
            let c = nd.center as usize;
            let best = nd
                .z
                .iter()
                .filter(|&&y| !b[y as usize])
                .map(|&y| m.dist(c, y as usize))
                .fold(f64::INFINITY, f64::min);
            let slack = 2.0 * nd.label / k;
            for &u in &self.leaf_order[nd.lo as usize..nd.hi as usize] {
                let u = u as usize;
                if !b[u] && !approx_le(best, m.dist(c, u) + slack) {
                    out[u] = true;
                }
            }
        }
    }
}

/// Biased samples on a center-ordered tree: the `j`-th leaf of `L(x)` joins
/// `Z_x` with probability `min(1, c·ln n/(jν))`. One RNG stream per tree,
/// nodes in preorder; no draw is spent when the probability is 1.
pub fn biased_sample(t: &Hst, nu: f64, c: f64, seed: u64) -> Result<BiasedTree> {
    let n = t.n();
    let mut r = rng::stream(seed, 0);
    let mut nodes = Vec::new();
    for x in t.internal_nodes() {
        let Some(center) = t.center(x) else {
            return Err(Error::MissingCenters);
        };
        let (lo, hi) = t.leaf_range(x);
        let mut z = Vec::new();
        for (j, &v) in t.leaves(x).iter().enumerate() {
            let p = biased_probability(j + 1, n, nu, c);
            if p >= 1.0 || r.gen::<f64>() < p {
                z.push(v as u32);
            }
        }
        nodes.push(BiasedNode { lo: lo as u32, hi: hi as u32, center: center as u32, label: t.label(x), z });
    }
    Ok(BiasedTree { leaf_order: t.leaf_order().iter().map(|&v| v as u32).collect(), nodes })
}

/// Dense set of unordered pairs.
struct PairSet {
    n: usize,
    bits: Vec<u64>,
}

impl PairSet {
    fn new(n: usize) -> Self {
        PairSet { n, bits: vec![0; (n * n).div_ceil(64)] }
    }
    fn insert(&mut self, u: usize, v: usize) {
        if u == v {
            return;
        }
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        let i = a * self.n + b;
        self.bits[i / 64] |= 1 << (i % 64);
    }
    fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.bits.iter().enumerate().flat_map(move |(w, &word)| {
            let mut x = word;
            core::iter::from_fn(move || {
                if x == 0 {
                    return None;
                }
                let b = x.trailing_zeros() as usize;
                x &= x - 1;
                let i = w * 64 + b;
                Some((i / self.n, i % self.n))
            })
        })
    }
}

/// Parameters of the minor-free construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinorFreeConfig {
    pub eps: f64,
    /// Overall reliability `ν'`.
    pub nu: f64,
    pub c: f64,
    /// `k = c'/ε`.
    pub c_prime: f64,
    pub seed: u64,
    pub strategy: SpdStrategy,
}

impl Default for MinorFreeConfig {
    fn default() -> Self {
        MinorFreeConfig { eps: 0.05, nu: 0.1, c: 4.0, c_prime: 64.0, seed: 0, strategy: SpdStrategy::Heuristic }
    }
}

/// Output of [`build_minor_free_spanner`].
#[derive(Debug, Clone)]
pub struct MinorFreeSpanner {
    pub spanner: Spanner,
    pub trees: Vec<BiasedTree>,
    pub k: f64,
    /// Effective ε after rounding `1/ε` up to an integer.
    pub eps: f64,
    /// Per-tree `ν = ν'/(5τ)`.
    pub nu_tree: f64,
    pub tau: usize,
    pub claim_order_violations: usize,
    pub spd_depth: usize,
}

impl MinorFreeSpanner {
    /// `B ∪ ⋃_T B⁺_T` under the center-distance safety rule.
    pub fn bplus<M: Metric>(&self, m: &M, b: &[bool]) -> Vec<bool> {
        let mut out = b.to_vec();
        for t in &self.trees {
            t.mark_unsafe(m, b, self.k, &mut out);
        }
        out
    }
}

/// Reliable spanner of stretch `2(1+O(ε))` for a graph metric.
pub fn build_minor_free_spanner(m: &MetricInstance, cfg: &MinorFreeConfig) -> Result<MinorFreeSpanner> {
    if !(cfg.nu > 0.0 && cfg.nu < 1.0) {
        return Err(param("nu", cfg.nu, "0 < nu < 1"));
    }
    let spd = compute_spd(m, cfg.strategy)?;
    let prov = SpdProvider::new(&spd, cfg.eps)?;
    let eps = prov.eps();
    let k = cfg.c_prime / eps;
    check_cover_params(eps, k, prov.rho())?;
    let tau = offsets(eps, k).len() * prov.tau();
    let nu_tree = cfg.nu / (5.0 * tau as f64);
    let n = m.n();
    let mut pairs = PairSet::new(n);
    let mut trees = Vec::with_capacity(tau);
    let mut claim = 0;
    let mut index = 0u64;
    for_each_khst(m, &prov, k, |_, _, _, t| {
        let t = order_by_centers(&t, m);
        claim += claim_order_violations(&t, m, k);
        let bt = biased_sample(&t, nu_tree, cfg.c, rng::derive(cfg.seed, index))?;
        index += 1;
        // Z_x × Z_{x_j}: child samples are the nodes whose parent is x; a
        // leaf child contributes itself.
        let pos: Vec<usize> = {
            let mut p = vec![usize::MAX; t.num_nodes()];
            for (i, x) in t.internal_nodes().enumerate() {
                p[x] = i;
            }
            p
        };
        for x in t.internal_nodes() {
            let zx = &bt.nodes[pos[x]].z;
            for &ch in t.children(x) {
                match t.point(ch) {
                    Some(v) => zx.iter().for_each(|&y| pairs.insert(y as usize, v)),
                    None => {
                        for &y in zx {
                            for &w in &bt.nodes[pos[ch]].z {
                                pairs.insert(y as usize, w as usize);
                            }
                        }
                    }
                }
            }
        }
        trees.push(bt);
        Ok(())
    })?;
    let edges: Vec<(usize, usize, f64)> = pairs.pairs().map(|(u, v)| (u, v, m.dist(u, v))).collect();
    let prov = Provenance {
        construction: "minor-free-2eps".into(),
        seed: cfg.seed,
        params: vec![
            ("eps".into(), eps),
            ("nu".into(), cfg.nu),
            ("c".into(), cfg.c),
            ("c_prime".into(), cfg.c_prime),
            ("tau".into(), tau as f64),
        ],
    };
    Ok(MinorFreeSpanner {
        spanner: Spanner::new(n, edges, prov),
        trees,
        k,
        eps,
        nu_tree,
        tau,
        claim_order_violations: claim,
        spd_depth: spd.depth(),
    })
}

/// Rejection-samples `builder(attempt)` until the spanner has at most
/// `3·m_bound` edges and weight at most `3·phi_bound·mst`. Returns the
/// accepted spanner and the number of attempts.
pub fn worst_case_wrapper<F>(mut builder: F, m_bound: f64, phi_bound: f64, mst: f64, budget: usize) -> Result<(Spanner, usize)>
where
    F: FnMut(usize) -> Result<Spanner>,
{
    if !(m_bound > 0.0 && phi_bound > 0.0) {
        return Err(param("bounds", m_bound.min(phi_bound), "positive size and lightness bounds"));
    }
    for attempt in 0..budget {
        let h = builder(attempt)?;
        if h.num_edges() as f64 <= 3.0 * m_bound && h.weight() <= 3.0 * phi_bound * mst {
            return Ok((h, attempt + 1));
        }
    }
    Err(Error::BudgetExhausted(budget))
}
