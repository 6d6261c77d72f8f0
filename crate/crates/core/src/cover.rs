//! Light k-HST covers.
//!
//! Two sources: pairwise partition covers made hierarchical and stacked into
//! k-HSTs (one tree per partition index and scale offset), and FRT-style
//! random 2-HSTs resampled until the batch meets its stretch and weight
//! targets.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::error::{param, Error, Result};
use crate::hst::{Hst, RawNode};
use crate::metric::{greedy_net, Metric};
use crate::num::{approx_eq, approx_le, floor_tol, ln, log2, powi};
use crate::ppcs::{spd_ppcs, spd_rho, eps_inverse, PartitionCover, SpdTree};
use crate::rng;

/// Source of `(τ, ρ, ε, Δ)` pairwise partition covers, one per requested `Δ`.
pub trait PpcProvider {
    fn tau(&self) -> usize;
    fn rho(&self) -> f64;
    fn eps(&self) -> f64;
    fn cover(&self, delta: f64) -> Result<PartitionCover>;
}

/// Covers from a shortest path decomposition, at any scale.
pub struct SpdProvider<'a> {
    pub spd: &'a SpdTree,
    eps: f64,
}

impl<'a> SpdProvider<'a> {
    /// `eps` is rounded down to `1/⌈1/eps⌉`.
    pub fn new(spd: &'a SpdTree, eps: f64) -> Result<SpdProvider<'a>> {
        if !(eps > 0.0 && eps < 1.0 / 6.0) {
            return Err(param("eps", eps, "0 < eps < 1/6"));
        }
        Ok(SpdProvider { spd, eps: 1.0 / eps_inverse(eps) as f64 })
    }
}

impl PpcProvider for SpdProvider<'_> {
    fn tau(&self) -> usize {
        self.spd.depth() * eps_inverse(self.eps)
    }
    fn rho(&self) -> f64 {
        spd_rho(self.eps)
    }
    fn eps(&self) -> f64 {
        self.eps
    }
    fn cover(&self, delta: f64) -> Result<PartitionCover> {
        spd_ppcs(self.spd, self.eps, delta)
    }
}

/// Precomputed covers, looked up by exact scale (up to rounding).
pub struct FixedProvider {
    pub covers: Vec<PartitionCover>,
}

impl PpcProvider for FixedProvider {
    fn tau(&self) -> usize {
        self.covers.iter().map(|c| c.tau).max().unwrap_or(0)
    }
    fn rho(&self) -> f64 {
        self.covers.first().map_or(1.0, |c| c.rho)
    }
    fn eps(&self) -> f64 {
        self.covers.first().map_or(0.0, |c| c.eps)
    }
    fn cover(&self, delta: f64) -> Result<PartitionCover> {
        self.covers.iter().find(|c| approx_eq(c.delta, delta)).cloned().ok_or(Error::MissingScale(delta))
    }
}

/// Smallest and largest pairwise distance.
pub fn distance_range<M: Metric>(m: &M) -> (f64, f64) {
    let n = m.len();
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for u in 0..n {
        for v in u + 1..n {
            let d = m.dist(u, v);
            lo = lo.min(d);
            hi = hi.max(d);
        }
    }
    (lo, hi)
}

/// The scale offsets `l = (1+ε)^c` for `c = 0..=⌊log_{1+ε} k⌋`.
pub fn offsets(eps: f64, k: f64) -> Vec<f64> {
    let top = floor_tol(ln(k) / ln(1.0 + eps)) as i32;
    (0..=top).map(|c| powi(1.0 + eps, c)).collect()
}

/// Checks `ε < 1/12` and `k ≥ 8ρ/ε`.
pub fn check_cover_params(eps: f64, k: f64, rho: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0 / 12.0) {
        return Err(param("eps", eps, "0 < eps < 1/12"));
    }
    let required = 8.0 * rho / eps;
    if !(k >= required) {
        return Err(Error::KTooSmall { k, required });
    }
    Ok(())
}

/// Hierarchical partitions for one partition index and one offset `l`.
///
/// Level `0` is `i = −1` (singletons); level `t` has scale
/// `Δ = d_min·l·k^{t−1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Hierarchy {
    pub l: f64,
    pub deltas: Vec<f64>,
    /// `levels[t][v]` is the cluster of `v`, numbered `0..count`.
    pub levels: Vec<Vec<usize>>,
    pub centers: Vec<Vec<usize>>,
    /// `|𝒩_i|` of the `εΔ/4`-net at each level (`n` at level 0).
    pub net_sizes: Vec<usize>,
}

impl Hierarchy {
    pub fn num_clusters(&self, t: usize) -> usize {
        self.centers[t].len()
    }
}

/// Scales `Δ_i = d_min·l·k^i` for `i = −1..=top`, where `top` is the
/// largest level the stretch argument can use at this offset:
/// `l·k^top ≤ ρ(1+ε)Φ` (at least `0`).
pub fn scales(dmin: f64, dmax: f64, k: f64, l: f64, reach: f64) -> Vec<f64> {
    let phi = dmax / dmin;
    let x = reach * phi / l;
    let top = if x <= 1.0 { 0 } else { floor_tol(ln(x) / ln(k)).max(0.0) as i32 };
    (-1..=top).map(|i| dmin * l * powi(k, i)).collect()
}

fn compact(ids: &mut [usize]) -> usize {
    let mut map = vec![usize::MAX; ids.len().max(1) + ids.iter().copied().max().map_or(0, |x| x + 1)];
    let mut next = 0;
    for id in ids.iter_mut() {
        if map[*id] == usize::MAX {
            map[*id] = next;
            next += 1;
        }
        *id = map[*id];
    }
    next
}

/// One hierarchy level from the previous one (both changes).
///
/// Change 1 dissolves clusters without a net point, moving each member to
/// the cluster of its nearest net point. Change 2 moves each cluster of the
/// previous level wholesale into the current cluster holding most of its
/// members (lowest id on ties).
fn next_level<M: Metric>(
    m: &M,
    part: &[crate::ppcs::Cluster],
    net: &[usize],
    nearest_net: &[usize],
    prev: &[usize],
    prev_count: usize,
) -> (Vec<usize>, Vec<usize>) {
    let n = m.len();
    let mut cid = vec![usize::MAX; n];
    for (ci, c) in part.iter().enumerate() {
        for &v in &c.members {
            cid[v] = ci;
        }
    }
    let mut has_net = vec![false; part.len()];
    for &z in net {
        has_net[cid[z]] = true;
    }
    // Reference point of each cluster for its center: the given center or the
    // first net point it holds.
    let mut reference: Vec<usize> = vec![usize::MAX; part.len()];
    for (ci, c) in part.iter().enumerate() {
        if let Some(x) = c.center {
            reference[ci] = x;
        }
    }
    for &z in net {
        if reference[cid[z]] == usize::MAX {
            reference[cid[z]] = z;
        }
    }
    let hat: Vec<usize> = (0..n).map(|v| if has_net[cid[v]] { cid[v] } else { cid[nearest_net[v]] }).collect();

    let mut counts: Vec<Vec<(usize, usize)>> = vec![Vec::new(); prev_count];
    for v in 0..n {
        let list = &mut counts[prev[v]];
        match list.iter_mut().find(|e| e.0 == hat[v]) {
            Some(e) => e.1 += 1,
            None => list.push((hat[v], 1)),
        }
    }
    let target: Vec<usize> = counts
        .iter()
        .map(|list| list.iter().fold((usize::MAX, 0), |best, &(c, k)| if k > best.1 || (k == best.1 && c < best.0) { (c, k) } else { best }).0)
        .collect();
    let mut ids: Vec<usize> = (0..n).map(|v| target[prev[v]]).collect();
    let hat_of_new = ids.clone();
    let count = compact(&mut ids);
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); count];
    let mut refs = vec![usize::MAX; count];
    for v in 0..n {
        members[ids[v]].push(v);
        refs[ids[v]] = reference[hat_of_new[v]];
    }
    let centers = members
        .iter()
        .zip(&refs)
        .map(|(mem, &r)| {
            if r != usize::MAX && mem.contains(&r) {
                r
            } else {
                let anchor = if r == usize::MAX { mem[0] } else { r };
                *mem.iter().min_by(|&&a, &&b| m.dist(anchor, a).total_cmp(&m.dist(anchor, b)).then(a.cmp(&b))).unwrap()
            }
        })
        .collect();
    (ids, centers)
}

/// Hierarchical covers for every partition index at offset `l`.
pub fn hierarchify<M: Metric, P: PpcProvider>(m: &M, provider: &P, k: f64, l: f64) -> Result<Vec<Hierarchy>> {
    let eps = provider.eps();
    check_cover_params(eps, k, provider.rho())?;
    if !(l >= 1.0 && approx_le(l, k)) {
        return Err(param("l", l, "1 <= l <= k"));
    }
    let n = m.len();
    if n == 0 {
        return Err(Error::Empty);
    }
    let tau = provider.tau();
    let singletons: Vec<usize> = (0..n).collect();
    if n == 1 {
        return Ok((0..tau)
            .map(|_| Hierarchy { l, deltas: vec![l / k], levels: vec![vec![0]], centers: vec![vec![0]], net_sizes: vec![1] })
            .collect());
    }
    let (dmin, dmax) = distance_range(m);
    let deltas = scales(dmin, dmax, k, l, provider.rho() * (1.0 + eps));
    let mut out: Vec<Hierarchy> = (0..tau)
        .map(|_| Hierarchy {
            l,
            deltas: deltas.clone(),
            levels: vec![singletons.clone()],
            centers: vec![singletons.clone()],
            net_sizes: vec![n],
        })
        .collect();
    for &delta in &deltas[1..] {
        let pc = provider.cover(delta)?;
        if pc.n != n {
            return Err(Error::Hst(format!("partition cover at scale {delta} is over {} points", pc.n)));
        }
        let net = greedy_net(m, eps * delta / 4.0).points;
        let nearest: Vec<usize> = (0..n)
            .map(|v| *net.iter().min_by(|&&a, &&b| m.dist(v, a).total_cmp(&m.dist(v, b)).then(a.cmp(&b))).unwrap())
            .collect();
        // Once the scale covers the diameter, the single cluster X is itself
        // a valid cover at that scale and pads every pair; using it keeps the
        // top of the tree from carrying a k-times-larger root.
        let whole = [crate::ppcs::Cluster { center: None, members: (0..n).collect() }];
        for (j, h) in out.iter_mut().enumerate() {
            let prev = h.levels.last().unwrap();
            let prev_count = h.centers.last().unwrap().len();
            let (ids, centers) = match pc.partitions.get(j) {
                _ if approx_le(dmax, delta) => next_level(m, &whole, &net, &nearest, prev, prev_count),
                Some(part) => next_level(m, part, &net, &nearest, prev, prev_count),
                // Missing partitions behave like the trivial one.
                None => {
                    let trivial: Vec<crate::ppcs::Cluster> =
                        (0..n).map(|v| crate::ppcs::Cluster { center: Some(v), members: vec![v] }).collect();
                    next_level(m, &trivial, &net, &nearest, prev, prev_count)
                }
            };
            h.levels.push(ids);
            h.centers.push(centers);
            h.net_sizes.push(net.len());
        }
    }
    Ok(out)
}

/// Nesting, per-level cluster counts against `|𝒩_i|`, and cluster diameters
/// against `(1+ε)Δ_i`. Returns a description of every violation.
pub fn hierarchy_violations<M: Metric>(h: &Hierarchy, m: &M, eps: f64) -> Vec<String> {
    let n = m.len();
    let mut out = Vec::new();
    for t in 1..h.levels.len() {
        let count = h.num_clusters(t);
        if count > h.net_sizes[t] {
            out.push(format!("level {t}: {count} clusters exceed net size {}", h.net_sizes[t]));
        }
        let mut parent = vec![usize::MAX; h.num_clusters(t - 1)];
        for v in 0..n {
            let c = h.levels[t - 1][v];
            if parent[c] == usize::MAX {
                parent[c] = h.levels[t][v];
            } else if parent[c] != h.levels[t][v] {
                out.push(format!("level {t}: cluster {c} of level {} is split", t - 1));
            }
        }
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); count];
        for v in 0..n {
            members[h.levels[t][v]].push(v);
        }
        let bound = (1.0 + eps) * h.deltas[t];
        for (c, mem) in members.iter().enumerate() {
            for (i, &a) in mem.iter().enumerate() {
                for &b in &mem[i + 1..] {
                    if !approx_le(m.dist(a, b), bound) {
                        out.push(format!("level {t}: cluster {c} has diameter above {bound}"));
                    }
                }
            }
        }
    }
    out
}

/// Stacks a hierarchy into a k-HST: a node per cluster, labeled `(1+ε)Δ_i`,
/// with the cluster's center. Adds a root one scale up when the top level
/// has several clusters. If no level merges anything the tree is a star
/// labeled by the diameter `dmax`.
pub fn hierarchy_to_hst(h: &Hierarchy, eps: f64, k: f64, dmax: f64) -> Result<Hst> {
    let n = h.levels[0].len();
    let levels = h.levels.len();
    let mut raw: Vec<RawNode> = Vec::new();
    // base[t] = raw id of cluster 0 at level t (level 0 are the leaves).
    let mut base = vec![0usize; levels + 1];
    let mut next = n;
    for (t, b) in base.iter_mut().enumerate().take(levels).skip(1) {
        *b = next;
        next += h.num_clusters(t);
    }
    let top_count = h.num_clusters(levels - 1);
    if top_count == n && n > 1 {
        // Nothing is ever merged: a star labeled by the diameter.
        let mut raw = vec![RawNode { parent: None, label: dmax, point: None, center: Some(h.centers[levels - 1][0]) }];
        raw.extend((0..n).map(|v| RawNode { parent: Some(0), label: 0.0, point: Some(v), center: Some(v) }));
        return Hst::build(&raw, 1.0);
    }
    let extra_root = levels == 1 || top_count > 1;
    base[levels] = next;
    for v in 0..n {
        let p = if levels > 1 { base[1] + h.levels[1][v] } else { base[levels] };
        raw.push(RawNode { parent: Some(p), label: 0.0, point: Some(v), center: Some(v) });
    }
    for t in 1..levels {
        let label = (1.0 + eps) * h.deltas[t];
        let mut first = vec![usize::MAX; h.num_clusters(t)];
        for v in 0..n {
            let c = h.levels[t][v];
            if first[c] == usize::MAX {
                first[c] = v;
            }
        }
        for (c, &v) in first.iter().enumerate() {
            let parent = if t + 1 < levels {
                Some(base[t + 1] + h.levels[t + 1][v])
            } else if extra_root {
                Some(base[levels])
            } else {
                None
            };
            raw.push(RawNode { parent, label, point: None, center: Some(h.centers[t][c]) });
        }
    }
    if extra_root {
        let label = (1.0 + eps) * h.deltas[levels - 1] * k;
        let center = h.centers[levels - 1][0];
        raw.push(RawNode { parent: None, label, point: None, center: Some(center) });
    }
    if n == 1 {
        return Hst::build(&[RawNode { parent: None, label: 0.0, point: Some(0), center: Some(0) }], k);
    }
    Hst::build(&raw, k * (1.0 - 1e-9))
}

/// Size data of a k-HST cover built from partition covers.
#[derive(Debug, Clone, PartialEq)]
pub struct KhstCoverInfo {
    pub trees: usize,
    pub tau_ppc: usize,
    pub offsets: usize,
    pub rho: f64,
    pub eps: f64,
    pub k: f64,
}

/// Streams the trees of the k-HST cover to `f(offset index, partition index,
/// hierarchy, tree)`, without keeping them in memory.
pub fn for_each_khst<M, P, F>(m: &M, provider: &P, k: f64, mut f: F) -> Result<KhstCoverInfo>
where
    M: Metric,
    P: PpcProvider,
    F: FnMut(usize, usize, &Hierarchy, Hst) -> Result<()>,
{
    let eps = provider.eps();
    check_cover_params(eps, k, provider.rho())?;
    let ls = offsets(eps, k);
    let dmax = distance_range(m).1;
    let mut trees = 0;
    for (li, &l) in ls.iter().enumerate() {
        for (j, h) in hierarchify(m, provider, k, l)?.iter().enumerate() {
            let t = hierarchy_to_hst(h, eps, k, dmax)?;
            f(li, j, h, t)?;
            trees += 1;
        }
    }
    Ok(KhstCoverInfo { trees, tau_ppc: provider.tau(), offsets: ls.len(), rho: provider.rho() * (1.0 + 3.0 * eps), eps, k })
}

/// A collection of dominating HSTs over the same points.
#[derive(Debug, Clone)]
pub struct HstCover {
    pub trees: Vec<Hst>,
    pub rho: f64,
    pub k: f64,
    /// Allowed `w(T)/w(MST)`, per tree or (with `total_weight`) summed.
    pub lightness_bound: f64,
    pub total_weight: bool,
}

impl HstCover {
    pub fn tau(&self) -> usize {
        self.trees.len()
    }
}

/// The per-tree lightness allowance `10·k·log₂ n` used for built covers.
pub fn khst_lightness_bound(k: f64, n: usize) -> f64 {
    10.0 * k * log2(n.max(2) as f64)
}

/// k-HST cover from partition covers, with stretch `ρ(1+3ε)`.
pub fn build_khst_cover<M: Metric, P: PpcProvider>(m: &M, provider: &P, k: f64) -> Result<HstCover> {
    let mut trees = Vec::new();
    let info = for_each_khst(m, provider, k, |_, _, _, t| {
        trees.push(t);
        Ok(())
    })?;
    Ok(HstCover { trees, rho: info.rho, k, lightness_bound: khst_lightness_bound(k, m.len()), total_weight: false })
}

/// One FRT-style random 2-HST: random permutation, random `β ∈ [1,2)`, and
/// level-`i` clusters of radius `β·2^{i−2}·d_min` carved in permutation order.
pub fn frt_tree<M: Metric>(m: &M, seed: u64) -> Result<Hst> {
    let n = m.len();
    if n == 0 {
        return Err(Error::Empty);
    }
    if n == 1 {
        return Hst::build(&[RawNode { parent: None, label: 0.0, point: Some(0), center: None }], 2.0);
    }
    let mut r = rng::stream(seed, 0);
    let beta = crate::num::powf(2.0, r.gen::<f64>());
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut r);
    let (dmin, dmax) = distance_range(m);
    // Top level: one cluster since the radius covers the diameter.
    let mut top = 1i32;
    while beta * crate::num::powi(2.0, top - 2) * dmin < dmax {
        top += 1;
    }
    let mut raw: Vec<RawNode> = vec![RawNode { parent: None, label: powi(2.0, top) * dmin, point: None, center: None }];
    let mut node_of: Vec<usize> = vec![0; n];
    for i in (1..top).rev() {
        let radius = beta * powi(2.0, i - 2) * dmin;
        let label = powi(2.0, i) * dmin;
        let mut made: Vec<(usize, usize, usize)> = Vec::new(); // (parent node, center, node)
        let mut next = vec![0usize; n];
        for v in 0..n {
            let c = *perm.iter().find(|&&c| m.dist(v, c) <= radius).unwrap();
            let par = node_of[v];
            let node = match made.iter().find(|e| e.0 == par && e.1 == c) {
                Some(e) => e.2,
                None => {
                    raw.push(RawNode { parent: Some(par), label, point: None, center: None });
                    made.push((par, c, raw.len() - 1));
                    raw.len() - 1
                }
            };
            next[v] = node;
        }
        node_of = next;
    }
    for (v, &p) in node_of.iter().enumerate() {
        raw.push(RawNode::leaf(p, v));
    }
    let t = Hst::build(&raw, 2.0 * (1.0 - 1e-9))?;
    tighten_leaf_parents(&t, m)
}

/// Lowers the label of every node whose children are all leaves to the
/// diameter of its points. The tree stays dominating, separation is
/// unaffected (leaf children are exempt) and distances only shrink.
pub fn tighten_leaf_parents<M: Metric>(t: &Hst, m: &M) -> Result<Hst> {
    let raw: Vec<RawNode> = (0..t.num_nodes())
        .map(|x| {
            let mut label = t.label(x);
            if !t.is_leaf(x) && t.children(x).iter().all(|&c| t.is_leaf(c)) {
                let pts = t.leaves(x);
                let mut d: f64 = 0.0;
                for (i, &a) in pts.iter().enumerate() {
                    for &b in &pts[i + 1..] {
                        d = d.max(m.dist(a, b));
                    }
                }
                label = label.min(d);
            }
            RawNode { parent: t.parent(x), label, point: t.point(x), center: t.center(x) }
        })
        .collect();
    Hst::build(&raw, 1.0)
}

/// FRT cover: batches of `trees` random 2-HSTs, resampled (up to `budget`
/// batches) until every pair has some tree within `target·log₂ n` stretch and
/// the total weight is at most `target·log₂² n·w(MST)`. Returns the cover and
/// the number of batches drawn.
pub fn frt_cover<M: Metric>(m: &M, trees: usize, target: f64, seed: u64, budget: usize) -> Result<(HstCover, usize)> {
    let n = m.len();
    if trees == 0 {
        return Err(param("trees", 0.0, "at least one tree"));
    }
    let lg = log2(n.max(2) as f64);
    let mst = crate::metric::mst_weight_of(m);
    for attempt in 0..budget {
        let batch_seed = rng::derive(seed, attempt as u64);
        let batch: Vec<Hst> =
            (0..trees).map(|t| frt_tree(m, rng::derive(batch_seed, t as u64))).collect::<Result<_>>()?;
        let cover = HstCover { trees: batch, rho: target * lg, k: 2.0, lightness_bound: target * lg * lg, total_weight: true };
        let rep = validate_cover(&cover, m, mst);
        if rep.ok() {
            return Ok((cover, attempt + 1));
        }
    }
    Err(Error::BudgetExhausted(budget))
}

/// Findings of [`validate_cover`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CoverReport {
    pub trees: usize,
    /// `(tree, u, v)` with `d_T(u,v) < d(u,v)`.
    pub domination_violations: Vec<(usize, usize, usize)>,
    /// Pairs whose best tree exceeds `ρ`, with the best ratio.
    pub stretch_violations: Vec<(usize, usize, f64)>,
    pub max_stretch: f64,
    pub max_lightness: f64,
    pub total_lightness: f64,
    /// Trees over the lightness bound (per-tree mode) or all trees (total mode).
    pub lightness_violations: Vec<usize>,
    /// Largest node degree over all trees, reported as a measurement.
    pub max_degree: usize,
}

impl CoverReport {
    pub fn ok(&self) -> bool {
        self.domination_violations.is_empty() && self.stretch_violations.is_empty() && self.lightness_violations.is_empty()
    }
}

const KEEP: usize = 64;

/// Incremental cover check: feed trees one at a time.
pub struct CoverChecker<'a, M: Metric> {
    m: &'a M,
    best: Vec<f64>,
    weight_sum: f64,
    rep: CoverReport,
    domination_count: usize,
}

impl<'a, M: Metric> CoverChecker<'a, M> {
    pub fn new(m: &'a M) -> Self {
        let n = m.len();
        CoverChecker { m, best: vec![f64::INFINITY; n * n], weight_sum: 0.0, rep: CoverReport::default(), domination_count: 0 }
    }

    pub fn add(&mut self, t: &Hst, mst: f64) {
        let n = self.m.len();
        let id = self.rep.trees;
        self.rep.trees += 1;
        for u in 0..n {
            for v in u + 1..n {
                let dt = t.dist(u, v);
                let d = self.m.dist(u, v);
                if !approx_le(d, dt) {
                    self.domination_count += 1;
                    if self.rep.domination_violations.len() < KEEP {
                        self.rep.domination_violations.push((id, u, v));
                    }
                }
                let r = dt / d;
                if r < self.best[u * n + v] {
                    self.best[u * n + v] = r;
                }
            }
        }
        let w = t.mst_weight();
        self.weight_sum += w;
        let light = if mst > 0.0 { w / mst } else { 0.0 };
        self.rep.max_lightness = self.rep.max_lightness.max(light);
        self.rep.max_degree = self.rep.max_degree.max(t.max_degree());
    }

    pub fn lightness_of(&self, t: &Hst, mst: f64) -> f64 {
        if mst > 0.0 { t.mst_weight() / mst } else { 0.0 }
    }

    /// Finalizes against stretch `rho` and the lightness bound.
    pub fn finish(mut self, rho: f64, lightness: &[f64], bound: f64, total: bool, mst: f64) -> CoverReport {
        let n = self.m.len();
        for u in 0..n {
            for v in u + 1..n {
                let r = self.best[u * n + v];
                self.rep.max_stretch = self.rep.max_stretch.max(r);
                if !approx_le(r, rho) && self.rep.stretch_violations.len() < KEEP {
                    self.rep.stretch_violations.push((u, v, r));
                }
            }
        }
        self.rep.total_lightness = if mst > 0.0 { self.weight_sum / mst } else { 0.0 };
        if total {
            if !approx_le(self.rep.total_lightness, bound) {
                self.rep.lightness_violations = (0..self.rep.trees).collect();
            }
        } else {
            self.rep.lightness_violations =
                lightness.iter().enumerate().filter(|(_, &l)| !approx_le(l, bound)).map(|(i, _)| i).collect();
        }
        self.rep
    }
}

/// Exact all-pairs domination and stretch, plus lightness against
/// `mst = w(MST(X))`.
pub fn validate_cover<M: Metric>(c: &HstCover, m: &M, mst: f64) -> CoverReport {
    let mut ck = CoverChecker::new(m);
    let mut light = Vec::with_capacity(c.trees.len());
    for t in &c.trees {
        ck.add(t, mst);
        light.push(ck.lightness_of(t, mst));
    }
    ck.finish(c.rho, &light, c.lightness_bound, c.total_weight, mst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{mst_weight, MetricInstance};
    use crate::ppcs::{compute_spd, SpdStrategy};

    #[test]
    fn offsets_and_scales() {
        let ls = offsets(0.5, 4.0);
        assert_eq!(ls.len(), 4); // 1, 1.5, 2.25, 3.375
        let s = scales(1.0, 100.0, 10.0, 1.0, 1.0);
        assert_eq!(s, vec![0.1, 1.0, 10.0, 100.0]);
        assert_eq!(scales(1.0, 100.0, 10.0, 2.0, 1.0).len(), 3);
        assert_eq!(scales(1.0, 1.0, 10.0, 5.0, 2.0).len(), 2);
    }

    #[test]
    fn k_too_small() {
        let p = MetricInstance::unit_path(8).unwrap();
        let spd = compute_spd(&p, SpdStrategy::Heuristic).unwrap();
        let prov = SpdProvider::new(&spd, 1.0 / 16.0).unwrap();
        assert!(matches!(build_khst_cover(&p, &prov, 50.0), Err(Error::KTooSmall { .. })));
        let prov = SpdProvider::new(&spd, 0.1).unwrap();
        assert!(build_khst_cover(&p, &prov, 1e6).is_err());
    }

    #[test]
    fn two_points() {
        let m = MetricInstance::from_edges(2, &[(0, 1, 1.0)]).unwrap();
        let spd = compute_spd(&m, SpdStrategy::Heuristic).unwrap();
        let prov = SpdProvider::new(&spd, 1.0 / 16.0).unwrap();
        let k = 8.0 * prov.rho() * 16.0;
        let c = build_khst_cover(&m, &prov, k).unwrap();
        for t in &c.trees {
            assert!(t.label(t.root()) >= 1.0);
        }
        let rep = validate_cover(&c, &m, 1.0);
        assert!(rep.ok(), "{rep:?}");
        assert!(rep.max_stretch <= c.rho);
    }

    #[test]
    fn path_cover_hierarchies() {
        let p = MetricInstance::unit_path(24).unwrap();
        let spd = compute_spd(&p, SpdStrategy::Heuristic).unwrap();
        let prov = SpdProvider::new(&spd, 1.0 / 16.0).unwrap();
        let k = 8.0 * prov.rho() * 16.0;
        for l in offsets(prov.eps(), k).into_iter().step_by(17) {
            for h in hierarchify(&p, &prov, k, l).unwrap() {
                assert!(h.levels[0].iter().enumerate().all(|(i, &c)| i == c));
                assert!(hierarchy_violations(&h, &p, prov.eps()).is_empty());
                let t = hierarchy_to_hst(&h, prov.eps(), k, 23.0).unwrap();
                assert!(t.is_k_hst(k * (1.0 - 1e-9)));
            }
        }
        let c = build_khst_cover(&p, &prov, k).unwrap();
        let rep = validate_cover(&c, &p, mst_weight(&p));
        assert!(rep.domination_violations.is_empty() && rep.stretch_violations.is_empty(), "{rep:?}");
    }

    #[test]
    fn uniform_star_cover() {
        let n = 6;
        let mut raw = vec![RawNode::internal(None, 1.0)];
        raw.extend((0..n).map(|v| RawNode::leaf(0, v)));
        let star = Hst::build(&raw, 1.0).unwrap();
        let m = crate::metric::DenseMetric::from_metric(&star);
        let cover = HstCover { trees: vec![star.clone()], rho: 1.0, k: 1.0, lightness_bound: 1.0, total_weight: false };
        let rep = validate_cover(&cover, &m, 5.0);
        assert!(rep.ok());
        assert_eq!(rep.max_stretch, 1.0);
        let none = HstCover { trees: vec![], ..cover };
        assert_eq!(validate_cover(&none, &m, 5.0).stretch_violations.len(), 15);
    }

    #[test]
    fn frt_trees_dominate() {
        let p = MetricInstance::unit_path(40).unwrap();
        for s in 0..5 {
            let t = frt_tree(&p, s).unwrap();
            assert!(t.is_k_hst(2.0 * (1.0 - 1e-9)));
            for u in 0..40 {
                for v in u + 1..40 {
                    assert!(t.dist(u, v) >= p.dist(u, v));
                }
            }
        }
        let (c, _) = frt_cover(&p, 12, 8.0, 1, 64).unwrap();
        assert!(validate_cover(&c, &p, 39.0).ok());
    }

    #[test]
    fn frt_uniform_metric() {
        let n = 64;
        let mut raw = vec![RawNode::internal(None, 1.0)];
        raw.extend((0..n).map(|v| RawNode::leaf(0, v)));
        let m = crate::metric::DenseMetric::from_metric(&Hst::build(&raw, 1.0).unwrap());
        let t = frt_tree(&m, 3).unwrap();
        assert_eq!(t.num_nodes(), n + 1);
        for u in 0..n {
            for v in u + 1..n {
                assert!(t.dist(u, v) <= 2.0);
            }
        }
    }

    #[test]
    fn fixed_provider_lookup() {
        let pc = PartitionCover { n: 1, delta: 2.0, tau: 1, rho: 2.0, eps: 0.05, partitions: vec![] };
        let f = FixedProvider { covers: vec![pc] };
        assert!(f.cover(2.0 * (1.0 + 1e-12)).is_ok());
        assert_eq!(f.cover(3.0).unwrap_err(), Error::MissingScale(3.0));
    }
}
