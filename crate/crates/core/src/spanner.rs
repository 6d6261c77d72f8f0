//! Spanner edge sets and exact stretch verification on `H ∖ B`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{dijkstra, floyd_warshall, Graph};
use crate::metric::Metric;
use crate::num::approx_le;

/// How a spanner was produced; written into file headers.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Provenance {
    pub construction: String,
    pub seed: u64,
    pub params: Vec<(String, f64)>,
}

/// Undirected weighted edge set over `0..n`, one edge per pair, no loops.
#[derive(Debug, Clone, PartialEq)]
pub struct Spanner {
    pub n: usize,
    edges: Vec<(usize, usize, f64)>,
    pub provenance: Provenance,
}

impl Spanner {
    /// Normalizes `(u, v)` to `u < v`, drops loops and keeps the lightest copy
    /// of repeated pairs.
    pub fn new(n: usize, mut edges: Vec<(usize, usize, f64)>, provenance: Provenance) -> Spanner {
        edges.retain(|e| e.0 != e.1);
        for e in edges.iter_mut() {
            if e.0 > e.1 {
                core::mem::swap(&mut e.0, &mut e.1);
            }
        }
        edges.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)).then(a.2.total_cmp(&b.2)));
        edges.dedup_by(|later, first| later.0 == first.0 && later.1 == first.1);
        Spanner { n, edges, provenance }
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn weight(&self) -> f64 {
        self.edges.iter().map(|e| e.2).sum()
    }

    pub fn graph(&self) -> Graph {
        Graph::from_edges(self.n, &self.edges)
    }

    /// Union of several spanners over the same point set.
    pub fn union(n: usize, parts: &[Spanner], provenance: Provenance) -> Spanner {
        let edges = parts.iter().flat_map(|s| s.edges.iter().copied()).collect();
        Spanner::new(n, edges, provenance)
    }

    /// Edges lighter than the metric distance of their endpoints.
    pub fn domination_violations<M: Metric>(&self, m: &M) -> Vec<(usize, usize, f64)> {
        self.edges.iter().copied().filter(|&(u, v, w)| !approx_le(m.dist(u, v), w)).collect()
    }
}

/// Outcome of a stretch check.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StretchReport {
    pub pairs: usize,
    pub max_ratio: f64,
    /// Only filled when hop tracking was requested.
    pub max_hops: u32,
    pub violation_count: usize,
    /// The first few violating pairs with their ratio (`inf` if disconnected).
    pub violations: Vec<(usize, usize, f64)>,
}

const KEEP_VIOLATIONS: usize = 64;

impl StretchReport {
    fn record(&mut self, u: usize, v: usize, ratio: f64, bound: f64) {
        self.pairs += 1;
        if ratio > self.max_ratio {
            self.max_ratio = ratio;
        }
        if !approx_le(ratio, bound) {
            self.violation_count += 1;
            if self.violations.len() < KEEP_VIOLATIONS {
                self.violations.push((u, v, ratio));
            }
        }
    }

    pub fn ok(&self) -> bool {
        self.violation_count == 0
    }
}

/// Checks `d_{H∖B}(u,v) ≤ bound·d(u,v)` for all pairs outside `bplus`.
///
/// `b` and `bplus` are membership masks. Uses Floyd–Warshall over the
/// surviving vertices when the graph is dense and Dijkstra per source
/// otherwise; with `track_hops` it always uses Dijkstra and reports the
/// largest hop count among lexicographically shortest paths.
pub fn verify_stretch<M: Metric>(
    h: &Spanner,
    m: &M,
    b: &[bool],
    bplus: &[bool],
    bound: f64,
    track_hops: bool,
) -> StretchReport {
    let n = h.n;
    let alive: Vec<usize> = (0..n).filter(|&v| !b[v]).collect();
    let a = alive.len();
    let mut rep = StretchReport::default();
    let dense = h.num_edges() * 8 >= a * a;
    if dense && !track_hops {
        let mut idx = vec![usize::MAX; n];
        for (i, &v) in alive.iter().enumerate() {
            idx[v] = i;
        }
        let mut d = vec![f64::INFINITY; a * a];
        for i in 0..a {
            d[i * a + i] = 0.0;
        }
        for &(u, v, w) in h.edges() {
            let (iu, iv) = (idx[u], idx[v]);
            if iu != usize::MAX && iv != usize::MAX && w < d[iu * a + iv] {
                d[iu * a + iv] = w;
                d[iv * a + iu] = w;
            }
        }
        floyd_warshall(a, &mut d);
        for (i, &u) in alive.iter().enumerate() {
            if bplus[u] {
                continue;
            }
            for (j, &v) in alive.iter().enumerate().skip(i + 1) {
                if bplus[v] {
                    continue;
                }
                rep.record(u, v, d[i * a + j] / m.dist(u, v), bound);
            }
        }
        return rep;
    }
    let g = h.graph();
    for &u in &alive {
        if bplus[u] {
            continue;
        }
        let sp = dijkstra(&g, u, Some(b));
        for &v in &alive {
            if v <= u || bplus[v] {
                continue;
            }
            rep.record(u, v, sp.dist[v] / m.dist(u, v), bound);
            if track_hops && sp.hops[v] != u32::MAX && sp.hops[v] > rep.max_hops {
                rep.max_hops = sp.hops[v];
            }
        }
    }
    rep
}

/// Membership mask of a vertex list.
pub fn mask(n: usize, set: &[usize]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &v in set {
        m[v] = true;
    }
    m
}
