//! Pairwise partition covers and the shortest-path-decomposition construction.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use alloc::format;

use crate::error::{param, Error, Result};
use crate::graph::{dijkstra, dijkstra_dist, Graph, NO_PRED};
use crate::metric::{Metric, MetricInstance};
use crate::num::{approx_le, ceil_tol};

/// One cluster of a partition.
#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    pub center: Option<usize>,
    pub members: Vec<usize>,
}

/// A collection of partitions of `0..n` at one scale `delta`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionCover {
    pub n: usize,
    pub delta: f64,
    pub tau: usize,
    pub rho: f64,
    pub eps: f64,
    pub partitions: Vec<Vec<Cluster>>,
}

impl PartitionCover {
    pub fn has_centers(&self) -> bool {
        self.partitions.iter().flatten().all(|c| c.center.is_some())
    }

    /// `cluster_of[v]` for partition `p`; `usize::MAX` for uncovered vertices.
    pub fn cluster_index(&self, p: usize) -> Vec<usize> {
        let mut idx = vec![usize::MAX; self.n];
        for (ci, c) in self.partitions[p].iter().enumerate() {
            for &v in &c.members {
                if v < self.n {
                    idx[v] = ci;
                }
            }
        }
        idx
    }
}

/// How the path to delete is chosen at each decomposition step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpdStrategy {
    /// Shortest path between an approximately farthest pair (double sweep).
    Heuristic,
    /// Heavy path from the component root; input must be a tree.
    Tree,
}

/// One step of a shortest path decomposition.
#[derive(Debug, Clone)]
pub struct SpdNode {
    pub vertices: Vec<usize>,
    /// The deleted shortest path, in order.
    pub path: Vec<usize>,
    pub children: Vec<usize>,
    /// Recursion level, 0 at the root.
    pub depth: usize,
    /// Distances from `path[i]` inside the subgraph induced by `vertices`
    /// (`INFINITY` outside).
    rows: Vec<Vec<f64>>,
}

impl SpdNode {
    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i]
    }
}

/// Shortest path decomposition of a connected graph.
#[derive(Debug, Clone)]
pub struct SpdTree {
    pub n: usize,
    pub nodes: Vec<SpdNode>,
}

impl SpdTree {
    /// Number of levels (1 for a path).
    pub fn depth(&self) -> usize {
        self.nodes.iter().map(|x| x.depth + 1).max().unwrap_or(0)
    }

    /// Each deleted path is a shortest path of its node's induced subgraph,
    /// children are exactly the remaining components, and every vertex is
    /// deleted exactly once.
    pub fn verify(&self, g: &Graph) -> core::result::Result<(), String> {
        let mut seen = vec![0u32; self.n];
        for (id, nd) in self.nodes.iter().enumerate() {
            for &v in &nd.path {
                seen[v] += 1;
            }
            let mut inside = vec![false; self.n];
            for &v in &nd.vertices {
                inside[v] = true;
            }
            let blocked: Vec<bool> = inside.iter().map(|&x| !x).collect();
            if let (Some(&a), Some(&b)) = (nd.path.first(), nd.path.last()) {
                let d = dijkstra_dist(g, a, Some(&blocked));
                let mut along = 0.0;
                for w in nd.path.windows(2) {
                    let e = g.neighbors(w[0]).filter(|&(x, _)| x == w[1]).map(|(_, wt)| wt).fold(f64::INFINITY, f64::min);
                    along += e;
                }
                if !approx_le(along, d[b]) {
                    return Err(format!("node {id}: path is not shortest ({along} > {})", d[b]));
                }
            } else {
                return Err(format!("node {id}: empty path"));
            }
            let mut rest: Vec<usize> = nd.vertices.iter().copied().filter(|v| !nd.path.contains(v)).collect();
            rest.sort_unstable();
            let mut from_children: Vec<usize> =
                nd.children.iter().flat_map(|&c| self.nodes[c].vertices.iter().copied()).collect();
            from_children.sort_unstable();
            if rest != from_children {
                return Err(format!("node {id}: children do not partition the remainder"));
            }
            let mut path_mask = inside.clone();
            for &v in &nd.path {
                path_mask[v] = false;
            }
            for &c in &nd.children {
                let comp = components(g, &self.nodes[c].vertices, &path_mask);
                if comp.len() != 1 {
                    return Err(format!("node {c}: child is not a single component"));
                }
            }
        }
        if seen.iter().any(|&s| s != 1) {
            return Err("some vertex is deleted zero or several times".into());
        }
        Ok(())
    }
}

/// Connected components of `vs` within the vertices allowed by `mask`.
fn components(g: &Graph, vs: &[usize], mask: &[bool]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; g.n()];
    let mut out = Vec::new();
    for &s in vs {
        if seen[s] || !mask[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut i = 0;
        while i < comp.len() {
            let u = comp[i];
            i += 1;
            for (w, _) in g.neighbors(u) {
                if mask[w] && !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

fn is_tree(g: &Graph) -> bool {
    g.num_edges() + 1 == g.n() && g.is_connected()
}

/// Farthest vertex from `s` inside the allowed set; ties by smallest id.
fn farthest(d: &[f64], vs: &[usize]) -> usize {
    let mut best = vs[0];
    for &v in vs {
        if d[v] > d[best] {
            best = v;
        }
    }
    best
}

fn heavy_path_in_tree(g: &Graph, vs: &[usize], inside: &[bool], root: usize) -> Vec<usize> {
    // Parent pointers and sizes within the component, rooted at `root`.
    let n = g.n();
    let mut parent = vec![usize::MAX; n];
    let mut order = vec![root];
    parent[root] = root;
    let mut i = 0;
    while i < order.len() {
        let u = order[i];
        i += 1;
        for (w, _) in g.neighbors(u) {
            if inside[w] && parent[w] == usize::MAX {
                parent[w] = u;
                order.push(w);
            }
        }
    }
    debug_assert_eq!(order.len(), vs.len());
    let mut size = vec![0usize; n];
    for &u in order.iter().rev() {
        size[u] += 1;
        if u != root {
            size[parent[u]] += size[u];
        }
    }
    let mut path = vec![root];
    let mut cur = root;
    loop {
        let mut best = usize::MAX;
        for (w, _) in g.neighbors(cur) {
            if inside[w] && parent[w] == cur && w != root && (best == usize::MAX || size[w] > size[best] || (size[w] == size[best] && w < best)) {
                best = w;
            }
        }
        if best == usize::MAX {
            break;
        }
        path.push(best);
        cur = best;
    }
    path
}

/// Recursively deletes shortest paths until nothing is left.
pub fn compute_spd(m: &MetricInstance, strategy: SpdStrategy) -> Result<SpdTree> {
    let g = m.graph();
    compute_spd_graph(&g, strategy)
}

pub fn compute_spd_graph(g: &Graph, strategy: SpdStrategy) -> Result<SpdTree> {
    let n = g.n();
    if n == 0 {
        return Err(Error::Empty);
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if strategy == SpdStrategy::Tree && !is_tree(g) {
        return Err(Error::NotATree);
    }
    let mut nodes: Vec<SpdNode> = Vec::new();
    // (vertices, parent node, depth, root hint for the tree strategy)
    let mut stack: Vec<(Vec<usize>, usize, usize, usize)> = vec![((0..n).collect(), usize::MAX, 0, 0)];
    while let Some((vs, par, depth, root)) = stack.pop() {
        let mut inside = vec![false; n];
        for &v in &vs {
            inside[v] = true;
        }
        let blocked: Vec<bool> = inside.iter().map(|&x| !x).collect();
        let path = match strategy {
            SpdStrategy::Heuristic => {
                let d0 = dijkstra_dist(g, vs[0], Some(&blocked));
                let a = farthest(&d0, &vs);
                let sp = dijkstra(g, a, Some(&blocked));
                let b = farthest(&sp.dist, &vs);
                let mut path = vec![b];
                let mut cur = b;
                while cur != a {
                    let p = sp.pred[cur];
                    debug_assert_ne!(p, NO_PRED);
                    cur = p as usize;
                    path.push(cur);
                }
                path.reverse();
                path
            }
            SpdStrategy::Tree => heavy_path_in_tree(g, &vs, &inside, root),
        };
        let rows = path.iter().map(|&p| dijkstra_dist(g, p, Some(&blocked))).collect();
        let id = nodes.len();
        if par != usize::MAX {
            nodes[par].children.push(id);
        }
        let mut rest = inside.clone();
        for &p in &path {
            rest[p] = false;
        }
        let on_path = {
            let mut m = vec![false; n];
            for &p in &path {
                m[p] = true;
            }
            m
        };
        let comps = components(g, &vs, &rest);
        nodes.push(SpdNode { vertices: vs, path, children: Vec::new(), depth, rows });
        for comp in comps.into_iter().rev() {
            // For trees, the child's root is the vertex adjacent to the path.
            let r = comp
                .iter()
                .copied()
                .find(|&v| g.neighbors(v).any(|(w, _)| on_path[w]))
                .unwrap_or(comp[0]);
            stack.push((comp, id, depth + 1, r));
        }
    }
    Ok(SpdTree { n, nodes })
}

/// `1/ε` rounded up to an integer (so ε is rounded down).
pub fn eps_inverse(eps: f64) -> usize {
    ceil_tol(1.0 / eps) as usize
}

/// Padding ratio `2/(1 − 6ε)` of the decomposition cover.
pub fn spd_rho(eps: f64) -> f64 {
    2.0 / (1.0 - 6.0 * eps)
}

/// Partition cover at scale `delta` from a shortest path decomposition.
///
/// For each decomposition node, an `εΔ`-net of its path (in path order) is
/// split into `1/ε` residue classes; class `i` contributes the balls
/// `B(z, Δ/2)` of the node's induced subgraph, centered at the net points.
/// All nodes on one recursion level share partition indices, so there are
/// `depth/ε` partitions; uncovered vertices become singletons.
pub fn spd_ppcs(spd: &SpdTree, eps: f64, delta: f64) -> Result<PartitionCover> {
    if !(eps > 0.0) {
        return Err(param("eps", eps, "0 < eps < 1/6"));
    }
    let inv = eps_inverse(eps);
    let eps = 1.0 / inv as f64;
    if eps >= 1.0 / 6.0 {
        return Err(param("eps", eps, "0 < eps < 1/6"));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(param("delta", delta, "delta > 0"));
    }
    let n = spd.n;
    let depth = spd.depth();
    let tau = depth * inv;
    let mut assign = vec![vec![usize::MAX; n]; tau];
    let mut parts: Vec<Vec<Cluster>> = vec![Vec::new(); tau];
    for nd in &spd.nodes {
        // Net along the path; path distances from the first vertex.
        let first = nd.row(0);
        let mut net: Vec<usize> = Vec::new();
        // Positions increase along a shortest path, so only the last net
        // point can be within εΔ.
        for (i, &p) in nd.path.iter().enumerate() {
            match net.last() {
                Some(&j) if first[p] - first[nd.path[j]] <= eps * delta => {}
                _ => net.push(i),
            }
        }
        for (rank, &pi) in net.iter().enumerate() {
            let part = nd.depth * inv + rank % inv;
            let z = nd.path[pi];
            let row = nd.row(pi);
            let cid = parts[part].len();
            let mut members = Vec::new();
            for &v in &nd.vertices {
                if row[v] <= delta / 2.0 && assign[part][v] == usize::MAX {
                    assign[part][v] = cid;
                    members.push(v);
                }
            }
            parts[part].push(Cluster { center: Some(z), members });
        }
    }
    for (part, clusters) in parts.iter_mut().enumerate() {
        for v in 0..n {
            if assign[part][v] == usize::MAX {
                clusters.push(Cluster { center: Some(v), members: vec![v] });
            }
        }
    }
    Ok(PartitionCover { n, delta, tau, rho: spd_rho(eps), eps, partitions: parts })
}

/// Findings of [`validate_ppc`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PpcReport {
    pub partition_errors: Vec<String>,
    /// `(partition, cluster, diameter)`.
    pub diameter_violations: Vec<(usize, usize, f64)>,
    pub pairs_in_range: usize,
    pub padding_violations: Vec<(usize, usize)>,
    /// Padded pairs with no padding cluster whose center satisfies the
    /// central inequality. Empty when the cover has no centers.
    pub central_violations: Vec<(usize, usize)>,
    /// Largest `(d(u,c) + d(v,c)) / d(u,v)` over the best padding cluster of each pair.
    pub max_central_ratio: f64,
}

impl PpcReport {
    pub fn ok(&self) -> bool {
        self.partition_errors.is_empty()
            && self.diameter_violations.is_empty()
            && self.padding_violations.is_empty()
            && self.central_violations.is_empty()
    }
}

/// Exhaustive check of partition validity, diameters, padding of every pair
/// with `Δ/(2ρ) ≤ d ≤ Δ/ρ`, and (when centers exist) the central inequality
/// `d(u,c) + d(v,c) ≤ (1+32ε)·d(u,v)`.
pub fn validate_ppc<M: Metric>(pc: &PartitionCover, m: &M) -> PpcReport {
    let n = m.len();
    let mut rep = PpcReport::default();
    if pc.n != n {
        rep.partition_errors.push(format!("cover is over {} points, metric over {n}", pc.n));
        return rep;
    }
    if pc.partitions.len() > pc.tau {
        rep.partition_errors.push(format!("{} partitions exceed tau = {}", pc.partitions.len(), pc.tau));
    }
    let mut cid = Vec::with_capacity(pc.partitions.len());
    for (p, part) in pc.partitions.iter().enumerate() {
        let mut count = vec![0u32; n];
        for c in part {
            for &v in &c.members {
                if v >= n {
                    rep.partition_errors.push(format!("partition {p}: vertex {v} out of range"));
                } else {
                    count[v] += 1;
                }
            }
        }
        for (v, &c) in count.iter().enumerate() {
            if c != 1 {
                rep.partition_errors.push(format!("partition {p}: vertex {v} appears {c} times"));
            }
        }
        for (ci, c) in part.iter().enumerate() {
            let mut diam: f64 = 0.0;
            for (i, &a) in c.members.iter().enumerate() {
                for &b in &c.members[i + 1..] {
                    if a < n && b < n {
                        diam = diam.max(m.dist(a, b));
                    }
                }
            }
            if !approx_le(diam, pc.delta) {
                rep.diameter_violations.push((p, ci, diam));
            }
        }
        cid.push(pc.cluster_index(p));
    }
    if !rep.partition_errors.is_empty() {
        return rep;
    }
    let r = pc.eps * pc.delta;
    let balls: Vec<Vec<usize>> = (0..n).map(|u| (0..n).filter(|&w| m.dist(u, w) <= r).collect()).collect();
    // padded[p][u]: the cluster of u in partition p contains B(u, εΔ).
    let padded: Vec<Vec<bool>> = cid
        .iter()
        .map(|c| (0..n).map(|u| balls[u].iter().all(|&w| c[w] == c[u])).collect())
        .collect();
    let lo = pc.delta / (2.0 * pc.rho);
    let hi = pc.delta / pc.rho;
    let centered = pc.has_centers();
    let central = 1.0 + 32.0 * pc.eps;
    for u in 0..n {
        for v in u + 1..n {
            let d = m.dist(u, v);
            if d < lo || d > hi {
                continue;
            }
            rep.pairs_in_range += 1;
            let mut found = false;
            let mut best = f64::INFINITY;
            for p in 0..cid.len() {
                if cid[p][u] == cid[p][v] && padded[p][u] && padded[p][v] {
                    found = true;
                    if centered {
                        let c = pc.partitions[p][cid[p][u]].center.unwrap();
                        best = best.min((m.dist(u, c) + m.dist(v, c)) / d);
                    }
                }
            }
            if !found {
                rep.padding_violations.push((u, v));
            } else if centered {
                rep.max_central_ratio = rep.max_central_ratio.max(best);
                if !approx_le(best, central) {
                    rep.central_violations.push((u, v));
                }
            }
        }
    }
    rep
}
