//! Weighted undirected graphs in CSR form and the shortest-path routines the
//! rest of the crate is built on.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

/// Undirected weighted graph in compressed sparse row form.
#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    offsets: Vec<usize>,
    targets: Vec<u32>,
    weights: Vec<f64>,
}

impl Graph {
    /// Builds the graph from an undirected edge list. Each edge is stored in
    /// both directions; parallel edges are kept (Dijkstra ignores the heavier).
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Graph {
        let mut deg = vec![0usize; n + 1];
        for &(u, v, _) in edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        let mut offsets = vec![0usize; n + 1];
        for i in 0..n {
            offsets[i + 1] = offsets[i] + deg[i];
        }
        let mut fill = offsets.clone();
        let m = offsets[n];
        let mut targets = vec![0u32; m];
        let mut weights = vec![0.0; m];
        for &(u, v, w) in edges {
            targets[fill[u]] = v as u32;
            weights[fill[u]] = w;
            fill[u] += 1;
            targets[fill[v]] = u as u32;
            weights[fill[v]] = w;
            fill[v] += 1;
        }
        Graph { n, offsets, targets, weights }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of undirected edges.
    pub fn num_edges(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn degree(&self, u: usize) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }

    /// Neighbors of `u` with edge weights.
    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.offsets[u]..self.offsets[u + 1];
        self.targets[r.clone()]
            .iter()
            .zip(&self.weights[r])
            .map(|(&v, &w)| (v as usize, w))
    }

    /// Each undirected edge once, as `(u, v, w)` with `u < v`.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::with_capacity(self.num_edges());
        for u in 0..self.n {
            for (v, w) in self.neighbors(u) {
                if u < v {
                    out.push((u, v, w));
                }
            }
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for (v, _) in self.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.n
    }
}

#[derive(Copy, Clone, PartialEq)]
struct Item {
    d: f64,
    hops: u32,
    v: u32,
}

impl Eq for Item {}

impl Ord for Item {
    fn cmp(&self, other: &Self) -> Ordering {
        // Min-heap on (d, hops, v).
        other
            .d
            .total_cmp(&self.d)
            .then(other.hops.cmp(&self.hops))
            .then(other.v.cmp(&self.v))
    }
}

impl PartialOrd for Item {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Result of a single-source search.
#[derive(Debug, Clone)]
pub struct ShortestPaths {
    pub dist: Vec<f64>,
    /// Hop count of the lexicographically (distance, hops) smallest path.
    pub hops: Vec<u32>,
    pub pred: Vec<u32>,
}

pub const NO_PRED: u32 = u32::MAX;

/// Dijkstra from `src`, ignoring vertices with `blocked[v] == true`.
///
/// Ties on distance are broken by fewer hops, so `hops` is the minimum hop
/// count among shortest paths (exactly, when distances compare exactly).
pub fn dijkstra(g: &Graph, src: usize, blocked: Option<&[bool]>) -> ShortestPaths {
    let n = g.n;
    let mut dist = vec![f64::INFINITY; n];
    let mut hops = vec![u32::MAX; n];
    let mut pred = vec![NO_PRED; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[src] = 0.0;
    hops[src] = 0;
    heap.push(Item { d: 0.0, hops: 0, v: src as u32 });
    while let Some(Item { d, hops: h, v }) = heap.pop() {
        let u = v as usize;
        if done[u] {
            continue;
        }
        done[u] = true;
        for (w, wt) in g.neighbors(u) {
            if done[w] || blocked.is_some_and(|b| b[w]) {
                continue;
            }
            let nd = d + wt;
            let nh = h + 1;
            if nd < dist[w] || (nd == dist[w] && nh < hops[w]) {
                dist[w] = nd;
                hops[w] = nh;
                pred[w] = u as u32;
                heap.push(Item { d: nd, hops: nh, v: w as u32 });
            }
        }
    }
    ShortestPaths { dist, hops, pred }
}

/// Distances only; cheaper variant of [`dijkstra`] used to fill caches.
pub fn dijkstra_dist(g: &Graph, src: usize, blocked: Option<&[bool]>) -> Vec<f64> {
    let n = g.n;
    let mut dist = vec![f64::INFINITY; n];
    let mut heap = BinaryHeap::new();
    dist[src] = 0.0;
    heap.push(Item { d: 0.0, hops: 0, v: src as u32 });
    while let Some(Item { d, v, .. }) = heap.pop() {
        let u = v as usize;
        if d > dist[u] {
            continue;
        }
        for (w, wt) in g.neighbors(u) {
            if blocked.is_some_and(|b| b[w]) {
                continue;
            }
            let nd = d + wt;
            if nd < dist[w] {
                dist[w] = nd;
                heap.push(Item { d: nd, hops: 0, v: w as u32 });
            }
        }
    }
    dist
}

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct Dsu {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl Dsu {
    pub fn new(n: usize) -> Dsu {
        Dsu { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            core::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}

/// Kruskal MST weight of a graph (assumed connected).
pub fn kruskal_weight(n: usize, edges: &[(usize, usize, f64)]) -> f64 {
    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.sort_by(|&a, &b| edges[a].2.total_cmp(&edges[b].2));
    let mut dsu = Dsu::new(n);
    let mut total = 0.0;
    for i in order {
        let (u, v, w) = edges[i];
        if dsu.union(u, v) {
            total += w;
        }
    }
    total
}

/// Prim's algorithm on the complete graph given by `dist`, O(n²).
pub fn prim_weight(n: usize, dist: impl Fn(usize, usize) -> f64) -> f64 {
    if n <= 1 {
        return 0.0;
    }
    let mut best = vec![f64::INFINITY; n];
    let mut used = vec![false; n];
    best[0] = 0.0;
    let mut total = 0.0;
    for _ in 0..n {
        let mut u = usize::MAX;
        for v in 0..n {
            if !used[v] && (u == usize::MAX || best[v] < best[u]) {
                u = v;
            }
        }
        used[u] = true;
        total += best[u];
        for v in 0..n {
            if !used[v] {
                let d = dist(u, v);
                if d < best[v] {
                    best[v] = d;
                }
            }
        }
    }
    total
}

/// Dense all-pairs shortest paths (Floyd–Warshall) over `m` vertices given a
/// row-major `m*m` matrix of direct edge weights (`INFINITY` where absent,
/// `0` on the diagonal). Runs in place.
pub fn floyd_warshall(m: usize, d: &mut [f64]) {
    let mut rowk = vec![0.0; m];
    for k in 0..m {
        rowk.copy_from_slice(&d[k * m..(k + 1) * m]);
        for i in 0..m {
            let dik = d[i * m + k];
            if dik == f64::INFINITY {
                continue;
            }
            let row = &mut d[i * m..(i + 1) * m];
            for (x, &y) in row.iter_mut().zip(&rowk) {
                let c = dik + y;
                if c < *x {
                    *x = c;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dijkstra_on_triangle_prefers_direct_when_equal() {
        let g = Graph::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 2.0)]);
        let sp = dijkstra(&g, 0, None);
        assert_eq!(sp.dist, vec![0.0, 1.0, 2.0]);
        assert_eq!(sp.hops[2], 1);
    }

    #[test]
    fn blocked_vertices_are_avoided() {
        let g = Graph::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 5.0)]);
        let blocked = [false, true, false];
        let d = dijkstra_dist(&g, 0, Some(&blocked));
        assert_eq!(d[2], 5.0);
        assert_eq!(d[1], f64::INFINITY);
    }

    #[test]
    fn floyd_matches_dijkstra() {
        let edges = [(0, 1, 2.0), (1, 2, 1.5), (2, 3, 1.0), (0, 3, 10.0), (1, 3, 4.0)];
        let g = Graph::from_edges(4, &edges);
        let mut d = vec![f64::INFINITY; 16];
        for i in 0..4 {
            d[i * 4 + i] = 0.0;
        }
        for &(u, v, w) in &edges {
            d[u * 4 + v] = w;
            d[v * 4 + u] = w;
        }
        floyd_warshall(4, &mut d);
        for s in 0..4 {
            let r = dijkstra_dist(&g, s, None);
            assert_eq!(&d[s * 4..s * 4 + 4], &r[..]);
        }
    }

    #[test]
    fn mst_weights_agree() {
        let edges = [(0, 1, 1.0), (1, 2, 2.0), (0, 2, 2.5), (2, 3, 0.5)];
        assert_eq!(kruskal_weight(4, &edges), 3.5);
        let g = Graph::from_edges(4, &edges);
        let rows: Vec<Vec<f64>> = (0..4).map(|s| dijkstra_dist(&g, s, None)).collect();
        assert_eq!(prim_weight(4, |u, v| rows[u][v]), 3.5);
    }
}
