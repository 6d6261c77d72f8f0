//! Finite metrics: shortest-path metrics of weighted graphs, explicit
//! distance matrices and weighted paths; MST weight and greedy nets.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{dijkstra_dist, kruskal_weight, prim_weight, Graph};
use crate::num::{ceil, REL_TOL};

/// Read access to a finite metric over `[n]`.
pub trait Metric {
    fn len(&self) -> usize;
    fn dist(&self, u: usize, v: usize) -> f64;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl<M: Metric + ?Sized> Metric for &M {
    fn len(&self) -> usize {
        (**self).len()
    }
    fn dist(&self, u: usize, v: usize) -> f64 {
        (**self).dist(u, v)
    }
}

/// A dense row-major distance matrix.
#[derive(Debug, Clone)]
pub struct DenseMetric {
    n: usize,
    d: Vec<f64>,
}

impl DenseMetric {
    /// Materializes any metric.
    pub fn from_metric<M: Metric>(m: &M) -> DenseMetric {
        let n = m.len();
        let mut d = vec![0.0; n * n];
        for u in 0..n {
            for v in u + 1..n {
                let x = m.dist(u, v);
                d[u * n + v] = x;
                d[v * n + u] = x;
            }
        }
        DenseMetric { n, d }
    }

    pub fn row(&self, u: usize) -> &[f64] {
        &self.d[u * self.n..(u + 1) * self.n]
    }
}

impl Metric for DenseMetric {
    fn len(&self) -> usize {
        self.n
    }
    #[inline]
    fn dist(&self, u: usize, v: usize) -> f64 {
        self.d[u * self.n + v]
    }
}

/// How a [`MetricInstance`] was presented.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceKind {
    Edges,
    Matrix,
    Path,
}

/// Default bound on `n` for materializing the full distance matrix of a graph.
pub const DEFAULT_CACHE_CAP: usize = 4096;

/// A validated finite metric.
#[derive(Debug, Clone)]
pub struct MetricInstance {
    n: usize,
    kind: SourceKind,
    graph: Option<Graph>,
    prefix: Option<Vec<f64>>,
    matrix: Option<Vec<f64>>,
}

impl MetricInstance {
    /// Shortest-path metric of a connected graph with positive weights.
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        Self::from_edges_with_cap(n, edges, DEFAULT_CACHE_CAP)
    }

    /// As [`from_edges`](Self::from_edges); the distance matrix is cached only
    /// when `n <= cap`, otherwise each query runs Dijkstra.
    pub fn from_edges_with_cap(n: usize, edges: &[(usize, usize, f64)], cap: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty);
        }
        for &(u, v, w) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { v: x, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidWeight { u, v, w });
            }
        }
        let graph = Graph::from_edges(n, edges);
        if !graph.is_connected() {
            return Err(Error::Disconnected);
        }
        let matrix = if n <= cap {
            let mut d = vec![0.0; n * n];
            for s in 0..n {
                let row = dijkstra_dist(&graph, s, None);
                d[s * n..(s + 1) * n].copy_from_slice(&row);
            }
            Some(d)
        } else {
            None
        };
        Ok(MetricInstance { n, kind: SourceKind::Edges, graph: Some(graph), prefix: None, matrix })
    }

    /// Explicit distance matrix (row-major, `n*n` entries). Checks symmetry,
    /// zero diagonal, positive off-diagonal entries and the triangle
    /// inequality (up to [`REL_TOL`]).
    pub fn from_matrix(n: usize, d: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty);
        }
        if d.len() != n * n {
            return Err(Error::MatrixShape { n });
        }
        for u in 0..n {
            if d[u * n + u] != 0.0 {
                return Err(Error::NonzeroDiagonal(u));
            }
            for v in 0..n {
                if u == v {
                    continue;
                }
                let w = d[u * n + v];
                if !(w.is_finite() && w > 0.0) {
                    return Err(Error::InvalidDistance { u, v, w });
                }
                if w != d[v * n + u] {
                    return Err(Error::Asymmetric { u, v });
                }
            }
        }
        for v in 0..n {
            for u in 0..n {
                let duv = d[u * n + v];
                for w in 0..n {
                    let direct = d[u * n + w];
                    if direct > (duv + d[v * n + w]) * (1.0 + REL_TOL) {
                        return Err(Error::Triangle { u, v, w });
                    }
                }
            }
        }
        Ok(MetricInstance { n, kind: SourceKind::Matrix, graph: None, prefix: None, matrix: Some(d) })
    }

    /// Weighted path on `weights.len() + 1` vertices, vertex `i` adjacent to `i+1`.
    pub fn from_path(weights: &[f64]) -> Result<Self> {
        let n = weights.len() + 1;
        let mut prefix = Vec::with_capacity(n);
        prefix.push(0.0);
        for (i, &w) in weights.iter().enumerate() {
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidWeight { u: i, v: i + 1, w });
            }
            prefix.push(prefix[i] + w);
        }
        Ok(MetricInstance { n, kind: SourceKind::Path, graph: None, prefix: Some(prefix), matrix: None })
    }

    /// Unit-weight path on `n` vertices.
    pub fn unit_path(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty);
        }
        Self::from_path(&vec![1.0; n - 1])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> SourceKind {
        self.kind
    }

    /// Prefix sums of a path instance (`prefix[i]` = distance from vertex 0).
    pub fn path_prefix(&self) -> Option<&[f64]> {
        self.prefix.as_deref()
    }

    /// Edge weights of a path instance.
    pub fn path_weights(&self) -> Option<Vec<f64>> {
        self.prefix.as_ref().map(|p| p.windows(2).map(|w| w[1] - w[0]).collect())
    }

    /// The underlying graph: the input graph, the path, or the complete graph
    /// of a matrix instance.
    pub fn graph(&self) -> Graph {
        match self.kind {
            SourceKind::Edges => self.graph.clone().expect("edge instance keeps its graph"),
            SourceKind::Path => {
                let p = self.prefix.as_ref().expect("path instance keeps prefix sums");
                let edges: Vec<_> = (0..self.n - 1).map(|i| (i, i + 1, p[i + 1] - p[i])).collect();
                Graph::from_edges(self.n, &edges)
            }
            SourceKind::Matrix => {
                let m = self.matrix.as_ref().expect("matrix instance keeps its matrix");
                let mut edges = Vec::new();
                for u in 0..self.n {
                    for v in u + 1..self.n {
                        edges.push((u, v, m[u * self.n + v]));
                    }
                }
                Graph::from_edges(self.n, &edges)
            }
        }
    }

    /// Distances from `u` to every vertex.
    pub fn row(&self, u: usize) -> Vec<f64> {
        if let Some(m) = &self.matrix {
            return m[u * self.n..(u + 1) * self.n].to_vec();
        }
        if let Some(p) = &self.prefix {
            return p.iter().map(|&x| (x - p[u]).abs()).collect();
        }
        dijkstra_dist(self.graph.as_ref().expect("graph"), u, None)
    }

    /// Smallest positive distance.
    pub fn min_distance(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        match self.kind {
            SourceKind::Edges => self
                .graph
                .as_ref()
                .map(|g| g.edges().iter().map(|e| e.2).fold(f64::INFINITY, f64::min))
                .unwrap_or(0.0),
            SourceKind::Path => self.path_weights().unwrap().into_iter().fold(f64::INFINITY, f64::min),
            SourceKind::Matrix => {
                let mut best = f64::INFINITY;
                for u in 0..self.n {
                    for v in u + 1..self.n {
                        best = best.min(self.dist(u, v));
                    }
                }
                best
            }
        }
    }

    /// Largest distance.
    pub fn diameter(&self) -> f64 {
        if let Some(p) = &self.prefix {
            return p[self.n - 1];
        }
        let mut best: f64 = 0.0;
        for u in 0..self.n {
            for x in self.row(u) {
                best = best.max(x);
            }
        }
        best
    }
}

impl Metric for MetricInstance {
    fn len(&self) -> usize {
        self.n
    }

    #[inline]
    fn dist(&self, u: usize, v: usize) -> f64 {
        if let Some(m) = &self.matrix {
            return m[u * self.n + v];
        }
        if let Some(p) = &self.prefix {
            return (p[v] - p[u]).abs();
        }
        dijkstra_dist(self.graph.as_ref().expect("graph"), u, None)[v]
    }
}

/// Weight of a minimum spanning tree of the metric.
pub fn mst_weight(m: &MetricInstance) -> f64 {
    match m.kind {
        SourceKind::Edges => kruskal_weight(m.n, &m.graph.as_ref().unwrap().edges()),
        SourceKind::Path => m.path_prefix().unwrap()[m.n - 1],
        SourceKind::Matrix => prim_weight(m.n, |u, v| m.dist(u, v)),
    }
}

/// MST weight of an arbitrary metric by Prim, O(n²) distance queries.
pub fn mst_weight_of<M: Metric>(m: &M) -> f64 {
    prim_weight(m.len(), |u, v| m.dist(u, v))
}

/// A Δ-net: points pairwise more than `delta` apart, covering every vertex
/// within `delta`.
#[derive(Debug, Clone, PartialEq)]
pub struct Net {
    pub delta: f64,
    pub points: Vec<usize>,
}

impl Net {
    /// Checks packing and covering by brute force.
    pub fn is_valid<M: Metric>(&self, m: &M) -> bool {
        for (i, &a) in self.points.iter().enumerate() {
            for &b in &self.points[i + 1..] {
                if m.dist(a, b) <= self.delta {
                    return false;
                }
            }
        }
        (0..m.len()).all(|v| self.points.iter().any(|&p| m.dist(p, v) <= self.delta))
    }
}

/// Greedy net scanning `order`; the first uncovered vertex becomes a net point.
pub fn greedy_net_in(order: &[usize], dist: impl Fn(usize, usize) -> f64, delta: f64) -> Vec<usize> {
    let mut points: Vec<usize> = Vec::new();
    for &v in order {
        if points.iter().all(|&p| dist(p, v) > delta) {
            points.push(v);
        }
    }
    points
}

/// Greedy Δ-net, scanning vertices in increasing ID order.
pub fn greedy_net<M: Metric>(m: &M, delta: f64) -> Net {
    let n = m.len();
    let mut covered = vec![false; n];
    let mut points = Vec::new();
    for v in 0..n {
        if covered[v] {
            continue;
        }
        points.push(v);
        for (u, c) in covered.iter_mut().enumerate() {
            if !*c && m.dist(v, u) <= delta {
                *c = true;
            }
        }
    }
    Net { delta, points }
}

/// `⌈(2/Δ)·w⌉`, the net-size bound in terms of the MST weight `w`.
pub fn net_mst_bound(delta: f64, mst: f64) -> f64 {
    ceil(2.0 / delta * mst)
}

/// True iff the net respects the MST bound; a single point is always fine.
pub fn check_net_mst_bound(net: &Net, m: &MetricInstance) -> bool {
    if m.n() == 1 {
        return true;
    }
    (net.points.len() as f64) <= net_mst_bound(net.delta, mst_weight(m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_distances() {
        let m = MetricInstance::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        assert_eq!(m.dist(0, 2), 2.0);
        let big = MetricInstance::from_edges_with_cap(3, &[(0, 1, 1.0), (1, 2, 1.0)], 0).unwrap();
        assert_eq!(big.dist(0, 2), 2.0);
    }

    #[test]
    fn matrix_checks() {
        assert!(MetricInstance::from_matrix(2, vec![0.0, 1.0, 1.0, 0.0]).is_ok());
        assert_eq!(
            MetricInstance::from_matrix(2, vec![0.0, 1.0, 2.0, 0.0]).unwrap_err(),
            Error::Asymmetric { u: 0, v: 1 }
        );
        let bad = vec![0.0, 1.0, 5.0, 1.0, 0.0, 1.0, 5.0, 1.0, 0.0];
        assert!(matches!(MetricInstance::from_matrix(3, bad), Err(Error::Triangle { .. })));
    }

    #[test]
    fn rejects_disconnected_and_bad_weights() {
        assert_eq!(MetricInstance::from_edges(3, &[(0, 1, 1.0)]).unwrap_err(), Error::Disconnected);
        assert!(matches!(MetricInstance::from_edges(2, &[(0, 1, -1.0)]), Err(Error::InvalidWeight { .. })));
    }

    #[test]
    fn mst_examples() {
        assert_eq!(mst_weight(&MetricInstance::unit_path(4).unwrap()), 3.0);
        let uni = MetricInstance::from_matrix(4, {
            let mut d = vec![1.0; 16];
            for i in 0..4 {
                d[i * 4 + i] = 0.0;
            }
            d
        })
        .unwrap();
        assert_eq!(mst_weight(&uni), 3.0);
        let star = MetricInstance::from_edges(4, &[(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)]).unwrap();
        assert_eq!(mst_weight(&star), 3.0);
        assert_eq!(mst_weight_of(&star), 3.0);
    }

    #[test]
    fn greedy_net_examples() {
        let p5 = MetricInstance::unit_path(5).unwrap();
        let net = greedy_net(&p5, 1.0);
        assert_eq!(net.points, vec![0, 2, 4]);
        assert!(net.is_valid(&p5));
        assert!(check_net_mst_bound(&net, &p5));
        assert_eq!(greedy_net(&p5, 0.5).points.len(), 5);
        assert_eq!(greedy_net(&p5, 4.0).points, vec![0]);
        let one = MetricInstance::unit_path(1).unwrap();
        assert!(check_net_mst_bound(&greedy_net(&one, 0.1), &one));
    }
}
