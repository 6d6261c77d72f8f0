//! Random instance generators.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::error::{param, Result};
use crate::hst::{Hst, RawNode};
use crate::metric::MetricInstance;
use crate::rng;

/// Random k-HST over `n` points: every internal node splits its points into
/// `2..=max_children` random groups, and each internal child gets a label
/// `Γ_parent/k·U` with `U` uniform in `[1/2, 1]`. Root label is 1.
pub fn random_hst(n: usize, k: f64, max_children: usize, seed: u64) -> Result<Hst> {
    if n == 0 {
        return Err(param("n", 0.0, "n >= 1"));
    }
    if !(k >= 1.0) {
        return Err(param("k", k, "k >= 1"));
    }
    if max_children < 2 {
        return Err(param("max_children", max_children as f64, "at least 2"));
    }
    let mut r = rng::stream(seed, 0);
    let mut pts: Vec<usize> = (0..n).collect();
    pts.shuffle(&mut r);
    if n == 1 {
        return Hst::build(&[RawNode { parent: None, label: 0.0, point: Some(0), center: None }], k);
    }
    let mut raw = vec![RawNode::internal(None, 1.0)];
    // (points, raw node)
    let mut stack = vec![(pts, 0usize)];
    while let Some((set, node)) = stack.pop() {
        let parts = r.gen_range(2..=max_children.min(set.len()));
        // Random cut points give random group sizes, all nonempty.
        let mut cuts: Vec<usize> = (1..set.len()).collect();
        cuts.shuffle(&mut r);
        let mut cuts = cuts[..parts - 1].to_vec();
        cuts.sort_unstable();
        let mut start = 0;
        for end in cuts.into_iter().chain(core::iter::once(set.len())) {
            let group = &set[start..end];
            start = end;
            if group.len() == 1 {
                raw.push(RawNode::leaf(node, group[0]));
            } else {
                let label = raw[node].label / k * r.gen_range(0.5..=1.0);
                raw.push(RawNode::internal(Some(node), label));
                stack.push((group.to_vec(), raw.len() - 1));
            }
        }
    }
    Hst::build(&raw, k)
}

/// Random k-HST where every internal node has exactly two children.
pub fn random_binary_hst(n: usize, k: f64, seed: u64) -> Result<Hst> {
    random_hst(n, k, 2, seed)
}

/// Random ultrametric (1-HST) with child labels `Γ_parent·U`, `U` uniform in
/// `[0.3, 1)`, and up to `max_children` children per node.
pub fn random_ultrametric(n: usize, max_children: usize, seed: u64) -> Result<Hst> {
    let t = random_hst(n, 1.0, max_children, seed)?;
    let mut r = rng::stream(seed, 1);
    let mut label = vec![0.0; t.num_nodes()];
    let raw: Vec<RawNode> = (0..t.num_nodes())
        .map(|x| {
            // Preorder: parents are relabeled before their children.
            if !t.is_leaf(x) {
                label[x] = match t.parent(x) {
                    None => 1.0,
                    Some(p) => label[p] * r.gen_range(0.3..1.0),
                };
            }
            RawNode { parent: t.parent(x), label: label[x], point: t.point(x), center: None }
        })
        .collect();
    Hst::build(&raw, 1.0)
}

/// Random recursive tree on `n` vertices (parent of `v` uniform in `0..v`)
/// with integer weights uniform in `1..=max_weight`.
pub fn random_tree_edges(n: usize, max_weight: u32, seed: u64) -> Vec<(usize, usize, f64)> {
    let mut r = rng::stream(seed, 0);
    (1..n).map(|v| (r.gen_range(0..v), v, r.gen_range(1..=max_weight.max(1)) as f64)).collect()
}

pub fn random_tree_metric(n: usize, max_weight: u32, seed: u64) -> Result<MetricInstance> {
    MetricInstance::from_edges(n, &random_tree_edges(n, max_weight, seed))
}

/// Planar grid: `rows × cols` lattice with weights uniform in
/// `1..=max_weight`, plus one random diagonal in each cell with probability
/// 1/2 (one diagonal per cell keeps it planar).
pub fn planar_grid_edges(rows: usize, cols: usize, max_weight: u32, seed: u64) -> Vec<(usize, usize, f64)> {
    let mut r = rng::stream(seed, 0);
    let id = |i: usize, j: usize| i * cols + j;
    let w = |r: &mut rng::Rng| r.gen_range(1..=max_weight.max(1)) as f64;
    let mut edges = Vec::new();
    for i in 0..rows {
        for j in 0..cols {
            if j + 1 < cols {
                let x = w(&mut r);
                edges.push((id(i, j), id(i, j + 1), x));
            }
            if i + 1 < rows {
                let x = w(&mut r);
                edges.push((id(i, j), id(i + 1, j), x));
            }
            if i + 1 < rows && j + 1 < cols && r.gen_bool(0.5) {
                let x = w(&mut r);
                if r.gen_bool(0.5) {
                    edges.push((id(i, j), id(i + 1, j + 1), x));
                } else {
                    edges.push((id(i, j + 1), id(i + 1, j), x));
                }
            }
        }
    }
    edges
}

pub fn planar_grid(rows: usize, cols: usize, max_weight: u32, seed: u64) -> Result<MetricInstance> {
    MetricInstance::from_edges(rows * cols, &planar_grid_edges(rows, cols, max_weight, seed))
}

/// Path with weights uniform in `[1, max_weight]`.
pub fn random_path(n: usize, max_weight: f64, seed: u64) -> Result<MetricInstance> {
    let mut r = rng::stream(seed, 0);
    let w: Vec<f64> = (1..n).map(|_| r.gen_range(1.0..=max_weight.max(1.0))).collect();
    MetricInstance::from_path(&w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::Metric;

    #[test]
    fn random_hsts_are_valid() {
        for seed in 0..20 {
            let t = random_hst(100, 4.0, 5, seed).unwrap();
            assert_eq!(t.n(), 100);
            assert!(t.is_k_hst(4.0));
            assert!(t.max_degree() <= 5);
            let b = random_binary_hst(64, 16.0, seed).unwrap();
            assert!(b.internal_nodes().all(|x| b.degree(x) == 2));
            let u = random_ultrametric(50, 4, seed).unwrap();
            assert_eq!(u.n(), 50);
        }
    }

    #[test]
    fn graphs_are_connected() {
        let t = random_tree_metric(80, 10, 3).unwrap();
        assert_eq!(t.graph().num_edges(), 79);
        let g = planar_grid(6, 7, 5, 3).unwrap();
        assert!(g.dist(0, 41) > 0.0);
        assert_eq!(random_path(10, 3.0, 1).unwrap().n(), 10);
    }

    #[test]
    fn deterministic() {
        assert_eq!(random_tree_edges(30, 9, 5), random_tree_edges(30, 9, 5));
        assert_eq!(random_hst(40, 2.0, 3, 9).unwrap().to_raw(), random_hst(40, 2.0, 3, 9).unwrap().to_raw());
    }
}
