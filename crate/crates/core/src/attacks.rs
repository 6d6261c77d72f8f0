//! Attack generators and the lower-bound witness instances.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::error::{param, Result};
use crate::hst::{Hst, RawNode};
use crate::metric::MetricInstance;
use crate::num::floor_tol;
use crate::rng;
use crate::spanner::Spanner;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttackFamily {
    /// Each vertex independently with probability `p`.
    RandomP,
    /// Uniform subset of a fixed size.
    RandomSize,
    /// A contiguous run of a given order (vertex ids for paths, preorder
    /// leaves for HSTs).
    Interval,
    /// Union of whole subtrees of an HST.
    Subtree,
    /// Middle interval plus one endpoint per long crossing edge of a given spanner.
    DetPathLb,
    /// All leaves but one chosen child per middle node of the star of stars.
    HstLbTuple,
    /// All vertices but one chosen sub-interval per kept interval of a path scale.
    PathObliviousLb,
}

impl AttackFamily {
    pub const ALL: [AttackFamily; 7] = [
        AttackFamily::RandomP,
        AttackFamily::RandomSize,
        AttackFamily::Interval,
        AttackFamily::Subtree,
        AttackFamily::DetPathLb,
        AttackFamily::HstLbTuple,
        AttackFamily::PathObliviousLb,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AttackFamily::RandomP => "random_p",
            AttackFamily::RandomSize => "random",
            AttackFamily::Interval => "interval",
            AttackFamily::Subtree => "subtree",
            AttackFamily::DetPathLb => "det_path_lb",
            AttackFamily::HstLbTuple => "hst_lb_tuple",
            AttackFamily::PathObliviousLb => "path_oblivious_lb",
        }
    }

    pub fn parse(s: &str) -> Option<AttackFamily> {
        AttackFamily::ALL.into_iter().find(|f| f.name() == s)
    }
}

/// A sorted, duplicate-free attack set.
#[derive(Debug, Clone, PartialEq)]
pub struct Attack {
    pub family: AttackFamily,
    pub b: Vec<usize>,
}

impl Attack {
    pub fn new(family: AttackFamily, mut b: Vec<usize>) -> Attack {
        b.sort_unstable();
        b.dedup();
        Attack { family, b }
    }

    pub fn mask(&self, n: usize) -> Vec<bool> {
        crate::spanner::mask(n, &self.b)
    }
}

pub fn random_p(n: usize, p: f64, seed: u64) -> Result<Attack> {
    if !(0.0..=1.0).contains(&p) {
        return Err(param("p", p, "0 <= p <= 1"));
    }
    let mut r = rng::stream(seed, 0);
    Ok(Attack::new(AttackFamily::RandomP, (0..n).filter(|_| r.gen_bool(p)).collect()))
}

pub fn random_size(n: usize, size: usize, seed: u64) -> Result<Attack> {
    if size > n {
        return Err(param("size", size as f64, "size <= n"));
    }
    let mut r = rng::stream(seed, 0);
    let mut all: Vec<usize> = (0..n).collect();
    let (chosen, _) = all.partial_shuffle(&mut r, size);
    Ok(Attack::new(AttackFamily::RandomSize, chosen.to_vec()))
}

/// `order[start..start+len]`.
pub fn interval_in(order: &[usize], start: usize, len: usize) -> Result<Attack> {
    if start + len > order.len() {
        return Err(param("len", len as f64, "interval inside the order"));
    }
    Ok(Attack::new(AttackFamily::Interval, order[start..start + len].to_vec()))
}

/// The `len` middle vertices of `0..n`.
pub fn middle_interval(n: usize, len: usize) -> Result<Attack> {
    if len > n {
        return Err(param("len", len as f64, "len <= n"));
    }
    let order: Vec<usize> = (0..n).collect();
    interval_in(&order, (n - len) / 2, len)
}

/// Interval of length `len` at a uniformly random offset of `order`.
pub fn random_interval(order: &[usize], len: usize, seed: u64) -> Result<Attack> {
    if len > order.len() {
        return Err(param("len", len as f64, "len <= n"));
    }
    let mut r = rng::stream(seed, 0);
    let start = r.gen_range(0..=order.len() - len);
    interval_in(order, start, len)
}

/// Whole subtrees of `t`, taken in random order while they fit, until
/// exactly `size` leaves are attacked (single leaves finish the job).
pub fn subtree(t: &Hst, size: usize, seed: u64) -> Result<Attack> {
    let n = t.n();
    if size > n {
        return Err(param("size", size as f64, "size <= n"));
    }
    let mut r = rng::stream(seed, 0);
    let mut nodes: Vec<usize> = (0..t.num_nodes()).collect();
    nodes.shuffle(&mut r);
    let mut hit = vec![false; n];
    let mut count = 0;
    for x in nodes {
        if count == size {
            break;
        }
        let fresh = t.leaves(x).iter().filter(|&&v| !hit[v]).count();
        if fresh > 0 && count + fresh <= size {
            for &v in t.leaves(x) {
                hit[v] = true;
            }
            count += fresh;
        }
    }
    Ok(Attack::new(AttackFamily::Subtree, (0..n).filter(|&v| hit[v]).collect()))
}

/// `ε = min(1/16, 1/(16ν))` of the deterministic path bound.
pub fn det_path_eps(nu: f64) -> f64 {
    (1.0 / 16.0f64).min(1.0 / (16.0 * nu))
}

/// The adaptive attack on a fixed path spanner: the middle `2εn` vertices,
/// plus the left endpoint of every edge from `L = [0, (1/2−ε)n)` to
/// `R = [(1/2+ε)n, n)`. Also returns `|E₁|`, the number of such edges.
pub fn det_path_lb(n: usize, nu: f64, h: &Spanner) -> Result<(Attack, usize)> {
    if !(nu > 0.0) {
        return Err(param("nu", nu, "nu > 0"));
    }
    let eps = det_path_eps(nu);
    let left_end = floor_tol((0.5 - eps) * n as f64) as usize;
    let right_start = (n - left_end).max(left_end);
    let mut b: Vec<usize> = (left_end..right_start).collect();
    let mut crossing = 0;
    for &(u, v, _) in h.edges() {
        let (a, c) = if u < v { (u, v) } else { (v, u) };
        if a < left_end && c >= right_start {
            crossing += 1;
            b.push(a);
        }
    }
    Ok((Attack::new(AttackFamily::DetPathLb, b), crossing))
}

/// `ℓ = ⌊1/(4ν)⌋`, at least 2.
pub fn star_of_stars_ell(nu: f64) -> Result<usize> {
    if !(nu > 0.0) {
        return Err(param("nu", nu, "nu > 0"));
    }
    let ell = floor_tol(1.0 / (4.0 * nu));
    if ell < 2.0 {
        return Err(param("nu", nu, "1/(4 nu) >= 2"));
    }
    Ok(ell as usize)
}

/// Root labeled 1 with `ℓ` children labeled `1/ℓ`, each with `ℓ` leaves.
/// Leaf `v^i_j` (0-based `i, j`) is point `i·ℓ + j`.
pub fn hst_star_of_stars(nu: f64) -> Result<Hst> {
    let ell = star_of_stars_ell(nu)?;
    let mut raw = vec![RawNode::internal(None, 1.0)];
    for i in 0..ell {
        raw.push(RawNode::internal(Some(0), 1.0 / ell as f64));
        let mid = raw.len() - 1;
        for j in 0..ell {
            raw.push(RawNode::leaf(mid, i * ell + j));
        }
    }
    Hst::build(&raw, 1.0)
}

/// Everything except `v^i_{J_i}` for each middle node `i`.
pub fn hst_lb_tuple(ell: usize, choice: &[usize]) -> Result<Attack> {
    if choice.len() != ell || choice.iter().any(|&j| j >= ell) {
        return Err(param("choice", choice.len() as f64, "one index below ell per middle node"));
    }
    let keep: Vec<usize> = choice.iter().enumerate().map(|(i, &j)| i * ell + j).collect();
    Ok(Attack::new(AttackFamily::HstLbTuple, (0..ell * ell).filter(|v| !keep.contains(v)).collect()))
}

pub fn random_hst_lb_tuple(ell: usize, seed: u64) -> Result<Attack> {
    let mut r = rng::stream(seed, 0);
    let choice: Vec<usize> = (0..ell).map(|_| r.gen_range(0..ell)).collect();
    hst_lb_tuple(ell, &choice)
}

/// Interval grid of the path lower bound: scales `i` with intervals of
/// length `2^i`, every other one kept and split into `ℓ = ⌊1/(8ν)⌋` parts.
#[derive(Debug, Clone, PartialEq)]
pub struct PathLbGrid {
    pub n: usize,
    pub ell: usize,
    pub scales: Vec<u32>,
}

/// The unit path `P_n` and the scales `i` whose sub-intervals are nonempty
/// and which leave at least two kept intervals.
pub fn path_scales(n: usize, nu: f64) -> Result<(MetricInstance, PathLbGrid)> {
    if !(nu > 0.0 && nu < 1.0) {
        return Err(param("nu", nu, "0 < nu < 1"));
    }
    let ell = floor_tol(1.0 / (8.0 * nu)).max(1.0) as usize;
    let m = MetricInstance::unit_path(n)?;
    let scales = (0..usize::BITS)
        .filter(|&i| {
            let len = 1usize << i;
            len >= ell && n / len >= 4
        })
        .collect();
    Ok((m, PathLbGrid { n, ell, scales }))
}

/// `B_J` at scale `i`: all vertices except sub-interval `J_k` of the `k`-th
/// kept interval.
pub fn path_oblivious_lb(grid: &PathLbGrid, i: u32, choice: &[usize]) -> Result<Attack> {
    let len = 1usize << i;
    let sub = len / grid.ell;
    if sub == 0 {
        return Err(param("i", i as f64, "2^i >= ell"));
    }
    let kept = grid.n / (2 * len);
    if choice.len() != kept || choice.iter().any(|&j| j >= grid.ell) {
        return Err(param("choice", choice.len() as f64, "one sub-interval per kept interval"));
    }
    let mut alive = vec![false; grid.n];
    for (k, &j) in choice.iter().enumerate() {
        let start = 2 * k * len + j * sub;
        for a in alive.iter_mut().skip(start).take(sub) {
            *a = true;
        }
    }
    Ok(Attack::new(AttackFamily::PathObliviousLb, (0..grid.n).filter(|&v| !alive[v]).collect()))
}

pub fn random_path_oblivious_lb(grid: &PathLbGrid, i: u32, seed: u64) -> Result<Attack> {
    let mut r = rng::stream(seed, 0);
    let kept = grid.n / (2usize << i);
    let choice: Vec<usize> = (0..kept).map(|_| r.gen_range(0..grid.ell)).collect();
    path_oblivious_lb(grid, i, &choice)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spanner::Provenance;

    #[test]
    fn basic_families() {
        assert!(random_p(50, 0.0, 1).unwrap().b.is_empty());
        assert_eq!(random_p(50, 1.0, 1).unwrap().b.len(), 50);
        assert_eq!(random_size(50, 13, 1).unwrap().b.len(), 13);
        assert_eq!(middle_interval(16, 8).unwrap().b, (4..12).collect::<Vec<_>>());
        let order: Vec<usize> = (0..10).rev().collect();
        let a = random_interval(&order, 3, 4).unwrap();
        assert_eq!(a.b.len(), 3);
        assert_eq!(a.b[2] - a.b[0], 2);
        assert_eq!(AttackFamily::parse("subtree"), Some(AttackFamily::Subtree));
    }

    #[test]
    fn subtree_exact_size() {
        let t = crate::instances::random_hst(64, 2.0, 4, 3).unwrap();
        for size in [0, 8, 32, 64] {
            assert_eq!(subtree(&t, size, 5).unwrap().b.len(), size);
        }
    }

    #[test]
    fn star_of_stars() {
        let t = hst_star_of_stars(1.0 / 16.0).unwrap();
        assert_eq!(t.n(), 16);
        assert!((t.mst_weight() - 6.0).abs() < 1e-12);
        let t = hst_star_of_stars(1.0 / 8.0).unwrap();
        assert_eq!(t.n(), 4);
        assert!((t.mst_weight() - 2.0).abs() < 1e-12);
        assert!(hst_star_of_stars(0.5).is_err());
        let a = hst_lb_tuple(4, &[0, 3, 1, 2]).unwrap();
        assert_eq!(a.b.len(), 12);
        assert!(!a.b.contains(&7) && !a.b.contains(&0) && !a.b.contains(&9) && !a.b.contains(&14));
    }

    #[test]
    fn deterministic_path_attack() {
        // Path edges plus one long edge 0–15 and one 1–8 (lands in the middle).
        let n = 16;
        let mut edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1, 1.0)).collect();
        edges.push((0, 15, 15.0));
        edges.push((1, 8, 7.0));
        let h = Spanner::new(n, edges, Provenance::default());
        let (a, crossing) = det_path_lb(n, 1.0, &h).unwrap();
        // ε = 1/16: L = [0,7), R = [9,16), middle {7, 8}.
        assert_eq!(crossing, 1);
        assert_eq!(a.b, vec![0, 7, 8]);
    }

    #[test]
    fn path_lb_attack() {
        let (_, g) = path_scales(64, 1.0 / 32.0).unwrap();
        assert_eq!(g.ell, 4);
        assert!(g.scales.contains(&3));
        let a = path_oblivious_lb(&g, 3, &[0, 1, 2, 3]).unwrap();
        // Kept intervals start at 0, 16, 32, 48; sub-intervals of length 2.
        let alive: Vec<usize> = (0..64).filter(|v| !a.b.contains(v)).collect();
        assert_eq!(alive, vec![0, 1, 18, 19, 36, 37, 54, 55]);
    }
}
