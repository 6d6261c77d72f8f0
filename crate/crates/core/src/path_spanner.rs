//! Hop-bounded reliable 1-spanners for weighted paths.
//!
//! Levels `V_0 = [n] ⊇ V_1 ⊇ … ⊇ V_h` are sampled with `p = n^{-1/h}`. At
//! level `i < h` every `x ∈ V_i` is joined to the members of `V_i` up to its
//! `ℓ`-th `V_{i+1}` member on each side; `V_h` is a clique. Edge weights are
//! path distances, so a monotone route is always a shortest path.
//!
//! A vertex is safe when it has attack-free monotone usable paths in both
//! directions. [`bplus_mask`] decides this exactly with a dynamic program over
//! levels; [`greedy_bplus_mask`] is the cheaper first-fit climb anchored at
//! the origin, which never declares an unsafe vertex safe but may miss
//! usable paths.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng as _;

use crate::error::{param, Error, Result};
use crate::num::{ceil_tol, floor_tol, ln, log2, powf};
use crate::rng;
use crate::spanner::{Provenance, Spanner};

/// Largest admissible hop parameter, `max(1, ⌊log₂ n⌋)`.
pub fn max_h(n: usize) -> usize {
    if n < 2 {
        1
    } else {
        (floor_tol(log2(n as f64)) as usize).max(1)
    }
}

/// `ℓ = max(1, ⌈c/ν · ln(h/ν)⌉)`.
pub fn path_ell(nu: f64, h: usize, c: f64) -> usize {
    (ceil_tol(c / nu * ln(h as f64 / nu)) as usize).max(1)
}

/// The nested random levels and the window size `ℓ`.
#[derive(Debug, Clone)]
pub struct LevelHierarchy {
    pub n: usize,
    pub h: usize,
    pub p: f64,
    pub ell: usize,
    pub seed: u64,
    level: Vec<u8>,
    members: Vec<Vec<u32>>,
    /// `before[i][v] = |V_i ∩ [0, v)|`.
    before: Vec<Vec<u32>>,
}

impl LevelHierarchy {
    /// Samples the levels: each vertex climbs while independent `p`-coins succeed.
    pub fn sample(n: usize, h: usize, ell: usize, seed: u64) -> Result<LevelHierarchy> {
        if n == 0 {
            return Err(Error::Empty);
        }
        if h < 1 || h > max_h(n) {
            return Err(param("h", h as f64, "1 <= h <= max(1, floor(log2 n))"));
        }
        let p = powf(n as f64, -1.0 / h as f64);
        let mut r = rng::stream(seed, 0);
        let level = (0..n)
            .map(|_| {
                let mut l = 0u8;
                while (l as usize) < h && r.gen::<f64>() < p {
                    l += 1;
                }
                l
            })
            .collect();
        let mut hr = LevelHierarchy::from_levels(level, h, ell);
        hr.p = p;
        hr.seed = seed;
        Ok(hr)
    }

    /// Hierarchy with prescribed top levels (`level[v]` = largest `i` with `v ∈ V_i`).
    pub fn from_levels(level: Vec<u8>, h: usize, ell: usize) -> LevelHierarchy {
        let n = level.len();
        let mut members = vec![Vec::new(); h + 1];
        let mut before = vec![vec![0u32; n + 1]; h + 1];
        for (v, &l) in level.iter().enumerate() {
            for (i, mem) in members.iter_mut().enumerate() {
                before[i][v + 1] = before[i][v] + u32::from(l as usize >= i);
                if l as usize >= i {
                    mem.push(v as u32);
                }
            }
        }
        let p = if n > 1 { powf(n as f64, -1.0 / h as f64) } else { 1.0 };
        LevelHierarchy { n, h, p, ell, seed: 0, level, members, before }
    }

    /// The same hierarchy on the reversed path.
    pub fn mirror(&self) -> LevelHierarchy {
        let lv = self.level.iter().rev().copied().collect();
        let mut m = LevelHierarchy::from_levels(lv, self.h, self.ell);
        m.p = self.p;
        m.seed = self.seed;
        m
    }

    pub fn level(&self, v: usize) -> usize {
        self.level[v] as usize
    }

    pub fn members(&self, i: usize) -> &[u32] {
        &self.members[i]
    }

    /// Nesting holds by construction; kept as an explicit check for tests.
    pub fn is_nested(&self) -> bool {
        (1..=self.h).all(|i| self.members[i].iter().all(|&v| self.level(v as usize) >= i - 1))
            && self.members[0].len() == self.n
    }

    /// Largest `w` such that `{v, w} ∈ E_j` for every `w' ∈ V_j ∩ (v, w]`;
    /// `j < h` and `v ∈ V_j`. Equals the `ℓ`-th member of `V_{j+1}` after `v`,
    /// minus one when `v ∈ V_{j+1}`, or `n − 1` when fewer than `ℓ` follow.
    pub fn threshold(&self, j: usize, v: usize) -> usize {
        let next = &self.members[j + 1];
        let start = self.before[j + 1][v + 1] as usize;
        if next.len() - start < self.ell {
            return self.n - 1;
        }
        let q = next[start + self.ell - 1] as usize;
        if self.level(v) > j {
            q - 1
        } else {
            q
        }
    }

    /// Edges of `E_j` as `(a, b)` with `a < b`.
    pub fn level_edges(&self, j: usize) -> Vec<(usize, usize)> {
        let mem = &self.members[j];
        let mut out = Vec::new();
        for (i, &v) in mem.iter().enumerate() {
            let v = v as usize;
            let hi = if j == self.h { self.n - 1 } else { self.threshold(j, v) };
            for &w in &mem[i + 1..] {
                if w as usize > hi {
                    break;
                }
                out.push((v, w as usize));
            }
        }
        out
    }
}

/// Samples levels and materializes the spanner over a path with the given
/// edge weights (`weights.len() + 1` vertices).
pub fn build_path_spanner(weights: &[f64], nu: f64, h: usize, c: f64, seed: u64) -> Result<(Spanner, LevelHierarchy)> {
    if !(nu > 0.0 && nu < 1.0) {
        return Err(param("nu", nu, "0 < nu < 1"));
    }
    let n = weights.len() + 1;
    let hr = LevelHierarchy::sample(n, h, path_ell(nu, h, c), seed)?;
    let h_sp = path_spanner_from(&hr, weights, nu, c);
    Ok((h_sp, hr))
}

/// The spanner of a given hierarchy.
pub fn path_spanner_from(hr: &LevelHierarchy, weights: &[f64], nu: f64, c: f64) -> Spanner {
    let mut prefix = vec![0.0; hr.n];
    for i in 1..hr.n {
        prefix[i] = prefix[i - 1] + weights[i - 1];
    }
    let mut edges = Vec::new();
    for j in 0..=hr.h {
        for (a, b) in hr.level_edges(j) {
            edges.push((a, b, prefix[b] - prefix[a]));
        }
    }
    let prov = Provenance {
        construction: "path".into(),
        seed: hr.seed,
        params: vec![("nu".into(), nu), ("h".into(), hr.h as f64), ("c".into(), c), ("ell".into(), hr.ell as f64)],
    };
    Spanner::new(hr.n, edges, prov)
}

/// Does `v ∈ V_k` see every later member of `V_k` through some spanner edge?
fn sees_all_right(hr: &LevelHierarchy, k: usize, v: usize) -> bool {
    let n = hr.n;
    let mut reach = 0;
    for j in 0..=k {
        reach = reach.max(hr.threshold(j, v));
        if reach >= n - 1 {
            return true;
        }
    }
    let start = hr.before[k][reach + 1] as usize;
    let rest = &hr.members[k][start..];
    if rest.is_empty() {
        return true;
    }
    if hr.level(v) == k {
        return false;
    }
    rest.iter().all(|&w| {
        let w = w as usize;
        (k + 1..=hr.level(v).min(hr.level(w))).any(|j| j == hr.h || w <= hr.threshold(j, v))
    })
}

/// `good[v]` for every vertex: `v ∉ B` has an attack-free increasing usable path.
fn increasing_good(hr: &LevelHierarchy, b: &[bool]) -> Vec<bool> {
    let h = hr.h;
    let mut upper: Vec<bool> = hr.members[h].iter().map(|&v| !b[v as usize]).collect();
    let mut ps = Vec::new();
    for k in (0..h).rev() {
        ps.clear();
        ps.push(0u32);
        for &g in &upper {
            let last = *ps.last().unwrap();
            ps.push(last + u32::from(g));
        }
        let next_len = hr.members[k + 1].len();
        let cur: Vec<bool> = hr.members[k]
            .iter()
            .map(|&v| {
                let v = v as usize;
                if b[v] {
                    return false;
                }
                let lo = hr.before[k + 1][v] as usize;
                let hi = (lo + hr.ell).min(next_len);
                ps[hi] > ps[lo] || sees_all_right(hr, k, v)
            })
            .collect();
        upper = cur;
    }
    upper
}

/// Exact `B⁺` mask: `B` plus every vertex lacking an attack-free usable path
/// in either direction.
pub fn bplus_mask(hr: &LevelHierarchy, b: &[bool]) -> Vec<bool> {
    let n = hr.n;
    let inc = increasing_good(hr, b);
    let rb: Vec<bool> = b.iter().rev().copied().collect();
    let dec = increasing_good(&hr.mirror(), &rb);
    (0..n).map(|v| b[v] || !inc[v] || !dec[n - 1 - v]).collect()
}

/// Sorted `B⁺` for an attack given as a list.
pub fn compute_bplus_path(hr: &LevelHierarchy, b: &[usize]) -> Result<Vec<usize>> {
    let n = hr.n;
    let mut mask = vec![false; n];
    for &v in b {
        if v >= n {
            return Err(Error::VertexOutOfRange { v, n });
        }
        mask[v] = true;
    }
    let bp = bplus_mask(hr, &mask);
    Ok((0..n).filter(|&v| bp[v]).collect())
}

fn greedy_increasing(hr: &LevelHierarchy, b: &[bool], x: usize) -> bool {
    if b[x] {
        return false;
    }
    let mut cur = x;
    for i in 0..hr.h {
        let next = &hr.members[i + 1];
        let lo = hr.before[i + 1][x] as usize;
        if next.len() - lo < hr.ell {
            return true;
        }
        match next[lo..lo + hr.ell].iter().find(|&&y| !b[y as usize]) {
            Some(&y) => {
                debug_assert!(y as usize >= cur);
                cur = y as usize;
            }
            None => return false,
        }
    }
    true
}

/// `B⁺` from the first-fit climb with windows anchored at the origin.
/// Always a superset of [`bplus_mask`].
pub fn greedy_bplus_mask(hr: &LevelHierarchy, b: &[bool]) -> Vec<bool> {
    let n = hr.n;
    let m = hr.mirror();
    let rb: Vec<bool> = b.iter().rev().copied().collect();
    (0..n)
        .map(|v| b[v] || !greedy_increasing(hr, b, v) || !greedy_increasing(&m, &rb, n - 1 - v))
        .collect()
}

/// Result of the hop/stretch check on surviving pairs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PathReport {
    pub pairs: usize,
    pub max_hops: usize,
    pub violation_count: usize,
    /// First few violating pairs with the hop count found (`usize::MAX` if
    /// no monotone route exists).
    pub violations: Vec<(usize, usize, usize)>,
}

impl PathReport {
    pub fn ok(&self) -> bool {
        self.violation_count == 0
    }
}

fn find(next: &mut [u32], mut i: usize) -> usize {
    let mut root = i;
    while next[root] as usize != root {
        root = next[root] as usize;
    }
    while next[i] as usize != root {
        let up = next[i] as usize;
        next[i] = root as u32;
        i = up;
    }
    root
}

/// Checks that every pair `u < v` outside `B⁺` is joined by a monotone path
/// in `H ∖ B` with at most `2h + 1` hops.
///
/// Edge weights are path distances, so monotone routes have exactly the path
/// distance and every other route is strictly longer; stretch 1 holds iff a
/// monotone route exists. Runs a breadth-first search over increasing edges
/// per source, using per-level "next unvisited member" links.
pub fn verify_path_stretch(hr: &LevelHierarchy, b: &[bool], bplus: &[bool]) -> PathReport {
    let n = hr.n;
    let h = hr.h;
    let limit = 2 * h + 1;
    let mut rep = PathReport::default();
    let mut hops = vec![usize::MAX; n];
    let mut links: Vec<Vec<u32>> = hr.members.iter().map(|m| vec![0u32; m.len() + 1]).collect();
    let mut queue = Vec::with_capacity(n);
    for s in 0..n {
        if bplus[s] {
            continue;
        }
        for (j, link) in links.iter_mut().enumerate() {
            for (i, l) in link.iter_mut().enumerate() {
                let dead = i < hr.members[j].len() && b[hr.members[j][i] as usize];
                *l = if dead { i as u32 + 1 } else { i as u32 };
            }
        }
        hops[s..].iter_mut().for_each(|x| *x = usize::MAX);
        queue.clear();
        hops[s] = 0;
        queue.push(s);
        let mut head = 0;
        while head < queue.len() {
            let v = queue[head];
            head += 1;
            for j in 0..=hr.level(v) {
                let hi = if j == h { n - 1 } else { hr.threshold(j, v) };
                let mem = &hr.members[j];
                let mut i = find(&mut links[j], hr.before[j][v + 1] as usize);
                while i < mem.len() && mem[i] as usize <= hi {
                    let w = mem[i] as usize;
                    if hops[w] == usize::MAX {
                        hops[w] = hops[v] + 1;
                        queue.push(w);
                    }
                    // Once seen, w is useless as a target at every level.
                    for (jj, link) in links.iter_mut().enumerate().take(hr.level(w) + 1) {
                        let idx = hr.before[jj][w] as usize;
                        link[idx] = idx as u32 + 1;
                    }
                    i = find(&mut links[j], i + 1);
                }
            }
        }
        for t in s + 1..n {
            if bplus[t] {
                continue;
            }
            rep.pairs += 1;
            let hc = hops[t];
            if hc != usize::MAX && hc > rep.max_hops {
                rep.max_hops = hc;
            }
            if hc > limit {
                rep.violation_count += 1;
                if rep.violations.len() < 64 {
                    rep.violations.push((s, t, hc));
                }
            }
        }
    }
    rep
}

/// Number of spanner edges crossing each path edge `{i, i+1}`.
pub fn crossing_counts(h: &Spanner) -> Vec<u64> {
    let n = h.n;
    let mut diff = vec![0i64; n];
    for &(a, b, _) in h.edges() {
        diff[a] += 1;
        diff[b] -= 1;
    }
    let mut out = Vec::with_capacity(n.saturating_sub(1));
    let mut run = 0i64;
    for d in diff.iter().take(n.saturating_sub(1)) {
        run += d;
        out.push(run as u64);
    }
    out
}

/// Exact rational `num/den` in `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Result<Ratio> {
        if den == 0 || num == 0 || num > den {
            return Err(param("alpha", num as f64 / den.max(1) as f64, "0 < alpha <= 1"));
        }
        Ok(Ratio { num, den })
    }

    pub fn value(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
    Both,
}

/// An α-shadow of an attack.
#[derive(Debug, Clone, PartialEq)]
pub struct Shadow {
    pub alpha: Ratio,
    pub side: Side,
    pub members: Vec<bool>,
}

impl Shadow {
    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&x| x).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Shadow in linear time. With `val_i = den·[i ∈ B] − num` and prefix sums
/// `P`, `b` is in the left shadow iff `P[b+1] ≥ min_{a ≤ b} P[a]`, and in the
/// right shadow iff `max_{c ≥ b} P[c+1] ≥ P[b]`.
pub fn compute_shadow(b: &[bool], alpha: Ratio, side: Side) -> Shadow {
    let n = b.len();
    let mut p = vec![0i128; n + 1];
    for i in 0..n {
        p[i + 1] = p[i] + if b[i] { alpha.den as i128 } else { 0 } - alpha.num as i128;
    }
    let mut members = vec![false; n];
    if side != Side::Right {
        let mut lo = i128::MAX;
        for i in 0..n {
            lo = lo.min(p[i]);
            members[i] |= p[i + 1] >= lo;
        }
    }
    if side != Side::Left {
        let mut hi = i128::MIN;
        for i in (0..n).rev() {
            hi = hi.max(p[i + 1]);
            members[i] |= hi >= p[i];
        }
    }
    Shadow { alpha, side, members }
}

/// Quadratic reference for [`compute_shadow`], straight from the definition.
pub fn compute_shadow_brute(b: &[bool], alpha: Ratio, side: Side) -> Shadow {
    let n = b.len();
    let dense = |a: usize, c: usize| {
        let hits = b[a..=c].iter().filter(|&&x| x).count() as u128;
        hits * alpha.den as u128 >= (c - a + 1) as u128 * alpha.num as u128
    };
    let members = (0..n)
        .map(|x| {
            (side != Side::Right && (0..=x).any(|a| dense(a, x)))
                || (side != Side::Left && (x..n).any(|c| dense(x, c)))
        })
        .collect();
    Shadow { alpha, side, members }
}

/// `|S_α|·(2α − 1) ≤ |B|` in integers, for `α ≥ 2/3`.
pub fn shadow_large_alpha_ok(shadow_len: usize, b_len: usize, alpha: Ratio) -> bool {
    let lhs = shadow_len as u128 * (2 * alpha.num as u128 - alpha.den as u128);
    lhs <= b_len as u128 * alpha.den as u128
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::dijkstra;
    use crate::spanner::mask;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    /// Edge sets per level, straight from the construction text.
    fn brute_edges(hr: &LevelHierarchy) -> Vec<BTreeSet<(usize, usize)>> {
        let n = hr.n;
        let l = hr.ell;
        let mut out = vec![BTreeSet::new(); hr.h + 1];
        for i in 0..hr.h {
            let up: Vec<usize> = (0..n).filter(|&v| hr.level(v) > i).collect();
            for x in (0..n).filter(|&v| hr.level(v) >= i) {
                let right: Vec<usize> = up.iter().copied().filter(|&v| v >= x).collect();
                let left: Vec<usize> = up.iter().rev().copied().filter(|&v| v <= x).collect();
                let u = if right.len() < l { n - 1 } else { right[l - 1] };
                let v = if left.len() < l { 0 } else { left[l - 1] };
                for y in v..=u {
                    if y != x && hr.level(y) >= i {
                        out[i].insert((x.min(y), x.max(y)));
                    }
                }
            }
        }
        let top: Vec<usize> = (0..n).filter(|&v| hr.level(v) >= hr.h).collect();
        for (a, &x) in top.iter().enumerate() {
            for &y in &top[a + 1..] {
                out[hr.h].insert((x, y));
            }
        }
        out
    }

    /// Exhaustive search for an attack-free increasing usable path.
    fn brute_usable(hr: &LevelHierarchy, e: &[BTreeSet<(usize, usize)>], b: &[bool], x: usize) -> bool {
        let adj = |a: usize, c: usize| e.iter().any(|s| s.contains(&(a.min(c), a.max(c))));
        fn go(
            hr: &LevelHierarchy,
            e: &[BTreeSet<(usize, usize)>],
            b: &[bool],
            adj: &dyn Fn(usize, usize) -> bool,
            k: usize,
            v: usize,
        ) -> bool {
            let n = hr.n;
            if (v + 1..n).filter(|&w| hr.level(w) >= k).all(|w| adj(v, w)) {
                return true;
            }
            if k == hr.h {
                return false;
            }
            (v..n).any(|y| {
                hr.level(y) > k && !b[y] && (y == v || e[k].contains(&(v, y))) && go(hr, e, b, adj, k + 1, y)
            })
        }
        !b[x] && go(hr, e, b, &adj, 0, x)
    }

    fn brute_bplus(hr: &LevelHierarchy, b: &[bool]) -> Vec<bool> {
        let n = hr.n;
        let e = brute_edges(hr);
        let m = hr.mirror();
        let em = brute_edges(&m);
        let rb: Vec<bool> = b.iter().rev().copied().collect();
        (0..n).map(|v| b[v] || !brute_usable(hr, &e, b, v) || !brute_usable(&m, &em, &rb, n - 1 - v)).collect()
    }

    fn arb_instance() -> impl Strategy<Value = (LevelHierarchy, Vec<bool>)> {
        (2usize..=32, 1usize..=5, 1usize..=4, any::<u64>(), 0u32..=100).prop_flat_map(|(n, h, ell, seed, pct)| {
            let h = h.min(max_h(n));
            let hr = LevelHierarchy::sample(n, h, ell, seed).unwrap();
            let b = proptest::collection::vec(proptest::bool::weighted(pct as f64 / 100.0), n);
            (Just(hr), b)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(400))]

        #[test]
        fn level_edges_match_construction((hr, _b) in arb_instance()) {
            let e = brute_edges(&hr);
            for j in 0..=hr.h {
                let got: BTreeSet<_> = hr.level_edges(j).into_iter().collect();
                prop_assert_eq!(&got, &e[j]);
            }
        }

        #[test]
        fn dp_oracle_matches_enumeration((hr, b) in arb_instance()) {
            prop_assert_eq!(bplus_mask(&hr, &b), brute_bplus(&hr, &b));
        }

        #[test]
        fn greedy_is_sound((hr, b) in arb_instance()) {
            let exact = bplus_mask(&hr, &b);
            let greedy = greedy_bplus_mask(&hr, &b);
            for v in 0..hr.n {
                prop_assert!(greedy[v] || !exact[v]);
            }
        }

        #[test]
        fn survivors_have_short_monotone_paths((hr, b) in arb_instance()) {
            let bp = bplus_mask(&hr, &b);
            let rep = verify_path_stretch(&hr, &b, &bp);
            prop_assert!(rep.ok(), "{:?}", rep.violations);
            // Cross-check hop counts with Dijkstra on the explicit spanner.
            let w = vec![1.0; hr.n - 1];
            let sp = path_spanner_from(&hr, &w, 0.1, 1.0);
            let g = sp.graph();
            for s in (0..hr.n).filter(|&s| !bp[s]) {
                let d = dijkstra(&g, s, Some(&b));
                for t in (s + 1..hr.n).filter(|&t| !bp[t]) {
                    prop_assert_eq!(d.dist[t], (t - s) as f64);
                    prop_assert!(d.hops[t] as usize <= 2 * hr.h + 1);
                }
            }
        }

        #[test]
        fn shadow_linear_matches_brute(
            b in proptest::collection::vec(any::<bool>(), 1..60),
            num in 1u64..=12,
            extra in 0u64..=12,
        ) {
            let a = Ratio::new(num, num + extra).unwrap();
            for side in [Side::Left, Side::Right, Side::Both] {
                prop_assert_eq!(compute_shadow(&b, a, side), compute_shadow_brute(&b, a, side));
            }
        }
    }

    #[test]
    fn empty_attack_means_everyone_safe() {
        for seed in 0..20 {
            let hr = LevelHierarchy::sample(200, 7, 5, seed).unwrap();
            let b = vec![false; 200];
            assert!(bplus_mask(&hr, &b).iter().all(|&x| !x));
            assert!(greedy_bplus_mask(&hr, &b).iter().all(|&x| !x));
        }
    }

    #[test]
    fn two_vertices_single_edge() {
        let (sp, _) = build_path_spanner(&[2.5], 0.1, 1, 4.0, 9).unwrap();
        assert_eq!(sp.edges(), &[(0, 1, 2.5)]);
    }

    #[test]
    fn blocked_window_makes_origin_unsafe() {
        // V_1 = {3, 4} (also V_2 = ∅ is impossible with h = 1, so V_1 is the top clique).
        let mut lv = vec![0u8; 8];
        lv[3] = 1;
        lv[4] = 1;
        let hr = LevelHierarchy::from_levels(lv, 1, 2);
        let b = mask(8, &[3, 4]);
        let bp = bplus_mask(&hr, &b);
        // Vertex 0 reaches only up to 4 on the right and cannot see V_0 beyond.
        assert!(bp[0]);
        // Vertex 5 has fewer than ℓ members of V_1 to its right: it sees the
        // whole right side, but its left window {4, 3} is attacked.
        assert!(bp[5]);
        assert_eq!(bp, brute_bplus(&hr, &b));
    }

    #[test]
    fn lone_survivor() {
        let hr = LevelHierarchy::sample(16, 4, 2, 3).unwrap();
        for v in 0..16 {
            let b: Vec<bool> = (0..16).map(|u| u != v).collect();
            let bp = bplus_mask(&hr, &b);
            assert_eq!(bp, brute_bplus(&hr, &b));
        }
    }

    #[test]
    fn shadow_examples() {
        // B = {2} on vertices 1..4 (0-based: {1} on 0..3).
        let b = mask(4, &[1]);
        let half = compute_shadow(&b, Ratio::new(1, 2).unwrap(), Side::Both);
        assert_eq!(half.members, vec![true, true, true, false]);
        let one = compute_shadow(&b, Ratio::new(1, 1).unwrap(), Side::Both);
        assert_eq!(one.members, vec![false, true, false, false]);
        assert!(shadow_large_alpha_ok(1, 1, Ratio::new(1, 1).unwrap()));
    }

    #[test]
    fn crossing_counts_sum_to_weight() {
        let w = [1.0, 2.0, 0.5, 3.0, 1.5, 1.0, 2.0];
        let (sp, _) = build_path_spanner(&w, 0.3, 2, 1.0, 4).unwrap();
        let c = crossing_counts(&sp);
        let total: f64 = c.iter().zip(&w).map(|(&c, &w)| c as f64 * w).sum();
        assert!((total - sp.weight()).abs() < 1e-9);
    }
}
