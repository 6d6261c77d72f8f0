//! Oblivious reliable spanners for k-HSTs.
//!
//! Every lowest heavy-path node `y` samples `ℓ` of its leaves as `Z_y`; each
//! internal `x` connects `Z_{f(x)}` to `Z_{f(x_j)}` for all children `x_j`.
//! A leaf is safe when no ancestor has its whole sample attacked, and `B⁺`
//! is `B` plus the unsafe leaves.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng as _;

use crate::error::{param, Error, Result};
use crate::hst::{HeavyPaths, Hst};
use crate::metric::Metric;
use crate::num::{ceil_tol, ln};
use crate::rng;
use crate::spanner::{verify_stretch, Provenance, Spanner, StretchReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Basic,
    /// Also joins the samples of every pair of siblings.
    BoundedDegree,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Basic => "khst",
            Variant::BoundedDegree => "khst-bd",
        }
    }

    /// Stretch guaranteed on pairs outside `B⁺`.
    pub fn stretch_bound(self, k: f64) -> f64 {
        match self {
            Variant::Basic => 2.0 + 2.0 / (k - 1.0),
            Variant::BoundedDegree => 1.0 + 2.0 / (k - 1.0),
        }
    }
}

/// Sample size `ℓ = max(1, ⌈c/ν · ln(ln n / ν)⌉)`, or `⌈c/ν⌉` when the
/// inner logarithm is not positive.
pub fn sample_size(n: usize, nu: f64, c: f64) -> usize {
    let inner = ln(n as f64) / nu;
    let raw = if inner > 1.0 { c / nu * ln(inner) } else { c / nu };
    (ceil_tol(raw) as usize).max(1)
}

/// The per-node samples `Z_y` for `y ∈ F`, together with `f`.
#[derive(Debug, Clone)]
pub struct SampleSets {
    pub ell: usize,
    pub seed: u64,
    lowest: Vec<usize>,
    z: Vec<Vec<usize>>,
}

impl SampleSets {
    /// Uniform samples without replacement: a Fisher–Yates prefix over
    /// `L(y)` drawn from the RNG stream `(seed, y)`.
    pub fn sample(t: &Hst, hp: &HeavyPaths, ell: usize, seed: u64) -> SampleSets {
        let m = t.num_nodes();
        let mut z = vec![Vec::new(); m];
        for y in 0..m {
            if !hp.is_lowest(y) {
                continue;
            }
            let leaves = t.leaves(y);
            if leaves.len() <= ell {
                z[y] = leaves.to_vec();
                continue;
            }
            let mut r = rng::stream(seed, y as u64);
            let mut buf = leaves.to_vec();
            for i in 0..ell {
                let j = r.gen_range(i..buf.len());
                buf.swap(i, j);
            }
            buf.truncate(ell);
            z[y] = buf;
        }
        SampleSets { ell, seed, lowest: (0..m).map(|x| hp.lowest(x)).collect(), z }
    }

    /// Builds sample sets from explicit per-node sets; `lowest` maps every
    /// node to the node whose set it uses.
    pub fn from_parts(ell: usize, seed: u64, lowest: Vec<usize>, z: Vec<Vec<usize>>) -> SampleSets {
        SampleSets { ell, seed, lowest, z }
    }

    /// `f(x)`.
    pub fn lowest(&self, x: usize) -> usize {
        self.lowest[x]
    }

    /// `Z_{f(x)}`.
    pub fn z_of(&self, x: usize) -> &[usize] {
        &self.z[self.lowest[x]]
    }

    /// The set stored at `y` itself (empty unless `y ∈ F`).
    pub fn z_at(&self, y: usize) -> &[usize] {
        &self.z[y]
    }

    pub fn num_nodes(&self) -> usize {
        self.z.len()
    }
}

fn check_params(t: &Hst, nu: f64, k: f64) -> Result<()> {
    if t.n() == 0 {
        return Err(Error::Empty);
    }
    if !(nu > 0.0 && nu < 1.0 / 6.0) {
        return Err(param("nu", nu, "0 < nu < 1/6"));
    }
    if !(k > 1.0) {
        return Err(param("k", k, "k > 1"));
    }
    if !t.is_k_hst(k) {
        return Err(param("k", k, "tree must be a k-HST for this k"));
    }
    Ok(())
}

/// Bi-clique edges for the given samples, weighted by `d_T`.
pub fn spanner_edges(t: &Hst, s: &SampleSets, variant: Variant) -> Vec<(usize, usize, f64)> {
    let mut edges = Vec::new();
    let mut add = |a: &[usize], b: &[usize]| {
        for &u in a {
            for &v in b {
                if u != v {
                    edges.push((u, v, t.dist(u, v)));
                }
            }
        }
    };
    for x in t.internal_nodes() {
        let zx = s.z_of(x);
        let ch = t.children(x);
        for &c in ch {
            add(zx, s.z_of(c));
        }
        if variant == Variant::BoundedDegree {
            for (i, &a) in ch.iter().enumerate() {
                for &b in &ch[i + 1..] {
                    add(s.z_of(a), s.z_of(b));
                }
            }
        }
    }
    edges
}

/// Samples and builds the spanner of `variant` on a k-HST.
pub fn build(t: &Hst, nu: f64, k: f64, c: f64, seed: u64, variant: Variant) -> Result<(Spanner, SampleSets)> {
    check_params(t, nu, k)?;
    let hp = HeavyPaths::new(t, nu);
    let ell = sample_size(t.n(), nu, c);
    let s = SampleSets::sample(t, &hp, ell, seed);
    let prov = Provenance {
        construction: variant.name().into(),
        seed,
        params: vec![("nu".into(), nu), ("k".into(), k), ("c".into(), c), ("ell".into(), ell as f64)],
    };
    let h = Spanner::new(t.n(), spanner_edges(t, &s, variant), prov);
    Ok((h, s))
}

pub fn build_khst_spanner(t: &Hst, nu: f64, k: f64, c: f64, seed: u64) -> Result<(Spanner, SampleSets)> {
    build(t, nu, k, c, seed, Variant::Basic)
}

pub fn build_khst_spanner_bounded_degree(t: &Hst, nu: f64, k: f64, c: f64, seed: u64) -> Result<(Spanner, SampleSets)> {
    build(t, nu, k, c, seed, Variant::BoundedDegree)
}

/// The construction run with `ν/3`, whose expected `|B⁺ ∖ B|` is at most `ν|B|`.
pub fn build_rescaled(t: &Hst, nu: f64, k: f64, c: f64, seed: u64, variant: Variant) -> Result<(Spanner, SampleSets)> {
    build(t, nu / 3.0, k, c, seed, variant)
}

/// `B⁺` as a mask: `B` plus every leaf with an internal ancestor `x` such
/// that `Z_{f(x)} ⊆ B`. One pass over the sets and one over the tree.
pub fn bplus_mask(t: &Hst, s: &SampleSets, b: &[bool]) -> Vec<bool> {
    let m = t.num_nodes();
    let mut dead = vec![false; m];
    let mut out = b.to_vec();
    for x in 0..m {
        let inherited = t.parent(x).is_some_and(|p| dead[p]);
        dead[x] = inherited || (!t.is_leaf(x) && s.z_of(x).iter().all(|&v| b[v]));
        if let Some(p) = t.point(x) {
            out[p] |= dead[x];
        }
    }
    out
}

/// Sorted `B⁺` of an attack given as a vertex list.
pub fn compute_bplus_hst(t: &Hst, s: &SampleSets, b: &[usize]) -> Result<Vec<usize>> {
    let n = t.n();
    let mut mask = vec![false; n];
    for &v in b {
        if v >= n {
            return Err(Error::VertexOutOfRange { v, n });
        }
        mask[v] = true;
    }
    let bp = bplus_mask(t, s, &mask);
    Ok((0..n).filter(|&v| bp[v]).collect())
}

/// Exact check of `d_{H∖B}(u,v) ≤ bound·d_T(u,v)` for all `u, v ∉ B⁺`.
pub fn verify_hst_stretch(t: &Hst, h: &Spanner, b: &[bool], bplus: &[bool], bound: f64) -> StretchReport {
    verify_stretch(h, t, b, bplus, bound, false)
}

/// `Σ_x deg(x)·ℓ²` (basic) or `Σ_x C(deg(x)+1, 2)·ℓ²` (bounded degree).
pub fn edge_count_bound(t: &Hst, ell: usize, variant: Variant) -> usize {
    let l2 = ell * ell;
    t.internal_nodes()
        .map(|x| {
            let d = t.degree(x);
            match variant {
                Variant::Basic => d * l2,
                Variant::BoundedDegree => d * (d + 1) / 2 * l2,
            }
        })
        .sum()
}

/// `ℓ²·Σ_x deg(x)·Γ_x`.
pub fn weight_bound(t: &Hst, ell: usize) -> f64 {
    let l2 = (ell * ell) as f64;
    t.internal_nodes().map(|x| l2 * t.degree(x) as f64 * t.label(x)).sum()
}

/// Splits `B⁺ ∖ B` into the part below a brutally attacked node
/// (`|B ∩ L(x)| ≥ (1−ν)|L(x)|`) and the rest. Returns `(|B₁|, |B₂|)`.
pub fn brutal_split(t: &Hst, b: &[bool], bplus: &[bool], nu: f64) -> (usize, usize) {
    let m = t.num_nodes();
    let mut hit = vec![0usize; m];
    for x in (0..m).rev() {
        hit[x] = match t.point(x) {
            Some(p) => usize::from(b[p]),
            None => t.children(x).iter().map(|&c| hit[c]).sum(),
        };
    }
    let mut under = vec![false; m];
    let (mut b1, mut b2) = (0, 0);
    for x in 0..m {
        let brutal = hit[x] as f64 >= (1.0 - nu) * t.leaf_count(x) as f64;
        under[x] = brutal || t.parent(x).is_some_and(|p| under[p]);
        if let Some(p) = t.point(x) {
            if bplus[p] && !b[p] {
                if under[x] {
                    b1 += 1;
                } else {
                    b2 += 1;
                }
            }
        }
    }
    (b1, b2)
}
