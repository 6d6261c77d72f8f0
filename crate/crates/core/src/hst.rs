//! Hierarchically well-separated trees.
//!
//! An [`Hst`] is a rooted tree whose leaves are the points `0..n`; the
//! distance between two points is the label of their lowest common ancestor.
//! Nodes are renumbered in preorder at build time, so the subtree of `x`
//! occupies the node range `x..x + size(x)` and its leaves a contiguous slice
//! of [`Hst::leaf_order`].

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::metric::Metric;
use crate::num::{approx_eq, approx_le, ceil_tol, ln, powi, REL_TOL};

/// Node description used to build an [`Hst`].
#[derive(Debug, Clone, PartialEq)]
pub struct RawNode {
    pub parent: Option<usize>,
    pub label: f64,
    /// Point id for a leaf. Either every leaf names its point or none does,
    /// in which case leaves are numbered by increasing node index.
    pub point: Option<usize>,
    pub center: Option<usize>,
}

impl RawNode {
    pub fn internal(parent: Option<usize>, label: f64) -> RawNode {
        RawNode { parent, label, point: None, center: None }
    }

    pub fn leaf(parent: usize, point: usize) -> RawNode {
        RawNode { parent: Some(parent), label: 0.0, point: Some(point), center: None }
    }
}

const NONE: usize = usize::MAX;

#[derive(Debug, Clone)]
pub struct Hst {
    parent: Vec<usize>,
    children: Vec<Vec<usize>>,
    label: Vec<f64>,
    center: Vec<Option<usize>>,
    point: Vec<usize>,
    leaf_node: Vec<usize>,
    size: Vec<usize>,
    depth: Vec<u32>,
    leaf_order: Vec<usize>,
    leaf_lo: Vec<usize>,
    leaf_hi: Vec<usize>,
    up: Vec<Vec<usize>>,
}

impl Hst {
    /// Validates a node list, contracts internal nodes with a single child
    /// and renumbers in preorder. With `k > 1` the k-separation property
    /// (child label ≤ parent label / k) is enforced on the contracted tree.
    pub fn build(nodes: &[RawNode], k: f64) -> Result<Hst> {
        let m = nodes.len();
        if m == 0 {
            return Err(Error::Empty);
        }
        let mut kids: Vec<Vec<usize>> = vec![Vec::new(); m];
        let mut root = NONE;
        for (i, nd) in nodes.iter().enumerate() {
            match nd.parent {
                None => {
                    if root != NONE {
                        return Err(Error::Hst(format!("two roots: {root} and {i}")));
                    }
                    root = i;
                }
                Some(p) if p >= m => return Err(Error::Hst(format!("node {i} has unknown parent {p}"))),
                Some(p) if p == i => return Err(Error::Hst(format!("node {i} is its own parent"))),
                Some(p) => kids[p].push(i),
            }
            if !(nd.label.is_finite() && nd.label >= 0.0) {
                return Err(Error::Hst(format!("node {i} has invalid label {}", nd.label)));
            }
        }
        if root == NONE {
            return Err(Error::Hst("no root".into()));
        }

        // Reachability doubles as the cycle check.
        let mut seen = vec![false; m];
        let mut stack = vec![root];
        let mut reached = 0;
        while let Some(x) = stack.pop() {
            seen[x] = true;
            reached += 1;
            stack.extend(kids[x].iter().copied());
        }
        if reached != m {
            return Err(Error::Hst("nodes unreachable from the root".into()));
        }

        let leaves: Vec<usize> = (0..m).filter(|&i| kids[i].is_empty()).collect();
        for (i, nd) in nodes.iter().enumerate() {
            if kids[i].is_empty() {
                if nd.label != 0.0 {
                    return Err(Error::LeafLabel(i));
                }
            } else {
                if nd.label <= 0.0 {
                    return Err(Error::Hst(format!("internal node {i} has label 0")));
                }
                for &c in &kids[i] {
                    if nodes[c].label > nd.label {
                        return Err(Error::LabelOrder(c));
                    }
                }
            }
        }
        let n = leaves.len();
        let named = leaves.iter().filter(|&&l| nodes[l].point.is_some()).count();
        let mut point_of_raw = vec![NONE; m];
        if named == 0 {
            for (r, &l) in leaves.iter().enumerate() {
                point_of_raw[l] = r;
            }
        } else if named == n {
            let mut used = vec![false; n];
            for &l in &leaves {
                let p = nodes[l].point.unwrap();
                if p >= n || used[p] {
                    return Err(Error::Hst(format!("leaf points are not a bijection onto 0..{n}")));
                }
                used[p] = true;
                point_of_raw[l] = p;
            }
        } else {
            return Err(Error::Hst("only some leaves name their point".into()));
        }

        // Skip single-child chains: each node is represented by the bottom of
        // its chain.
        let skip = |mut x: usize| {
            while kids[x].len() == 1 {
                x = kids[x][0];
            }
            x
        };

        let mut t = Hst {
            parent: Vec::with_capacity(m),
            children: Vec::with_capacity(m),
            label: Vec::with_capacity(m),
            center: Vec::with_capacity(m),
            point: Vec::with_capacity(m),
            leaf_node: vec![NONE; n],
            size: Vec::new(),
            depth: Vec::with_capacity(m),
            leaf_order: Vec::with_capacity(n),
            leaf_lo: Vec::new(),
            leaf_hi: Vec::new(),
            up: Vec::new(),
        };
        // (raw node, new parent)
        let mut stack = vec![(skip(root), NONE)];
        while let Some((x, par)) = stack.pop() {
            let id = t.label.len();
            t.parent.push(par);
            t.children.push(Vec::new());
            t.label.push(nodes[x].label);
            t.center.push(nodes[x].center);
            t.point.push(point_of_raw[x]);
            t.depth.push(if par == NONE { 0 } else { t.depth[par] + 1 });
            if par != NONE {
                t.children[par].push(id);
            }
            if point_of_raw[x] != NONE {
                t.leaf_node[point_of_raw[x]] = id;
            }
            for &c in kids[x].iter().rev() {
                stack.push((skip(c), id));
            }
        }
        t.finish();

        if k > 1.0 {
            for x in 0..t.num_nodes() {
                for &c in &t.children[x] {
                    if !t.is_leaf(c) && !approx_le(t.label[c] * k, t.label[x]) {
                        return Err(Error::Separation { node: c, k });
                    }
                }
            }
        }
        Ok(t)
    }

    /// Fills sizes, leaf ranges and the ancestor table. Nodes are in preorder.
    fn finish(&mut self) {
        let m = self.label.len();
        self.size = vec![1; m];
        for x in (1..m).rev() {
            let p = self.parent[x];
            self.size[p] += self.size[x];
        }
        self.leaf_lo = vec![0; m];
        self.leaf_hi = vec![0; m];
        self.leaf_order.clear();
        for x in 0..m {
            self.leaf_lo[x] = self.leaf_order.len();
            if self.point[x] != NONE {
                self.leaf_order.push(self.point[x]);
            }
        }
        for x in (0..m).rev() {
            self.leaf_hi[x] = if self.point[x] != NONE {
                self.leaf_lo[x] + 1
            } else {
                self.children[x].iter().map(|&c| self.leaf_hi[c]).max().unwrap_or(self.leaf_lo[x])
            };
        }
        let levels = (usize::BITS - m.leading_zeros()).max(1) as usize;
        let mut up = vec![self.parent.iter().map(|&p| if p == NONE { 0 } else { p }).collect::<Vec<_>>()];
        for j in 1..levels {
            let prev = &up[j - 1];
            let next = (0..m).map(|x| prev[prev[x]]).collect();
            up.push(next);
        }
        self.up = up;
    }

    /// Number of points (leaves).
    pub fn n(&self) -> usize {
        self.leaf_node.len()
    }

    pub fn num_nodes(&self) -> usize {
        self.label.len()
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn parent(&self, x: usize) -> Option<usize> {
        (self.parent[x] != NONE).then_some(self.parent[x])
    }

    pub fn children(&self, x: usize) -> &[usize] {
        &self.children[x]
    }

    /// Number of children.
    pub fn degree(&self, x: usize) -> usize {
        self.children[x].len()
    }

    pub fn max_degree(&self) -> usize {
        self.children.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn label(&self, x: usize) -> f64 {
        self.label[x]
    }

    pub fn center(&self, x: usize) -> Option<usize> {
        self.center[x]
    }

    pub fn depth(&self, x: usize) -> usize {
        self.depth[x] as usize
    }

    pub fn is_leaf(&self, x: usize) -> bool {
        self.point[x] != NONE
    }

    /// Point of a leaf node.
    pub fn point(&self, x: usize) -> Option<usize> {
        (self.point[x] != NONE).then_some(self.point[x])
    }

    /// Leaf node of a point.
    pub fn leaf(&self, p: usize) -> usize {
        self.leaf_node[p]
    }

    /// Points in preorder.
    pub fn leaf_order(&self) -> &[usize] {
        &self.leaf_order
    }

    /// Points below `x`, in preorder.
    pub fn leaves(&self, x: usize) -> &[usize] {
        &self.leaf_order[self.leaf_lo[x]..self.leaf_hi[x]]
    }

    /// Position range of `x`'s leaves inside [`leaf_order`](Self::leaf_order).
    pub fn leaf_range(&self, x: usize) -> (usize, usize) {
        (self.leaf_lo[x], self.leaf_hi[x])
    }

    pub fn leaf_count(&self, x: usize) -> usize {
        self.leaf_hi[x] - self.leaf_lo[x]
    }

    /// Number of nodes in the subtree of `x`.
    pub fn subtree_size(&self, x: usize) -> usize {
        self.size[x]
    }

    pub fn is_ancestor(&self, a: usize, b: usize) -> bool {
        a <= b && b < a + self.size[a]
    }

    pub fn internal_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_nodes()).filter(|&x| !self.is_leaf(x))
    }

    /// Ancestors of `x` from its parent up to the root.
    pub fn ancestors(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        let mut cur = self.parent[x];
        core::iter::from_fn(move || {
            if cur == NONE {
                return None;
            }
            let r = cur;
            cur = self.parent[cur];
            Some(r)
        })
    }

    pub fn lca(&self, a: usize, b: usize) -> usize {
        if self.is_ancestor(a, b) {
            return a;
        }
        if self.is_ancestor(b, a) {
            return b;
        }
        let mut x = a;
        for j in (0..self.up.len()).rev() {
            let y = self.up[j][x];
            if !self.is_ancestor(y, b) {
                x = y;
            }
        }
        self.parent[x]
    }

    /// All pairwise leaf distances as a row-major `n*n` matrix, in O(n²).
    pub fn all_pairs_dist(&self) -> Vec<f64> {
        let n = self.n();
        let mut d = vec![0.0; n * n];
        for x in self.internal_nodes() {
            let g = self.label[x];
            let ch = &self.children[x];
            for (i, &a) in ch.iter().enumerate() {
                for &b in &ch[i + 1..] {
                    for &p in self.leaves(a) {
                        for &q in self.leaves(b) {
                            d[p * n + q] = g;
                            d[q * n + p] = g;
                        }
                    }
                }
            }
        }
        d
    }

    /// True iff every internal child label is at most `1/k` of its parent's.
    pub fn is_k_hst(&self, k: f64) -> bool {
        (0..self.num_nodes()).all(|x| {
            self.children[x].iter().all(|&c| self.is_leaf(c) || approx_le(self.label[c] * k, self.label[x]))
        })
    }

    /// Node list that rebuilds this tree, with each node's children emitted in
    /// the order chosen by `order(x, children) -> permuted children`.
    pub fn to_raw_with_order(&self, mut order: impl FnMut(usize, &[usize]) -> Vec<usize>) -> Vec<RawNode> {
        let mut out: Vec<RawNode> = Vec::with_capacity(self.num_nodes());
        let mut stack = vec![(0usize, None)];
        while let Some((x, par)) = stack.pop() {
            let id = out.len();
            out.push(RawNode {
                parent: par,
                label: self.label[x],
                point: self.point(x),
                center: self.center[x],
            });
            let ch = order(x, &self.children[x]);
            for &c in ch.iter().rev() {
                stack.push((c, Some(id)));
            }
        }
        out
    }

    pub fn to_raw(&self) -> Vec<RawNode> {
        self.to_raw_with_order(|_, ch| ch.to_vec())
    }

    /// Same tree with children reordered by `key(parent, child)`, ties by
    /// current position. Node ids change (preorder is recomputed).
    pub fn reorder_children(&self, mut key: impl FnMut(usize, usize) -> f64) -> Hst {
        let raw = self.to_raw_with_order(|x, ch| {
            let mut v: Vec<(f64, usize)> = ch.iter().map(|&c| (key(x, c), c)).collect();
            v.sort_by(|a, b| a.0.total_cmp(&b.0));
            v.into_iter().map(|(_, c)| c).collect()
        });
        Hst::build(&raw, 1.0).expect("reordering preserves validity")
    }

    /// Replaces node centers (indexed by current node id).
    pub fn with_centers(mut self, centers: Vec<Option<usize>>) -> Hst {
        assert_eq!(centers.len(), self.num_nodes());
        self.center = centers;
        self
    }

    /// Sum of labels weighted by `deg(x) - 1`: the MST weight of the leaf metric.
    pub fn mst_weight(&self) -> f64 {
        hst_mst_weight(self)
    }
}

impl Metric for Hst {
    fn len(&self) -> usize {
        self.n()
    }

    fn dist(&self, u: usize, v: usize) -> f64 {
        if u == v {
            return 0.0;
        }
        self.label[self.lca(self.leaf_node[u], self.leaf_node[v])]
    }
}

/// `Σ_x (deg(x) − 1)·Γ_x`.
pub fn hst_mst_weight(t: &Hst) -> f64 {
    t.internal_nodes().map(|x| (t.degree(x) as f64 - 1.0) * t.label(x)).sum()
}

/// Heavy-path tagging of an [`Hst`] for a reliability parameter `nu`.
///
/// In preorder, the root gets σ = n; a child whose leaf count exceeds
/// `(1 − ν/2)·σ_parent` inherits the parent's tag and the edge becomes heavy.
#[derive(Debug, Clone)]
pub struct HeavyPaths {
    pub nu: f64,
    sigma: Vec<usize>,
    heavy_child: Vec<usize>,
    lowest: Vec<usize>,
}

impl HeavyPaths {
    pub fn new(t: &Hst, nu: f64) -> HeavyPaths {
        let m = t.num_nodes();
        let mut sigma: Vec<usize> = (0..m).map(|x| t.leaf_count(x)).collect();
        let mut heavy_child = vec![NONE; m];
        let thresh = 1.0 - nu / 2.0;
        // Preorder numbering means parents are final before children.
        for x in 0..m {
            for &c in t.children(x) {
                if sigma[c] as f64 > thresh * sigma[x] as f64 {
                    debug_assert_eq!(heavy_child[x], NONE);
                    sigma[c] = sigma[x];
                    heavy_child[x] = c;
                }
            }
        }
        let mut lowest: Vec<usize> = (0..m).collect();
        for x in (0..m).rev() {
            if heavy_child[x] != NONE {
                lowest[x] = lowest[heavy_child[x]];
            }
        }
        HeavyPaths { nu, sigma, heavy_child, lowest }
    }

    pub fn sigma(&self, x: usize) -> usize {
        self.sigma[x]
    }

    pub fn heavy_child(&self, x: usize) -> Option<usize> {
        (self.heavy_child[x] != NONE).then_some(self.heavy_child[x])
    }

    /// `f(x)`: the lowest node on the heavy path through `x`.
    pub fn lowest(&self, x: usize) -> usize {
        self.lowest[x]
    }

    /// Whether `x` is the lowest node of its heavy path (the set F).
    pub fn is_lowest(&self, x: usize) -> bool {
        self.heavy_child[x] == NONE
    }

    /// Largest number of heavy paths met by a root-to-leaf path.
    pub fn max_paths_on_root_leaf(&self, t: &Hst) -> usize {
        let m = t.num_nodes();
        let mut cnt = vec![1usize; m];
        let mut best = 1;
        for x in 1..m {
            let p = t.parent(x).unwrap();
            cnt[x] = cnt[p] + usize::from(self.heavy_child[p] != x);
            if t.is_leaf(x) {
                best = best.max(cnt[x]);
            }
        }
        best
    }
}

/// Upper bound `2/ν·ln n + 1` on heavy paths per root-to-leaf path.
pub fn heavy_path_bound(n: usize, nu: f64) -> f64 {
    2.0 / nu * ln(n as f64) + 1.0
}

/// Number of extra trees in the ultrametric-to-k-HST reduction:
/// `⌈log_{1+ε}(1/ε)⌉`, so the cover has that many plus one trees.
pub fn khst_cover_size(eps: f64) -> usize {
    ceil_tol(ln(1.0 / eps) / ln(1.0 + eps)) as usize
}

/// Smallest value of the grid `{(1+ε)^i · ε^{-j} : j ∈ ℤ}` that is `>= g`.
fn round_up_to_grid(g: f64, eps: f64, i: usize) -> f64 {
    let base = powi(1.0 + eps, i as i32);
    let step = 1.0 / eps;
    let mut j = ceil_tol(ln(g / base) / ln(step)) as i32;
    let val = |j: i32| base * powi(step, j);
    while val(j) < g {
        j += 1;
    }
    while val(j - 1) >= g {
        j -= 1;
    }
    val(j)
}

/// Covers a 1-HST by `⌈log_{1+ε}(1/ε)⌉ + 1` dominating `1/ε`-HSTs.
///
/// Tree `i` rounds every label up to `(1+ε)^i·ε^{-j}` and merges children
/// into parents with an equal rounded label. For each pair, some tree keeps
/// the distance within a factor `1+ε`.
pub fn ultrametric_to_khst_cover(t: &Hst, eps: f64) -> Result<Vec<Hst>> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(crate::error::param("eps", eps, "0 < eps < 1"));
    }
    let big_n = khst_cover_size(eps);
    let m = t.num_nodes();
    let mut out = Vec::with_capacity(big_n + 1);
    for i in 0..=big_n {
        let rounded: Vec<f64> =
            (0..m).map(|x| if t.is_leaf(x) { 0.0 } else { round_up_to_grid(t.label(x), eps, i) }).collect();
        // Merge x into its parent when the rounded labels agree.
        let mut rep: Vec<usize> = (0..m).collect();
        for x in 1..m {
            let p = t.parent(x).unwrap();
            if !t.is_leaf(x) && approx_eq(rounded[x], rounded[p]) {
                rep[x] = rep[p];
            }
        }
        let mut new_id = vec![NONE; m];
        let mut raw: Vec<RawNode> = Vec::new();
        for x in 0..m {
            if rep[x] != x {
                continue;
            }
            new_id[x] = raw.len();
            let parent = t.parent(x).map(|p| new_id[rep[p]]);
            raw.push(RawNode { parent, label: rounded[x], point: t.point(x), center: t.center(x) });
        }
        out.push(Hst::build(&raw, 1.0 / eps * (1.0 - REL_TOL))?);
    }
    Ok(out)
}
