//! Text formats for instances, HSTs, spanners, partition covers, covers and attacks.
//!
//! All formats are line based; `#` starts a comment line and blank lines are
//! ignored unless stated otherwise.

use std::fmt::Write as _;
use std::path::Path;

use relspan_core::cover::HstCover;
use relspan_core::hst::{Hst, RawNode};
use relspan_core::metric::{Metric, MetricInstance, SourceKind};
use relspan_core::ppcs::{Cluster, PartitionCover};
use relspan_core::spanner::{Provenance, Spanner};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Core(#[from] relspan_core::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

pub type Result<T> = std::result::Result<T, FormatError>;

fn perr(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Parse { line, msg: msg.into() }
}

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| FormatError::Io { path: path.display().to_string(), source })
}

pub fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| FormatError::Io { path: path.display().to_string(), source })
}

/// Non-comment, non-blank lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn num<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T> {
    tok.parse().map_err(|_| perr(line, format!("bad {what} {tok:?}")))
}

/// Parses any of the three instance formats:
///
/// * edge list, lines `u v w`;
/// * matrix, a line `n` followed by `n` rows of `n` distances;
/// * path, a line `path n` optionally followed by `n − 1` weights (default 1).
pub fn parse_instance(text: &str) -> Result<MetricInstance> {
    let mut lines = content_lines(text).peekable();
    let Some(&(ln0, first)) = lines.peek() else {
        return Err(relspan_core::Error::Empty.into());
    };
    let toks: Vec<&str> = first.split_whitespace().collect();
    if toks[0] == "path" {
        lines.next();
        let n: usize = num(toks.get(1).ok_or_else(|| perr(ln0, "path needs n"))?, ln0, "n")?;
        if n == 0 {
            return Err(relspan_core::Error::Empty.into());
        }
        let mut w = Vec::new();
        for (ln, l) in lines {
            for t in l.split_whitespace() {
                w.push(num::<f64>(t, ln, "weight")?);
            }
        }
        if w.is_empty() {
            w = vec![1.0; n - 1];
        } else if w.len() != n - 1 {
            return Err(perr(ln0, format!("path {n} needs {} weights, got {}", n - 1, w.len())));
        }
        return Ok(MetricInstance::from_path(&w)?);
    }
    if toks.len() == 1 {
        lines.next();
        let n: usize = num(toks[0], ln0, "n")?;
        let mut d = Vec::with_capacity(n * n);
        for (ln, l) in lines {
            let row: Vec<f64> = l.split_whitespace().map(|t| num(t, ln, "distance")).collect::<Result<_>>()?;
            if row.len() != n {
                return Err(perr(ln, format!("matrix row has {} entries, expected {n}", row.len())));
            }
            d.extend(row);
        }
        return Ok(MetricInstance::from_matrix(n, d)?);
    }
    let mut edges = Vec::new();
    let mut n = 0;
    for (ln, l) in lines {
        let t: Vec<&str> = l.split_whitespace().collect();
        if t.len() != 3 {
            return Err(perr(ln, "expected \"u v w\""));
        }
        let (u, v): (usize, usize) = (num(t[0], ln, "vertex")?, num(t[1], ln, "vertex")?);
        edges.push((u, v, num::<f64>(t[2], ln, "weight")?));
        n = n.max(u + 1).max(v + 1);
    }
    Ok(MetricInstance::from_edges(n, &edges)?)
}

pub fn write_instance(m: &MetricInstance) -> String {
    let n = m.n();
    let mut s = String::new();
    match m.kind() {
        SourceKind::Path => {
            let _ = writeln!(s, "path {n}");
            for w in m.path_weights().unwrap_or_default() {
                let _ = writeln!(s, "{w}");
            }
        }
        SourceKind::Edges => {
            for (u, v, w) in m.graph().edges() {
                let _ = writeln!(s, "{u} {v} {w}");
            }
        }
        SourceKind::Matrix => {
            let _ = writeln!(s, "{n}");
            for u in 0..n {
                let row: Vec<String> = (0..n).map(|v| m.dist(u, v).to_string()).collect();
                let _ = writeln!(s, "{}", row.join(" "));
            }
        }
    }
    s
}

/// HST lines `node_id parent_id label`; the root has parent `-1` and leaves
/// are the nodes with label 0, numbered as points by increasing node id.
pub fn parse_hst(text: &str, k: f64) -> Result<Hst> {
    let mut rows = Vec::new();
    for (ln, l) in content_lines(text) {
        let t: Vec<&str> = l.split_whitespace().collect();
        if t.len() != 3 {
            return Err(perr(ln, "expected \"node_id parent_id label\""));
        }
        let id: i64 = num(t[0], ln, "node id")?;
        let parent: i64 = num(t[1], ln, "parent id")?;
        let label: f64 = num(t[2], ln, "label")?;
        if id < 0 {
            return Err(perr(ln, "negative node id"));
        }
        rows.push((ln, id, parent, label));
    }
    let mut ids: Vec<i64> = rows.iter().map(|r| r.1).collect();
    ids.sort_unstable();
    if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
        return Err(perr(0, format!("duplicate node id {}", w[0])));
    }
    let index = |id: i64| ids.binary_search(&id).ok();
    let mut raw: Vec<RawNode> = vec![RawNode::internal(None, 0.0); ids.len()];
    let mut leaf_ids: Vec<i64> = rows.iter().filter(|r| r.3 == 0.0).map(|r| r.1).collect();
    leaf_ids.sort_unstable();
    for &(ln, id, parent, label) in &rows {
        let i = index(id).expect("id present");
        let p = if parent == -1 {
            None
        } else {
            Some(index(parent).ok_or_else(|| perr(ln, format!("unknown parent {parent}")))?)
        };
        let point = if label == 0.0 { Some(leaf_ids.binary_search(&id).expect("leaf id present")) } else { None };
        raw[i] = RawNode { parent: p, label, point, center: None };
    }
    Ok(Hst::build(&raw, k)?)
}

/// Leaves get node ids `0..n` (their point ids); internal nodes follow in preorder.
pub fn write_hst(t: &Hst) -> String {
    let n = t.n();
    let mut id = vec![0usize; t.num_nodes()];
    let mut next = n;
    for x in 0..t.num_nodes() {
        id[x] = match t.point(x) {
            Some(p) => p,
            None => {
                next += 1;
                next - 1
            }
        };
    }
    let mut lines: Vec<(usize, String)> = (0..t.num_nodes())
        .map(|x| {
            let parent = t.parent(x).map_or(-1, |p| id[p] as i64);
            (id[x], format!("{} {} {}", id[x], parent, t.label(x)))
        })
        .collect();
    lines.sort_by_key(|l| l.0);
    let mut s = String::new();
    for (_, l) in lines {
        s.push_str(&l);
        s.push('\n');
    }
    s
}

pub fn provenance_header(p: &Provenance) -> String {
    let mut s = format!("# construction={} seed={}", p.construction, p.seed);
    for (k, v) in &p.params {
        let _ = write!(s, " {k}={v}");
    }
    s
}

fn parse_provenance(line: &str) -> Provenance {
    let mut p = Provenance::default();
    for kv in line.trim_start_matches('#').split_whitespace() {
        let Some((k, v)) = kv.split_once('=') else { continue };
        match k {
            "construction" => p.construction = v.to_string(),
            "seed" => p.seed = v.parse().unwrap_or(0),
            _ => {
                if let Ok(x) = v.parse() {
                    p.params.push((k.to_string(), x));
                }
            }
        }
    }
    p
}

/// Spanner file: a provenance header line, then `u v w` lines.
pub fn write_spanner(h: &Spanner) -> String {
    let mut s = provenance_header(&h.provenance);
    let _ = writeln!(s, " n={}", h.n);
    for &(u, v, w) in h.edges() {
        let _ = writeln!(s, "{u} {v} {w}");
    }
    s
}

/// `n` defaults to the header's `n=` entry, else one past the largest id.
pub fn parse_spanner(text: &str, n: Option<usize>) -> Result<Spanner> {
    let mut prov = Provenance::default();
    if let Some(first) = text.lines().next().filter(|l| l.trim_start().starts_with("# construction=")) {
        prov = parse_provenance(first);
    }
    let header_n = prov.params.iter().find(|(k, _)| k == "n").map(|&(_, v)| v as usize);
    prov.params.retain(|(k, _)| k != "n");
    let mut edges = Vec::new();
    let mut top = 0;
    for (ln, l) in content_lines(text) {
        let t: Vec<&str> = l.split_whitespace().collect();
        if t.len() != 3 {
            return Err(perr(ln, "expected \"u v w\""));
        }
        let (u, v): (usize, usize) = (num(t[0], ln, "vertex")?, num(t[1], ln, "vertex")?);
        let w: f64 = num(t[2], ln, "weight")?;
        if u == v || !(w.is_finite() && w >= 0.0) {
            return Err(perr(ln, "edges need distinct endpoints and a finite weight"));
        }
        top = top.max(u + 1).max(v + 1);
        edges.push((u, v, w));
    }
    let n = n.or(header_n).unwrap_or(top);
    if top > n {
        return Err(relspan_core::Error::VertexOutOfRange { v: top - 1, n }.into());
    }
    Ok(Spanner::new(n, edges, prov))
}

/// Header `delta tau rho eps`; each partition starts with a line
/// `partition i`, followed by one line per cluster `center: v1 v2 ...`
/// (center `-` when absent).
pub fn write_ppc(pc: &PartitionCover) -> String {
    let mut s = format!("{} {} {} {}\n", pc.delta, pc.tau, pc.rho, pc.eps);
    for (i, p) in pc.partitions.iter().enumerate() {
        let _ = writeln!(s, "partition {i}");
        for c in p {
            match c.center {
                Some(x) => {
                    let _ = write!(s, "{x}:");
                }
                None => s.push_str("-:"),
            }
            for v in &c.members {
                let _ = write!(s, " {v}");
            }
            s.push('\n');
        }
    }
    s
}

/// Several covers (one per scale) may be concatenated in one file.
pub fn parse_ppcs(text: &str, n: usize) -> Result<Vec<PartitionCover>> {
    let mut out: Vec<PartitionCover> = Vec::new();
    for (ln, l) in content_lines(text) {
        if let Some(rest) = l.strip_prefix("partition") {
            let pc = out.last_mut().ok_or_else(|| perr(ln, "partition before header"))?;
            let _: usize = num(rest.trim(), ln, "partition index")?;
            pc.partitions.push(Vec::new());
        } else if let Some((c, members)) = l.split_once(':') {
            let pc = out.last_mut().ok_or_else(|| perr(ln, "cluster before header"))?;
            let part = pc.partitions.last_mut().ok_or_else(|| perr(ln, "cluster before partition"))?;
            let center = if c.trim() == "-" { None } else { Some(num(c.trim(), ln, "center")?) };
            let members: Vec<usize> =
                members.split_whitespace().map(|t| num(t, ln, "member")).collect::<Result<_>>()?;
            if let Some(&v) = members.iter().chain(center.iter()).find(|&&v| v >= n) {
                return Err(perr(ln, format!("vertex {v} out of range for n = {n}")));
            }
            part.push(Cluster { center, members });
        } else {
            let t: Vec<&str> = l.split_whitespace().collect();
            if t.len() != 4 {
                return Err(perr(ln, "expected \"delta tau rho eps\""));
            }
            out.push(PartitionCover {
                n,
                delta: num(t[0], ln, "delta")?,
                tau: num(t[1], ln, "tau")?,
                rho: num(t[2], ln, "rho")?,
                eps: num(t[3], ln, "eps")?,
                partitions: Vec::new(),
            });
        }
    }
    Ok(out)
}

/// Writes `manifest.txt` and `tree_<i>.hst` into `dir`.
pub fn write_cover(dir: &Path, c: &HstCover) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|source| FormatError::Io { path: dir.display().to_string(), source })?;
    let mut manifest = format!(
        "tau {}\nrho {}\nk {}\nlightness_bound {}\ntotal_lightness {}\n",
        c.tau(),
        c.rho,
        c.k,
        c.lightness_bound,
        c.total_weight as u8
    );
    for (i, t) in c.trees.iter().enumerate() {
        write_file(&dir.join(format!("tree_{i}.hst")), &write_hst(t))?;
        let _ = writeln!(manifest, "tree {i} {}", t.mst_weight());
    }
    write_file(&dir.join("manifest.txt"), &manifest)
}

pub fn read_cover(dir: &Path) -> Result<HstCover> {
    let text = read_file(&dir.join("manifest.txt"))?;
    let (mut rho, mut k, mut bound, mut count, mut total) = (1.0, 1.0, f64::INFINITY, None, false);
    let mut ntrees = 0;
    for (ln, l) in content_lines(&text) {
        let t: Vec<&str> = l.split_whitespace().collect();
        match (t[0], t.len()) {
            ("tau", 2) => count = Some(num::<usize>(t[1], ln, "tau")?),
            ("rho", 2) => rho = num(t[1], ln, "rho")?,
            ("k", 2) => k = num(t[1], ln, "k")?,
            ("lightness_bound", 2) => bound = num(t[1], ln, "bound")?,
            ("total_lightness", 2) => total = num::<u8>(t[1], ln, "flag")? != 0,
            ("tree", 3) => ntrees += 1,
            _ => return Err(perr(ln, format!("unknown manifest entry {l:?}"))),
        }
    }
    let count = count.unwrap_or(ntrees);
    let mut trees = Vec::with_capacity(count);
    for i in 0..count {
        trees.push(parse_hst(&read_file(&dir.join(format!("tree_{i}.hst")))?, k)?);
    }
    Ok(HstCover { trees, rho, k, lightness_bound: bound, total_weight: total })
}

/// One attack per line, ids sorted and space separated; an empty line is
/// the empty attack. An optional leading `#` header is kept verbatim.
pub fn write_attacks(header: &str, attacks: &[Vec<usize>]) -> String {
    let mut s = String::new();
    if !header.is_empty() {
        let _ = writeln!(s, "# {header}");
    }
    for a in attacks {
        let ids: Vec<String> = a.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(s, "{}", ids.join(" "));
    }
    s
}

pub fn parse_attacks(text: &str) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    for (i, l) in text.lines().enumerate() {
        if l.trim_start().starts_with('#') {
            continue;
        }
        let mut a: Vec<usize> = l.split_whitespace().map(|t| num(t, i + 1, "vertex")).collect::<Result<_>>()?;
        a.sort_unstable();
        a.dedup();
        out.push(a);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use relspan_core::instances::random_hst;

    #[test]
    fn instance_formats() {
        let p = parse_instance("path 4\n").unwrap();
        assert_eq!(p.n(), 4);
        assert_eq!(p.dist(0, 3), 3.0);
        let p = parse_instance("# c\npath 3\n2 5\n").unwrap();
        assert_eq!(p.dist(0, 2), 7.0);
        assert!(parse_instance("path 3\n2\n").is_err());
        let e = parse_instance("0 1 2\n1 2 3\n").unwrap();
        assert_eq!(e.dist(0, 2), 5.0);
        let m = parse_instance("2\n0 1.5\n1.5 0\n").unwrap();
        assert_eq!(m.dist(1, 0), 1.5);
        for inst in [p, e, m] {
            let back = parse_instance(&write_instance(&inst)).unwrap();
            assert_eq!(back.n(), inst.n());
            assert_eq!(back.dist(0, inst.n() - 1), inst.dist(0, inst.n() - 1));
        }
    }

    #[test]
    fn hst_round_trip() {
        let t = random_hst(30, 3.0, 4, 2).unwrap();
        let back = parse_hst(&write_hst(&t), 3.0).unwrap();
        // Sibling order may change; the metric and the labels may not.
        assert_eq!(back.all_pairs_dist(), t.all_pairs_dist());
        assert_eq!(back.num_nodes(), t.num_nodes());
        assert_eq!(write_hst(&back), write_hst(&t));
        // Degree-1 internal nodes are contracted on load.
        let t = parse_hst("10 -1 4\n11 10 1\n0 11 0\n1 11 0\n2 10 0\n", 1.0).unwrap();
        assert_eq!(t.n(), 3);
        assert_eq!(t.dist(0, 1), 1.0);
        let t = parse_hst("5 -1 2\n6 5 2\n0 6 0\n1 5 0\n", 1.0).unwrap();
        assert_eq!(t.num_nodes(), 3);
    }

    #[test]
    fn spanner_and_attacks() {
        let h = Spanner::new(
            4,
            vec![(0, 1, 1.0), (2, 3, 0.5)],
            Provenance { construction: "khst".into(), seed: 7, params: vec![("nu".into(), 0.1)] },
        );
        let text = write_spanner(&h);
        assert!(text.starts_with("# construction=khst seed=7 nu=0.1 n=4"));
        assert_eq!(parse_spanner(&text, None).unwrap(), h);
        let a = vec![vec![1, 5], vec![], vec![0]];
        assert_eq!(parse_attacks(&write_attacks("family=random", &a)).unwrap(), a);
    }

    #[test]
    fn ppc_round_trip() {
        let pc = PartitionCover {
            n: 3,
            delta: 2.0,
            tau: 2,
            rho: 3.0,
            eps: 0.1,
            partitions: vec![
                vec![Cluster { center: Some(0), members: vec![0, 1] }, Cluster { center: None, members: vec![2] }],
                vec![Cluster { center: Some(2), members: vec![0, 1, 2] }],
            ],
        };
        assert_eq!(parse_ppcs(&write_ppc(&pc), 3).unwrap(), vec![pc]);
        assert!(parse_ppcs("1 1 1 0.1\npartition 0\n0: 0 5\n", 3).is_err());
    }
}
