//! File-level validators behind the `verify` subcommand.

use std::fmt::Write as _;
use std::path::Path;

use relspan_core::cover::validate_cover;
use relspan_core::metric::{mst_weight, MetricInstance};
use relspan_core::ppcs::validate_ppc;
use relspan_core::spanner::verify_stretch;

use crate::formats::{self, Result};

/// Human-readable findings; `violations == 0` means the subject is valid.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub violations: usize,
    pub text: String,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.violations == 0
    }
}

/// Domination of every edge and, with `bound`, stretch over all pairs with
/// no attack.
pub fn verify_spanner(spanner: &Path, m: &MetricInstance, bound: Option<f64>) -> Result<Report> {
    let h = formats::parse_spanner(&formats::read_file(spanner)?, Some(m.n()))?;
    let mut r = Report::default();
    let dom = h.domination_violations(m);
    let _ = writeln!(r.text, "edges {} weight {}", h.num_edges(), h.weight());
    for &(u, v, w) in &dom {
        let _ = writeln!(r.text, "domination violation: edge ({u},{v}) weight {w} below distance");
    }
    r.violations += dom.len();
    if let Some(bound) = bound {
        let none = vec![false; m.n()];
        let rep = verify_stretch(&h, m, &none, &none, bound, false);
        let _ = writeln!(r.text, "pairs {} max stretch {}", rep.pairs, rep.max_ratio);
        for &(u, v, x) in &rep.violations {
            let _ = writeln!(r.text, "stretch violation: ({u},{v}) ratio {x} > {bound}");
        }
        r.violations += rep.violation_count;
    }
    Ok(r)
}

/// Every partition cover in the file, checked at its own scale.
pub fn verify_ppc(ppc: &Path, m: &MetricInstance) -> Result<Report> {
    let covers = formats::parse_ppcs(&formats::read_file(ppc)?, m.n())?;
    let mut r = Report::default();
    for pc in &covers {
        let rep = validate_ppc(pc, m);
        let _ = writeln!(
            r.text,
            "delta {}: partitions {} pairs in range {} max central ratio {}",
            pc.delta,
            pc.partitions.len(),
            rep.pairs_in_range,
            rep.max_central_ratio
        );
        for e in &rep.partition_errors {
            let _ = writeln!(r.text, "partition error: {e}");
        }
        for &(p, c, d) in &rep.diameter_violations {
            let _ = writeln!(r.text, "diameter violation: partition {p} cluster {c} diameter {d}");
        }
        for &(u, v) in &rep.padding_violations {
            let _ = writeln!(r.text, "padding violation: pair ({u},{v})");
        }
        for &(u, v) in &rep.central_violations {
            let _ = writeln!(r.text, "central padding violation: pair ({u},{v})");
        }
        r.violations += rep.partition_errors.len()
            + rep.diameter_violations.len()
            + rep.padding_violations.len()
            + rep.central_violations.len();
    }
    Ok(r)
}

pub fn verify_cover(dir: &Path, m: &MetricInstance) -> Result<Report> {
    let c = formats::read_cover(dir)?;
    let rep = validate_cover(&c, m, mst_weight(m));
    let mut r = Report::default();
    let _ = writeln!(
        r.text,
        "trees {} max stretch {} (bound {}) max lightness {} total lightness {}",
        rep.trees, rep.max_stretch, c.rho, rep.max_lightness, rep.total_lightness
    );
    for &(t, u, v) in &rep.domination_violations {
        let _ = writeln!(r.text, "domination violation: tree {t} pair ({u},{v})");
    }
    for &(u, v, x) in &rep.stretch_violations {
        let _ = writeln!(r.text, "stretch violation: pair ({u},{v}) best ratio {x}");
    }
    for &t in &rep.lightness_violations {
        let _ = writeln!(r.text, "lightness violation: tree {t}");
    }
    r.violations += rep.domination_violations.len() + rep.stretch_violations.len() + rep.lightness_violations.len();
    Ok(r)
}
