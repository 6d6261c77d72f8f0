//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines always reach the output.
//! Pass criterion numbers as arguments to run a subset.

use std::time::Instant;

use relspan::config::{Config, Preset, Size};
use relspan::experiment::{self, Prepared};
use relspan_core::attacks::{self, Attack, AttackFamily};
use relspan_core::cover::{
    distance_range, for_each_khst, hierarchy_violations, khst_lightness_bound, CoverChecker, PpcProvider, SpdProvider,
};
use relspan_core::hst::{hst_mst_weight, ultrametric_to_khst_cover, Hst};
use relspan_core::hst_spanner::{self, Variant};
use relspan_core::instances::*;
use relspan_core::metric::{mst_weight, mst_weight_of, DenseMetric, MetricInstance};
use relspan_core::num::log2;
use relspan_core::path_spanner::{self as ps, Ratio, Side};
use relspan_core::ppcs::{compute_spd, spd_ppcs, spd_rho, validate_ppc, SpdStrategy};
use relspan_core::reliable::{self, build_minor_free_spanner, worst_case_wrapper, MinorFreeConfig};
use relspan_core::rng;
use relspan_core::spanner::verify_stretch;

use rand::Rng as _;

/// Relative slack of floating comparisons in the verifiers.
const REL_TOL: f64 = 1e-9;
/// Monte Carlo seeds for reliability estimates.
const MC_SEEDS: usize = 500;
/// Normal quantile of the one-sided 95% confidence bound.
const Z95: f64 = 1.96;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

/// Mean and 95% upper confidence bound.
fn mean_ci(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    (mean, mean + Z95 * (var / n).sqrt())
}

/// The ten attacks used against each HST in the stretch criteria.
fn hst_attacks(t: &Hst, seed: u64) -> Vec<Attack> {
    let n = t.n();
    let order = t.leaf_order().to_vec();
    let s = |i: u64| rng::derive(seed, i);
    vec![
        Attack::new(AttackFamily::RandomP, vec![]),
        attacks::random_p(n, 0.1, s(1)).unwrap(),
        attacks::random_p(n, 0.3, s(2)).unwrap(),
        attacks::random_size(n, n / 8, s(3)).unwrap(),
        attacks::random_size(n, n / 2, s(4)).unwrap(),
        attacks::interval_in(&order, (n - n / 8) / 2, n / 8).unwrap(),
        attacks::random_interval(&order, n / 2, s(5)).unwrap(),
        attacks::subtree(t, n / 8, s(6)).unwrap(),
        attacks::subtree(t, n / 2, s(7)).unwrap(),
        attacks::random_p(n, 0.6, s(8)).unwrap(),
    ]
}

/// Criteria 1 and 2: stretch on random (binary) k-HSTs.
fn hst_stretch(variant: Variant) -> Outcome {
    // c = 1 keeps the samples well below the subtree sizes, so the bound is
    // exercised rather than met by near-complete graphs.
    let (nu, c) = (0.1, 1.0);
    let mut checked = 0;
    let mut violations = 0;
    let mut worst: f64 = 0.0;
    let mut tree_id = 0u64;
    for k in [4.0, 16.0] {
        for n in [128, 512] {
            let trees = if n == 128 { 13 } else { 12 };
            for _ in 0..trees {
                tree_id += 1;
                let t = match variant {
                    Variant::Basic => random_hst(n, k, 4, tree_id).unwrap(),
                    Variant::BoundedDegree => random_binary_hst(n, k, tree_id).unwrap(),
                };
                let atk = hst_attacks(&t, tree_id);
                for s in 0..5 {
                    let (h, sets) = hst_spanner::build(&t, nu, k, c, rng::derive(tree_id, s), variant).unwrap();
                    for a in &atk {
                        let b = a.mask(n);
                        let bp = hst_spanner::bplus_mask(&t, &sets, &b);
                        let bound = variant.stretch_bound(k);
                        let rep = verify_stretch(&h, &t, &b, &bp, bound, false);
                        checked += 1;
                        violations += rep.violation_count;
                        worst = worst.max(rep.max_ratio / bound);
                    }
                }
            }
        }
    }
    outcome(
        violations == 0 && tree_id == 50,
        format!("{tree_id} trees, {checked} (spanner, attack) checks, {violations} violations, max stretch/bound {worst:.4}"),
    )
}

fn c1() -> Outcome {
    hst_stretch(Variant::Basic)
}

fn c2() -> Outcome {
    hst_stretch(Variant::BoundedDegree)
}

/// Criterion 3: Monte Carlo `|B⁺ ∖ B|/|B|` on a k-HST, c swept.
fn c3() -> Outcome {
    let (n, k, nu) = (512, 4.0, 0.1);
    let t = random_hst(n, k, 4, 2024).unwrap();
    let order = t.leaf_order().to_vec();
    let atk: Vec<(String, Attack)> = [n / 8, n / 2]
        .into_iter()
        .flat_map(|size| {
            let s = rng::derive(31, size as u64);
            [
                (format!("interval/{size}"), attacks::interval_in(&order, (n - size) / 2, size).unwrap()),
                (format!("subtree/{size}"), attacks::subtree(&t, size, s).unwrap()),
                (format!("random/{size}"), attacks::random_size(n, size, s).unwrap()),
            ]
        })
        .collect();
    let mut lines = Vec::new();
    let mut smallest = None;
    let mut pass_c4 = false;
    for c in [0.25, 0.5, 1.0, 2.0, 4.0, 8.0] {
        let mut ratios: Vec<Vec<f64>> = vec![Vec::with_capacity(MC_SEEDS); atk.len()];
        for s in 0..MC_SEEDS as u64 {
            let (_, sets) = hst_spanner::build(&t, nu, k, c, rng::derive(3, s), Variant::Basic).unwrap();
            for (i, (_, a)) in atk.iter().enumerate() {
                let b = a.mask(n);
                let bp = hst_spanner::bplus_mask(&t, &sets, &b);
                let extra = bp.iter().filter(|&&x| x).count() - a.b.len();
                ratios[i].push(extra as f64 / a.b.len() as f64);
            }
        }
        let mut all = true;
        let mut worst = (0.0, 0.0);
        for r in &ratios {
            let (m, hi) = mean_ci(r);
            all &= m < 3.0 * nu && hi <= 3.0 * nu;
            if hi > worst.1 {
                worst = (m, hi);
            }
        }
        if all && smallest.is_none() {
            smallest = Some(c);
        }
        if c == 4.0 {
            pass_c4 = all;
        }
        lines.push(format!("c={c}: worst mean {:.4} ci95 {:.4} {}", worst.0, worst.1, if all { "ok" } else { "over" }));
    }
    outcome(
        pass_c4,
        format!(
            "n={n} nu={nu} bound {:.2}, {MC_SEEDS} seeds x 6 attacks; {}; smallest passing c = {}",
            3.0 * nu,
            lines.join("; "),
            smallest.map_or("none".into(), |c| c.to_string())
        ),
    )
}

/// Criterion 4: weight accounting per sample, exact.
fn c4() -> Outcome {
    let (nu, c) = (0.1, 1.0);
    let mut samples = 0;
    let mut bad = 0;
    let mut tight: f64 = 0.0;
    for seed in 0..40u64 {
        let binary = seed % 2 == 1;
        let n = if seed % 4 < 2 { 128 } else { 512 };
        let k = if seed % 8 < 4 { 4.0 } else { 16.0 };
        let t = if binary { random_binary_hst(n, k, seed).unwrap() } else { random_hst(n, k, 4, seed).unwrap() };
        for s in 0..5 {
            let (h, sets) = hst_spanner::build(&t, nu, k, c, rng::derive(seed, s), Variant::Basic).unwrap();
            let w = h.weight();
            let bound = hst_spanner::weight_bound(&t, sets.ell);
            samples += 1;
            if w > bound {
                bad += 1;
            }
            if binary {
                let l2 = (sets.ell * sets.ell) as f64;
                if w > 2.0 * l2 * hst_mst_weight(&t) {
                    bad += 1;
                }
            }
            tight = tight.max(w / bound);
        }
    }
    outcome(bad == 0, format!("{samples} samples, {bad} violations, max w(H)/bound {tight:.4}"))
}

/// Criterion 5: MST of the leaf metric from labels.
fn c5() -> Outcome {
    let mut worst: f64 = 0.0;
    for seed in 0..200u64 {
        let n = 2 + (seed as usize * 7) % 150;
        let k = 1.0 + (seed % 8) as f64;
        let t = random_hst(n, k, 2 + (seed as usize % 5), seed).unwrap();
        let a = hst_mst_weight(&t);
        let b = mst_weight_of(&DenseMetric::from_metric(&t));
        worst = worst.max((a - b).abs() / b);
    }
    outcome(worst <= REL_TOL, format!("200 HSTs, max relative difference {worst:.3e}"))
}

/// Criterion 6: path spanner on `P_1024`.
fn c6() -> Outcome {
    let n = 1024;
    let nu = 0.1;
    let h = 10;
    let c = 4.0;
    let w = vec![1.0; n - 1];
    let middle = attacks::middle_interval(n, n / 2).unwrap();
    let bm = middle.mask(n);
    let none = vec![false; n];
    let (mut viol, mut hops, mut nonempty) = (0, 0, 0);
    let mut ratios = Vec::with_capacity(MC_SEEDS);
    let mut trapped = 0;
    for s in 0..MC_SEEDS as u64 {
        let seed = rng::derive(6, s);
        let (sp, hr) = ps::build_path_spanner(&w, nu, h, c, seed).unwrap();
        let bp = ps::bplus_mask(&hr, &bm);
        ratios.push((bp.iter().filter(|&&x| x).count() - middle.b.len()) as f64 / middle.b.len() as f64);
        let mut attacks_here = vec![bm.clone(), none.clone()];
        if s < 20 {
            attacks_here.push(attacks::random_p(n, 0.1, seed).unwrap().mask(n));
            attacks_here.push(attacks::random_size(n, n / 8, seed).unwrap().mask(n));
            let (det, crossing) = attacks::det_path_lb(n, nu, &sp).unwrap();
            let eps = attacks::det_path_eps(nu);
            let db = det.mask(n);
            let dbp = ps::bplus_mask(&hr, &db);
            let lost = dbp.iter().filter(|&&x| x).count() - det.b.len();
            if (crossing as f64) < eps * n as f64 && lost as f64 >= (0.5 - 4.0 * eps) * n as f64 {
                trapped += 1;
            }
            attacks_here.push(db);
        }
        for b in &attacks_here {
            let bp = ps::bplus_mask(&hr, b);
            let rep = ps::verify_path_stretch(&hr, b, &bp);
            viol += rep.violation_count + usize::from(rep.max_hops > 2 * h + 1);
            hops = hops.max(rep.max_hops);
        }
        if ps::bplus_mask(&hr, &none).iter().any(|&x| x) {
            nonempty += 1;
        }
    }
    let (mean, hi) = mean_ci(&ratios);
    let pass = viol == 0 && nonempty == 0 && mean <= 3.0 * nu;
    outcome(
        pass,
        format!(
            "(a) {viol} stretch/hop violations, max hops {hops} <= {}; (b) mean ratio {mean:.4} (ci95 {hi:.4}) vs {:.2}; (c) {nonempty} seeds with B=0 but B+ nonempty; det_path_lb trap on {trapped}/20 seeds",
            2 * h + 1,
            3.0 * nu
        ),
    )
}

/// Criterion 7: shadow sizes, integer arithmetic.
fn c7() -> Outcome {
    let mut r = rng::stream(7, 0);
    let mut large_bad = 0;
    let mut large_checked = 0;
    let mut c_measured: f64 = 0.0;
    for _ in 0..10_000 {
        let n = r.gen_range(1..=512);
        let p: f64 = r.gen_range(0.0..0.5);
        let b: Vec<bool> = (0..n).map(|_| r.gen_bool(p)).collect();
        let den = r.gen_range(2..=64u64);
        let num = r.gen_range(1..den);
        let alpha = Ratio::new(num, den).unwrap();
        let s = ps::compute_shadow(&b, alpha, Side::Both);
        let blen = b.iter().filter(|&&x| x).count();
        if 3 * num >= 2 * den {
            large_checked += 1;
            if !ps::shadow_large_alpha_ok(s.len(), blen, alpha) {
                large_bad += 1;
            }
        }
        if blen > 0 {
            c_measured = c_measured.max(s.len() as f64 * alpha.value() / blen as f64);
        }
    }
    outcome(
        large_bad == 0,
        format!("10000 draws; alpha >= 2/3: {large_checked} checked, {large_bad} violations; measured C = max |S|*alpha/|B| = {c_measured:.3}"),
    )
}

/// Criterion 8: partition covers from decompositions.
fn c8() -> Outcome {
    let eps = 1.0 / 16.0;
    let mut covers = 0;
    let mut bad = 0;
    let mut max_central: f64 = 0.0;
    let mut depth = 0;
    let mut run = |m: &MetricInstance, strategy: SpdStrategy| {
        let spd = compute_spd(m, strategy).unwrap();
        depth = depth.max(spd.depth());
        let (lo, hi) = distance_range(m);
        let mut delta = lo;
        while delta <= 2.0 * spd_rho(eps) * hi {
            let pc = spd_ppcs(&spd, eps, delta).unwrap();
            let rep = validate_ppc(&pc, m);
            covers += 1;
            if !rep.ok() {
                bad += 1;
            }
            max_central = max_central.max(rep.max_central_ratio);
            delta *= 2.0;
        }
    };
    for s in 0..30u64 {
        let n = 20 + (s as usize * 37) % 181;
        run(&random_tree_metric(n, 10, s).unwrap(), SpdStrategy::Tree);
    }
    for s in 0..10u64 {
        let rows = 6 + s as usize % 7;
        let cols = 200 / rows;
        run(&planar_grid(rows, cols, 10, s).unwrap(), SpdStrategy::Heuristic);
    }
    outcome(
        bad == 0,
        format!(
            "{covers} covers over 40 graphs, {bad} invalid; max central ratio {max_central:.4} <= {:.2}; max decomposition depth {depth}",
            1.0 + 32.0 * eps
        ),
    )
}

/// Criterion 9: the cover pipeline.
fn c9() -> Outcome {
    let eps = 1.0 / 16.0;
    let mut lines = Vec::new();
    let mut pass = true;
    let mut worst_const: f64 = 0.0;
    let mut cases: Vec<(String, MetricInstance, SpdStrategy)> = Vec::new();
    for (n, seed) in [(40, 3), (64, 1), (64, 3), (128, 2)] {
        cases.push((format!("tree n={n} seed={seed}"), random_tree_metric(n, 10, seed).unwrap(), SpdStrategy::Tree));
    }
    cases.push(("grid 6x8".into(), planar_grid(6, 8, 10, 3).unwrap(), SpdStrategy::Heuristic));
    for (name, m, strategy) in cases {
        let n = m.n();
        let spd = compute_spd(&m, strategy).unwrap();
        let prov = SpdProvider::new(&spd, eps).unwrap();
        let mst = mst_weight(&m);
        // The smallest admissible k and the two used by the graph presets.
        for k in [8.0 * prov.rho() / prov.eps(), 1024.0, 4096.0] {
            let mut ck = CoverChecker::new(&m);
            let mut light = Vec::new();
            let mut hier_bad = 0;
            let info = for_each_khst(&m, &prov, k, |_, _, h, t| {
                hier_bad += hierarchy_violations(h, &m, prov.eps()).len();
                ck.add(&t, mst);
                light.push(ck.lightness_of(&t, mst));
                Ok(())
            })
            .unwrap();
            let bound = khst_lightness_bound(k, n);
            let rep = ck.finish(info.rho, &light, bound, false, mst);
            let constant = light.iter().cloned().fold(0.0, f64::max) / (k * log2(n as f64));
            worst_const = worst_const.max(constant);
            let ok = rep.ok() && hier_bad == 0;
            pass &= ok;
            lines.push(format!(
                "{name} k={k:.0}: {} trees, stretch {:.3} <= {:.3}, {} domination, {} hierarchy violations, constant {:.2}",
                info.trees,
                rep.max_stretch,
                info.rho,
                rep.domination_violations.len(),
                hier_bad,
                constant
            ));
        }
    }
    outcome(pass && worst_const <= 10.0, format!("{}; measured constant {worst_const:.2} <= 10", lines.join("; ")))
}

/// Reliability of a prepared experiment over `MC_SEEDS` seeds, plus full
/// stretch checks on the first `stretch_seeds`.
fn monte_carlo(prep: &Prepared, attacks: &[Attack], stretch_seeds: usize) -> (Vec<(f64, f64)>, usize, f64) {
    let n = prep.subject.n();
    let mut ratios: Vec<Vec<f64>> = vec![Vec::new(); attacks.len()];
    let mut viol = 0;
    let mut worst: f64 = 0.0;
    for s in 0..MC_SEEDS {
        let built = prep.build(experiment::trial_seed(prep.cfg.seed, s)).unwrap();
        for (i, a) in attacks.iter().enumerate() {
            let b = a.mask(n);
            let bp = prep.bplus(&built, &b);
            let extra = bp.iter().filter(|&&x| x).count() - a.b.len();
            ratios[i].push(extra as f64 / a.b.len().max(1) as f64);
            if s < stretch_seeds {
                let rep = verify_stretch(&built.spanner, &prep.subject, &b, &bp, built.bound, false);
                viol += rep.violation_count + built.spanner.domination_violations(&prep.subject).len();
                worst = worst.max(rep.max_ratio);
            }
        }
    }
    (ratios.iter().map(|r| mean_ci(r)).collect(), viol, worst)
}

fn standard_attacks(prep: &Prepared) -> Vec<Attack> {
    let mut out = Vec::new();
    for fam in [AttackFamily::Interval, AttackFamily::Subtree, AttackFamily::RandomSize] {
        for frac in [0.125, 0.5] {
            let mut cfg = prep.cfg.clone();
            cfg.attack = fam;
            cfg.attack_size = Size::Fraction(frac);
            if let Ok(Some(a)) = experiment::make_attack(&cfg, &prep.subject) {
                out.push(a);
            }
        }
    }
    out
}

/// Criterion 10: composition over the three trees of an ultrametric cover.
fn c10() -> Outcome {
    let cfg = Config { preset: Preset::Ultrametric2Eps, n: 256, eps: 0.47, nu: 0.1, c: 1.0, seed: 10, ..Config::default() };
    let prep = experiment::prepare(&cfg).unwrap();
    let tau = prep.cover.as_ref().unwrap().0.len();
    let atk = standard_attacks(&prep);
    let (stats, viol, worst) = monte_carlo(&prep, &atk, 20);
    let worst_ci = stats.iter().map(|s| s.1).fold(0.0, f64::max);
    let worst_mean = stats.iter().map(|s| s.0).fold(0.0, f64::max);
    let bound = 3.0 * cfg.nu;
    outcome(
        tau == 3 && viol == 0 && worst_mean < bound && worst_ci <= bound,
        format!(
            "tau={tau}, {} attacks; stretch: {viol} violations, max {worst:.3} <= {:.3}; reliability: worst mean {worst_mean:.4} ci95 {worst_ci:.4} vs {bound:.2}",
            atk.len(),
            prep.build(0).unwrap().bound
        ),
    )
}

/// Criterion 11: the stretch `2(1+O(ε))` construction on tree metrics.
fn c11() -> Outcome {
    let eps = 0.05;
    let nu = 0.1;
    let mut pass = true;
    let mut lines = Vec::new();
    // c = 4 is the intended regime and saturates at these sizes; the tiny c
    // runs keep the spanner sparse so the stretch bound is actually exercised.
    for (n, seed, c) in [(64usize, 1u64, 4.0), (128, 2, 4.0), (64, 1, 1e-6), (128, 2, 1e-6)] {
        let m = random_tree_metric(n, 10, seed).unwrap();
        let order: Vec<usize> = (0..n).collect();
        let atk = [
            attacks::interval_in(&order, (n - n / 8) / 2, n / 8).unwrap(),
            attacks::interval_in(&order, n / 4, n / 2).unwrap(),
            attacks::random_size(n, n / 8, seed).unwrap(),
            attacks::random_size(n, n / 2, seed).unwrap(),
        ];
        let seeds = 10;
        let mut ratios: Vec<Vec<f64>> = vec![Vec::new(); atk.len()];
        let (mut claim, mut viol, mut worst, mut eff_eps, mut sat) = (0, 0, 0.0f64, eps, 0.0);
        for s in 0..seeds {
            let cfg = MinorFreeConfig {
                eps,
                nu,
                c,
                c_prime: 64.0,
                seed: rng::derive(11, s),
                strategy: SpdStrategy::Tree,
            };
            let mf = build_minor_free_spanner(&m, &cfg).unwrap();
            claim += mf.claim_order_violations;
            eff_eps = mf.eps;
            sat = mf.spanner.num_edges() as f64 / (n * (n - 1) / 2) as f64;
            for (i, a) in atk.iter().enumerate() {
                let b = a.mask(n);
                let bp = mf.bplus(&m, &b);
                ratios[i].push((bp.iter().filter(|&&x| x).count() - a.b.len()) as f64 / a.b.len() as f64);
                let rep = verify_stretch(&mf.spanner, &m, &b, &bp, 2.0 * (1.0 + 8.0 * mf.eps), false);
                viol += rep.violation_count;
                worst = worst.max(rep.max_ratio);
            }
        }
        let measured_c = ((worst / 2.0 - 1.0) / eff_eps).max(0.0);
        let worst_mean = ratios.iter().map(|r| mean_ci(r).0).fold(0.0, f64::max);
        let ok = claim == 0 && viol == 0 && measured_c <= 8.0 && (c < 1.0 || worst_mean <= 3.0 * nu);
        pass &= ok;
        lines.push(format!(
            "n={n} c={c}: claim violations {claim}, max stretch {worst:.4} (C = {measured_c:.2}), worst mean ratio {worst_mean:.4}, edge density {sat:.3}"
        ));
    }
    outcome(pass, format!("eps={eps}, nu'={nu}; {}", lines.join("; ")))
}

/// Criterion 12: lightness growth on the star of stars.
fn c12() -> Outcome {
    let mut light = Vec::new();
    for nu in [1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0] {
        let u = attacks::hst_star_of_stars(nu).unwrap();
        let eps = 0.47;
        let trees = ultrametric_to_khst_cover(&u, eps).unwrap();
        let k = 1.0 / eps * (1.0 - 1e-9);
        let mst = hst_mst_weight(&u);
        let mut total = 0.0;
        let seeds = 20;
        for s in 0..seeds {
            let (h, _) =
                reliable::compose_reliable_spanner(&trees, &u, nu, k, 4.0, rng::derive(12, s), Variant::Basic).unwrap();
            total += h.weight() / mst;
        }
        light.push((nu, total / seeds as f64));
    }
    let f1 = light[1].1 / light[0].1;
    let f2 = light[2].1 / light[1].1;
    outcome(
        f1 >= 2.5 && f2 >= 2.5,
        format!(
            "mean lightness {}; growth factors {f1:.2}, {f2:.2} (>= 2.5)",
            light.iter().map(|(nu, l)| format!("nu=1/{:.0}: {l:.2}", 1.0 / nu)).collect::<Vec<_>>().join(", ")
        ),
    )
}

/// Criterion 13: rejection sampling with bounds at 3x the measured means.
fn c13() -> Outcome {
    let (n, k, nu, c) = (512, 4.0, 0.1, 1.0);
    let t = random_hst(n, k, 4, 13).unwrap();
    let mst = hst_mst_weight(&t);
    let pilot = 200;
    let (mut e, mut w) = (0.0, 0.0);
    for s in 0..pilot {
        let (h, _) = hst_spanner::build(&t, nu, k, c, rng::derive(130, s), Variant::Basic).unwrap();
        e += h.num_edges() as f64;
        w += h.weight() / mst;
    }
    let (m_bound, phi_bound) = (e / pilot as f64, w / pilot as f64);
    let runs = 100;
    let mut attempts = 0;
    for r in 0..runs {
        let (_, a) = worst_case_wrapper(
            |attempt| {
                let seed = rng::derive(rng::derive(131, r), attempt as u64);
                Ok(hst_spanner::build(&t, nu, k, c, seed, Variant::Basic)?.0)
            },
            m_bound,
            phi_bound,
            mst,
            64,
        )
        .unwrap();
        attempts += a;
    }
    let mean = attempts as f64 / runs as f64;
    outcome(
        mean <= 3.0,
        format!("{runs} runs, mean attempts {mean:.2} <= 3 (mean edges {m_bound:.0}, mean lightness {phi_bound:.2})"),
    )
}

fn main() {
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let criteria: [(u32, &str, fn() -> Outcome); 13] = [
        (1, "k-HST stretch", c1),
        (2, "bounded-degree stretch", c2),
        (3, "k-HST reliability", c3),
        (4, "k-HST weight accounting", c4),
        (5, "HST MST from labels", c5),
        (6, "path spanner", c6),
        (7, "shadow sizes", c7),
        (8, "partition cover validity", c8),
        (9, "cover pipeline", c9),
        (10, "composition over a 3-tree cover", c10),
        (11, "stretch 2(1+O(eps)) construction", c11),
        (12, "lower-bound lightness trend", c12),
        (13, "worst-case wrapper", c13),
    ];
    let mut failed = Vec::new();
    for (id, name, f) in criteria {
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let o = f();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {id:>2} {verdict} {name}: {} [{:.1}s]", o.detail, start.elapsed().as_secs_f64());
        if !o.pass {
            failed.push(id);
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
