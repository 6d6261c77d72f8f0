use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use relspan::config::{Config, Preset};
use relspan::experiment::{self, Subject};
use relspan::{formats, verify};
use relspan_core::attacks;
use relspan_core::cover::{build_khst_cover, distance_range, frt_cover, FixedProvider, HstCover, PpcProvider, SpdProvider};
use relspan_core::hst::ultrametric_to_khst_cover;
use relspan_core::metric::MetricInstance;
use relspan_core::num::{ceil_tol, log2};
use relspan_core::ppcs::{compute_spd, spd_ppcs, SpdStrategy};
use relspan_core::rng;

#[derive(Parser)]
#[command(name = "relspan", version, about = "Oblivious reliable light spanners: generate, build, evaluate, verify")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate instances, attacks and lower-bound instances.
    #[command(subcommand)]
    Gen(Gen),
    /// Build a spanner, an HST cover or partition covers.
    #[command(subcommand)]
    Build(Build),
    /// Run a Monte Carlo experiment and write CSV.
    Eval {
        #[command(flatten)]
        common: Common,
        /// CSV output (stdout when absent). Written only if every trial succeeds.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate a spanner, partition cover file or cover directory against an instance.
    Verify {
        /// Instance file (edge list, matrix or path format).
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, conflicts_with_all = ["ppc", "cover"])]
        spanner: Option<PathBuf>,
        /// Also check stretch of the spanner over all pairs with no attack.
        #[arg(long, requires = "spanner")]
        bound: Option<f64>,
        #[arg(long, conflicts_with = "cover")]
        ppc: Option<PathBuf>,
        #[arg(long)]
        cover: Option<PathBuf>,
    },
}

/// Config file plus the usual overrides.
#[derive(Args, Clone)]
struct Common {
    /// Flat key = value configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    nu: Option<f64>,
    #[arg(long)]
    k: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    h: Option<usize>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    attack: Option<String>,
    #[arg(long)]
    instance: Option<PathBuf>,
    /// Any other config key, as KEY=VALUE (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl Common {
    fn config(&self) -> Result<Config> {
        let mut cfg = match &self.config {
            Some(p) => Config::parse(&formats::read_file(p)?)?,
            None => Config::default(),
        };
        let mut put = |k: &str, v: Option<String>| -> Result<()> {
            if let Some(v) = v {
                cfg.set(k, &v)?;
            }
            Ok(())
        };
        put("preset", self.preset.clone())?;
        put("n", self.n.map(|x| x.to_string()))?;
        put("nu", self.nu.map(|x| x.to_string()))?;
        put("k", self.k.map(|x| x.to_string()))?;
        put("eps", self.eps.map(|x| x.to_string()))?;
        put("h", self.h.map(|x| x.to_string()))?;
        put("c", self.c.map(|x| x.to_string()))?;
        put("seed", self.seed.map(|x| x.to_string()))?;
        put("trials", self.trials.map(|x| x.to_string()))?;
        put("attack", self.attack.clone())?;
        put("instance", self.instance.as_ref().map(|p| p.display().to_string()))?;
        for kv in &self.set {
            let (k, v) = kv.split_once('=').with_context(|| format!("--set expects KEY=VALUE, got {kv:?}"))?;
            cfg.set(k.trim(), v.trim())?;
        }
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Gen {
    /// The preset's instance (HST file for HST presets, metric otherwise).
    Instance {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// `count` attacks of the configured family, one per line.
    Attack {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lower-bound witness instance: hst_star_of_stars or path_scales.
    Lb {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        nu: f64,
        /// Path length for path_scales.
        #[arg(long, default_value_t = 1024)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Build {
    /// One sampled spanner for the configured seed.
    Spanner {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// HST cover written as a directory of HST files plus manifest.txt.
    Cover {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        out: PathBuf,
    },
    /// Partition covers from a shortest path decomposition, one per scale.
    Ppc {
        #[command(flatten)]
        common: Common,
        /// Scales; defaults to d_min·2^i up to twice the diameter.
        #[arg(long, value_delimiter = ',')]
        delta: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => formats::write_file(p, text)?,
        None => stdout(text),
    }
    Ok(())
}

/// Writes to stdout; a reader that goes away early (`| head`) is not an error.
fn stdout(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn metric_of(subject: Subject) -> Result<MetricInstance> {
    match subject {
        Subject::Graph(m) => Ok(m),
        Subject::Tree(_) => bail!("this command needs a metric instance, not an HST"),
    }
}

fn gen(g: Gen) -> Result<()> {
    match g {
        Gen::Instance { common, out } => {
            let cfg = common.config()?;
            let text = match experiment::load_subject(&cfg)? {
                Subject::Tree(t) => formats::write_hst(&t),
                Subject::Graph(m) => formats::write_instance(&m),
            };
            emit(&out, &text)
        }
        Gen::Attack { common, count, out } => {
            let mut cfg = common.config()?;
            let subject = experiment::load_subject(&cfg)?;
            let base = cfg.seed;
            let mut list = Vec::with_capacity(count);
            for i in 0..count {
                cfg.seed = rng::derive(base, i as u64);
                match experiment::make_attack(&cfg, &subject)? {
                    Some(a) => list.push(a.b),
                    None => bail!("det_path_lb depends on the spanner; use eval"),
                }
            }
            let header = format!("family={} seed={base} n={}", cfg.attack.name(), subject.n());
            emit(&out, &formats::write_attacks(&header, &list))
        }
        Gen::Lb { kind, nu, n, out } => match kind.as_str() {
            "hst_star_of_stars" => emit(&out, &formats::write_hst(&attacks::hst_star_of_stars(nu)?)),
            "path_scales" => {
                let (m, grid) = attacks::path_scales(n, nu)?;
                let scales: Vec<String> = grid.scales.iter().map(|s| s.to_string()).collect();
                let text = format!("# ell={} scales={}\n{}", grid.ell, scales.join(","), formats::write_instance(&m));
                emit(&out, &text)
            }
            _ => bail!("unknown lower-bound kind {kind:?} (hst_star_of_stars, path_scales)"),
        },
    }
}

fn build(b: Build) -> Result<()> {
    match b {
        Build::Spanner { common, out } => {
            let cfg = common.config()?;
            let prep = experiment::prepare(&cfg)?;
            let built = prep.build(cfg.seed)?;
            emit(&out, &formats::write_spanner(&built.spanner))
        }
        Build::Cover { common, out } => {
            let cfg = common.config()?;
            let subject = experiment::load_subject(&cfg)?;
            let cover = match (cfg.preset, subject) {
                (Preset::Ultrametric2Eps, Subject::Tree(u)) => HstCover {
                    trees: ultrametric_to_khst_cover(&u, cfg.eps)?,
                    rho: 1.0 + cfg.eps,
                    k: 1.0 / cfg.eps * (1.0 - 1e-9),
                    lightness_bound: f64::INFINITY,
                    total_weight: false,
                },
                (Preset::Frt, s) => {
                    let m = metric_of(s)?;
                    let trees = cfg.frt_trees.unwrap_or_else(|| ceil_tol(log2(m.n().max(2) as f64)) as usize);
                    let (c, attempts) = frt_cover(&m, trees, cfg.frt_target, cfg.seed, cfg.frt_budget)?;
                    eprintln!("accepted after {attempts} batches");
                    c
                }
                (Preset::General, s) => {
                    let m = metric_of(s)?;
                    let path = cfg.ppc.as_ref().context("preset general needs ppc = <file>")?;
                    let covers = formats::parse_ppcs(&formats::read_file(path)?, m.n())?;
                    build_khst_cover(&m, &FixedProvider { covers }, cfg.k)?
                }
                (Preset::TreeMetric | Preset::MinorFree2Eps, s) => {
                    let m = metric_of(s)?;
                    let strategy = if cfg.preset == Preset::TreeMetric { SpdStrategy::Tree } else { cfg.strategy };
                    let spd = compute_spd(&m, strategy)?;
                    let prov = SpdProvider::new(&spd, cfg.eps)?;
                    build_khst_cover(&m, &prov, cfg.c_prime / prov.eps())?
                }
                (p, _) => bail!("preset {} has no cover", p.name()),
            };
            formats::write_cover(&out, &cover)?;
            eprintln!("wrote {} trees to {}", cover.tau(), out.display());
            Ok(())
        }
        Build::Ppc { common, delta, out } => {
            let cfg = common.config()?;
            let m = metric_of(experiment::load_subject(&cfg)?)?;
            let strategy = if cfg.preset == Preset::TreeMetric { SpdStrategy::Tree } else { cfg.strategy };
            let spd = compute_spd(&m, strategy)?;
            let prov = SpdProvider::new(&spd, cfg.eps)?;
            let deltas = if delta.is_empty() {
                let (lo, hi) = distance_range(&m);
                let mut d = vec![lo];
                while *d.last().unwrap() < 2.0 * prov.rho() * hi {
                    d.push(d.last().unwrap() * 2.0);
                }
                d
            } else {
                delta
            };
            let mut text = String::new();
            for d in deltas {
                text.push_str(&formats::write_ppc(&spd_ppcs(&spd, prov.eps(), d)?));
            }
            emit(&out, &text)
        }
    }
}

fn run() -> Result<bool> {
    match Cli::parse().cmd {
        Cmd::Gen(g) => gen(g).map(|_| true),
        Cmd::Build(b) => build(b).map(|_| true),
        Cmd::Eval { common, out } => {
            let cfg = common.config()?;
            let res = experiment::run_experiment(&cfg)?;
            emit(&out, &res.to_csv())?;
            if res.aggregate.violations > 0 {
                eprintln!("verifier reported {} violations", res.aggregate.violations);
            }
            Ok(true)
        }
        Cmd::Verify { instance, spanner, bound, ppc, cover } => {
            let m = formats::parse_instance(&formats::read_file(&instance)?)?;
            let rep = match (spanner, ppc, cover) {
                (Some(s), _, _) => verify::verify_spanner(&s, &m, bound)?,
                (_, Some(p), _) => verify::verify_ppc(&p, &m)?,
                (_, _, Some(c)) => verify::verify_cover(&c, &m)?,
                _ => bail!("give one of --spanner, --ppc, --cover"),
            };
            stdout(&format!("{}violations {}\n", rep.text, rep.violations));
            Ok(rep.ok())
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
