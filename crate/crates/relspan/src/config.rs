//! Flat `key = value` experiment configuration.

use std::path::PathBuf;

use relspan_core::attacks::AttackFamily;
use relspan_core::ppcs::SpdStrategy;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: expected key = value")]
    Syntax { line: usize },
    #[error("unknown key {0:?}")]
    UnknownKey(String),
    #[error("bad value {value:?} for {key}")]
    Value { key: String, value: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Random k-HST, basic construction.
    Khst,
    /// Random binary k-HST, bounded-degree construction.
    KhstBd,
    /// Unit path `P_n`, low-hop path spanner.
    Path,
    /// Random weighted tree, stretch `2(1+O(ε))` construction with tree decompositions.
    TreeMetric,
    /// Planar grid, stretch `2(1+O(ε))` construction with heuristic decompositions.
    MinorFree2Eps,
    /// Random ultrametric through its k-HST cover, composed.
    Ultrametric2Eps,
    /// Any instance with partition covers supplied in a file, composed.
    General,
    /// FRT trees of a planar grid (or given instance), composed.
    Frt,
}

impl Preset {
    pub const ALL: [Preset; 8] = [
        Preset::Khst,
        Preset::KhstBd,
        Preset::Path,
        Preset::TreeMetric,
        Preset::MinorFree2Eps,
        Preset::Ultrametric2Eps,
        Preset::General,
        Preset::Frt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Khst => "khst",
            Preset::KhstBd => "khst-bd",
            Preset::Path => "path",
            Preset::TreeMetric => "tree-metric",
            Preset::MinorFree2Eps => "minor-free-2eps",
            Preset::Ultrametric2Eps => "ultrametric-2eps",
            Preset::General => "general",
            Preset::Frt => "frt",
        }
    }

    pub fn parse(s: &str) -> Option<Preset> {
        Preset::ALL.into_iter().find(|p| p.name() == s)
    }

    /// Presets whose instance is an HST file rather than a metric.
    pub fn hst_instance(self) -> bool {
        matches!(self, Preset::Khst | Preset::KhstBd | Preset::Ultrametric2Eps)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyMode {
    /// Full below 2048 points, sampled above.
    Auto,
    Full,
    Sampled,
    Off,
}

/// Size of an attack: an absolute count or a fraction of `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Size {
    Count(usize),
    Fraction(f64),
}

impl Size {
    pub fn resolve(self, n: usize) -> usize {
        match self {
            Size::Count(c) => c.min(n),
            Size::Fraction(f) => ((f * n as f64).round() as usize).min(n),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub preset: Preset,
    pub n: usize,
    /// Instance file; generated from `seed` when absent.
    pub instance: Option<PathBuf>,
    /// Partition cover file for the `general` preset.
    pub ppc: Option<PathBuf>,
    pub nu: f64,
    pub k: f64,
    pub eps: f64,
    /// Hop parameter of the path spanner; `None` means `⌊log₂ n⌋`.
    pub h: Option<usize>,
    pub c: f64,
    pub c_prime: f64,
    pub seed: u64,
    pub trials: usize,
    pub attack: AttackFamily,
    pub attack_size: Size,
    /// Probability for `random_p`.
    pub p: f64,
    /// Scale `i` for `path_oblivious_lb`.
    pub lb_scale: Option<u32>,
    pub max_children: usize,
    pub max_weight: u32,
    pub strategy: SpdStrategy,
    pub verify: VerifyMode,
    /// Sources checked per trial in sampled verification.
    pub pair_samples: usize,
    pub frt_trees: Option<usize>,
    /// Acceptance factor of the FRT batch test.
    pub frt_target: f64,
    pub frt_budget: usize,
    /// Worker threads; 0 lets the pool decide.
    pub threads: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            preset: Preset::Khst,
            n: 128,
            instance: None,
            ppc: None,
            nu: 0.1,
            k: 4.0,
            eps: 0.05,
            h: None,
            c: 4.0,
            c_prime: 64.0,
            seed: 1,
            trials: 10,
            attack: AttackFamily::Interval,
            attack_size: Size::Fraction(0.5),
            p: 0.1,
            lb_scale: None,
            max_children: 4,
            max_weight: 10,
            strategy: SpdStrategy::Heuristic,
            verify: VerifyMode::Auto,
            pair_samples: 64,
            frt_trees: None,
            frt_target: 8.0,
            frt_budget: 64,
            threads: 0,
        }
    }
}

impl Config {
    pub fn parse(text: &str) -> Result<Config, ConfigError> {
        let mut cfg = Config::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or(ConfigError::Syntax { line: i + 1 })?;
            cfg.set(k.trim(), v.trim())?;
        }
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        fn p<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
            value.parse().map_err(|_| ConfigError::Value { key: key.into(), value: value.into() })
        }
        let bad = || ConfigError::Value { key: key.into(), value: value.into() };
        match key {
            "preset" => self.preset = Preset::parse(value).ok_or_else(bad)?,
            "n" => self.n = p(key, value)?,
            "instance" => self.instance = Some(value.into()),
            "ppc" => self.ppc = Some(value.into()),
            "nu" => self.nu = p(key, value)?,
            "k" => self.k = p(key, value)?,
            "eps" => self.eps = p(key, value)?,
            "h" => self.h = Some(p(key, value)?),
            "c" => self.c = p(key, value)?,
            "c_prime" => self.c_prime = p(key, value)?,
            "seed" => self.seed = p(key, value)?,
            "trials" => self.trials = p(key, value)?,
            "attack" => self.attack = AttackFamily::parse(value).ok_or_else(bad)?,
            "attack_size" => {
                self.attack_size = if value.contains('.') {
                    Size::Fraction(p(key, value)?)
                } else {
                    Size::Count(p(key, value)?)
                }
            }
            "p" => self.p = p(key, value)?,
            "lb_scale" => self.lb_scale = Some(p(key, value)?),
            "max_children" => self.max_children = p(key, value)?,
            "max_weight" => self.max_weight = p(key, value)?,
            "strategy" => {
                self.strategy = match value {
                    "heuristic" => SpdStrategy::Heuristic,
                    "tree" => SpdStrategy::Tree,
                    _ => return Err(bad()),
                }
            }
            "verify" => {
                self.verify = match value {
                    "auto" => VerifyMode::Auto,
                    "full" => VerifyMode::Full,
                    "sampled" => VerifyMode::Sampled,
                    "off" => VerifyMode::Off,
                    _ => return Err(bad()),
                }
            }
            "pair_samples" => self.pair_samples = p(key, value)?,
            "frt_trees" => self.frt_trees = Some(p(key, value)?),
            "frt_target" => self.frt_target = p(key, value)?,
            "frt_budget" => self.frt_budget = p(key, value)?,
            "threads" => self.threads = p(key, value)?,
            _ => return Err(ConfigError::UnknownKey(key.into())),
        }
        Ok(())
    }

    /// One-line summary for output headers.
    pub fn summary(&self) -> String {
        let size = match self.attack_size {
            Size::Count(c) => c.to_string(),
            Size::Fraction(f) => format!("{f:?}"),
        };
        format!(
            "preset={} n={} seed={} rng=chacha8 nu={} k={} eps={} h={} c={} c_prime={} trials={} attack={} attack_size={} p={}",
            self.preset.name(),
            self.n,
            self.seed,
            self.nu,
            self.k,
            self.eps,
            self.h.map_or("auto".into(), |h| h.to_string()),
            self.c,
            self.c_prime,
            self.trials,
            self.attack.name(),
            size,
            self.p,
        )
    }
}
