use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use pilab_core::algebra::AlgebraSpec;
use pilab_core::polyspace::EngineOptions;
use pilab_core::reptheory::default_height;
use pilab_core::words::WordSpec;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Values read from a config file or from flags; unset keys fall back to
/// the defaults in [`RunConfig`].
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct Overrides {
    pub m: Option<usize>,
    pub word: Option<String>,
    pub unital: Option<bool>,
    pub n_min: Option<usize>,
    pub n_max: Option<usize>,
    pub d: Option<usize>,
    pub eps: Option<f64>,
    pub delta: Option<f64>,
    pub cap_override: Option<bool>,
    pub workers: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

impl Overrides {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// Keys set in `other` win.
    pub fn merged(self, other: Overrides) -> Overrides {
        Overrides {
            m: other.m.or(self.m),
            word: other.word.or(self.word),
            unital: other.unital.or(self.unital),
            n_min: other.n_min.or(self.n_min),
            n_max: other.n_max.or(self.n_max),
            d: other.d.or(self.d),
            eps: other.eps.or(self.eps),
            delta: other.delta.or(self.delta),
            cap_override: other.cap_override.or(self.cap_override),
            workers: other.workers.or(self.workers),
            seed: other.seed.or(self.seed),
            out: other.out.or(self.out),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub m: usize,
    pub word: String,
    pub unital: bool,
    pub n_min: usize,
    pub n_max: usize,
    pub d: usize,
    pub eps: f64,
    pub delta: f64,
    pub cap_override: bool,
    pub workers: Option<usize>,
    pub seed: u64,
    pub out: PathBuf,
}

impl RunConfig {
    pub fn resolve(o: Overrides) -> Result<Self> {
        let unital = o.unital.unwrap_or(false);
        let cfg = RunConfig {
            m: o.m.unwrap_or(2),
            word: o.word.unwrap_or_else(|| "periodic:01".into()),
            unital,
            n_min: o.n_min.unwrap_or(1),
            n_max: o.n_max.unwrap_or(5),
            d: o.d.unwrap_or_else(|| default_height(unital)),
            eps: o.eps.unwrap_or(0.1),
            delta: o.delta.unwrap_or(0.3),
            cap_override: o.cap_override.unwrap_or(false),
            workers: o.workers,
            seed: o.seed.unwrap_or(EngineOptions::default().seed),
            out: o.out.unwrap_or_else(|| PathBuf::from("pilab-out")),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if self.m < 2 {
            bail!("m must be at least 2, got {}", self.m);
        }
        if self.n_min == 0 || self.n_min > self.n_max {
            bail!("need 1 <= n-min <= n-max, got {}..{}", self.n_min, self.n_max);
        }
        if self.d == 0 {
            bail!("d must be positive");
        }
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            bail!("eps must be positive, got {}", self.eps);
        }
        if !(self.delta >= 0.0 && self.delta.is_finite()) {
            bail!("delta must be non-negative, got {}", self.delta);
        }
        if self.workers == Some(0) {
            bail!("workers must be positive");
        }
        self.word_spec()?;
        Ok(())
    }

    pub fn word_spec(&self) -> Result<WordSpec> {
        self.word.parse().with_context(|| format!("invalid word {:?}", self.word))
    }

    pub fn algebra(&self) -> Result<AlgebraSpec> {
        Ok(AlgebraSpec::new(self.m, self.word_spec()?, self.unital)?)
    }

    pub fn engine_options(&self) -> EngineOptions {
        EngineOptions {
            seed: self.seed,
            cap_override: self.cap_override,
            ..EngineOptions::default()
        }
    }

    pub fn ns(&self) -> std::ops::RangeInclusive<usize> {
        self.n_min..=self.n_max
    }

    /// SHA-256 of the canonical JSON form, output directory excluded.
    pub fn hash(&self) -> String {
        let mut v = serde_json::to_value(self).expect("config serializes");
        v.as_object_mut().expect("object").remove("out");
        let digest = Sha256::digest(v.to_string().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// `key = value` lines readable by `--config`.
    pub fn to_toml(&self) -> String {
        let mut s = format!(
            "m = {}\nword = {:?}\nunital = {}\nn-min = {}\nn-max = {}\nd = {}\neps = {}\ndelta = {}\ncap-override = {}\nseed = {}\n",
            self.m, self.word, self.unital, self.n_min, self.n_max, self.d, self.eps, self.delta, self.cap_override, self.seed
        );
        if let Some(w) = self.workers {
            s.push_str(&format!("workers = {w}\n"));
        }
        s
    }
}
