//! Sweep configuration (TOML).
//!
//! ```toml
//! version = 1
//! seed = 7
//!
//! [instances]
//! n = [8, 10]
//! count = 5
//! target_ns = 1
//!
//! [[schedule]]
//! kind = "linear"
//! cycles = 40
//!
//! [[schedule]]
//! kind = "constant"
//! theta = 0.785
//! checks = 400
//!
//! [hifid]
//! theta_fracs = [0.4, 0.5, 0.6]
//! noise_caps = [0.0, 0.02]
//!
//! [output]
//! traces = true
//! ```

use std::path::Path;

use anyhow::{bail, Context, Result};
use qsat_core::rebit::NoiseMode;
use qsat_core::sat::DEFAULT_EXHAUSTIVE_LIMIT;
use qsat_core::solver::{Schedule, DEFAULT_HIFID_CAP, DEFAULT_HIFID_THRESHOLD};
use serde::{Deserialize, Serialize};

pub const CONFIG_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub version: u32,
    pub seed: u64,
    pub instances: InstanceSet,
    #[serde(default)]
    pub schedule: Vec<Schedule>,
    #[serde(default)]
    pub hifid: Option<HifidSweep>,
    #[serde(default)]
    pub output: OutputOptions,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSet {
    pub n: Vec<usize>,
    pub count: u64,
    #[serde(default)]
    pub target_ns: Option<u64>,
    #[serde(default = "default_limit")]
    pub exhaustive_limit: usize,
}

fn default_limit() -> usize {
    DEFAULT_EXHAUSTIVE_LIMIT
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HifidSweep {
    /// θ as fractions of π/2.
    pub theta_fracs: Vec<f64>,
    #[serde(default = "default_caps")]
    pub noise_caps: Vec<f64>,
    #[serde(default)]
    pub noise_mode: NoiseMode,
    #[serde(default = "default_threshold")]
    pub threshold: f64,
    #[serde(default = "default_cap")]
    pub cap: u64,
}

fn default_caps() -> Vec<f64> {
    vec![0.0]
}

fn default_threshold() -> f64 {
    DEFAULT_HIFID_THRESHOLD
}

fn default_cap() -> u64 {
    DEFAULT_HIFID_CAP
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputOptions {
    /// Also write per-check traces (cumulative success, fidelity).
    #[serde(default)]
    pub traces: bool,
}

impl SweepConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let cfg: SweepConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.version != CONFIG_VERSION {
            bail!(
                "unsupported config version {} (expected {CONFIG_VERSION})",
                self.version
            );
        }
        if self.instances.n.is_empty() || self.instances.count == 0 {
            bail!("[instances] needs at least one n and count >= 1");
        }
        if self.schedule.is_empty() && self.hifid.is_none() {
            bail!("nothing to do: add [[schedule]] entries or a [hifid] section");
        }
        for s in &self.schedule {
            s.validate().with_context(|| format!("schedule {}", s.label()))?;
        }
        if let Some(h) = &self.hifid {
            if h.theta_fracs.iter().any(|f| !(*f > 0.0 && *f <= 1.0)) {
                bail!("[hifid] theta_fracs must lie in (0, 1]");
            }
        }
        Ok(())
    }

    /// Canonical text form echoed into output headers.
    pub fn echo(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }
}
