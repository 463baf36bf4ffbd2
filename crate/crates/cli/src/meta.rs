//! Provenance stamped onto every output file.

use std::io::Write;

use anyhow::Result;
use qsat_core::sat::{emit_dimacs, SatInstance};
use serde::Serialize;
use sha2::{Digest, Sha256};

pub const TOOL: &str = "qsat";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Serialize)]
pub struct Meta {
    pub tool: &'static str,
    pub version: &'static str,
    pub config_hash: String,
    pub master_seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance_hash: Option<String>,
}

impl Meta {
    pub fn new(config: &impl Serialize, master_seed: u64) -> Result<Self> {
        Ok(Meta {
            tool: TOOL,
            version: VERSION,
            config_hash: sha256_hex(&serde_json::to_vec(config)?),
            master_seed,
            instance_hash: None,
        })
    }

    pub fn with_instance(mut self, inst: &SatInstance) -> Self {
        self.instance_hash = Some(instance_hash(inst));
        self
    }

    /// `#`-prefixed header lines for CSV files.
    pub fn write_comment(&self, w: &mut impl Write, config_echo: &str) -> std::io::Result<()> {
        writeln!(w, "# tool={} version={}", self.tool, self.version)?;
        writeln!(w, "# config_hash={}", self.config_hash)?;
        writeln!(w, "# master_seed={}", self.master_seed)?;
        if let Some(h) = &self.instance_hash {
            writeln!(w, "# instance_hash={h}")?;
        }
        for line in config_echo.lines() {
            writeln!(w, "# config: {line}")?;
        }
        Ok(())
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Hash of the clause content only; comments (seed, solution count) are
/// excluded so equal formulas hash equally.
pub fn instance_hash(inst: &SatInstance) -> String {
    let body: String = emit_dimacs(inst)
        .lines()
        .filter(|l| !l.starts_with('c'))
        .flat_map(|l| [l, "\n"])
        .collect();
    sha256_hex(body.as_bytes())
}
