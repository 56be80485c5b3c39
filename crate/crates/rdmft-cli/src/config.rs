//! Optional TOML configuration; flat keys mirroring the flag names.
//! Precedence everywhere: flag > file > default.

use std::path::Path;

use anyhow::{Context, Result};
use serde::Deserialize;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub n: Option<usize>,
    pub u: Option<f64>,
    pub t: Option<f64>,
    pub vl: Option<f64>,
    pub vr: Option<f64>,
    pub grid: Option<String>,
    pub d_min: Option<f64>,
    pub d_max: Option<f64>,
    pub format: Option<String>,
    pub out: Option<std::path::PathBuf>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub nw0: Option<f64>,
    pub eps_min: Option<f64>,
    pub eps_max: Option<f64>,
    pub points: Option<usize>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}

/// "RADIALxANGULAR" grid spec, both dimensions at least 2.
pub fn parse_grid(spec: &str) -> Result<(usize, usize)> {
    let (a, b) = spec
        .split_once(['x', 'X'])
        .with_context(|| format!("grid spec `{spec}` is not of the form 50x50"))?;
    let nr: usize = a.trim().parse().context("grid radial count")?;
    let na: usize = b.trim().parse().context("grid angular count")?;
    anyhow::ensure!(nr >= 2 && na >= 2, "grid resolution must be at least 2x2");
    Ok((nr, na))
}
