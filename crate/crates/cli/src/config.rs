//! Run configuration: a TOML document whose values are overridden by flags.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use sl3::counting::CountConfig;
use sl3::spherical::QuadratureConfig;
use sl3::testfn::KernelConfig;

/// Environment variable that overrides the output directory of the file.
pub const OUTPUT_ENV: &str = "SL3_OUTPUT_DIR";

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub t_list: Vec<f64>,
    /// Amplifier length.
    pub l: u64,
    /// Radius `r'` of the bump whose self-convolution shapes the window.
    pub bump_radius: f64,
    /// Half width of the regime boundaries near the walls, in units of `1/T`.
    pub wall_width: f64,
    /// Uniform bound for the amplifier weights on the geometric side.
    pub alpha_bound: f64,
    pub output_dir: PathBuf,
    pub seed: u64,
    pub quadrature: QuadratureConfig,
    pub kernel: KernelConfig,
    pub count: CountConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            t_list: vec![10.0],
            l: 2,
            bump_radius: 1.0 / 6.0,
            wall_width: 1.0,
            alpha_bound: 3.0,
            output_dir: PathBuf::from("sl3-out"),
            seed: 1,
            quadrature: QuadratureConfig::default(),
            kernel: KernelConfig::default(),
            count: CountConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let mut cfg = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                toml::from_str(&text).with_context(|| format!("parsing {}", p.display()))?
            }
            None => Self::default(),
        };
        if let Ok(dir) = std::env::var(OUTPUT_ENV) {
            if !dir.is_empty() {
                cfg.output_dir = PathBuf::from(dir);
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.t_list.is_empty() {
            bail!("T-list is empty");
        }
        if self.t_list.iter().any(|t| !(*t >= 1.0)) {
            bail!("every T must be at least 1");
        }
        if self.count.max_det == 0 || self.count.witness_cap == 0 {
            bail!("enumeration budgets must be positive");
        }
        if !(self.wall_width > 0.0 && self.alpha_bound > 0.0) {
            bail!("wall width and amplifier bound must be positive");
        }
        self.quadrature.validate()?;
        Ok(())
    }
}
