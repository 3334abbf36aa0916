use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use mi_spectra_core::{DispersionSymbol, HillConfig, WaveParams};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Emit {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HillSection {
    #[serde(default = "default_modes")]
    pub fourier_modes: usize,
    pub mu_min: f64,
    pub mu_max: f64,
    pub mu_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub lo: f64,
    pub hi: f64,
    #[serde(default = "default_sweep_count")]
    pub count: usize,
}

/// One JSON document describing a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub symbol: String,
    #[serde(rename = "N")]
    pub n: u32,
    pub alpha: i32,
    pub rho: f64,
    pub a: f64,
    #[serde(default = "default_order")]
    pub stokes_order: usize,
    #[serde(default)]
    pub hill: Option<HillSection>,
    #[serde(default)]
    pub sweep: Option<SweepSection>,
    /// Extra nonlinearity powers drawn together by `spectrum`.
    #[serde(default)]
    pub family: Option<Vec<u32>>,
    #[serde(default = "default_outputs")]
    pub outputs: PathBuf,
    #[serde(default = "default_emit")]
    pub emit: Vec<Emit>,
}

fn default_modes() -> usize {
    5
}

fn default_sweep_count() -> usize {
    301
}

fn default_order() -> usize {
    9
}

fn default_outputs() -> PathBuf {
    PathBuf::from("out")
}

fn default_emit() -> Vec<Emit> {
    vec![Emit::Csv, Emit::Json, Emit::Svg]
}

impl RunConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let cfg: RunConfig = serde_json::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        self.params().context("invalid wave parameters")?;
        if !(self.a >= 0.0 && self.a.is_finite()) {
            bail!("amplitude a must be finite and nonnegative, got {}", self.a);
        }
        if self.stokes_order < self.n as usize {
            bail!("stokes_order {} is below N = {}", self.stokes_order, self.n);
        }
        if let Some(h) = &self.hill {
            self.hill_config_from(h)
                .validate()
                .context("invalid hill section")?;
        }
        if let Some(s) = &self.sweep {
            if !(s.lo > 0.0 && s.hi > s.lo && s.count >= 2) {
                bail!("sweep needs 0 < lo < hi and count >= 2");
            }
        }
        if let Some(f) = &self.family {
            for &n in f {
                WaveParams::new(n, self.alpha_for(n), self.rho)
                    .with_context(|| format!("family member N={n}"))?;
            }
        }
        Ok(())
    }

    pub fn params(&self) -> anyhow::Result<WaveParams> {
        Ok(WaveParams::new(self.n, self.alpha, self.rho)?)
    }

    /// Even powers only admit α = +1.
    pub fn alpha_for(&self, n: u32) -> i32 {
        if n.is_multiple_of(2) {
            1
        } else {
            self.alpha
        }
    }

    pub fn symbol(&self) -> anyhow::Result<DispersionSymbol> {
        DispersionSymbol::from_spec(&self.symbol)
            .with_context(|| format!("symbol '{}'", self.symbol))
    }

    fn hill_config_from(&self, h: &HillSection) -> HillConfig {
        HillConfig {
            fourier_modes: h.fourier_modes,
            mu_min: h.mu_min,
            mu_max: h.mu_max,
            mu_count: h.mu_count,
            stokes_order: self.stokes_order,
            amplitude: self.a,
        }
    }

    pub fn hill_config(&self) -> anyhow::Result<HillConfig> {
        let h = self
            .hill
            .as_ref()
            .context("config has no \"hill\" section")?;
        Ok(self.hill_config_from(h))
    }

    pub fn emits(&self, e: Emit) -> bool {
        self.emit.contains(&e)
    }
}
