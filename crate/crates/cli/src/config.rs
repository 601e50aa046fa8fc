//! Experiment configuration: JSON schema, validation, resolution.
//!
//! Configs are strict: the schema is versioned and unknown fields are
//! rejected, so an experiment file either means exactly what it says or
//! fails to load.

use anyhow::{bail, Context, Result};
use dmetric_core::{param_count, Activation, InputDomain, InputMeasure, MeasureLaw, NetworkParams};
use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use std::path::Path;

pub const CONFIG_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub version: u32,
    pub layer_dims: Vec<usize>,
    pub activation: Activation,
    /// Named flat parameter vectors, all sharing `layer_dims` and
    /// `activation`.
    pub networks: IndexMap<String, Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure: Option<MeasureConfig>,
    /// Alternative to `measure` when one experiment spans several input
    /// laws (exactly one of the two fields must be present).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measures: Option<Vec<MeasureConfig>>,
    pub n_samples: usize,
    pub seed: u64,
    #[serde(default)]
    pub tie_tol: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    /// Reference values from an external write-up, keyed `"euclidean"` or
    /// by measure label; reports print them next to computed values.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub published_values: Option<IndexMap<String, Vec<Vec<f64>>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureConfig {
    pub domain: InputDomain,
    pub law: LawName,
    /// Center of the Gaussian before truncation; zero when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean: Option<Vec<f64>>,
    /// Report label; defaults to the law name.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LawName {
    Uniform,
    TruncatedGaussian,
}

impl MeasureConfig {
    pub fn build(&self) -> Result<InputMeasure> {
        let law = match self.law {
            LawName::Uniform => {
                if self.mean.is_some() {
                    bail!("'mean' is only valid with law 'truncated_gaussian'");
                }
                MeasureLaw::Uniform
            }
            LawName::TruncatedGaussian => MeasureLaw::TruncatedGaussian {
                mean: self
                    .mean
                    .clone()
                    .unwrap_or_else(|| vec![0.0; self.domain.dim()]),
            },
        };
        Ok(InputMeasure::new(self.domain.clone(), law)?)
    }

    fn base_label(&self) -> String {
        self.label.clone().unwrap_or_else(|| {
            match self.law {
                LawName::Uniform => "uniform",
                LawName::TruncatedGaussian => "truncated_gaussian",
            }
            .to_string()
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// Full flat parameter vector; the two free entries are overwritten at
    /// every grid node.
    pub fixed_params: Vec<f64>,
    pub free_param_indices: [usize; 2],
    pub ranges: [[f64; 2]; 2],
    /// Grid nodes per axis, endpoints included.
    pub resolution: usize,
    /// Name of the network the distance field is measured against.
    pub reference: String,
}

/// A validated config with its networks and measures constructed.
#[derive(Debug)]
pub struct Resolved {
    pub config: ExperimentConfig,
    pub networks: Vec<(String, NetworkParams)>,
    /// Measures with unique labels, in config order.
    pub measures: Vec<(String, InputMeasure)>,
}

pub fn load(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    let config: ExperimentConfig = serde_json::from_str(&text)
        .with_context(|| format!("parsing config {}", path.display()))?;
    Ok(config)
}

pub fn resolve(config: ExperimentConfig) -> Result<Resolved> {
    if config.version != CONFIG_VERSION {
        bail!(
            "unsupported config version {} (this build reads version {})",
            config.version,
            CONFIG_VERSION
        );
    }
    if config.networks.is_empty() {
        bail!("config names no networks");
    }
    if config.n_samples == 0 {
        bail!("n_samples must be positive");
    }
    if !(config.tie_tol.is_finite() && config.tie_tol >= 0.0) {
        bail!("tie_tol must be finite and non-negative");
    }

    let mut networks = Vec::with_capacity(config.networks.len());
    for (name, flat) in &config.networks {
        let net = NetworkParams::from_flat(&config.layer_dims, config.activation.clone(), flat)
            .with_context(|| format!("network '{name}'"))?;
        networks.push((name.clone(), net));
    }

    let measure_configs: Vec<MeasureConfig> = match (&config.measure, &config.measures) {
        (Some(m), None) => vec![m.clone()],
        (None, Some(ms)) if !ms.is_empty() => ms.clone(),
        (None, Some(_)) => bail!("'measures' must not be empty"),
        (Some(_), Some(_)) => bail!("give either 'measure' or 'measures', not both"),
        (None, None) => bail!("config needs a 'measure' or 'measures' section"),
    };
    let input_dim = config.layer_dims[0];
    let mut measures = Vec::with_capacity(measure_configs.len());
    for (i, mc) in measure_configs.iter().enumerate() {
        if mc.domain.dim() != input_dim {
            bail!(
                "measure {i} has dimension {}, networks take {input_dim} inputs",
                mc.domain.dim()
            );
        }
        let mu = mc.build().with_context(|| format!("measure {i}"))?;
        let base = mc.base_label();
        let mut label = base.clone();
        let mut k = 2;
        while measures.iter().any(|(l, _)| *l == label) {
            label = format!("{base}_{k}");
            k += 1;
        }
        measures.push((label, mu));
    }

    if let Some(sweep) = &config.sweep {
        let m = param_count(&config.layer_dims);
        if sweep.fixed_params.len() != m {
            bail!(
                "sweep.fixed_params has {} entries, networks have {m} parameters",
                sweep.fixed_params.len()
            );
        }
        if sweep.fixed_params.iter().any(|v| !v.is_finite()) {
            bail!("sweep.fixed_params must be finite");
        }
        let [i0, i1] = sweep.free_param_indices;
        if i0 >= m || i1 >= m {
            bail!("sweep.free_param_indices out of range 0..{m}");
        }
        if i0 == i1 {
            bail!("sweep.free_param_indices must be distinct");
        }
        for [lo, hi] in sweep.ranges {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                bail!("sweep range [{lo}, {hi}] is not a finite increasing interval");
            }
        }
        if sweep.resolution < 2 {
            bail!("sweep.resolution must be at least 2");
        }
        if !config.networks.contains_key(&sweep.reference) {
            bail!("sweep.reference '{}' is not a configured network", sweep.reference);
        }
    }

    if let Some(published) = &config.published_values {
        let n = networks.len();
        for (key, matrix) in published {
            if key != "euclidean" && !measures.iter().any(|(l, _)| l == key) {
                bail!(
                    "published_values key '{key}' matches neither 'euclidean' nor a measure label"
                );
            }
            if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
                bail!("published_values['{key}'] must be a {n}x{n} matrix");
            }
            if matrix.iter().flatten().any(|v| !v.is_finite()) {
                bail!("published_values['{key}'] contains non-finite entries");
            }
        }
    }

    Ok(Resolved { config, networks, measures })
}
