//! Job configuration files.
//!
//! A job is one JSON document naming a model, a command, its parameters and
//! where the report goes. Filtration specs are kept unvalidated here so that
//! [`validate`] can report every problem at once.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use mixmult::multiplicity::Backend;
use mixmult::{Component, ComponentModel, Filtration, FiltrationSpec};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Colength,
    Multiplicity,
    Mixed,
    Okounkov,
    Verify,
    Example1,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    /// Nonnegativity, positivity and vanishing of mixed multiplicities.
    Positivity,
    /// Volume differences of bodies against limits of lengths.
    Theorem1,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentConfig {
    pub weight: u32,
    pub filtrations: Vec<FiltrationSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModelConfig {
    Components { components: Vec<ComponentConfig> },
    Filtrations { filtrations: Vec<FiltrationSpec> },
}

impl ModelConfig {
    fn as_components(&self) -> Vec<ComponentConfig> {
        match self {
            ModelConfig::Components { components } => components.clone(),
            ModelConfig::Filtrations { filtrations } => vec![ComponentConfig {
                weight: 1,
                filtrations: filtrations.clone(),
            }],
        }
    }

    pub fn build(&self) -> mixmult::Result<ComponentModel> {
        let components = self
            .as_components()
            .into_iter()
            .map(|c| {
                Ok(Component {
                    weight: c.weight,
                    filtrations: c
                        .filtrations
                        .into_iter()
                        .map(Filtration::from_spec)
                        .collect::<mixmult::Result<_>>()?,
                })
            })
            .collect::<mixmult::Result<_>>()?;
        ComponentModel::new(components)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Parameters {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub backend: Option<Backend>,
    /// Backend for the reduced instance in the positivity suite.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduced_backend: Option<Backend>,
    /// Levels `n` for `colength`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoffs: Option<Vec<u32>>,
    /// Ladder for the independent limit in Okounkov checks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit_ladder: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zero_threshold: Option<f64>,
    /// Filtration index for `okounkov`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub filtration: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub suites: Vec<Suite>,
    /// Expected coefficients keyed by type, e.g. `"1,1": "0"`.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub expected: BTreeMap<String, String>,
}

impl Parameters {
    pub fn tolerance(&self) -> f64 {
        self.tolerance.unwrap_or(1e-2)
    }

    pub fn cutoffs(&self) -> Vec<u32> {
        self.cutoffs.clone().unwrap_or_else(|| vec![8, 16, 32])
    }

    pub fn backend(&self) -> Backend {
        self.backend.clone().unwrap_or_else(Backend::direct_default)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelConfig>,
    pub command: Command,
    #[serde(default)]
    pub parameters: Parameters,
    #[serde(default)]
    pub output: OutputConfig,
}

impl JobConfig {
    pub fn from_json(text: &str) -> anyhow::Result<Self> {
        serde_json::from_str(text).context("config does not match the job schema")
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        Self::from_json(&text)
    }

    /// The model, built and checked. `example1` ignores the configured model.
    pub fn model(&self) -> anyhow::Result<ComponentModel> {
        if self.command == Command::Example1 {
            return Ok(mixmult::example1_model());
        }
        let Some(m) = &self.model else {
            bail!("command needs a model");
        };
        Ok(m.build()?)
    }
}

fn check_ladder(name: &str, ladder: &[u32], min_len: usize, out: &mut Vec<String>) {
    if ladder.len() < min_len {
        out.push(format!("{name} needs at least {min_len} entries"));
    }
    if ladder.contains(&0) {
        out.push(format!("{name} entries must be positive"));
    }
    if ladder.windows(2).any(|w| w[0] >= w[1]) {
        out.push(format!("{name} must be strictly increasing"));
    }
}

fn check_backend(name: &str, b: &Backend, out: &mut Vec<String>) {
    match b {
        Backend::Direct { ladder } => check_ladder(&format!("{name} ladder"), ladder, 3, out),
        Backend::TruncationExact { level, check_bound } => {
            if *level == 0 || *check_bound == 0 {
                out.push(format!("{name} level and check_bound must be positive"));
            }
        }
    }
}

/// Schema and invariant checks. Never runs a computation.
pub fn validate(cfg: &JobConfig) -> Vec<String> {
    let mut out = Vec::new();
    if cfg.schema_version != SCHEMA_VERSION {
        out.push(format!(
            "unsupported schema_version {} (expected {SCHEMA_VERSION})",
            cfg.schema_version
        ));
    }
    let p = &cfg.parameters;
    if let Some(t) = p.tolerance {
        if !(t > 0.0) {
            out.push("tolerance must be positive".into());
        }
    }
    if let Some(t) = p.zero_threshold {
        if !(t > 0.0) {
            out.push("zero_threshold must be positive".into());
        }
    }
    if let Some(b) = &p.backend {
        check_backend("backend", b, &mut out);
    }
    if let Some(b) = &p.reduced_backend {
        check_backend("reduced_backend", b, &mut out);
    }
    if let Some(c) = &p.cutoffs {
        check_ladder("cutoffs", c, 1, &mut out);
    }
    if let Some(l) = &p.limit_ladder {
        check_ladder("limit_ladder", l, 3, &mut out);
    }
    for key in p.expected.keys() {
        if key.split(',').any(|k| k.trim().parse::<u32>().is_err()) {
            out.push(format!("expected key {key:?} is not a type vector"));
        }
    }
    for v in p.expected.values() {
        if mixmult::rational::parse(v).is_err() && v.parse::<f64>().is_err() {
            out.push(format!("expected value {v:?} is not a number"));
        }
    }

    let mut shape = None;
    match (&cfg.model, cfg.command) {
        (_, Command::Example1) => shape = Some((2, 2, 2)),
        (None, _) => out.push("model is required".into()),
        (Some(m), _) => {
            let comps = m.as_components();
            if comps.is_empty() {
                out.push("model has no components".into());
            }
            let mut dims = Vec::new();
            for (k, c) in comps.iter().enumerate() {
                if c.weight == 0 {
                    out.push(format!("component {k}: weight must be at least 1"));
                }
                if c.filtrations.is_empty() {
                    out.push(format!("component {k}: no filtrations"));
                }
                if c.filtrations.len() != comps[0].filtrations.len() {
                    out.push(format!(
                        "component {k}: {} filtrations, component 0 has {}",
                        c.filtrations.len(),
                        comps[0].filtrations.len()
                    ));
                }
                for (j, f) in c.filtrations.iter().enumerate() {
                    for d in f.diagnostics() {
                        out.push(format!("component {k}, filtration {j}: {d}"));
                    }
                    dims.push(f.dim());
                }
            }
            if dims.windows(2).any(|w| w[0] != w[1]) {
                out.push(format!("dimension mismatch across filtrations: {dims:?}"));
            }
            if let (Some(&d), Some(c)) = (dims.first(), comps.first()) {
                shape = Some((d, c.filtrations.len(), comps.len()));
            }
        }
    }

    match cfg.command {
        Command::Colength => match &p.levels {
            None => out.push("colength needs parameters.levels".into()),
            Some(l) => check_ladder("levels", l, 1, &mut out),
        },
        Command::Okounkov => {
            if let Some((d, r, comps)) = shape {
                if comps != 1 {
                    out.push("okounkov needs a single-component model".into());
                }
                if p.filtration.unwrap_or(0) >= r {
                    out.push(format!("filtration index {} out of range", p.filtration.unwrap_or(0)));
                }
                if d > 3 {
                    out.push("okounkov bodies are supported for d <= 3".into());
                }
            }
        }
        Command::Verify => {
            if p.suites.is_empty() && p.expected.is_empty() {
                out.push("verify needs parameters.suites or parameters.expected".into());
            }
            if let Some((_, r, _)) = shape {
                for key in p.expected.keys() {
                    if key.split(',').count() != r {
                        out.push(format!("expected key {key:?} does not have {r} entries"));
                    }
                }
            }
        }
        Command::Multiplicity | Command::Mixed | Command::Example1 => {}
    }
    out
}
