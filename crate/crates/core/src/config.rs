//! Instance files.
//!
//! An instance file is `key = value` text with `#` comments. It describes
//! either an SN growth run (`model = sn`, the default) or a preferential
//! attachment baseline (`model = ba`), together with the number of seeds and
//! the metric options of an experiment.
//!
//! ```text
//! # one initial node over {A, T}
//! alphabet = AT
//! initial = ATATATATATAT
//! p_mutate = 1
//! unit_distance = 2
//! max_distance = 1
//! target_nodes = 282
//! n_seeds = 100
//! ```
//!
//! Relative `match_file` paths are resolved against the instance file's
//! directory. Overrides (`key=value` strings) replace file values before
//! validation, so they obey the same rules.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::ba::BaParams;
use crate::distance::{parse_match_file, DistanceConfig, MatchSemantics};
use crate::error::{io_err, Error, Result};
use crate::growth::{GrowthMode, Instance, DEFAULT_ATTEMPTS_PER_NODE};
use crate::metrics::MetricsOptions;
use crate::structure::{Alphabet, EditProbabilities, Structure};

pub const DEFAULT_MAX_STRUCTURE_LEN: usize = 10_000;

/// Metrics that a discrepancy reference may name, as `reference_<metric>`.
pub const REFERENCE_METRICS: [&str; 5] = [
    "average_degree",
    "average_path_length",
    "average_clustering",
    "heterogeneity",
    "fitted_gamma",
];

const SN_KEYS: &[&str] = &[
    "alphabet",
    "initial",
    "p_mutate",
    "p_insert",
    "p_delete",
    "p_duplicate",
    "unit_distance",
    "max_distance",
    "match_file",
    "match_semantics",
    "duplication_law",
    "target_nodes",
    "max_attempts",
    "mode",
    "prune_min_degree",
    "max_structure_length",
];

const BA_KEYS: &[&str] = &["initial_clique", "edges_per_node", "target_nodes"];

const COMMON_KEYS: &[&str] = &[
    "model",
    "seed",
    "n_seeds",
    "checkpoint_interval",
    "fit_k_min",
    "discrepancy_metrics",
];

#[derive(Debug, Clone)]
pub enum Model {
    Sn(Box<Instance>),
    Ba(BaParams),
}

impl Model {
    pub fn seed(&self) -> u64 {
        match self {
            Model::Sn(i) => i.seed,
            Model::Ba(p) => p.seed,
        }
    }

    pub fn target_nodes(&self) -> usize {
        match self {
            Model::Sn(i) => i.target_nodes,
            Model::Ba(p) => p.target_nodes,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub model: Model,
    pub n_seeds: usize,
    /// Record a checkpoint every this many nodes; 0 keeps the final network only.
    pub checkpoint_interval: usize,
    pub metrics: MetricsOptions,
    /// Metrics compared in the discrepancy fractions.
    pub discrepancy_metrics: Vec<String>,
    /// Explicit reference values; metrics without one use the ensemble mean.
    pub discrepancy_reference: BTreeMap<String, f64>,
    pub output_directory: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn sn(instance: Instance, n_seeds: usize) -> Self {
        Self::with_model(Model::Sn(Box::new(instance)), n_seeds)
    }

    pub fn ba(params: BaParams, n_seeds: usize) -> Self {
        Self::with_model(Model::Ba(params), n_seeds)
    }

    fn with_model(model: Model, n_seeds: usize) -> Self {
        Self {
            model,
            n_seeds,
            checkpoint_interval: 0,
            metrics: MetricsOptions::default(),
            discrepancy_metrics: default_discrepancy_metrics(),
            discrepancy_reference: BTreeMap::new(),
            output_directory: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_seeds == 0 {
            return Err(Error::Config("n_seeds must be at least 1".into()));
        }
        for m in self.discrepancy_metrics.iter().chain(self.discrepancy_reference.keys()) {
            if !REFERENCE_METRICS.contains(&m.as_str()) {
                return Err(Error::Config(format!("unknown discrepancy metric {m:?}")));
            }
        }
        match &self.model {
            Model::Sn(i) => i.validate(),
            Model::Ba(p) => p.validate(),
        }
    }
}

fn default_discrepancy_metrics() -> Vec<String> {
    ["average_degree", "average_path_length", "average_clustering"]
        .map(String::from)
        .to_vec()
}

/// Split `key=value` into its parts.
pub fn parse_override(s: &str) -> Result<(String, String)> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("override {s:?} is not of the form key=value")))?;
    Ok((k.trim().to_string(), v.trim().to_string()))
}

pub fn load_instance_file(path: &Path, overrides: &[(String, String)]) -> Result<ExperimentConfig> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let base = path.parent().unwrap_or(Path::new("."));
    parse_instance(&text, path, base, overrides)
}

/// Parse instance text. `base_dir` resolves relative match-file paths.
pub fn parse_instance_file(text: &str, base_dir: &Path) -> Result<ExperimentConfig> {
    parse_instance(text, Path::new("<instance>"), base_dir, &[])
}

pub fn parse_instance(
    text: &str,
    origin: &Path,
    base_dir: &Path,
    overrides: &[(String, String)],
) -> Result<ExperimentConfig> {
    let mut values: BTreeMap<String, (String, usize)> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
            path: origin.to_path_buf(),
            line: lineno,
            message: format!("expected `key = value`, found {line:?}"),
        })?;
        let key = k.trim().to_string();
        if values.insert(key.clone(), (v.trim().to_string(), lineno)).is_some() {
            return Err(Error::Parse {
                path: origin.to_path_buf(),
                line: lineno,
                message: format!("key {key:?} is set twice"),
            });
        }
    }
    for (k, v) in overrides {
        values.insert(k.clone(), (v.clone(), 0));
    }
    Fields {
        values,
        origin: origin.to_path_buf(),
    }
    .build(base_dir)
}

struct Fields {
    values: BTreeMap<String, (String, usize)>,
    origin: PathBuf,
}

impl Fields {
    fn err(&self, key: &str, message: String) -> Error {
        match self.values.get(key) {
            Some((_, line)) if *line > 0 => Error::Parse {
                path: self.origin.clone(),
                line: *line,
                message,
            },
            _ => Error::Config(message),
        }
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|(v, _)| v.as_str())
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|e| self.err(key, format!("bad value {v:?} for {key}: {e}"))),
        }
    }

    fn require<T: FromStr>(&self, key: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        self.get(key)?
            .ok_or_else(|| Error::Config(format!("missing required key {key:?}")))
    }

    fn check_keys(&self, allowed: &[&[&str]]) -> Result<()> {
        for key in self.values.keys() {
            let known = allowed.iter().any(|set| set.contains(&key.as_str()))
                || key
                    .strip_prefix("reference_")
                    .is_some_and(|m| REFERENCE_METRICS.contains(&m));
            if !known {
                return Err(self.err(key, format!("unknown key {key:?}")));
            }
        }
        Ok(())
    }

    fn build(self, base_dir: &Path) -> Result<ExperimentConfig> {
        let model_name = self.raw("model").unwrap_or("sn").to_string();
        let seed: u64 = self.get("seed")?.unwrap_or(0);
        let model = match model_name.as_str() {
            "sn" => {
                self.check_keys(&[SN_KEYS, COMMON_KEYS])?;
                Model::Sn(Box::new(self.sn_instance(base_dir, seed)?))
            }
            "ba" => {
                self.check_keys(&[BA_KEYS, COMMON_KEYS])?;
                Model::Ba(BaParams {
                    initial_clique: self.require("initial_clique")?,
                    edges_per_node: self.require("edges_per_node")?,
                    target_nodes: self.require("target_nodes")?,
                    seed,
                })
            }
            other => return Err(self.err("model", format!("model must be `sn` or `ba`, got {other:?}"))),
        };
        let mut config = ExperimentConfig::with_model(model, self.get("n_seeds")?.unwrap_or(1));
        config.checkpoint_interval = self.get("checkpoint_interval")?.unwrap_or(0);
        if let Some(k) = self.get("fit_k_min")? {
            config.metrics.fit_k_min = k;
        }
        if let Some(list) = self.raw("discrepancy_metrics") {
            config.discrepancy_metrics = list
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(String::from)
                .collect();
        }
        for m in REFERENCE_METRICS {
            if let Some(v) = self.get::<f64>(&format!("reference_{m}"))? {
                config.discrepancy_reference.insert(m.to_string(), v);
            }
        }
        config.validate()?;
        Ok(config)
    }

    fn sn_instance(&self, base_dir: &Path, seed: u64) -> Result<Instance> {
        let alphabet_text: String = self.require("alphabet")?;
        let alphabet = Alphabet::new(
            alphabet_text
                .chars()
                .filter(|c| !c.is_whitespace() && !matches!(c, ',' | '{' | '}')),
        )?;
        let initial_text: String = self.require("initial")?;
        let initial_structures = initial_text
            .split(';')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|w| Structure::parse(w, &alphabet))
            .collect::<Result<Vec<_>>>()?;
        let probs = EditProbabilities {
            p_mutate: self.get("p_mutate")?.unwrap_or(0.0),
            p_insert: self.get("p_insert")?.unwrap_or(0.0),
            p_delete: self.get("p_delete")?.unwrap_or(0.0),
            p_duplicate: self.get("p_duplicate")?.unwrap_or(0.0),
        };
        probs.validate()?;
        let unit: usize = self.require("unit_distance")?;
        let semantics: MatchSemantics = self.get("match_semantics")?.unwrap_or_default();
        let table = match self.raw("match_file") {
            None => None,
            Some(file) => {
                let path = base_dir.join(file);
                let text = fs::read_to_string(&path).map_err(io_err(&path))?;
                Some(parse_match_file(&text, unit, &alphabet)?.with_semantics(semantics))
            }
        };
        let distance = DistanceConfig::new(unit, self.require("max_distance")?, table)?;
        let target_nodes: usize = self.require("target_nodes")?;
        let mode = match self.raw("mode").unwrap_or("incremental") {
            "incremental" => GrowthMode::Incremental,
            "batch" => GrowthMode::Batch,
            other => return Err(self.err("mode", format!("mode must be `incremental` or `batch`, got {other:?}"))),
        };
        let instance = Instance {
            alphabet,
            initial_structures,
            probs,
            distance,
            target_nodes,
            max_attempts: self
                .get("max_attempts")?
                .unwrap_or(target_nodes.saturating_mul(DEFAULT_ATTEMPTS_PER_NODE)),
            mode,
            prune_min_degree: self.get("prune_min_degree")?.unwrap_or(0),
            max_structure_len: self.get("max_structure_length")?.unwrap_or(DEFAULT_MAX_STRUCTURE_LEN),
            duplication_law: self.get("duplication_law")?.unwrap_or_default(),
            seed,
        };
        instance.validate()?;
        Ok(instance)
    }
}
