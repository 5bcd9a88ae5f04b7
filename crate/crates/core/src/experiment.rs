//! Multi-seed experiments and the SN-versus-BA growth comparison.
//!
//! Run `i` of an experiment uses seed `seed + i`. Runs execute in parallel and
//! each writes into its own `seed_NNNN` directory, so the output does not
//! depend on scheduling.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use log::{info, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ba::{grow_ba, BaParams};
use crate::config::{ExperimentConfig, Model};
use crate::error::{io_err, Error, Result};
use crate::growth::{grow, GrowthMode, GrowthTrace, Instance};
use crate::io::{write_distributions, write_json, write_network, METRICS_FILE};
use crate::metrics::{average_clustering, average_degree, fit_power_law_slope, path_length_counts};
use crate::metrics::{MetricsReport, PowerLawFit};
use crate::network::Network;
use crate::rng_from_seed;

pub const SUMMARY_FILE: &str = "summary.json";

/// One generated network.
#[derive(Debug, Clone)]
pub struct Run {
    pub seed: u64,
    pub network: Network,
    pub trace: Option<GrowthTrace>,
    pub saturated: bool,
}

/// Generate the network of run `index` (seed `seed + index`).
pub fn generate(model: &Model, index: usize) -> Result<Run> {
    let seed = model.seed().wrapping_add(index as u64);
    let mut rng = rng_from_seed(seed);
    match model {
        Model::Sn(instance) => {
            let result = grow(instance, &mut rng)?;
            Ok(Run {
                seed,
                network: result.network,
                trace: Some(result.trace),
                saturated: result.saturated,
            })
        }
        Model::Ba(params) => Ok(Run {
            seed,
            network: grow_ba(params, &mut rng)?,
            trace: None,
            saturated: false,
        }),
    }
}

/// Mean ⟨k⟩, L and C of a network at one size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub nodes: usize,
    pub average_degree: f64,
    pub average_path_length: Option<f64>,
    pub average_clustering: f64,
}

impl CurvePoint {
    pub fn of(net: &Network) -> Self {
        Self {
            nodes: net.node_count(),
            average_degree: average_degree(net),
            average_path_length: path_length_counts(net).average(),
            average_clustering: average_clustering(net),
        }
    }
}

/// Whether node-count prefixes of this model's networks are its intermediate networks.
fn prefixes_are_checkpoints(model: &Model) -> bool {
    match model {
        Model::Sn(i) => i.mode == GrowthMode::Incremental && i.prune_min_degree == 0,
        Model::Ba(_) => true,
    }
}

fn checkpoint_curve(net: &Network, sizes: &[usize]) -> Vec<CurvePoint> {
    sizes
        .iter()
        .filter(|&&n| n <= net.node_count())
        .map(|&n| CurvePoint::of(&net.prefix(n)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub mean: f64,
    /// Population standard deviation.
    pub std: f64,
    pub min: f64,
    pub max: f64,
    /// Seeds for which the metric was defined.
    pub count: usize,
}

impl MetricSummary {
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        Some(Self {
            mean,
            std: var.sqrt(),
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            count: values.len(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedRecord {
    pub seed: u64,
    pub saturated: bool,
    pub metrics: BTreeMap<String, f64>,
}

/// Scalar metrics of a report, keyed by name. Undefined values are omitted.
pub fn scalar_metrics(report: &MetricsReport) -> BTreeMap<String, f64> {
    let mut m = BTreeMap::new();
    m.insert("n_nodes".into(), report.n_nodes as f64);
    m.insert("n_edges".into(), report.n_edges as f64);
    m.insert("average_degree".into(), report.average_degree);
    m.insert("average_clustering".into(), report.average_clustering);
    m.insert("largest_component_fraction".into(), report.largest_component_fraction);
    let optional = [
        ("average_path_length", report.average_path_length),
        ("giant_average_path_length", report.giant_average_path_length),
        ("heterogeneity", report.heterogeneity),
        ("fitted_gamma", report.fitted_gamma.map(|f| f.slope)),
        ("fitted_gamma_r2", report.fitted_gamma.map(|f| f.r_squared)),
    ];
    for (name, v) in optional {
        if let Some(v) = v {
            m.insert(name.into(), v);
        }
    }
    m
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub metrics: Vec<String>,
    pub reference: BTreeMap<String, f64>,
    /// Metrics whose reference came from the configuration rather than the ensemble mean.
    pub configured: Vec<String>,
    /// Fraction of seeds whose every listed metric is within 10% of its reference.
    pub within_10: f64,
    pub within_20: f64,
}

fn within(value: Option<f64>, reference: f64, tolerance: f64) -> bool {
    match value {
        Some(v) if reference != 0.0 => ((v - reference) / reference).abs() <= tolerance,
        Some(v) => v == 0.0,
        None => false,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryReport {
    pub n_seeds: usize,
    pub saturated_seeds: usize,
    pub metrics: BTreeMap<String, MetricSummary>,
    /// Fit of the degree histogram pooled over all seeds.
    pub pooled_fit: Option<PowerLawFit>,
    pub discrepancy: Discrepancy,
    pub seeds: Vec<SeedRecord>,
}

impl SummaryReport {
    pub fn mean(&self, metric: &str) -> Option<f64> {
        self.metrics.get(metric).map(|m| m.mean)
    }

    /// Aggregate per-seed `(seed, saturated, report)` triples.
    pub fn from_reports(config: &ExperimentConfig, runs: &[(u64, bool, MetricsReport)]) -> Self {
        let seeds: Vec<SeedRecord> = runs
            .iter()
            .map(|(seed, saturated, r)| SeedRecord {
                seed: *seed,
                saturated: *saturated,
                metrics: scalar_metrics(r),
            })
            .collect();
        let mut columns: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
        for s in &seeds {
            for (k, &v) in &s.metrics {
                columns.entry(k).or_default().push(v);
            }
        }
        let metrics: BTreeMap<String, MetricSummary> = columns
            .into_iter()
            .filter_map(|(k, vs)| MetricSummary::of(&vs).map(|m| (k.to_string(), m)))
            .collect();

        let mut pooled: BTreeMap<usize, f64> = BTreeMap::new();
        let mut total = 0.0;
        for (_, _, r) in runs {
            for (&k, &p) in &r.degree_distribution {
                *pooled.entry(k).or_default() += p * r.n_nodes as f64;
            }
            total += r.n_nodes as f64;
        }
        if total > 0.0 {
            pooled.values_mut().for_each(|c| *c /= total);
        }
        let pooled_fit = fit_power_law_slope(&pooled, config.metrics.fit_k_min).ok();

        let mut reference = BTreeMap::new();
        let mut configured = Vec::new();
        for m in &config.discrepancy_metrics {
            if let Some(&r) = config.discrepancy_reference.get(m) {
                reference.insert(m.clone(), r);
                configured.push(m.clone());
            } else if let Some(s) = metrics.get(m) {
                reference.insert(m.clone(), s.mean);
            }
        }
        let fraction = |tol: f64| {
            if seeds.is_empty() {
                return 0.0;
            }
            let ok = seeds
                .iter()
                .filter(|s| {
                    config.discrepancy_metrics.iter().all(|m| {
                        reference
                            .get(m)
                            .is_some_and(|&r| within(s.metrics.get(m).copied(), r, tol))
                    })
                })
                .count();
            ok as f64 / seeds.len() as f64
        };
        let discrepancy = Discrepancy {
            metrics: config.discrepancy_metrics.clone(),
            within_10: fraction(0.10),
            within_20: fraction(0.20),
            reference,
            configured,
        };
        Self {
            n_seeds: seeds.len(),
            saturated_seeds: seeds.iter().filter(|s| s.saturated).count(),
            metrics,
            pooled_fit,
            discrepancy,
            seeds,
        }
    }
}

/// Run every seed of `config`, write per-seed artifacts when an output
/// directory is set, and return the aggregate report.
pub fn run_experiment(config: &ExperimentConfig) -> Result<SummaryReport> {
    config.validate()?;
    let out = config.output_directory.as_deref();
    if let Some(dir) = out {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    let sizes: Vec<usize> = if config.checkpoint_interval > 0 {
        if prefixes_are_checkpoints(&config.model) {
            (1..)
                .map(|i| i * config.checkpoint_interval)
                .take_while(|&n| n <= config.model.target_nodes())
                .collect()
        } else {
            warn!("checkpoints are only recorded for unpruned incremental and BA runs");
            Vec::new()
        }
    } else {
        Vec::new()
    };
    let runs: Vec<(u64, bool, MetricsReport)> = (0..config.n_seeds)
        .into_par_iter()
        .map(|i| -> Result<_> {
            let run = generate(&config.model, i)?;
            if run.saturated {
                warn!("seed {} saturated at {} nodes", run.seed, run.network.node_count());
            }
            let report = MetricsReport::compute(&run.network, &config.metrics);
            if let Some(dir) = out {
                let seed_dir = dir.join(format!("seed_{i:04}"));
                write_network(&run.network, &seed_dir)?;
                write_json(&report, &seed_dir.join(METRICS_FILE))?;
                write_distributions(&report, &seed_dir)?;
                if let Some(trace) = &run.trace {
                    write_json(trace, &seed_dir.join("trace.json"))?;
                }
                if !sizes.is_empty() {
                    write_json(
                        &checkpoint_curve(&run.network, &sizes),
                        &seed_dir.join("checkpoints.json"),
                    )?;
                }
            }
            Ok((run.seed, run.saturated, report))
        })
        .collect::<Result<_>>()?;
    let summary = SummaryReport::from_reports(config, &runs);
    if let Some(dir) = out {
        write_json(&summary, &dir.join(SUMMARY_FILE))?;
    }
    info!("finished {} seed(s)", summary.n_seeds);
    Ok(summary)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthComparison {
    pub n_seeds: usize,
    pub sn: Vec<CurvePoint>,
    pub ba: Vec<CurvePoint>,
}

fn mean_curve(curves: &[Vec<CurvePoint>], checkpoints: &[usize]) -> Vec<CurvePoint> {
    checkpoints
        .iter()
        .filter_map(|&n| {
            let points: Vec<&CurvePoint> = curves.iter().filter_map(|c| c.iter().find(|p| p.nodes == n)).collect();
            if points.is_empty() {
                return None;
            }
            let k = points.len() as f64;
            let paths: Vec<f64> = points.iter().filter_map(|p| p.average_path_length).collect();
            Some(CurvePoint {
                nodes: n,
                average_degree: points.iter().map(|p| p.average_degree).sum::<f64>() / k,
                average_path_length: (!paths.is_empty()).then(|| paths.iter().sum::<f64>() / paths.len() as f64),
                average_clustering: points.iter().map(|p| p.average_clustering).sum::<f64>() / k,
            })
        })
        .collect()
}

/// Grow `n_seeds` SN and BA networks to the last checkpoint and average
/// ⟨k⟩, L and C over seeds at every checkpoint size. With `out`, writes one
/// file per statistic with columns `nodes`, `SN`, `BA`.
pub fn run_growth_comparison(
    sn: &Instance,
    ba: &BaParams,
    checkpoints: &[usize],
    n_seeds: usize,
    out: Option<&Path>,
) -> Result<GrowthComparison> {
    if checkpoints.is_empty() || checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config(
            "checkpoints must be non-empty and strictly ascending".into(),
        ));
    }
    if n_seeds == 0 {
        return Err(Error::Config("n_seeds must be at least 1".into()));
    }
    let last = *checkpoints.last().expect("non-empty");
    let sn_model = Model::Sn(Box::new(Instance {
        target_nodes: last,
        max_attempts: sn.max_attempts.max(last),
        mode: GrowthMode::Incremental,
        prune_min_degree: 0,
        ..sn.clone()
    }));
    let ba_model = Model::Ba(BaParams {
        target_nodes: last,
        ..*ba
    });
    let curves = |model: &Model| -> Result<Vec<Vec<CurvePoint>>> {
        (0..n_seeds)
            .into_par_iter()
            .map(|i| {
                let run = generate(model, i)?;
                if run.saturated {
                    warn!("seed {} saturated at {} nodes", run.seed, run.network.node_count());
                }
                Ok(checkpoint_curve(&run.network, checkpoints))
            })
            .collect()
    };
    let comparison = GrowthComparison {
        n_seeds,
        sn: mean_curve(&curves(&sn_model)?, checkpoints),
        ba: mean_curve(&curves(&ba_model)?, checkpoints),
    };
    if let Some(dir) = out {
        write_comparison(&comparison, dir)?;
    }
    Ok(comparison)
}

pub fn write_comparison(c: &GrowthComparison, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    type Column = fn(&CurvePoint) -> Option<f64>;
    let files: [(&str, Column); 3] = [
        ("average_degree", |p| Some(p.average_degree)),
        ("average_path_length", |p| p.average_path_length),
        ("average_clustering", |p| Some(p.average_clustering)),
    ];
    let cell = |v: Option<f64>| v.map_or_else(|| "nan".to_string(), |v| v.to_string());
    for (name, column) in files {
        let mut text = format!("# snmodel growth-{} v1\n# nodes\tSN\tBA\n", name.replace('_', "-"));
        for sn in &c.sn {
            let ba = c.ba.iter().find(|p| p.nodes == sn.nodes);
            text.push_str(&format!(
                "{}\t{}\t{}\n",
                sn.nodes,
                cell(column(sn)),
                cell(ba.and_then(column))
            ));
        }
        let path = dir.join(format!("growth_{name}.dat"));
        fs::write(&path, text).map_err(io_err(&path))?;
    }
    write_json(c, &dir.join("growth_comparison.json"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distance::DistanceConfig;
    use crate::structure::{Alphabet, DuplicationLaw, EditProbabilities, Structure};

    fn small_instance() -> Instance {
        let alphabet = Alphabet::new("AT".chars()).unwrap();
        Instance {
            initial_structures: vec![Structure::parse("ATATATAT", &alphabet).unwrap()],
            alphabet,
            probs: EditProbabilities::mutate_only(),
            distance: DistanceConfig::new(2, 1, None).unwrap(),
            target_nodes: 40,
            max_attempts: 4000,
            mode: GrowthMode::Incremental,
            prune_min_degree: 0,
            max_structure_len: 10_000,
            duplication_law: DuplicationLaw::default(),
            seed: 3,
        }
    }

    #[test]
    fn single_seed_summary_has_zero_spread() {
        let cfg = ExperimentConfig::sn(small_instance(), 1);
        let s = run_experiment(&cfg).unwrap();
        assert_eq!(s.n_seeds, 1);
        let k = &s.metrics["average_degree"];
        assert_eq!(k.std, 0.0);
        assert_eq!(k.mean, s.seeds[0].metrics["average_degree"]);
        assert_eq!(s.discrepancy.within_10, 1.0);
    }

    #[test]
    fn population_std() {
        let m = MetricSummary::of(&[1.0, 3.0]).unwrap();
        assert_eq!(m.mean, 2.0);
        assert_eq!(m.std, 1.0);
        assert!(MetricSummary::of(&[]).is_none());
    }

    #[test]
    fn discrepancy_against_configured_reference() {
        let mut cfg = ExperimentConfig::sn(small_instance(), 3);
        cfg.discrepancy_metrics = vec!["average_degree".into()];
        cfg.discrepancy_reference.insert("average_degree".into(), 1e6);
        let s = run_experiment(&cfg).unwrap();
        assert_eq!(s.discrepancy.within_20, 0.0);
        assert_eq!(s.discrepancy.configured, vec!["average_degree".to_string()]);
    }

    #[test]
    fn single_checkpoint_gives_single_rows() {
        let ba = BaParams {
            initial_clique: 3,
            edges_per_node: 2,
            target_nodes: 0,
            seed: 1,
        };
        let dir = tempfile::tempdir().unwrap();
        let c = run_growth_comparison(&small_instance(), &ba, &[30], 2, Some(dir.path())).unwrap();
        assert_eq!(c.sn.len(), 1);
        assert_eq!(c.ba.len(), 1);
        let text = fs::read_to_string(dir.path().join("growth_average_degree.dat")).unwrap();
        assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 1);
        assert!(run_growth_comparison(&small_instance(), &ba, &[30, 20], 2, None).is_err());
    }
}
