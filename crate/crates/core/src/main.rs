use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use snmodel::config::{load_instance_file, parse_override, ExperimentConfig, Model};
use snmodel::experiment::{generate, run_experiment, run_growth_comparison};
use snmodel::io::{read_edge_list, write_distributions, write_json, write_network, METRICS_FILE};
use snmodel::{prune_low_degree, BaParams, MetricsOptions, MetricsReport, Result};

#[derive(Parser)]
#[command(
    name = "snmodel",
    version,
    about = "Structured-node network growth, baselines and metrics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InstanceArgs {
    /// Instance file (`key = value` lines).
    instance: PathBuf,
    /// Override an instance key, e.g. `--set target_nodes=500`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
}

impl InstanceArgs {
    fn load(&self, extra: &[(&str, Option<String>)]) -> Result<ExperimentConfig> {
        let mut overrides = self
            .overrides
            .iter()
            .map(|s| parse_override(s))
            .collect::<Result<Vec<_>>>()?;
        if let Some(seed) = self.seed {
            overrides.push(("seed".into(), seed.to_string()));
        }
        for (k, v) in extra {
            if let Some(v) = v {
                overrides.push((k.to_string(), v.clone()));
            }
        }
        load_instance_file(&self.instance, &overrides)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Grow one network and write its edges, structures and metrics.
    Generate {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Compute the metrics of an edge-list file.
    Metrics {
        edges: PathBuf,
        /// Smallest degree used in the power-law fit.
        #[arg(long, default_value_t = 1)]
        fit_k_min: usize,
        /// Also write the report and distribution files here.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Run every seed of an instance and summarize.
    Experiment {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        n_seeds: Option<usize>,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Average degree, path length and clustering at checkpoints, SN against BA.
    CompareBa {
        /// SN instance file.
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, default_value_t = 6)]
        clique: usize,
        #[arg(long, default_value_t = 6)]
        edges_per_node: usize,
        #[arg(long, value_delimiter = ',', default_value = "500,1000,1500,2000,2500,3000")]
        checkpoints: Vec<usize>,
        #[arg(long, default_value_t = 20)]
        n_seeds: usize,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Drop every node of degree below the threshold, in one pass.
    Prune {
        edges: PathBuf,
        #[arg(long, default_value_t = 5)]
        min_degree: usize,
        #[arg(long, short)]
        out: PathBuf,
    },
}

fn write_report(net: &snmodel::Network, opts: &MetricsOptions, dir: &Path) -> Result<MetricsReport> {
    let report = MetricsReport::compute(net, opts);
    write_json(&report, &dir.join(METRICS_FILE))?;
    write_distributions(&report, dir)?;
    Ok(report)
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate { instance, out } => {
            let config = instance.load(&[])?;
            let run = generate(&config.model, 0)?;
            write_network(&run.network, &out)?;
            if let Some(trace) = &run.trace {
                write_json(trace, &out.join("trace.json"))?;
            }
            let report = write_report(&run.network, &config.metrics, &out)?;
            eprintln!(
                "seed {}: {} nodes, {} edges{}",
                run.seed,
                report.n_nodes,
                report.n_edges,
                if run.saturated { " (saturated)" } else { "" }
            );
        }
        Command::Metrics { edges, fit_k_min, out } => {
            let net = read_edge_list(&edges)?;
            let opts = MetricsOptions {
                fit_k_min,
                ..Default::default()
            };
            let report = match out {
                Some(dir) => {
                    std::fs::create_dir_all(&dir).map_err(|source| snmodel::Error::Io {
                        path: dir.clone(),
                        source,
                    })?;
                    write_report(&net, &opts, &dir)?
                }
                None => MetricsReport::compute(&net, &opts),
            };
            print_json(&report)?;
        }
        Command::Experiment { instance, n_seeds, out } => {
            let mut config = instance.load(&[("n_seeds", n_seeds.map(|n| n.to_string()))])?;
            config.output_directory = Some(out);
            let summary = run_experiment(&config)?;
            let mut brief = summary.clone();
            brief.seeds.clear();
            print_json(&brief)?;
        }
        Command::CompareBa {
            instance,
            clique,
            edges_per_node,
            checkpoints,
            n_seeds,
            out,
        } => {
            let config = instance.load(&[])?;
            let Model::Sn(sn) = &config.model else {
                return Err(snmodel::Error::Config("compare-ba needs an SN instance".into()));
            };
            let ba = BaParams {
                initial_clique: clique,
                edges_per_node,
                target_nodes: 0,
                seed: sn.seed,
            };
            let comparison = run_growth_comparison(sn, &ba, &checkpoints, n_seeds, Some(&out))?;
            print_json(&comparison)?;
        }
        Command::Prune { edges, min_degree, out } => {
            let net = read_edge_list(&edges)?;
            let pruned = prune_low_degree(&net, min_degree);
            write_network(&pruned, &out)?;
            eprintln!(
                "kept {} of {} nodes, {} edges",
                pruned.node_count(),
                net.node_count(),
                pruned.edge_count()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
