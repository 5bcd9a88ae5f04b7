//! Topological statistics of undirected networks.

use std::collections::{BTreeMap, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::Network;

pub fn average_degree(net: &Network) -> f64 {
    if net.node_count() == 0 {
        return 0.0;
    }
    2.0 * net.edge_count() as f64 / net.node_count() as f64
}

/// Fraction of nodes with each degree.
pub fn degree_distribution(net: &Network) -> BTreeMap<usize, f64> {
    let mut counts: BTreeMap<usize, f64> = BTreeMap::new();
    for d in net.degrees() {
        *counts.entry(d).or_default() += 1.0;
    }
    normalize(counts)
}

fn normalize<K: Ord>(counts: BTreeMap<K, f64>) -> BTreeMap<K, f64> {
    let total: f64 = counts.values().sum();
    counts.into_iter().map(|(k, c)| (k, c / total)).collect()
}

/// Component label per node and the size of each component.
pub fn connected_components(net: &Network) -> (Vec<usize>, Vec<usize>) {
    let n = net.node_count();
    let mut label = vec![usize::MAX; n];
    let mut sizes = Vec::new();
    let mut queue = VecDeque::new();
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        let id = sizes.len();
        label[s] = id;
        queue.push_back(s);
        let mut size = 0;
        while let Some(u) = queue.pop_front() {
            size += 1;
            for &w in net.neighbors(u) {
                if label[w] == usize::MAX {
                    label[w] = id;
                    queue.push_back(w);
                }
            }
        }
        sizes.push(size);
    }
    (label, sizes)
}

pub fn largest_component_fraction(net: &Network) -> f64 {
    let (_, sizes) = connected_components(net);
    match sizes.iter().max() {
        Some(&m) => m as f64 / net.node_count() as f64,
        None => 0.0,
    }
}

fn bfs_from(net: &Network, s: usize, dist: &mut [u32], queue: &mut VecDeque<usize>, mut visit: impl FnMut(usize, u32)) {
    dist.fill(u32::MAX);
    dist[s] = 0;
    queue.clear();
    queue.push_back(s);
    while let Some(u) = queue.pop_front() {
        let du = dist[u];
        for &w in net.neighbors(u) {
            if dist[w] == u32::MAX {
                dist[w] = du + 1;
                visit(w, du + 1);
                queue.push_back(w);
            }
        }
    }
}

/// Hop distance of every connected unordered pair, keyed `(u, v)` with `u < v`.
pub fn shortest_path_lengths(net: &Network) -> BTreeMap<(usize, usize), usize> {
    let n = net.node_count();
    let mut dist = vec![u32::MAX; n];
    let mut queue = VecDeque::new();
    let mut out = BTreeMap::new();
    for s in 0..n {
        bfs_from(net, s, &mut dist, &mut queue, |t, d| {
            if t > s {
                out.insert((s, t), d as usize);
            }
        });
    }
    out
}

/// Counts of connected unordered pairs by hop distance.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PathLengthCounts {
    /// Over all connected pairs.
    pub all: BTreeMap<usize, u64>,
    /// Over pairs inside the largest component.
    pub giant: BTreeMap<usize, u64>,
}

impl PathLengthCounts {
    fn mean(counts: &BTreeMap<usize, u64>) -> Option<f64> {
        let pairs: u64 = counts.values().sum();
        if pairs == 0 {
            return None;
        }
        let total: f64 = counts.iter().map(|(&l, &c)| l as f64 * c as f64).sum();
        Some(total / pairs as f64)
    }

    pub fn average(&self) -> Option<f64> {
        Self::mean(&self.all)
    }

    pub fn giant_average(&self) -> Option<f64> {
        Self::mean(&self.giant)
    }

    pub fn distribution(&self) -> BTreeMap<usize, f64> {
        if self.all.is_empty() {
            return BTreeMap::new();
        }
        normalize(
            self.all
                .iter()
                .map(|(&l, &c)| (l, c as f64))
                .collect::<BTreeMap<_, _>>(),
        )
    }
}

/// Breadth-first search from every node; sources run in parallel.
pub fn path_length_counts(net: &Network) -> PathLengthCounts {
    let n = net.node_count();
    let (label, sizes) = connected_components(net);
    let giant = (0..sizes.len()).max_by_key(|&c| (sizes[c], std::cmp::Reverse(c)));
    let add = |a: &mut Vec<u64>, b: &[u64]| {
        if a.len() < b.len() {
            a.resize(b.len(), 0);
        }
        for (x, y) in a.iter_mut().zip(b) {
            *x += y;
        }
    };
    let (all, in_giant) = (0..n)
        .into_par_iter()
        .map_init(
            || (vec![u32::MAX; n], VecDeque::new()),
            |(dist, queue), s| {
                let mut hist: Vec<u64> = Vec::new();
                bfs_from(net, s, dist, queue, |t, d| {
                    if t > s {
                        let d = d as usize;
                        if hist.len() <= d {
                            hist.resize(d + 1, 0);
                        }
                        hist[d] += 1;
                    }
                });
                let giant_part = if Some(label[s]) == giant {
                    hist.clone()
                } else {
                    Vec::new()
                };
                (hist, giant_part)
            },
        )
        .reduce(
            || (Vec::new(), Vec::new()),
            |(mut a, mut ga), (b, gb)| {
                add(&mut a, &b);
                add(&mut ga, &gb);
                (a, ga)
            },
        );
    let to_map = |v: Vec<u64>| -> BTreeMap<usize, u64> { v.into_iter().enumerate().filter(|&(_, c)| c > 0).collect() };
    PathLengthCounts {
        all: to_map(all),
        giant: to_map(in_giant),
    }
}

pub fn average_path_length(net: &Network) -> Result<f64> {
    path_length_counts(net)
        .average()
        .ok_or_else(|| Error::Metric("average path length needs at least one connected pair".into()))
}

/// Number of triangles through each node.
pub fn triangles_per_node(net: &Network) -> Vec<usize> {
    let n = net.node_count();
    let mut tri = vec![0usize; n];
    let mut mark = vec![usize::MAX; n];
    for u in 0..n {
        for &w in net.neighbors(u) {
            mark[w] = u;
        }
        for &v in net.neighbors(u).iter().filter(|&&v| v > u) {
            for &w in net.neighbors(v).iter().filter(|&&w| w > v) {
                if mark[w] == u {
                    tri[u] += 1;
                    tri[v] += 1;
                    tri[w] += 1;
                }
            }
        }
    }
    tri
}

fn choose2(d: usize) -> f64 {
    (d as f64) * (d as f64 - 1.0) / 2.0
}

fn local_from_triangles(tri: usize, degree: usize) -> f64 {
    if degree < 2 {
        0.0
    } else {
        tri as f64 / choose2(degree)
    }
}

/// Fraction of neighbour pairs of `v` that are adjacent; 0 below degree 2.
pub fn local_clustering(net: &Network, v: usize) -> f64 {
    let nb = net.neighbors(v);
    let links = nb
        .iter()
        .enumerate()
        .map(|(i, &a)| nb[i + 1..].iter().filter(|&&b| net.has_edge(a, b)).count())
        .sum();
    local_from_triangles(links, nb.len())
}

pub fn local_clusterings(net: &Network) -> Vec<f64> {
    triangles_per_node(net)
        .into_iter()
        .enumerate()
        .map(|(v, t)| local_from_triangles(t, net.degree(v)))
        .collect()
}

pub fn average_clustering(net: &Network) -> f64 {
    if net.node_count() == 0 {
        return 0.0;
    }
    local_clusterings(net).iter().sum::<f64>() / net.node_count() as f64
}

/// Mean local clustering of the nodes of each degree.
pub fn clustering_by_degree(net: &Network) -> BTreeMap<usize, f64> {
    clustering_by_degree_from(net, &local_clusterings(net))
}

fn clustering_by_degree_from(net: &Network, local: &[f64]) -> BTreeMap<usize, f64> {
    let mut acc: BTreeMap<usize, (f64, usize)> = BTreeMap::new();
    for (v, &c) in local.iter().enumerate() {
        let e = acc.entry(net.degree(v)).or_default();
        e.0 += c;
        e.1 += 1;
    }
    acc.into_iter().map(|(k, (s, n))| (k, s / n as f64)).collect()
}

/// Triples of nodes by the number of edges among them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MotifCensus {
    pub counts: [u64; 4],
    pub fractions: [f64; 4],
}

/// Three-node census from triangle, wedge and edge counts.
pub fn motif_census_3(net: &Network) -> Result<MotifCensus> {
    let n = net.node_count() as i128;
    if n < 3 {
        return Err(Error::Metric(format!("motif census needs at least 3 nodes, got {n}")));
    }
    let t = triangles_per_node(net).iter().sum::<usize>() as i128 / 3;
    let wedges: i128 = net.degrees().map(|d| (d as i128) * (d as i128 - 1) / 2).sum();
    let m = net.edge_count() as i128;
    let triples = n * (n - 1) * (n - 2) / 6;
    let n3 = t;
    let n2 = wedges - 3 * t;
    let n1 = m * (n - 2) - 2 * n2 - 3 * n3;
    let n0 = triples - n1 - n2 - n3;
    let counts = [n0 as u64, n1 as u64, n2 as u64, n3 as u64];
    let fractions = counts.map(|c| c as f64 / triples as f64);
    Ok(MotifCensus { counts, fractions })
}

/// Normalized sum over edges of `(deg(u)^-1/2 - deg(v)^-1/2)^2`: 0 on
/// regular graphs, 1 on stars.
pub fn heterogeneity_index(net: &Network) -> Result<f64> {
    let n = net.node_count();
    if n <= 2 {
        return Err(Error::Metric(format!(
            "heterogeneity index needs at least 3 nodes, got {n}"
        )));
    }
    let inv_sqrt: Vec<f64> = net.degrees().map(|d| 1.0 / (d as f64).sqrt()).collect();
    let sum: f64 = net
        .edges()
        .map(|(u, v)| {
            let d = inv_sqrt[u] - inv_sqrt[v];
            d * d
        })
        .sum();
    let nf = n as f64;
    Ok(sum / (nf - 2.0 * (nf - 1.0).sqrt()))
}

/// Least-squares line through `(log10 k, log10 P(k))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub slope: f64,
    pub intercept: f64,
    pub k_min: usize,
    pub r_squared: f64,
    pub points: usize,
}

/// Fit `log10 P(k)` against `log10 k` for `k >= k_min`, skipping empty bins
/// (and `k = 0`).
pub fn fit_power_law_slope(hist: &BTreeMap<usize, f64>, k_min: usize) -> Result<PowerLawFit> {
    let pts: Vec<(f64, f64)> = hist
        .range(k_min.max(1)..)
        .filter(|(_, &p)| p > 0.0)
        .map(|(&k, &p)| ((k as f64).log10(), p.log10()))
        .collect();
    if pts.len() < 2 {
        return Err(Error::InsufficientFitPoints(pts.len()));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(PowerLawFit {
        slope,
        intercept,
        k_min,
        r_squared,
        points: pts.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricsOptions {
    /// Smallest degree included in the power-law fit.
    pub fit_k_min: usize,
    /// Skip the all-pairs breadth-first searches.
    pub skip_paths: bool,
}

impl Default for MetricsOptions {
    fn default() -> Self {
        Self {
            fit_k_min: 1,
            skip_paths: false,
        }
    }
}

/// Every statistic of one network. Values that are undefined for the input
/// (too few nodes, no connected pair, too few histogram bins) are `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub n_nodes: usize,
    pub n_edges: usize,
    pub average_degree: f64,
    pub average_path_length: Option<f64>,
    pub giant_average_path_length: Option<f64>,
    pub average_clustering: f64,
    pub degree_distribution: BTreeMap<usize, f64>,
    pub clustering_by_degree: BTreeMap<usize, f64>,
    pub path_length_distribution: BTreeMap<usize, f64>,
    pub motif_census: Option<MotifCensus>,
    pub heterogeneity: Option<f64>,
    pub fitted_gamma: Option<PowerLawFit>,
    pub largest_component_fraction: f64,
}

impl MetricsReport {
    pub fn compute(net: &Network, opts: &MetricsOptions) -> Self {
        let local = local_clusterings(net);
        let average_clustering = if local.is_empty() {
            0.0
        } else {
            local.iter().sum::<f64>() / local.len() as f64
        };
        let degree_distribution = degree_distribution(net);
        let paths = if opts.skip_paths {
            PathLengthCounts::default()
        } else {
            path_length_counts(net)
        };
        Self {
            n_nodes: net.node_count(),
            n_edges: net.edge_count(),
            average_degree: average_degree(net),
            average_path_length: paths.average(),
            giant_average_path_length: paths.giant_average(),
            average_clustering,
            clustering_by_degree: clustering_by_degree_from(net, &local),
            path_length_distribution: paths.distribution(),
            motif_census: motif_census_3(net).ok(),
            heterogeneity: heterogeneity_index(net).ok(),
            fitted_gamma: fit_power_law_slope(&degree_distribution, opts.fit_k_min).ok(),
            degree_distribution,
            largest_component_fraction: largest_component_fraction(net),
        }
    }
}
