//! Edge lists, structure lists, JSON reports and plot-data files.
//!
//! Every text format starts with a versioned `#` header line. Edge lists hold
//! one `id<TAB>id` pair per line with 0-based integer ids; their header also
//! records the node count so isolated nodes survive a round trip.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use log::warn;
use serde::Serialize;

use crate::error::{io_err, Error, Result};
use crate::metrics::MetricsReport;
use crate::network::Network;

pub const EDGE_LIST_HEADER: &str = "# snmodel edge-list v1";
pub const STRUCTURES_HEADER: &str = "# snmodel structures v1";
pub const EDGES_FILE: &str = "edges.tsv";
pub const STRUCTURES_FILE: &str = "structures.tsv";
pub const METRICS_FILE: &str = "metrics.json";

pub fn format_edge_list(net: &Network) -> String {
    let mut out = String::with_capacity(16 * net.edge_count() + 64);
    let _ = writeln!(out, "{EDGE_LIST_HEADER} nodes={}", net.node_count());
    for (u, v) in net.edges() {
        let _ = writeln!(out, "{u}\t{v}");
    }
    out
}

pub fn format_structures(net: &Network) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{STRUCTURES_HEADER}");
    for (v, s) in net.structures().iter().enumerate() {
        let _ = writeln!(out, "{v}\t{s}");
    }
    out
}

fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    fs::write(path, contents).map_err(io_err(path))
}

/// Write `edges.tsv`, plus `structures.tsv` when the network has structures.
pub fn write_network(net: &Network, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let edges = dir.join(EDGES_FILE);
    write_file(&edges, format_edge_list(net))?;
    let mut written = vec![edges];
    if net.has_structures() {
        let path = dir.join(STRUCTURES_FILE);
        write_file(&path, format_structures(net))?;
        written.push(path);
    }
    Ok(written)
}

/// Parse edge-list text. `origin` only labels error messages.
pub fn parse_edge_list(text: &str, origin: &Path) -> Result<Network> {
    let err = |line: usize, message: String| Error::Parse {
        path: origin.to_path_buf(),
        line,
        message,
    };
    let mut declared_nodes = 0usize;
    let mut max_id: Option<usize> = None;
    let mut edges = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(n) = comment.split_whitespace().find_map(|t| t.strip_prefix("nodes=")) {
                declared_nodes = n.parse().map_err(|_| err(lineno, format!("bad node count {n:?}")))?;
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let (a, b) = match (fields.next(), fields.next(), fields.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => return Err(err(lineno, format!("expected two node ids, found {line:?}"))),
        };
        let parse_id = |t: &str| {
            t.parse::<usize>()
                .map_err(|_| err(lineno, format!("node id {t:?} is not a non-negative integer")))
        };
        let (u, v) = (parse_id(a)?, parse_id(b)?);
        if u == v {
            return Err(err(lineno, format!("self-loop on node {u}")));
        }
        let key = (u.min(v), u.max(v));
        if !seen.insert(key) {
            warn!("{}:{lineno}: duplicate edge {u}-{v} ignored", origin.display());
            continue;
        }
        max_id = Some(max_id.map_or(u.max(v), |m| m.max(u).max(v)));
        edges.push(key);
    }
    let n = declared_nodes.max(max_id.map_or(0, |m| m + 1));
    Network::from_edges(n, edges)
}

/// Read an edge list into a structureless network.
pub fn read_edge_list(path: &Path) -> Result<Network> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    parse_edge_list(&text, path)
}

pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_file(path, text)
}

/// Two-column text: a header line, then `x<TAB>y` rows.
pub fn format_two_column<K: std::fmt::Display>(header: &str, rows: impl IntoIterator<Item = (K, f64)>) -> String {
    let mut out = format!("# snmodel {header} v1\n");
    for (k, y) in rows {
        let _ = writeln!(out, "{k}\t{y}");
    }
    out
}

/// Write the per-distribution plot files of a report into `dir`.
pub fn write_distributions(report: &MetricsReport, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut files = vec![
        (
            "degree_distribution.dat",
            format_two_column(
                "degree-distribution",
                report.degree_distribution.iter().map(|(&k, &p)| (k, p)),
            ),
        ),
        (
            "clustering_by_degree.dat",
            format_two_column(
                "clustering-by-degree",
                report.clustering_by_degree.iter().map(|(&k, &c)| (k, c)),
            ),
        ),
        (
            "path_length_distribution.dat",
            format_two_column(
                "path-length-distribution",
                report.path_length_distribution.iter().map(|(&l, &p)| (l, p)),
            ),
        ),
    ];
    if let Some(m) = &report.motif_census {
        files.push((
            "motifs.dat",
            format_two_column("motif-census", m.fractions.iter().enumerate().map(|(i, &f)| (i, f))),
        ));
    }
    let mut written = Vec::new();
    for (name, body) in files {
        let path = dir.join(name);
        write_file(&path, body)?;
        written.push(path);
    }
    Ok(written)
}
