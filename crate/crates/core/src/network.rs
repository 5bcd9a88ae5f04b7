//! Undirected simple graphs with optional per-node structures.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::structure::{EditKind, Structure};

/// How a node entered the network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "origin", rename_all = "lowercase")]
pub enum Provenance {
    Initial,
    Derived {
        /// Template node; `None` once the template has been removed.
        parent: Option<usize>,
        edit: EditKind,
        attempt: usize,
    },
}

/// An undirected simple graph on nodes `0..n`.
///
/// Adjacency lists are kept sorted. Structured networks carry one
/// [`Structure`] and one [`Provenance`] per node; networks read from edge
/// lists or produced by the preferential-attachment baseline carry none.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
    structures: Vec<Structure>,
    provenance: Vec<Provenance>,
    pruned: bool,
}

impl Network {
    /// A structureless graph with `n` nodes and no edges.
    pub fn empty(n: usize) -> Self {
        Self {
            adjacency: vec![Vec::new(); n],
            edge_count: 0,
            structures: Vec::new(),
            provenance: Vec::new(),
            pruned: false,
        }
    }

    pub(crate) fn with_structures(structures: Vec<Structure>, provenance: Vec<Provenance>) -> Self {
        debug_assert_eq!(structures.len(), provenance.len());
        let mut net = Self::empty(structures.len());
        net.structures = structures;
        net.provenance = provenance;
        net
    }

    /// Build a structureless graph. Duplicate edges are merged; self-loops and
    /// out-of-range endpoints are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut net = Self::empty(n);
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Metric(format!("edge ({u}, {v}) has an endpoint >= {n}")));
            }
            if u == v {
                return Err(Error::Metric(format!("self-loop on node {u}")));
            }
            net.adjacency[u].push(v);
            net.adjacency[v].push(u);
        }
        net.normalize();
        Ok(net)
    }

    fn normalize(&mut self) {
        let mut twice = 0;
        for list in &mut self.adjacency {
            list.sort_unstable();
            list.dedup();
            twice += list.len();
        }
        self.edge_count = twice / 2;
    }

    /// Push a node whose neighbours all have smaller ids, given in increasing order.
    pub(crate) fn push_node(&mut self, structure: Option<(Structure, Provenance)>, neighbors: Vec<usize>) {
        let id = self.adjacency.len();
        debug_assert!(neighbors.windows(2).all(|w| w[0] < w[1]));
        for &v in &neighbors {
            debug_assert!(v < id);
            self.adjacency[v].push(id);
        }
        self.edge_count += neighbors.len();
        self.adjacency.push(neighbors);
        if let Some((s, p)) = structure {
            self.structures.push(s);
            self.provenance.push(p);
        }
    }

    pub(crate) fn add_edge_unchecked(&mut self, u: usize, v: usize) {
        self.adjacency[u].push(v);
        self.adjacency[v].push(u);
        self.edge_count += 1;
    }

    pub(crate) fn finish(&mut self) {
        self.normalize();
    }

    pub(crate) fn mark_pruned(&mut self) {
        self.pruned = true;
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.adjacency.iter().map(Vec::len)
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Each edge once, as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn has_structures(&self) -> bool {
        !self.structures.is_empty()
    }

    pub fn structure(&self, v: usize) -> Option<&Structure> {
        self.structures.get(v)
    }

    pub fn structures(&self) -> &[Structure] {
        &self.structures
    }

    pub fn provenance(&self) -> &[Provenance] {
        &self.provenance
    }

    /// True when nodes were removed after growth, so edges no longer follow
    /// the distance rule over the full node set.
    pub fn is_pruned(&self) -> bool {
        self.pruned
    }

    /// The subgraph induced by the nodes with `keep[v]`, relabelled in order.
    pub fn induced(&self, keep: &[bool]) -> Network {
        assert_eq!(keep.len(), self.node_count());
        let mut new_id = vec![usize::MAX; keep.len()];
        let mut next = 0;
        for (v, &k) in keep.iter().enumerate() {
            if k {
                new_id[v] = next;
                next += 1;
            }
        }
        let mut adjacency = Vec::with_capacity(next);
        let mut structures = Vec::new();
        let mut provenance = Vec::new();
        let mut twice = 0;
        for v in (0..keep.len()).filter(|&v| keep[v]) {
            let list: Vec<usize> = self.adjacency[v]
                .iter()
                .filter(|&&w| keep[w])
                .map(|&w| new_id[w])
                .collect();
            twice += list.len();
            adjacency.push(list);
            if let Some(s) = self.structures.get(v) {
                structures.push(s.clone());
            }
            if let Some(p) = self.provenance.get(v) {
                provenance.push(match *p {
                    Provenance::Derived { parent, edit, attempt } => Provenance::Derived {
                        parent: parent.filter(|&q| keep[q]).map(|q| new_id[q]),
                        edit,
                        attempt,
                    },
                    Provenance::Initial => Provenance::Initial,
                });
            }
        }
        Network {
            adjacency,
            edge_count: twice / 2,
            structures,
            provenance,
            pruned: self.pruned,
        }
    }

    /// The network as it was when it had `n` nodes. Exact for append-only growth.
    pub fn prefix(&self, n: usize) -> Network {
        let n = n.min(self.node_count());
        let keep: Vec<bool> = (0..self.node_count()).map(|v| v < n).collect();
        self.induced(&keep)
    }

    /// Relabel node `v` as `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Network {
        assert_eq!(perm.len(), self.node_count());
        let edges = self.edges().map(|(u, v)| (perm[u], perm[v]));
        let mut out = Network::from_edges(self.node_count(), edges).expect("permutation of a simple graph");
        if !self.structures.is_empty() {
            let mut s = self.structures.clone();
            for (v, st) in self.structures.iter().enumerate() {
                s[perm[v]] = st.clone();
            }
            out.structures = s;
            out.provenance = vec![Provenance::Initial; self.node_count()];
        }
        out.pruned = self.pruned;
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_edges_merges_duplicates_and_rejects_loops() {
        let net = Network::from_edges(3, [(0, 1), (1, 0), (1, 2)]).unwrap();
        assert_eq!(net.edge_count(), 2);
        assert_eq!(net.neighbors(1), &[0, 2]);
        assert!(Network::from_edges(3, [(1, 1)]).is_err());
        assert!(Network::from_edges(3, [(0, 3)]).is_err());
    }

    #[test]
    fn induced_relabels() {
        let net = Network::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let sub = net.induced(&[true, false, true, true]);
        assert_eq!(sub.node_count(), 3);
        assert_eq!(sub.edges().collect::<Vec<_>>(), vec![(0, 2), (1, 2)]);
    }

    #[test]
    fn prefix_of_growth_order() {
        let net = Network::from_edges(4, [(0, 1), (0, 2), (1, 3)]).unwrap();
        let p = net.prefix(3);
        assert_eq!(p.edge_count(), 2);
        assert_eq!(net.prefix(10), net);
    }
}
