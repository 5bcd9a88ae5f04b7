//! Barabási–Albert preferential attachment baseline.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::Network;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaParams {
    pub initial_clique: usize,
    pub edges_per_node: usize,
    pub target_nodes: usize,
    pub seed: u64,
}

impl BaParams {
    pub fn validate(&self) -> Result<()> {
        if self.initial_clique < 2 {
            return Err(Error::BaParams("initial_clique must be at least 2".into()));
        }
        if self.edges_per_node == 0 {
            return Err(Error::BaParams("edges_per_node must be at least 1".into()));
        }
        if self.edges_per_node > self.initial_clique {
            return Err(Error::BaParams(format!(
                "edges_per_node ({}) exceeds initial_clique ({})",
                self.edges_per_node, self.initial_clique
            )));
        }
        if self.target_nodes < self.initial_clique {
            return Err(Error::BaParams(format!(
                "target_nodes ({}) is smaller than initial_clique ({})",
                self.target_nodes, self.initial_clique
            )));
        }
        Ok(())
    }

    pub fn expected_edges(&self) -> usize {
        let c = self.initial_clique;
        c * (c - 1) / 2 + self.edges_per_node * (self.target_nodes - c)
    }
}

/// Grow a preferential-attachment network from a clique.
///
/// Each new node picks `edges_per_node` distinct targets with probability
/// proportional to degree. Degrees are frozen for the duration of one node's
/// attachment round.
pub fn grow_ba<R: Rng + ?Sized>(params: &BaParams, rng: &mut R) -> Result<Network> {
    params.validate()?;
    let c = params.initial_clique;
    let m = params.edges_per_node;
    let mut net = Network::empty(0);
    // every node appears once per incident edge endpoint
    let mut endpoints: Vec<usize> = Vec::with_capacity(2 * params.expected_edges());
    for v in 0..c {
        net.push_node(None, (0..v).collect());
        for _ in 0..c - 1 {
            endpoints.push(v);
        }
    }
    let mut targets: Vec<usize> = Vec::with_capacity(m);
    for v in c..params.target_nodes {
        targets.clear();
        let frozen = endpoints.len();
        while targets.len() < m {
            let t = endpoints[rng.random_range(0..frozen)];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            endpoints.push(t);
            endpoints.push(v);
        }
        targets.sort_unstable();
        net.push_node(None, targets.clone());
    }
    Ok(net)
}
