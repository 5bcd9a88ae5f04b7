//! Structured-node network growth.
//!
//! Incremental growth repeatedly picks a random node, edits a copy of its
//! structure and adds the result as a new node, connected to every existing
//! node within the maximum distance. Candidates that duplicate an existing
//! structure or would be isolated are rejected. Batch growth derives all new
//! structures from the initial nodes only and connects them in a single pass.

use std::collections::HashSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::distance::{DistanceConfig, EncodedStructure, GroupCodec};
use crate::error::{Error, Result};
use crate::network::{Network, Provenance};
use crate::structure::{apply_random_edit_with, Alphabet, DuplicationLaw, EditOutcome, EditProbabilities, Structure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GrowthMode {
    #[default]
    Incremental,
    Batch,
}

/// Default `max_attempts` as a multiple of `target_nodes`.
pub const DEFAULT_ATTEMPTS_PER_NODE: usize = 50;

/// The full parameter set of one growth run.
#[derive(Debug, Clone)]
pub struct Instance {
    pub alphabet: Alphabet,
    pub initial_structures: Vec<Structure>,
    pub probs: EditProbabilities,
    pub distance: DistanceConfig,
    pub target_nodes: usize,
    pub max_attempts: usize,
    pub mode: GrowthMode,
    pub prune_min_degree: usize,
    pub max_structure_len: usize,
    pub duplication_law: DuplicationLaw,
    pub seed: u64,
}

impl Instance {
    pub fn validate(&self) -> Result<()> {
        self.probs.validate()?;
        self.distance.validate()?;
        if self.initial_structures.is_empty() {
            return Err(Error::Instance("at least one initial structure is required".into()));
        }
        let mut seen = HashSet::new();
        for s in &self.initial_structures {
            if !s.is_over(&self.alphabet) {
                return Err(Error::Instance(format!(
                    "initial structure {s} is not over the alphabet"
                )));
            }
            if s.len() > self.max_structure_len {
                return Err(Error::Instance(format!(
                    "initial structure {s} exceeds max_structure_length {}",
                    self.max_structure_len
                )));
            }
            if !seen.insert(s) {
                return Err(Error::Instance(format!(
                    "initial structures must be distinct; {s} repeats"
                )));
            }
        }
        if self.target_nodes < self.initial_structures.len() {
            return Err(Error::Instance(format!(
                "target_nodes ({}) is smaller than the number of initial structures ({})",
                self.target_nodes,
                self.initial_structures.len()
            )));
        }
        if self.max_attempts < self.target_nodes {
            return Err(Error::Instance(format!(
                "max_attempts ({}) must be at least target_nodes ({})",
                self.max_attempts, self.target_nodes
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub nodes: usize,
    pub edges: usize,
    pub attempts: usize,
}

/// Bookkeeping of a growth run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthTrace {
    pub checkpoints: Vec<Checkpoint>,
    pub attempts: usize,
    pub accepted: usize,
    pub rejected_duplicate: usize,
    pub rejected_isolated: usize,
    pub rejected_edit_failed: usize,
}

impl GrowthTrace {
    fn record(&mut self, net: &Network) {
        self.checkpoints.push(Checkpoint {
            nodes: net.node_count(),
            edges: net.edge_count(),
            attempts: self.attempts,
        });
    }
}

#[derive(Debug, Clone)]
pub struct GrowthResult {
    pub network: Network,
    pub trace: GrowthTrace,
    /// `max_attempts` ran out (or nodes were dropped) before `target_nodes` was reached.
    pub saturated: bool,
}

/// Seed the initial nodes and connect them with the distance rule.
fn seed_network(instance: &Instance, codec: &mut GroupCodec) -> (Network, Vec<EncodedStructure>) {
    let mut net = Network::with_structures(Vec::new(), Vec::new());
    let mut encoded: Vec<EncodedStructure> = Vec::new();
    for s in &instance.initial_structures {
        let e = codec.encode(s);
        let neighbors: Vec<usize> = (0..encoded.len()).filter(|&v| codec.within(&encoded[v], &e)).collect();
        net.push_node(Some((s.clone(), Provenance::Initial)), neighbors);
        encoded.push(e);
    }
    (net, encoded)
}

pub fn grow_incremental<R: Rng + ?Sized>(instance: &Instance, rng: &mut R) -> Result<GrowthResult> {
    instance.validate()?;
    let mut codec = GroupCodec::new(&instance.distance);
    let (mut net, mut encoded) = seed_network(instance, &mut codec);
    let mut present: HashSet<Structure> = instance.initial_structures.iter().cloned().collect();
    let mut trace = GrowthTrace::default();
    trace.record(&net);

    while net.node_count() < instance.target_nodes && trace.attempts < instance.max_attempts {
        trace.attempts += 1;
        let template = rng.random_range(0..net.node_count());
        let parent = net.structure(template).expect("structured network");
        let (kind, candidate) = match apply_random_edit_with(
            parent,
            &instance.probs,
            &instance.alphabet,
            instance.max_structure_len,
            instance.duplication_law,
            rng,
        ) {
            EditOutcome::Applied { kind, structure } => (kind, structure),
            EditOutcome::Failed { .. } => {
                trace.rejected_edit_failed += 1;
                continue;
            }
        };
        if present.contains(&candidate) {
            trace.rejected_duplicate += 1;
            continue;
        }
        let e = codec.encode(&candidate);
        let neighbors: Vec<usize> = encoded
            .iter()
            .enumerate()
            .filter(|(_, other)| codec.within(other, &e))
            .map(|(v, _)| v)
            .collect();
        if neighbors.is_empty() {
            trace.rejected_isolated += 1;
            continue;
        }
        present.insert(candidate.clone());
        let prov = Provenance::Derived {
            parent: Some(template),
            edit: kind,
            attempt: trace.attempts,
        };
        net.push_node(Some((candidate, prov)), neighbors);
        encoded.push(e);
        trace.accepted += 1;
        trace.record(&net);
    }
    let saturated = net.node_count() < instance.target_nodes;
    if saturated {
        log::warn!(
            "growth saturated: {} of {} nodes after {} attempts",
            net.node_count(),
            instance.target_nodes,
            trace.attempts
        );
    }
    Ok(GrowthResult {
        network: net,
        trace,
        saturated,
    })
}

pub fn grow_batch<R: Rng + ?Sized>(instance: &Instance, rng: &mut R) -> Result<GrowthResult> {
    instance.validate()?;
    let initial = &instance.initial_structures;
    let mut structures: Vec<Structure> = initial.clone();
    let mut provenance = vec![Provenance::Initial; initial.len()];
    let mut present: HashSet<Structure> = initial.iter().cloned().collect();
    let mut trace = GrowthTrace::default();

    while structures.len() < instance.target_nodes && trace.attempts < instance.max_attempts {
        trace.attempts += 1;
        let template = rng.random_range(0..initial.len());
        match apply_random_edit_with(
            &initial[template],
            &instance.probs,
            &instance.alphabet,
            instance.max_structure_len,
            instance.duplication_law,
            rng,
        ) {
            EditOutcome::Applied { kind, structure } => {
                if present.insert(structure.clone()) {
                    structures.push(structure);
                    provenance.push(Provenance::Derived {
                        parent: Some(template),
                        edit: kind,
                        attempt: trace.attempts,
                    });
                } else {
                    trace.rejected_duplicate += 1;
                }
            }
            EditOutcome::Failed { .. } => trace.rejected_edit_failed += 1,
        }
    }

    let mut codec = GroupCodec::new(&instance.distance);
    let encoded: Vec<EncodedStructure> = structures.iter().map(|s| codec.encode(s)).collect();
    let mut full = Network::with_structures(structures, provenance);
    for u in 0..encoded.len() {
        for v in u + 1..encoded.len() {
            if codec.within(&encoded[u], &encoded[v]) {
                full.add_edge_unchecked(u, v);
            }
        }
    }
    full.finish();
    trace.record(&full);

    let keep: Vec<bool> = full.degrees().map(|d| d > 0).collect();
    let derived_dropped = keep
        .iter()
        .zip(full.provenance())
        .filter(|(k, p)| !**k && matches!(p, Provenance::Derived { .. }))
        .count();
    let network = if keep.iter().all(|&k| k) {
        full
    } else {
        full.induced(&keep)
    };
    trace.rejected_isolated = derived_dropped;
    trace.accepted = network
        .provenance()
        .iter()
        .filter(|p| matches!(p, Provenance::Derived { .. }))
        .count();
    trace.record(&network);
    let saturated = network.node_count() < instance.target_nodes;
    Ok(GrowthResult {
        network,
        trace,
        saturated,
    })
}

/// Grow according to `instance.mode`, then prune if `prune_min_degree > 0`.
pub fn grow<R: Rng + ?Sized>(instance: &Instance, rng: &mut R) -> Result<GrowthResult> {
    let mut result = match instance.mode {
        GrowthMode::Incremental => grow_incremental(instance, rng)?,
        GrowthMode::Batch => grow_batch(instance, rng)?,
    };
    if instance.prune_min_degree > 0 {
        result.network = prune_low_degree(&result.network, instance.prune_min_degree);
    }
    Ok(result)
}

/// Remove, in a single pass, every node whose degree is below `min_degree`.
///
/// Degrees are taken from the input network; nodes are not re-examined after
/// their neighbours disappear.
pub fn prune_low_degree(net: &Network, min_degree: usize) -> Network {
    if min_degree == 0 {
        return net.clone();
    }
    let keep: Vec<bool> = net.degrees().map(|d| d >= min_degree).collect();
    let mut out = net.induced(&keep);
    out.mark_pruned();
    out
}
