//! Structured-node network growth model.
//!
//! Every node carries a word over a finite alphabet. Networks grow by copying
//! and editing the structure of a random existing node; a new node is linked to
//! every node whose structure lies within a maximum generalized Hamming
//! distance. The crate also provides a Barabási–Albert baseline, a
//! topology-metrics engine, file formats and a multi-seed experiment harness.

pub mod ba;
pub mod config;
pub mod distance;
pub mod error;
pub mod experiment;
pub mod growth;
pub mod io;
pub mod metrics;
pub mod network;
pub mod structure;

pub use ba::{grow_ba, BaParams};
pub use config::{load_instance_file, parse_instance_file, ExperimentConfig, Model};
pub use distance::{
    groups_equal, parse_match_file, structure_distance, within_max_distance, DistanceConfig, MatchSemantics, MatchTable,
};
pub use error::{Error, Result};
pub use experiment::{run_experiment, run_growth_comparison, GrowthComparison, SummaryReport};
pub use growth::{
    grow, grow_batch, grow_incremental, prune_low_degree, GrowthMode, GrowthResult, GrowthTrace, Instance,
};
pub use metrics::{MetricsOptions, MetricsReport};
pub use network::{Network, Provenance};
pub use structure::{
    apply_random_edit, apply_random_edit_with, delete_symbol, duplicate_segment, insert_symbol, mutate, Alphabet,
    DuplicationLaw, EditKind, EditOutcome, EditProbabilities, Structure,
};

/// The random stream used for every seeded run.
pub type SimRng = rand_chacha::ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SimRng {
    use rand::SeedableRng;
    SimRng::seed_from_u64(seed)
}
