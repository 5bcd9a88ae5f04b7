mod common;

use std::collections::HashSet;
use std::path::Path;

use snmodel::config::{load_instance_file, parse_instance_file, Model};
use snmodel::distance::MatchSemantics;
use snmodel::experiment::{generate, run_experiment};
use snmodel::metrics::connected_components;
use snmodel::{
    grow, grow_batch, grow_incremental, parse_match_file, rng_from_seed, structure_distance, within_max_distance,
    Alphabet, DistanceConfig, DuplicationLaw, EditProbabilities, GrowthMode, Instance, Network,
};

use common::structure;

fn instance(
    alpha: &str,
    initial: &[&str],
    probs: EditProbabilities,
    distance: DistanceConfig,
    target: usize,
) -> Instance {
    let alphabet = Alphabet::new(alpha.chars()).unwrap();
    Instance {
        initial_structures: initial.iter().map(|w| structure(w, &alphabet)).collect(),
        alphabet,
        probs,
        distance,
        target_nodes: target,
        max_attempts: target * 50,
        mode: GrowthMode::Incremental,
        prune_min_degree: 0,
        max_structure_len: 10_000,
        duplication_law: DuplicationLaw::StartThenLength,
        seed: 0,
    }
}

fn assert_biconditional(net: &Network, cfg: &DistanceConfig) {
    let s = net.structures();
    for u in 0..net.node_count() {
        for v in u + 1..net.node_count() {
            assert_eq!(
                net.has_edge(u, v),
                within_max_distance(&s[u], &s[v], cfg),
                "pair ({u}, {v}): {} vs {} at distance {}",
                s[u],
                s[v],
                structure_distance(&s[u], &s[v], cfg)
            );
        }
    }
}

fn instances() -> Vec<Instance> {
    let ab = Alphabet::new("AB".chars()).unwrap();
    let atc = Alphabet::new("ATC".chars()).unwrap();
    let table = parse_match_file("AA = BB\n", 2, &ab).unwrap();
    let ecoli = parse_match_file("AT = TA\n", 2, &atc).unwrap();
    let mixed = EditProbabilities::new(0.4, 0.2, 0.2, 0.2).unwrap();
    let mut v = vec![
        instance(
            "ABC",
            &["ABCABC"],
            EditProbabilities::mutate_only(),
            DistanceConfig::new(1, 1, None).unwrap(),
            300,
        ),
        instance(
            "AB",
            &["ABABABAB"],
            mixed,
            DistanceConfig::new(2, 1, Some(table)).unwrap(),
            500,
        ),
        instance(
            "AT",
            &["ATATATATATAT"],
            EditProbabilities::mutate_only(),
            DistanceConfig::new(2, 1, None).unwrap(),
            282,
        ),
        instance(
            "ABCD",
            &["ABCDABCD", "ABCDABCA", "DCBA"],
            mixed,
            DistanceConfig::new(1, 2, None).unwrap(),
            400,
        ),
        instance(
            "ATC",
            &["ATCATCTCATCACT"],
            EditProbabilities::new(0.4, 0.0, 0.0, 0.6).unwrap(),
            DistanceConfig::new(2, 1, Some(ecoli.with_semantics(MatchSemantics::Replace))).unwrap(),
            230,
        ),
    ];
    v[4].duplication_law = DuplicationLaw::UniformSegment;
    v
}

#[test]
fn incremental_growth_edges_are_exactly_the_close_pairs() {
    for (i, inst) in instances().into_iter().enumerate() {
        for seed in 0..3 {
            let r = grow_incremental(&inst, &mut rng_from_seed(seed)).unwrap();
            let net = &r.network;
            assert!(net.node_count() <= 500);
            assert_biconditional(net, &inst.distance);

            let distinct: HashSet<_> = net.structures().iter().collect();
            assert_eq!(distinct.len(), net.node_count(), "instance {i}");
            assert!(net.structures().iter().all(|s| s.is_over(&inst.alphabet)));

            let t = &r.trace;
            assert_eq!(
                t.accepted + t.rejected_duplicate + t.rejected_isolated + t.rejected_edit_failed,
                t.attempts
            );
            assert!(t.attempts <= inst.max_attempts);
            assert!(t.checkpoints.windows(2).all(|w| w[0].attempts <= w[1].attempts));
            assert_eq!(net.node_count(), inst.initial_structures.len() + t.accepted);
            if !r.saturated {
                assert_eq!(net.node_count(), inst.target_nodes);
            }
            // each derived node had a neighbour when it arrived
            for v in inst.initial_structures.len()..net.node_count() {
                assert!(net.neighbors(v).iter().any(|&u| u < v), "instance {i}, node {v}");
            }
            if inst.initial_structures.len() == 1 {
                let (_, sizes) = connected_components(net);
                assert_eq!(sizes.len(), 1);
            }
        }
    }
}

#[test]
fn batch_growth_biconditional_among_survivors() {
    for mut inst in instances() {
        inst.mode = GrowthMode::Batch;
        let r = grow_batch(&inst, &mut rng_from_seed(5)).unwrap();
        assert_biconditional(&r.network, &inst.distance);
        assert!(r.network.degrees().all(|d| d > 0));
    }
}

#[test]
fn batch_equals_incremental_without_derived_nodes() {
    for mut inst in instances() {
        inst.target_nodes = inst.initial_structures.len();
        let inc = grow_incremental(&inst, &mut rng_from_seed(1)).unwrap().network;
        inst.mode = GrowthMode::Batch;
        let batch = grow_batch(&inst, &mut rng_from_seed(1)).unwrap().network;
        if inc.degrees().all(|d| d > 0) {
            assert_eq!(inc.edges().collect::<Vec<_>>(), batch.edges().collect::<Vec<_>>());
            assert_eq!(inc.structures(), batch.structures());
        }
    }
}

#[test]
fn two_far_initial_nodes_in_batch_leave_nothing() {
    let mut inst = instance(
        "AB",
        &["AAAA", "BBBB"],
        EditProbabilities::mutate_only(),
        DistanceConfig::new(1, 0, None).unwrap(),
        2,
    );
    inst.mode = GrowthMode::Batch;
    let r = grow_batch(&inst, &mut rng_from_seed(0)).unwrap();
    assert_eq!(r.network.node_count(), 0);
    assert!(r.saturated);
}

#[test]
fn same_seed_same_network() {
    for inst in instances() {
        let a = grow(&inst, &mut rng_from_seed(42)).unwrap().network;
        let b = grow(&inst, &mut rng_from_seed(42)).unwrap().network;
        assert_eq!(a, b);
    }
}

fn configs_dir() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs"))
}

#[test]
fn shipped_instances_parse() {
    let cfg = load_instance_file(&configs_dir().join("celegans.instance"), &[]).unwrap();
    let Model::Sn(i) = &cfg.model else { panic!() };
    assert_eq!(i.alphabet.symbols().collect::<String>(), "AT");
    assert_eq!(i.initial_structures[0].to_string(), "ATATATATATAT");
    assert_eq!(i.probs, EditProbabilities::mutate_only());
    assert_eq!((i.distance.unit_distance, i.target_nodes), (2, 282));

    let cfg = load_instance_file(&configs_dir().join("ecoli.instance"), &[]).unwrap();
    let Model::Sn(i) = &cfg.model else { panic!() };
    assert_eq!((i.probs.p_mutate, i.probs.p_duplicate), (0.4, 0.6));
    assert_eq!((i.distance.unit_distance, i.distance.max_distance), (2, 1));
    let table = i.distance.match_table.as_ref().unwrap();
    assert!(table.declares_equal(b"AT", b"TA"));
    assert_eq!(table.semantics(), MatchSemantics::Replace);
    assert_eq!(i.duplication_law, DuplicationLaw::UniformSegment);

    for name in ["comparison", "batch", "pruned", "ba"] {
        load_instance_file(&configs_dir().join(format!("{name}.instance")), &[]).unwrap();
    }
}

#[test]
fn summary_means_are_the_means_of_the_seed_reports() {
    let text = "alphabet = AT\ninitial = ATATATATATAT\np_mutate = 1\nunit_distance = 2\nmax_distance = 1\n\
                target_nodes = 120\nn_seeds = 7\nseed = 11\n";
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = parse_instance_file(text, Path::new(".")).unwrap();
    cfg.output_directory = Some(dir.path().to_path_buf());
    let summary = run_experiment(&cfg).unwrap();
    assert_eq!(summary.n_seeds, 7);

    // recompute from the files on disk
    let mut degrees = Vec::new();
    let mut clustering = Vec::new();
    for i in 0..7 {
        let seed_dir = dir.path().join(format!("seed_{i:04}"));
        let json: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(seed_dir.join("metrics.json")).unwrap()).unwrap();
        degrees.push(json["average_degree"].as_f64().unwrap());
        clustering.push(json["average_clustering"].as_f64().unwrap());
        let edges = snmodel::io::read_edge_list(&seed_dir.join("edges.tsv")).unwrap();
        let run = generate(&cfg.model, i).unwrap();
        assert_eq!(
            edges.edges().collect::<Vec<_>>(),
            run.network.edges().collect::<Vec<_>>()
        );
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    assert!((summary.metrics["average_degree"].mean - mean(&degrees)).abs() < 1e-12);
    assert!((summary.metrics["average_clustering"].mean - mean(&clustering)).abs() < 1e-12);
    let m = mean(&degrees);
    let std = (degrees.iter().map(|d| (d - m).powi(2)).sum::<f64>() / degrees.len() as f64).sqrt();
    assert!((summary.metrics["average_degree"].std - std).abs() < 1e-12);
    assert!(summary.discrepancy.within_10 <= summary.discrepancy.within_20);
    assert!(dir.path().join("summary.json").exists());
}
