mod common;

use std::collections::BTreeMap;
use std::path::Path;

use proptest::prelude::*;
use snmodel::distance::{GroupCodec, MatchSemantics};
use snmodel::io::{format_edge_list, format_two_column, parse_edge_list};
use snmodel::metrics::{
    average_clustering, average_degree, clustering_by_degree, heterogeneity_index, motif_census_3, path_length_counts,
    shortest_path_lengths,
};
use snmodel::{structure_distance, Alphabet, DistanceConfig, MatchTable, MetricsOptions, MetricsReport, Network};

use common::*;

fn word(symbols: &'static str, max: usize) -> impl Strategy<Value = String> {
    proptest::collection::vec(proptest::sample::select(symbols.chars().collect::<Vec<_>>()), 1..=max)
        .prop_map(|cs| cs.into_iter().collect())
}

fn graph(max_n: usize) -> impl Strategy<Value = Network> {
    (1..=max_n, 0.0..1.0f64, any::<u64>()).prop_map(|(n, p, seed)| random_graph(n, p, seed))
}

fn table(unit: usize) -> impl Strategy<Value = MatchTable> {
    let tuple = proptest::collection::vec(proptest::sample::select(vec![b'A', b'B', b'C']), unit);
    proptest::collection::vec((tuple.clone(), tuple), 0..6).prop_map(move |pairs| {
        let mut t = MatchTable::empty(unit);
        for (a, b) in pairs {
            t.insert(&a, &b).unwrap();
        }
        t
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn distance_symmetry_identity_bound(a in word("ABC", 24), b in word("ABC", 24), unit in 1usize..=4) {
        let abc = Alphabet::new("ABC".chars()).unwrap();
        let (sa, sb) = (structure(&a, &abc), structure(&b, &abc));
        let cfg = DistanceConfig::new(unit, 0, None).unwrap();
        let d = structure_distance(&sa, &sb, &cfg);
        prop_assert_eq!(d, structure_distance(&sb, &sa, &cfg));
        prop_assert_eq!(structure_distance(&sa, &sa, &cfg), 0);
        prop_assert!(d <= a.len().min(b.len()) / unit);
    }

    #[test]
    fn unit_one_is_prefix_hamming(a in word("ABCD", 30), b in word("ABCD", 30)) {
        let abcd = Alphabet::new("ABCD".chars()).unwrap();
        let cfg = DistanceConfig::new(1, 0, None).unwrap();
        prop_assert_eq!(
            structure_distance(&structure(&a, &abcd), &structure(&b, &abcd), &cfg),
            prefix_hamming(&a, &b)
        );
    }

    #[test]
    fn table_is_symmetric_and_monotone(a in word("ABC", 20), b in word("ABC", 20), t in table(2), extra in table(2)) {
        let abc = Alphabet::new("ABC".chars()).unwrap();
        let (sa, sb) = (structure(&a, &abc), structure(&b, &abc));
        let none = DistanceConfig::new(2, 0, None).unwrap();
        let small = DistanceConfig::new(2, 0, Some(t.clone())).unwrap();
        let mut bigger = t.clone();
        for (x, y) in extra.pairs() {
            bigger.insert(x, y).unwrap();
        }
        let big = DistanceConfig::new(2, 0, Some(bigger.clone())).unwrap();
        let d_small = structure_distance(&sa, &sb, &small);
        prop_assert_eq!(d_small, structure_distance(&sb, &sa, &small));
        prop_assert!(d_small <= structure_distance(&sa, &sb, &none));
        prop_assert!(structure_distance(&sa, &sb, &big) <= d_small);

        // the same holds among replace-mode tables
        let rs = DistanceConfig::new(2, 0, Some(t.with_semantics(MatchSemantics::Replace))).unwrap();
        let rb = DistanceConfig::new(2, 0, Some(bigger.with_semantics(MatchSemantics::Replace))).unwrap();
        let d_rs = structure_distance(&sa, &sb, &rs);
        prop_assert_eq!(d_rs, structure_distance(&sb, &sa, &rs));
        prop_assert!(structure_distance(&sa, &sb, &rb) <= d_rs);
        prop_assert!(d_small <= d_rs);
    }

    #[test]
    fn codec_agrees_with_direct_distance(
        words in proptest::collection::vec(word("ABC", 16), 2..8),
        unit in 1usize..=3,
        t in table(2),
        replace in any::<bool>(),
        max in 0usize..4,
    ) {
        let abc = Alphabet::new("ABC".chars()).unwrap();
        let table = (unit == 2).then(|| {
            t.with_semantics(if replace { MatchSemantics::Replace } else { MatchSemantics::Union })
        });
        let cfg = DistanceConfig::new(unit, max, table).unwrap();
        let mut codec = GroupCodec::new(&cfg);
        let structures: Vec<_> = words.iter().map(|w| structure(w, &abc)).collect();
        let encoded: Vec<_> = structures.iter().map(|s| codec.encode(s)).collect();
        for i in 0..structures.len() {
            for j in 0..structures.len() {
                let d = structure_distance(&structures[i], &structures[j], &cfg);
                prop_assert_eq!(codec.distance(&encoded[i], &encoded[j]), d);
                prop_assert_eq!(codec.within(&encoded[i], &encoded[j]), d <= max);
            }
        }
    }

    #[test]
    fn motif_census_matches_brute_force(net in graph(30)) {
        prop_assume!(net.node_count() >= 3);
        let census = motif_census_3(&net).unwrap();
        prop_assert_eq!(census.counts, brute_force_motifs(&net));
        prop_assert!((census.fractions.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn bfs_matches_floyd_warshall(net in graph(50)) {
        let fw = floyd_warshall(&net);
        let bfs = shortest_path_lengths(&net);
        let mut expected = BTreeMap::new();
        for (u, row) in fw.iter().enumerate() {
            for (v, d) in row.iter().enumerate().skip(u + 1) {
                if let Some(d) = d {
                    expected.insert((u, v), *d);
                }
            }
        }
        prop_assert_eq!(&bfs, &expected);
        let counts = path_length_counts(&net);
        let mean = (!expected.is_empty())
            .then(|| expected.values().sum::<usize>() as f64 / expected.len() as f64);
        match (counts.average(), mean) {
            (Some(a), Some(b)) => prop_assert!((a - b).abs() < 1e-12),
            (a, b) => prop_assert_eq!(a, b),
        }
    }

    #[test]
    fn metrics_ignore_node_labels(net in graph(40), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut perm: Vec<usize> = (0..net.node_count()).collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let other = net.permuted(&perm);
        let opts = MetricsOptions::default();
        let (a, b) = (MetricsReport::compute(&net, &opts), MetricsReport::compute(&other, &opts));
        prop_assert_eq!(a.n_edges, b.n_edges);
        prop_assert_eq!(&a.degree_distribution, &b.degree_distribution);
        prop_assert_eq!(&a.path_length_distribution, &b.path_length_distribution);
        prop_assert_eq!(a.motif_census.map(|m| m.counts), b.motif_census.map(|m| m.counts));
        prop_assert!((average_clustering(&net) - average_clustering(&other)).abs() < 1e-12);
        let (ca, cb) = (clustering_by_degree(&net), clustering_by_degree(&other));
        prop_assert_eq!(ca.len(), cb.len());
        for (k, v) in &ca {
            prop_assert!((v - cb[k]).abs() < 1e-12);
        }
        match (a.heterogeneity, b.heterogeneity) {
            (Some(x), Some(y)) => prop_assert!((x - y).abs() < 1e-12),
            (x, y) => prop_assert_eq!(x, y),
        }
        prop_assert_eq!(a.largest_component_fraction, b.largest_component_fraction);
    }

    #[test]
    fn report_invariants(net in graph(40)) {
        let r = MetricsReport::compute(&net, &MetricsOptions::default());
        prop_assert!((r.degree_distribution.values().sum::<f64>() - 1.0).abs() < 1e-9);
        if !r.path_length_distribution.is_empty() {
            prop_assert!((r.path_length_distribution.values().sum::<f64>() - 1.0).abs() < 1e-9);
        }
        prop_assert!((0.0..=1.0).contains(&r.average_clustering));
        prop_assert_eq!(r.average_degree, 2.0 * r.n_edges as f64 / r.n_nodes as f64);
        prop_assert_eq!(r.average_degree, average_degree(&net));
        if let Some(h) = r.heterogeneity {
            prop_assert!((-1e-12..=1.0 + 1e-12).contains(&h));
        }
    }

    #[test]
    fn edge_list_round_trip(net in graph(60)) {
        let text = format_edge_list(&net);
        let back = parse_edge_list(&text, Path::new("mem")).unwrap();
        prop_assert_eq!(back.edges().collect::<Vec<_>>(), net.edges().collect::<Vec<_>>());
        prop_assert_eq!(back.node_count(), net.node_count());
    }
}

#[test]
fn heterogeneity_on_regular_graphs_and_stars() {
    for n in 3..=50 {
        let h = heterogeneity_index(&star(n)).unwrap();
        assert!((h - 1.0).abs() < 1e-9, "star {n}: {h}");
        assert!(heterogeneity_index(&circulant(n, &[1])).unwrap().abs() < 1e-9);
        if n >= 6 {
            assert!(heterogeneity_index(&circulant(n, &[1, 2])).unwrap().abs() < 1e-9);
        }
        if n % 2 == 0 && n >= 4 {
            // odd degree: 3-regular with antipodal chords
            let g = circulant(n, &[1, n / 2]);
            assert!(g.degrees().all(|d| d == 3));
            assert!(heterogeneity_index(&g).unwrap().abs() < 1e-9);
        }
    }
}

#[test]
fn two_column_files_sum_to_one() {
    let net = random_graph(40, 0.1, 4);
    let r = MetricsReport::compute(&net, &MetricsOptions::default());
    let text = format_two_column(
        "degree-distribution",
        r.degree_distribution.iter().map(|(&k, &p)| (k, p)),
    );
    let total: f64 = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split('\t').nth(1).unwrap().parse::<f64>().unwrap())
        .sum();
    assert!((total - 1.0).abs() < 1e-9);
}
