//! Independent reference implementations used as test oracles.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use snmodel::{Alphabet, Network, Structure};

/// G(n, p) from a seed.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Network {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Network::from_edges(n, edges).unwrap()
}

pub fn adjacency_matrix(net: &Network) -> Vec<Vec<bool>> {
    let n = net.node_count();
    let mut m = vec![vec![false; n]; n];
    for (u, v) in net.edges() {
        m[u][v] = true;
        m[v][u] = true;
    }
    m
}

/// Count triples by internal edge count, enumerating all of them.
pub fn brute_force_motifs(net: &Network) -> [u64; 4] {
    let a = adjacency_matrix(net);
    let n = a.len();
    let mut counts = [0u64; 4];
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let e = a[i][j] as usize + a[i][k] as usize + a[j][k] as usize;
                counts[e] += 1;
            }
        }
    }
    counts
}

/// All-pairs hop distances; `None` when unreachable.
pub fn floyd_warshall(net: &Network) -> Vec<Vec<Option<usize>>> {
    let a = adjacency_matrix(net);
    let n = a.len();
    let inf = usize::MAX / 4;
    let mut d = vec![vec![inf; n]; n];
    for i in 0..n {
        d[i][i] = 0;
        for j in 0..n {
            if a[i][j] {
                d[i][j] = 1;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d.into_iter()
        .map(|row| row.into_iter().map(|x| (x < inf).then_some(x)).collect())
        .collect()
}

pub fn star(n: usize) -> Network {
    Network::from_edges(n, (1..n).map(|v| (0, v))).unwrap()
}

/// Circulant graph: `v` is joined to `v ± o` for every offset `o`.
pub fn circulant(n: usize, offsets: &[usize]) -> Network {
    let mut edges = Vec::new();
    for v in 0..n {
        for &o in offsets {
            let w = (v + o) % n;
            if w != v {
                edges.push((v.min(w), v.max(w)));
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    Network::from_edges(n, edges).unwrap()
}

/// Position-wise mismatches over the common prefix.
pub fn prefix_hamming(a: &str, b: &str) -> usize {
    a.chars().zip(b.chars()).filter(|(x, y)| x != y).count()
}

pub fn random_word(rng: &mut impl Rng, symbols: &[char], min: usize, max: usize) -> String {
    let len = rng.random_range(min..=max);
    (0..len).map(|_| symbols[rng.random_range(0..symbols.len())]).collect()
}

pub fn structure(w: &str, a: &Alphabet) -> Structure {
    Structure::parse(w, a).unwrap()
}
