//! Reference computations that share no code path with the library kernels.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use snc::{GraphCode, OrientedGraph};

/// Boolean adjacency matrix built straight from the base-3 digits.
pub fn matrix_from_code(n: usize, mut index: u64) -> Vec<Vec<bool>> {
    let mut adj = vec![vec![false; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            match index % 3 {
                1 => adj[i][j] = true,
                2 => adj[j][i] = true,
                _ => {}
            }
            index /= 3;
        }
    }
    adj
}

pub fn matrix_of(g: &OrientedGraph) -> Vec<Vec<bool>> {
    let n = g.n();
    (0..n).map(|u| (0..n).map(|v| g.has_edge(u, v)).collect()).collect()
}

/// `N2(v)` from the Boolean square of the adjacency matrix.
pub fn second_neighborhood_by_squaring(adj: &[Vec<bool>], v: usize) -> Vec<usize> {
    let n = adj.len();
    let square: Vec<bool> = (0..n).map(|w| (0..n).any(|u| adj[v][u] && adj[u][w])).collect();
    (0..n).filter(|&w| square[w] && !adj[v][w] && w != v).collect()
}

pub fn first_neighborhood(adj: &[Vec<bool>], v: usize) -> Vec<usize> {
    (0..adj.len()).filter(|&w| adj[v][w]).collect()
}

/// Max margin over vertices, by the matrix route.
pub fn delta_by_squaring(adj: &[Vec<bool>]) -> i64 {
    (0..adj.len())
        .map(|v| second_neighborhood_by_squaring(adj, v).len() as i64 - first_neighborhood(adj, v).len() as i64)
        .max()
        .unwrap()
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Labeled oriented graphs on `n` vertices with no sink, by inclusion-exclusion
/// over the set `S` of forced sinks: pairs inside `S` are empty, pairs between
/// `S` and the rest point into `S` or are empty, the rest are free.
pub fn count_without_sinks(n: u64) -> u64 {
    let mut total: i128 = 0;
    for k in 0..=n {
        let rest = n - k;
        let term = binomial(n, k) as i128
            * 2i128.pow((k * rest) as u32)
            * 3i128.pow((rest * rest.saturating_sub(1) / 2) as u32);
        total += if k % 2 == 0 { term } else { -term };
    }
    total as u64
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_graph(rng: &mut ChaCha8Rng, n: usize) -> OrientedGraph {
    let limit = snc::graph::code_space(n).unwrap();
    GraphCode::new(n, rng.gen_range(0..limit)).unwrap().decode()
}
