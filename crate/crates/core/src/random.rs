//! Seeded random project networks for benchmarks and property tests.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::network::Activity;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomProjectParams {
    pub min_nodes: usize,
    pub max_nodes: usize,
    pub min_arcs: usize,
    pub max_arcs: usize,
    pub min_duration: i64,
    pub max_duration: i64,
}

impl Default for RandomProjectParams {
    fn default() -> Self {
        RandomProjectParams {
            min_nodes: 5,
            max_nodes: 12,
            min_arcs: 6,
            max_arcs: 25,
            min_duration: 1,
            max_duration: 100,
        }
    }
}

/// Spreadsheet-style activity names: A, B, ..., Z, AA, AB, ...
pub fn activity_name(mut index: usize) -> String {
    let mut name = Vec::new();
    loop {
        name.push(b'A' + (index % 26) as u8);
        if index < 26 {
            break;
        }
        index = index / 26 - 1;
    }
    name.reverse();
    String::from_utf8(name).expect("ascii")
}

/// A connected acyclic network on nodes `1..=n`, arcs always pointing from a
/// lower to a higher number. Every node other than `1` gets at least one
/// predecessor, so node `1` is the only source; several sinks may remain.
///
/// The arc count is drawn from `[max(min_arcs, n-1), min(max_arcs, n(n-1)/2)]`.
pub fn random_project(params: &RandomProjectParams, seed: u64) -> Vec<Activity> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(params.min_nodes.max(2)..=params.max_nodes.max(2));
    let complete = n * (n - 1) / 2;
    let lo = params.min_arcs.max(n - 1).min(complete);
    let hi = params.max_arcs.min(complete).max(lo);
    let m = rng.random_range(lo..=hi);

    let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(m);
    let mut present = vec![false; n * n];
    for j in 1..n {
        let i = rng.random_range(0..j);
        pairs.push((i, j));
        present[i * n + j] = true;
    }
    let mut rest: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| !present[i * n + j])
        .collect();
    rest.shuffle(&mut rng);
    pairs.extend(rest.into_iter().take(m - pairs.len()));
    pairs.sort_unstable();

    pairs
        .into_iter()
        .enumerate()
        .map(|(k, (i, j))| {
            let d = rng.random_range(params.min_duration..=params.max_duration);
            Activity::fixed(
                activity_name(k),
                (i + 1).to_string(),
                (j + 1).to_string(),
                d,
            )
        })
        .collect()
}
