//! Shared helpers for the exhaustive sweeps and randomized tests.

#![allow(dead_code)]

use std::collections::BTreeSet;

use cbn_control::model::{Cbn, UndirectedGraph};

/// Non-empty subset of `1..=n` from a bit mask in `1..2^n`.
pub fn mask_to_set(n: usize, mask: usize) -> BTreeSet<usize> {
    (1..=n).filter(|i| mask >> (i - 1) & 1 == 1).collect()
}

/// Same subset as a sorted vector, for update sets.
pub fn mask_to_vec(n: usize, mask: usize) -> Vec<usize> {
    (1..=n).filter(|i| mask >> (i - 1) & 1 == 1).collect()
}

/// Number of conjunctive networks with `n` variables: every variable picks
/// one of the `2^n - 1` non-empty update sets.
pub fn cbn_count(n: usize) -> usize {
    (1usize << n) - 1
}

/// All conjunctive networks with `n` variables, enumerated deterministically.
pub fn all_cbns(n: usize) -> impl Iterator<Item = Cbn> {
    let choices = cbn_count(n);
    let total = choices.pow(n as u32);
    (0..total).map(move |mut code| {
        let sets = (0..n)
            .map(|_| {
                let digit = code % choices;
                code /= choices;
                mask_to_vec(n, digit + 1)
            })
            .collect();
        Cbn::new(sets).expect("enumerated update sets are non-empty and in range")
    })
}

/// All `2^n` controlled sets.
pub fn all_control_sets(n: usize) -> impl Iterator<Item = BTreeSet<usize>> {
    (0..1usize << n).map(move |mask| mask_to_set(n, mask))
}

/// Small deterministic generator for reproducible randomized tests.
pub struct XorShift {
    state: u64,
}

impl XorShift {
    pub fn new(seed: u64) -> Self {
        XorShift {
            state: seed.wrapping_mul(0x9e3779b97f4a7c15) | 1,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.state = x;
        x
    }

    /// Uniform value in `0..bound`.
    pub fn below(&mut self, bound: usize) -> usize {
        (self.next_u64() % bound as u64) as usize
    }

    /// True with probability `percent / 100`.
    pub fn chance(&mut self, percent: usize) -> bool {
        self.below(100) < percent
    }
}

/// Random simple graph on `n` vertices without isolated vertices: each edge
/// appears with the given probability, then every isolated vertex gets one
/// random incident edge.
pub fn random_graph_no_isolated(
    rng: &mut XorShift,
    n: usize,
    edge_percent: usize,
) -> UndirectedGraph {
    assert!(n >= 2);
    let mut edges = Vec::new();
    let mut degree = vec![0usize; n + 1];
    for u in 1..=n {
        for v in u + 1..=n {
            if rng.chance(edge_percent) {
                edges.push((u, v));
                degree[u] += 1;
                degree[v] += 1;
            }
        }
    }
    for v in 1..=n {
        if degree[v] == 0 {
            let mut u = 1 + rng.below(n - 1);
            if u >= v {
                u += 1;
            }
            let (a, b) = if u < v { (u, v) } else { (v, u) };
            if !edges.contains(&(a, b)) {
                edges.push((a, b));
                degree[a] += 1;
                degree[b] += 1;
            }
        }
    }
    UndirectedGraph::new(n, &edges).expect("generated edges are simple")
}
