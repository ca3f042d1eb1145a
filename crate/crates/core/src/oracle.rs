//! Brute-force ground truth for small instances.
//!
//! The state graph enumerates all `2^n` states with one labeled arc per
//! control word; controllability is exactly strong connectivity of this
//! graph, shortest steering sequences come from breadth-first search over it,
//! and an exhaustive solver finds minimum dominating sets. Everything here is
//! exponential by nature and guarded by configurable size limits.

use thiserror::Error;

use crate::model::{Cbcn, NetworkState, UndirectedGraph, UpdateRule};
use crate::synthesis::ControlSequence;

/// Size guards for the exhaustive procedures.
#[derive(Debug, Clone)]
pub struct OracleConfig {
    /// Maximum `n + |I|`: the state graph holds `2^n * 2^|I|` arcs.
    pub max_state_bits: usize,
    /// Maximum vertex count for the exact dominating-set search.
    pub max_domset_vertices: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            max_state_bits: 20,
            max_domset_vertices: 25,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("state graph needs {bits} bits (variables plus controls), above the limit of {limit}")]
    TooLarge { bits: usize, limit: usize },
    #[error("graph has {vertices} vertices, above the exact-search limit of {limit}")]
    TooManyVertices { vertices: usize, limit: usize },
}

/// The complete transition graph: `successor(s, u)` for every packed state
/// `s` and packed control word `u` (bit `c` of `u` drives the `c`-th
/// controlled variable in ascending order).
#[derive(Debug, Clone)]
pub struct StateGraph {
    n: usize,
    controls: usize,
    succ: Vec<Vec<usize>>,
}

enum PackedRule {
    Input(usize),
    Mask(usize),
}

impl StateGraph {
    pub fn num_states(&self) -> usize {
        1 << self.n
    }

    pub fn num_control_words(&self) -> usize {
        1 << self.controls
    }

    pub fn var_count(&self) -> usize {
        self.n
    }

    pub fn successor(&self, state: usize, word: usize) -> usize {
        self.succ[state][word]
    }

    pub fn successors(&self, state: usize) -> &[usize] {
        &self.succ[state]
    }

    /// All labeled arcs `(state, word, next)`.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(s, row)| row.iter().enumerate().map(move |(u, &t)| (s, u, t)))
    }

    /// True when every state reaches every other state.
    ///
    /// One forward and one backward reachability pass from state 0: the graph
    /// is strongly connected exactly when both passes see everything.
    pub fn strongly_connected(&self) -> bool {
        let states = self.num_states();
        if !self.full_reach(|s| self.succ[s].iter().copied()) {
            return false;
        }
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); states];
        for (s, _, t) in self.arcs() {
            preds[t].push(s);
        }
        self.full_reach(|s| preds[s].iter().copied())
    }

    fn full_reach<'a, I, F>(&'a self, neighbors: F) -> bool
    where
        I: Iterator<Item = usize> + 'a,
        F: Fn(usize) -> I,
    {
        let states = self.num_states();
        let mut seen = vec![false; states];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(s) = stack.pop() {
            for t in neighbors(s) {
                if !seen[t] {
                    seen[t] = true;
                    count += 1;
                    stack.push(t);
                }
            }
        }
        count == states
    }

    /// DOT text with states rendered as bit strings (leftmost bit is `X1`)
    /// and arcs labeled by their control word.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph states {\n");
        for s in 0..self.num_states() {
            out.push_str(&format!(
                "    \"{}\";\n",
                NetworkState::from_index(self.n, s)
            ));
        }
        for (s, u, t) in self.arcs() {
            let from = NetworkState::from_index(self.n, s);
            let to = NetworkState::from_index(self.n, t);
            if self.controls == 0 {
                out.push_str(&format!("    \"{from}\" -> \"{to}\";\n"));
            } else {
                let label: String = (0..self.controls)
                    .map(|c| if u >> c & 1 == 1 { '1' } else { '0' })
                    .collect();
                out.push_str(&format!(
                    "    \"{from}\" -> \"{to}\" [label=\"{label}\"];\n"
                ));
            }
        }
        out.push_str("}\n");
        out
    }
}

fn packed_rules(net: &Cbcn) -> Vec<PackedRule> {
    let mut column = 0;
    net.vars()
        .map(|v| match net.rule(v) {
            UpdateRule::Controlled => {
                let rule = PackedRule::Input(column);
                column += 1;
                rule
            }
            UpdateRule::Conjunction(set) => {
                PackedRule::Mask(set.iter().fold(0usize, |m, &j| m | 1 << (j - 1)))
            }
        })
        .collect()
}

/// Builds the full transition graph of `net`.
pub fn state_graph(net: &Cbcn, config: &OracleConfig) -> Result<StateGraph, OracleError> {
    let n = net.var_count();
    let controls = net.num_controls();
    let bits = n + controls;
    if bits > config.max_state_bits {
        return Err(OracleError::TooLarge {
            bits,
            limit: config.max_state_bits,
        });
    }
    let rules = packed_rules(net);
    let words = 1usize << controls;
    let succ = (0..1usize << n)
        .map(|s| {
            (0..words)
                .map(|u| {
                    rules.iter().enumerate().fold(0usize, |next, (slot, rule)| {
                        let bit = match rule {
                            PackedRule::Input(c) => u >> c & 1 == 1,
                            PackedRule::Mask(m) => s & m == *m,
                        };
                        next | (bit as usize) << slot
                    })
                })
                .collect()
        })
        .collect();
    Ok(StateGraph { n, controls, succ })
}

/// Ground-truth controllability: strong connectivity of the state graph.
pub fn oracle_controllable(net: &Cbcn, config: &OracleConfig) -> Result<bool, OracleError> {
    Ok(state_graph(net, config)?.strongly_connected())
}

/// A minimum-length control sequence steering `a` to `b`, or `None` when `b`
/// is unreachable. Found by breadth-first search on the state graph.
pub fn shortest_steering(
    net: &Cbcn,
    a: &NetworkState,
    b: &NetworkState,
    config: &OracleConfig,
) -> Result<Option<ControlSequence>, OracleError> {
    let sg = state_graph(net, config)?;
    let controls = net.num_controls();
    let (start, goal) = (a.to_index(), b.to_index());
    if start == goal {
        return Ok(Some(ControlSequence::empty(controls)));
    }

    let mut parent: Vec<Option<(usize, usize)>> = vec![None; sg.num_states()];
    let mut queue = std::collections::VecDeque::from([start]);
    let mut seen = vec![false; sg.num_states()];
    seen[start] = true;
    while let Some(s) = queue.pop_front() {
        for (word, &t) in sg.successors(s).iter().enumerate() {
            if seen[t] {
                continue;
            }
            seen[t] = true;
            parent[t] = Some((s, word));
            if t == goal {
                let mut words = Vec::new();
                let mut cur = goal;
                while cur != start {
                    let (prev, w) = parent[cur].unwrap();
                    words.push(w);
                    cur = prev;
                }
                words.reverse();
                let steps = words
                    .into_iter()
                    .map(|w| (0..controls).map(|c| w >> c & 1 == 1).collect())
                    .collect();
                return Ok(Some(
                    ControlSequence::new(controls, steps).expect("uniform width"),
                ));
            }
            queue.push_back(t);
        }
    }
    Ok(None)
}

/// A minimum dominating set together with the budget decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomsetSolution {
    /// The lexicographically smallest minimum dominating set, ascending.
    pub set: Vec<usize>,
    /// `Some(|set| <= k)` when a budget `k` was given.
    pub decision: Option<bool>,
}

impl DomsetSolution {
    pub fn gamma(&self) -> usize {
        self.set.len()
    }
}

/// Exhaustive minimum dominating set, by increasing cardinality and
/// lexicographic order within each cardinality. Isolated vertices belong to
/// every dominating set and are forced in.
pub fn min_dominating_set(
    g: &UndirectedGraph,
    k: Option<usize>,
    config: &OracleConfig,
) -> Result<DomsetSolution, OracleError> {
    let n = g.vertex_count();
    // The cover masks hold one bit per vertex.
    let limit = config.max_domset_vertices.min(usize::BITS as usize);
    if n > limit {
        return Err(OracleError::TooManyVertices { vertices: n, limit });
    }

    let closed: Vec<usize> = g
        .vertices()
        .map(|v| {
            g.neighbors(v)
                .iter()
                .fold(1usize << (v - 1), |m, &u| m | 1 << (u - 1))
        })
        .collect();
    let full = if n == usize::BITS as usize {
        usize::MAX
    } else {
        (1usize << n) - 1
    };

    let isolated = g.isolated_vertices();
    let forced_cover = isolated.iter().fold(0usize, |m, &v| m | 1 << (v - 1));
    let candidates: Vec<usize> = g.vertices().filter(|&v| g.degree(v) > 0).collect();

    // Union of closed neighborhoods over each candidate suffix, for pruning
    // branches that can no longer cover everything.
    let mut suffix = vec![0usize; candidates.len() + 1];
    for (i, &v) in candidates.iter().enumerate().rev() {
        suffix[i] = suffix[i + 1] | closed[v - 1];
    }

    struct Search<'a> {
        candidates: &'a [usize],
        closed: &'a [usize],
        suffix: &'a [usize],
        full: usize,
    }

    impl Search<'_> {
        fn run(
            &self,
            from: usize,
            cover: usize,
            left: usize,
            chosen: &mut Vec<usize>,
        ) -> Option<Vec<usize>> {
            if left == 0 {
                return (cover == self.full).then(|| chosen.clone());
            }
            if cover | self.suffix[from] != self.full {
                return None;
            }
            for i in from..=self.candidates.len().saturating_sub(left) {
                let v = self.candidates[i];
                chosen.push(v);
                let found = self.run(i + 1, cover | self.closed[v - 1], left - 1, chosen);
                chosen.pop();
                if found.is_some() {
                    return found;
                }
            }
            None
        }
    }

    let search = Search {
        candidates: &candidates,
        closed: &closed,
        suffix: &suffix,
        full,
    };
    let mut best = None;
    for size in 0..=candidates.len() {
        let mut chosen = Vec::with_capacity(size);
        if let Some(extra) = search.run(0, forced_cover, size, &mut chosen) {
            let mut set = isolated.clone();
            set.extend(extra);
            set.sort_unstable();
            best = Some(set);
            break;
        }
    }
    let set = best.expect("the full vertex set always dominates");
    let decision = k.map(|k| set.len() <= k);
    Ok(DomsetSolution { set, decision })
}
