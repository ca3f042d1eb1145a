//! Controllability analysis of controlled networks.
//!
//! A network is controllable exactly when its dependency graph is a DAG and
//! every simple node has a generator or a channel among its in-neighbors
//! (property P). Both checks run in time linear in the size of the graph,
//! which is quadratic in the number of variables. Controllable graphs
//! decompose into disjoint controlled paths, the backbone of control
//! synthesis.

use std::fmt;

use thiserror::Error;

use crate::model::{Cbcn, DependencyGraph, Node};

/// Outcome of the controllability test, with a witness on failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Controllable,
    /// The dependency graph has a cycle; the witness starts and ends at the
    /// same node.
    NotDag {
        cycle: Vec<Node>,
    },
    /// A simple node with neither a generator nor a channel in-neighbor.
    PropertyPViolation {
        node: Node,
    },
}

impl Verdict {
    pub fn is_controllable(&self) -> bool {
        matches!(self, Verdict::Controllable)
    }

    /// Machine-readable reason tag.
    pub fn reason(&self) -> &'static str {
        match self {
            Verdict::Controllable => "ok",
            Verdict::NotDag { .. } => "not_dag",
            Verdict::PropertyPViolation { .. } => "property_p_violation",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Controllable => write!(f, "controllable"),
            Verdict::NotDag { cycle } => {
                write!(f, "not controllable: cycle {}", join_nodes(cycle))
            }
            Verdict::PropertyPViolation { node } => write!(
                f,
                "not controllable: {node} has neither a generator nor a channel in-neighbor"
            ),
        }
    }
}

fn join_nodes(nodes: &[Node]) -> String {
    nodes
        .iter()
        .map(Node::to_string)
        .collect::<Vec<_>>()
        .join(" -> ")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("{verdict}")]
    NotControllable { verdict: Verdict },
    #[error("dependency graph has a cycle: {}", join_nodes(cycle))]
    NotADag { cycle: Vec<Node> },
}

/// Tests acyclicity. Returns a topological order of all nodes, or a cycle
/// (first node repeated at the end).
///
/// Traversal is depth-first with roots and neighbors taken in ascending node
/// order, so the witness is deterministic.
pub fn is_dag(g: &DependencyGraph) -> Result<Vec<Node>, Vec<Node>> {
    const UNSEEN: u8 = 0;
    const ACTIVE: u8 = 1;
    const DONE: u8 = 2;

    let n = g.var_count();
    let mut state = vec![UNSEEN; 2 * n];
    let mut postorder = Vec::with_capacity(g.node_count());

    for root in g.nodes() {
        if state[root.dense_slot(n)] != UNSEEN {
            continue;
        }
        state[root.dense_slot(n)] = ACTIVE;
        let mut stack: Vec<(Node, usize)> = vec![(root, 0)];
        while let Some(&mut (node, ref mut cursor)) = stack.last_mut() {
            if *cursor < g.out_degree(node) {
                let next = g.out_neighbor(node, *cursor);
                *cursor += 1;
                match state[next.dense_slot(n)] {
                    UNSEEN => {
                        state[next.dense_slot(n)] = ACTIVE;
                        stack.push((next, 0));
                    }
                    ACTIVE => {
                        // Back edge: the stack from `next` to the top is the cycle.
                        let pos = stack
                            .iter()
                            .position(|&(w, _)| w == next)
                            .expect("active node is on the stack");
                        let mut cycle: Vec<Node> = stack[pos..].iter().map(|&(w, _)| w).collect();
                        cycle.push(next);
                        return Err(cycle);
                    }
                    _ => {}
                }
            } else {
                state[node.dense_slot(n)] = DONE;
                postorder.push(node);
                stack.pop();
            }
        }
    }
    postorder.reverse();
    Ok(postorder)
}

/// Property P: every simple node has a generator or a channel among its
/// in-neighbors. Returns the lowest-id violating node on failure.
pub fn has_property_p(g: &DependencyGraph) -> Result<(), Node> {
    for v in g.simple_nodes() {
        let ok = g
            .in_neighbors(v)
            .any(|u| u.is_generator() || g.is_channel(u));
        if !ok {
            return Err(v);
        }
    }
    Ok(())
}

/// Decides controllability of a dependency graph.
pub fn check_dependency_graph(g: &DependencyGraph) -> Verdict {
    if let Err(cycle) = is_dag(g) {
        return Verdict::NotDag { cycle };
    }
    match has_property_p(g) {
        Ok(()) => Verdict::Controllable,
        Err(node) => Verdict::PropertyPViolation { node },
    }
}

/// Decides controllability of a network. Linear in the description length.
pub fn check_controllability(net: &Cbcn) -> Verdict {
    check_dependency_graph(&net.dependency_graph())
}

/// A generator followed by a chain of simple nodes, each the unique
/// out-neighbor of its predecessor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ControlledPath {
    nodes: Vec<Node>,
}

impl ControlledPath {
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn generator(&self) -> Node {
        self.nodes[0]
    }

    /// The chain after the generator, closest to the generator first.
    pub fn simple_nodes(&self) -> &[Node] {
        &self.nodes[1..]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Checks the path invariants against a graph.
    pub fn verify(&self, g: &DependencyGraph) -> bool {
        if self.nodes.is_empty() || !self.nodes[0].is_generator() {
            return false;
        }
        if self.nodes[1..].iter().any(|v| !v.is_simple()) {
            return false;
        }
        let mut sorted = self.nodes.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != self.nodes.len() {
            return false;
        }
        self.nodes
            .windows(2)
            .all(|pair| g.out_degree(pair[0]) == 1 && g.out_neighbor(pair[0], 0) == pair[1])
    }
}

impl fmt::Display for ControlledPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", join_nodes(&self.nodes))
    }
}

/// A partition of all nodes of a graph into disjoint controlled paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathDecomposition {
    paths: Vec<ControlledPath>,
}

impl PathDecomposition {
    pub fn paths(&self) -> &[ControlledPath] {
        &self.paths
    }

    pub fn iter(&self) -> impl Iterator<Item = &ControlledPath> {
        self.paths.iter()
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    /// Checks that every path is valid and that together they cover every
    /// node of `g` exactly once.
    pub fn verify(&self, g: &DependencyGraph) -> bool {
        if !self.paths.iter().all(|p| p.verify(g)) {
            return false;
        }
        let mut covered: Vec<Node> = self.paths.iter().flat_map(|p| p.nodes()).copied().collect();
        covered.sort();
        covered.dedup();
        let mut all: Vec<Node> = g.nodes().collect();
        all.sort();
        covered == all
    }
}

/// Decomposes a controllable graph into disjoint controlled paths covering
/// every node. Fails with the controllability verdict otherwise.
///
/// Uncovered simple nodes are taken in ascending order; each is extended
/// backwards through the lowest-id channel in-neighbor (falling back to the
/// lowest-id generator), and a chain that reaches a node already placed in a
/// path is appended after it. The already-placed node is necessarily the last
/// of its path, because its unique out-neighbor is the head of the chain
/// being built. Output paths are sorted by generator.
pub fn decompose_controlled_paths(g: &DependencyGraph) -> Result<PathDecomposition, AnalysisError> {
    let verdict = check_dependency_graph(g);
    if !verdict.is_controllable() {
        return Err(AnalysisError::NotControllable { verdict });
    }

    let n = g.var_count();
    let mut path_of: Vec<Option<usize>> = vec![None; 2 * n];
    let mut paths: Vec<Vec<Node>> = Vec::new();

    for start in g.simple_nodes() {
        if path_of[start.dense_slot(n)].is_some() {
            continue;
        }
        let mut chain = std::collections::VecDeque::from([start]);
        let mut cnode = start;
        loop {
            // In-neighbor lists are ascending, so the first match is the
            // lowest-id pick.
            let pick = g
                .in_neighbors(cnode)
                .find(|&u| g.is_channel(u))
                .or_else(|| g.in_neighbors(cnode).find(Node::is_generator))
                .expect("property P guarantees a channel or generator in-neighbor");

            match path_of[pick.dense_slot(n)] {
                Some(id) => {
                    debug_assert_eq!(paths[id].last(), Some(&pick));
                    for &w in &chain {
                        path_of[w.dense_slot(n)] = Some(id);
                    }
                    paths[id].extend(chain);
                    break;
                }
                None if pick.is_generator() => {
                    chain.push_front(pick);
                    let id = paths.len();
                    for &w in &chain {
                        path_of[w.dense_slot(n)] = Some(id);
                    }
                    paths.push(chain.into_iter().collect());
                    break;
                }
                None => {
                    chain.push_front(pick);
                    cnode = pick;
                }
            }
        }
    }

    paths.sort_by_key(|p| p[0]);
    let decomposition = PathDecomposition {
        paths: paths
            .into_iter()
            .map(|nodes| ControlledPath { nodes })
            .collect(),
    };
    debug_assert!(decomposition.verify(g));
    Ok(decomposition)
}

/// Per-node fill depth: generators sit at depth 0 and every simple node is
/// one past its deepest in-neighbor. Feeding all-ones inputs drives each node
/// to one at every time at or after its depth, from any initial state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepthMap {
    n: usize,
    depths: Vec<usize>,
    tau: usize,
}

impl DepthMap {
    pub fn depth(&self, node: Node) -> usize {
        self.depths[node.dense_slot(self.n)]
    }

    /// Maximum depth over simple nodes: the time after which all-ones inputs
    /// have filled the whole network with ones.
    pub fn tau(&self) -> usize {
        self.tau
    }
}

/// Computes the [`DepthMap`] of a DAG.
pub fn fill_depth(g: &DependencyGraph) -> Result<DepthMap, AnalysisError> {
    let order = is_dag(g).map_err(|cycle| AnalysisError::NotADag { cycle })?;
    let n = g.var_count();
    let mut depths = vec![0usize; 2 * n];
    let mut tau = 0;
    for node in order {
        if node.is_generator() {
            continue;
        }
        let depth = 1 + g
            .in_neighbors(node)
            .map(|u| depths[u.dense_slot(n)])
            .max()
            .expect("simple nodes have at least one in-neighbor");
        depths[node.dense_slot(n)] = depth;
        tau = tau.max(depth);
    }
    Ok(DepthMap { n, depths, tau })
}
