//! Dominating sets through minimal controllability.
//!
//! An undirected graph maps to a conjunctive network with one self-looping
//! node per edge and one sink node per vertex, each edge node feeding its two
//! endpoints. Every edge node must be controlled (self-loop), and the vertex
//! nodes picked up by a minimum controlled set form a minimum dominating set
//! of the original graph. Running the exact minimal-control search on the
//! produced network therefore answers the dominating-set decision problem.

use std::collections::BTreeSet;
use std::time::Duration;

use thiserror::Error;

use crate::minctrl::{minimal_control_set, SearchConfig, SearchError};
use crate::model::{Cbcn, Cbn, Node, UndirectedGraph, UpdateRule};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LayeringViolation {
    #[error("layer tags do not partition the variables")]
    TagsNotPartition,
    #[error("layer-2 variable X{0} has no control input")]
    UncontrolledLayer2(usize),
    #[error("arc X{from} -> X{to} does not go from layer 2 to layer 3")]
    ArcOutsideLayers { from: usize, to: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("vertex {0} is isolated; the construction needs every vertex to have positive degree")]
    IsolatedVertex(usize),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Layering(#[from] LayeringViolation),
}

/// Layer assignment of the simple nodes of a three-layer network. Layer 1 is
/// implicit: it holds the generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerTags {
    pub layer2: BTreeSet<usize>,
    pub layer3: BTreeSet<usize>,
}

/// The network produced from an undirected graph, with the bookkeeping to
/// map results back. Edge nodes come first (one per edge, ascending), then
/// one vertex node per source vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionInstance {
    source: UndirectedGraph,
    cbn: Cbn,
}

impl ReductionInstance {
    pub fn source(&self) -> &UndirectedGraph {
        &self.source
    }

    pub fn cbn(&self) -> &Cbn {
        &self.cbn
    }

    pub fn edge_node_count(&self) -> usize {
        self.source.edge_count()
    }

    pub fn node_count(&self) -> usize {
        self.cbn.var_count()
    }

    /// Variable index of the node standing for source vertex `v`.
    pub fn vertex_node(&self, v: usize) -> usize {
        self.source.edge_count() + v
    }

    /// Source vertex represented by variable `index`, if it is a vertex node.
    pub fn vertex_of(&self, index: usize) -> Option<usize> {
        let edges = self.source.edge_count();
        (index > edges && index <= edges + self.source.vertex_count()).then(|| index - edges)
    }

    /// Source edge represented by variable `index`, if it is an edge node.
    pub fn edge_of(&self, index: usize) -> Option<(usize, usize)> {
        (index >= 1 && index <= self.source.edge_count()).then(|| self.source.edges()[index - 1])
    }

    pub fn node_name(&self, index: usize) -> String {
        if let Some((u, v)) = self.edge_of(index) {
            format!("E{u}_{v}")
        } else {
            let v = self.vertex_of(index).expect("index in range");
            format!("V{v}")
        }
    }

    /// Layer tags of the construction: edge nodes form layer 2, vertex nodes
    /// layer 3.
    pub fn layer_tags(&self) -> LayerTags {
        let edges = self.source.edge_count();
        LayerTags {
            layer2: (1..=edges).collect(),
            layer3: (edges + 1..=self.node_count()).collect(),
        }
    }

    /// Network text with the systematic `E<u>_<v>` / `V<u>` names.
    pub fn to_cbn_text(&self) -> String {
        let mut out = String::new();
        for i in self.cbn.vars() {
            let rhs: Vec<String> = self
                .cbn
                .update_set(i)
                .iter()
                .map(|&j| self.node_name(j))
                .collect();
            out.push_str(&format!("{} = {}\n", self.node_name(i), rhs.join(" & ")));
        }
        out
    }
}

/// Builds the reduction network of `g`: `|E| + |V|` nodes and `3 |E|` arcs.
/// Graphs with isolated vertices are rejected, as their vertex nodes would
/// have constant updates.
pub fn build_reduction(g: &UndirectedGraph) -> Result<ReductionInstance, ReductionError> {
    if let Some(&v) = g.isolated_vertices().first() {
        return Err(ReductionError::IsolatedVertex(v));
    }
    let edges = g.edge_count();
    let mut update_sets: Vec<Vec<usize>> = Vec::with_capacity(edges + g.vertex_count());
    for i in 1..=edges {
        update_sets.push(vec![i]);
    }
    for v in g.vertices() {
        let incident: Vec<usize> = g
            .edges()
            .iter()
            .enumerate()
            .filter(|(_, &(a, b))| a == v || b == v)
            .map(|(i, _)| i + 1)
            .collect();
        update_sets.push(incident);
    }
    let cbn = Cbn::new(update_sets).expect("construction yields non-empty in-range sets");
    Ok(ReductionInstance {
        source: g.clone(),
        cbn,
    })
}

/// Result of the dominating-set-through-controllability pipeline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionResult {
    /// Minimum controlled set of the reduction network.
    pub control_set: BTreeSet<usize>,
    /// The controlled vertex nodes, mapped back to source vertices: a
    /// minimum dominating set.
    pub dominating_set: Vec<usize>,
    /// Whether the dominating set fits the budget `k`.
    pub decision: bool,
    pub tested: u64,
    pub elapsed: Duration,
}

impl ReductionResult {
    pub fn gamma(&self) -> usize {
        self.dominating_set.len()
    }

    pub fn total_controls(&self) -> usize {
        self.control_set.len()
    }
}

/// Answers the dominating-set decision problem for `(g, k)` by solving
/// minimal controllability on the reduction network.
///
/// The variable limit of `config` is lifted to the instance size when
/// needed: the edge nodes are all mandatory, so the enumeration only ranges
/// over vertex subsets and the test budget is the guard that matters here.
pub fn solve_dominating_via_controllability(
    g: &UndirectedGraph,
    k: usize,
    config: &SearchConfig,
) -> Result<ReductionResult, ReductionError> {
    let instance = build_reduction(g)?;
    let config = SearchConfig {
        max_vars: config.max_vars.max(instance.node_count()),
        ..config.clone()
    };
    let result = minimal_control_set(instance.cbn(), &config)?;

    let edges = instance.edge_node_count();
    assert!(
        (1..=edges).all(|e| result.control_set.contains(&e)),
        "every self-looping edge node must be controlled"
    );
    let dominating_set: Vec<usize> = result
        .control_set
        .iter()
        .filter_map(|&i| instance.vertex_of(i))
        .collect();
    let set: BTreeSet<usize> = dominating_set.iter().copied().collect();
    assert!(
        g.dominated_by(&set),
        "controlled vertex nodes must dominate the source graph"
    );
    let decision = dominating_set.len() <= k;
    Ok(ReductionResult {
        control_set: result.control_set,
        dominating_set,
        decision,
        tested: result.tested,
        elapsed: result.elapsed,
    })
}

/// Controllability condition for three-layer networks in which every layer-2
/// variable has its own control input: every layer-3 variable must either be
/// directly controlled or fed by a layer-2 variable of out-degree one.
///
/// The preconditions (tags partition the variables, layer 2 fully controlled,
/// remaining arcs go layer 2 to layer 3) are checked and violations reported.
pub fn three_layer_controllable(net: &Cbcn, tags: &LayerTags) -> Result<bool, LayeringViolation> {
    let n = net.var_count();
    if tags.layer2.len() + tags.layer3.len() != n
        || !tags.layer2.is_disjoint(&tags.layer3)
        || tags.layer2.union(&tags.layer3).any(|&v| v == 0 || v > n)
    {
        return Err(LayeringViolation::TagsNotPartition);
    }
    for &v in &tags.layer2 {
        if !net.is_controlled(v) {
            return Err(LayeringViolation::UncontrolledLayer2(v));
        }
    }
    for v in net.vars() {
        if let UpdateRule::Conjunction(set) = net.rule(v) {
            // v is uncontrolled, hence in layer 3 with all feeds in layer 2.
            for &j in set {
                if !(tags.layer2.contains(&j) && tags.layer3.contains(&v)) {
                    return Err(LayeringViolation::ArcOutsideLayers { from: j, to: v });
                }
            }
        }
    }

    let g = net.dependency_graph();
    let ok = tags.layer3.iter().all(|&w| {
        net.is_controlled(w)
            || match net.rule(w) {
                UpdateRule::Conjunction(set) => {
                    set.iter().any(|&j| g.out_degree(Node::Simple(j)) == 1)
                }
                UpdateRule::Controlled => unreachable!(),
            }
    });
    Ok(ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::check_controllability;
    use crate::model::{parse_cbn, parse_edge_list};
    use crate::oracle::{min_dominating_set, oracle_controllable, OracleConfig};

    fn fig_graph() -> UndirectedGraph {
        parse_edge_list("p 4 3\n1 3\n2 3\n3 4\n").unwrap()
    }

    fn set(vars: &[usize]) -> BTreeSet<usize> {
        vars.iter().copied().collect()
    }

    #[test]
    fn reduction_of_star_like_graph() {
        let instance = build_reduction(&fig_graph()).unwrap();
        assert_eq!(instance.node_count(), 7);
        let arcs: usize = instance
            .cbn()
            .vars()
            .map(|v| instance.cbn().update_set(v).len())
            .sum();
        assert_eq!(arcs, 9);
        // Vertex node of v3 collects all three incident edges.
        assert_eq!(instance.vertex_node(3), 6);
        assert_eq!(instance.cbn().update_set(6), &[1, 2, 3]);
        assert_eq!(instance.node_name(1), "E1_3");
        assert_eq!(instance.node_name(6), "V3");
    }

    #[test]
    fn reduction_of_a_single_edge() {
        let g = parse_edge_list("p 2 1\n1 2\n").unwrap();
        let instance = build_reduction(&g).unwrap();
        assert_eq!(instance.node_count(), 3);
        assert_eq!(instance.cbn().update_set(1), &[1]);
        assert_eq!(instance.cbn().update_set(2), &[1]);
        assert_eq!(instance.cbn().update_set(3), &[1]);
    }

    #[test]
    fn reduction_of_triangle() {
        let g = parse_edge_list("p 3 3\n1 2\n1 3\n2 3\n").unwrap();
        let instance = build_reduction(&g).unwrap();
        assert_eq!(instance.node_count(), 6);
        let arcs: usize = instance
            .cbn()
            .vars()
            .map(|v| instance.cbn().update_set(v).len())
            .sum();
        assert_eq!(arcs, 9);
    }

    #[test]
    fn isolated_vertices_are_rejected() {
        let g = UndirectedGraph::new(3, &[(1, 2)]).unwrap();
        assert_eq!(
            build_reduction(&g).unwrap_err(),
            ReductionError::IsolatedVertex(3)
        );
    }

    #[test]
    fn emitted_text_parses_back_to_the_same_network() {
        let instance = build_reduction(&fig_graph()).unwrap();
        let parsed = parse_cbn(&instance.to_cbn_text()).unwrap();
        assert_eq!(parsed, Cbcn::from(instance.cbn().clone()));
    }

    #[test]
    fn pipeline_solves_the_star_like_instance() {
        let config = SearchConfig::default();
        let result = solve_dominating_via_controllability(&fig_graph(), 1, &config).unwrap();
        assert_eq!(result.dominating_set, vec![3]);
        assert_eq!(result.gamma(), 1);
        assert_eq!(result.total_controls(), 4);
        assert!(result.decision);

        let result = solve_dominating_via_controllability(&fig_graph(), 0, &config).unwrap();
        assert!(!result.decision);
    }

    #[test]
    fn pipeline_agrees_with_exhaustive_domset_on_a_path() {
        let g = parse_edge_list("p 3 2\n1 2\n2 3\n").unwrap();
        let result = solve_dominating_via_controllability(&g, 1, &SearchConfig::default()).unwrap();
        let oracle = min_dominating_set(&g, Some(1), &OracleConfig::default()).unwrap();
        assert_eq!(result.gamma(), oracle.gamma());
        assert_eq!(result.dominating_set, oracle.set);
        assert_eq!(result.total_controls(), g.edge_count() + oracle.gamma());
    }

    #[test]
    fn pipeline_matches_exhaustive_domset_on_petersen() {
        let text = "p 10 15\n1 2\n2 3\n3 4\n4 5\n1 5\n\
                    6 8\n8 10\n7 10\n7 9\n6 9\n\
                    1 6\n2 7\n3 8\n4 9\n5 10\n";
        let g = parse_edge_list(text).unwrap();
        let result = solve_dominating_via_controllability(&g, 3, &SearchConfig::default()).unwrap();
        assert!(result.decision);
        assert_eq!(result.gamma(), 3);
        let oracle = min_dominating_set(&g, Some(3), &OracleConfig::default()).unwrap();
        assert_eq!(result.gamma(), oracle.gamma());
        assert_eq!(result.total_controls(), g.edge_count() + oracle.gamma());
    }

    #[test]
    fn three_layer_condition_on_the_solved_instance() {
        let instance = build_reduction(&fig_graph()).unwrap();
        let tags = instance.layer_tags();
        // Controls on every edge node plus the vertex node of v3.
        let controlled = set(&[1, 2, 3, instance.vertex_node(3)]);
        let net = Cbcn::control(instance.cbn(), &controlled).unwrap();
        assert_eq!(three_layer_controllable(&net, &tags), Ok(true));
        assert!(check_controllability(&net).is_controllable());
    }

    #[test]
    fn shared_feed_with_fanout_two_is_not_controllable() {
        // One layer-2 node feeding two layer-3 nodes.
        let net = parse_cbn("X1 = ?\nX2 = X1\nX3 = X1").unwrap();
        let tags = LayerTags {
            layer2: set(&[1]),
            layer3: set(&[2, 3]),
        };
        assert_eq!(three_layer_controllable(&net, &tags), Ok(false));
        assert!(!check_controllability(&net).is_controllable());
        assert!(!oracle_controllable(&net, &OracleConfig::default()).unwrap());
    }

    #[test]
    fn single_feed_is_controllable() {
        let net = parse_cbn("X1 = ?\nX2 = X1").unwrap();
        let tags = LayerTags {
            layer2: set(&[1]),
            layer3: set(&[2]),
        };
        assert_eq!(three_layer_controllable(&net, &tags), Ok(true));
        assert!(check_controllability(&net).is_controllable());
    }

    #[test]
    fn layering_violations_are_reported() {
        let net = parse_cbn("X1 = X2\nX2 = ?").unwrap();
        let tags = LayerTags {
            layer2: set(&[1]),
            layer3: set(&[2]),
        };
        assert_eq!(
            three_layer_controllable(&net, &tags),
            Err(LayeringViolation::UncontrolledLayer2(1))
        );

        let net = parse_cbn("X1 = ?\nX2 = X1\nX3 = X2").unwrap();
        let tags = LayerTags {
            layer2: set(&[1]),
            layer3: set(&[2, 3]),
        };
        assert_eq!(
            three_layer_controllable(&net, &tags),
            Err(LayeringViolation::ArcOutsideLayers { from: 2, to: 3 })
        );

        let net = parse_cbn("X1 = ?\nX2 = X1").unwrap();
        let tags = LayerTags {
            layer2: set(&[1, 2]),
            layer3: set(&[2]),
        };
        assert_eq!(
            three_layer_controllable(&net, &tags),
            Err(LayeringViolation::TagsNotPartition)
        );
    }
}
