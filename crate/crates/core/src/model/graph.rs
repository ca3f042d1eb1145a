//! Dependency graphs of controlled networks.
//!
//! The graph has one simple node per variable and one generator node per
//! controlled variable. An arc `Xj -> Xi` exists for uncontrolled `Xi` exactly
//! when `Xj` appears in the update of `Xi`; a controlled variable keeps a
//! single in-arc from its generator.

use std::fmt;

use thiserror::Error;

use super::{Cbcn, UpdateRule};

/// A node of a dependency graph.
///
/// `Simple(v)` is the state-variable `Xv`; `Generator(v)` is the control
/// input `Uv` attached to a controlled variable. The derived order (simple
/// nodes first, then generators, each ascending by variable) is the node-id
/// order used wherever ties are broken by "lowest id".
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Node {
    Simple(usize),
    Generator(usize),
}

impl Node {
    pub fn is_generator(&self) -> bool {
        matches!(self, Node::Generator(_))
    }

    pub fn is_simple(&self) -> bool {
        matches!(self, Node::Simple(_))
    }

    /// The underlying variable index.
    pub fn var(&self) -> usize {
        match *self {
            Node::Simple(v) | Node::Generator(v) => v,
        }
    }

    /// Index into arrays of length `2 * n`: simple nodes occupy `0..n`,
    /// generators `n..2n`.
    pub(crate) fn dense_slot(&self, n: usize) -> usize {
        match *self {
            Node::Simple(v) => v - 1,
            Node::Generator(v) => n + v - 1,
        }
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Simple(v) => write!(f, "X{v}"),
            Node::Generator(v) => write!(f, "U{v}"),
        }
    }
}

/// Classification of a node.
///
/// A simple node can be directly controlled and a channel at the same time;
/// both flags false means a plain simple node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeClass {
    Generator,
    Simple {
        directly_controlled: bool,
        channel: bool,
    },
}

impl NodeClass {
    pub fn is_generator(&self) -> bool {
        matches!(self, NodeClass::Generator)
    }

    pub fn is_channel(&self) -> bool {
        matches!(self, NodeClass::Simple { channel: true, .. })
    }

    pub fn is_directly_controlled(&self) -> bool {
        matches!(
            self,
            NodeClass::Simple {
                directly_controlled: true,
                ..
            }
        )
    }

    pub fn is_plain_simple(&self) -> bool {
        matches!(
            self,
            NodeClass::Simple {
                directly_controlled: false,
                channel: false,
            }
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("node {0} is not part of this graph")]
pub struct UnknownNode(pub Node);

/// Adjacency view of a [`Cbcn`]. Neighborhoods are packed into two flat
/// arrays of compact node codes with per-node ranges, kept in ascending node
/// order, so traversals are deterministic and cheap even on dense graphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependencyGraph {
    n: usize,
    controlled: Vec<bool>,
    out_index: Vec<usize>,
    out_data: Vec<u32>,
    in_index: Vec<usize>,
    in_data: Vec<u32>,
}

fn prefix_sums(degrees: &[usize]) -> Vec<usize> {
    let mut index = Vec::with_capacity(degrees.len() + 1);
    index.push(0);
    for &d in degrees {
        index.push(index.last().unwrap() + d);
    }
    index
}

impl DependencyGraph {
    pub fn build(net: &Cbcn) -> Self {
        let n = net.var_count();
        assert!(
            n < u32::MAX as usize / 2,
            "variable count exceeds the graph representation"
        );
        let simple = |v: usize| (v - 1) as u32;
        let generator = |v: usize| (n + v - 1) as u32;
        let mut controlled = vec![false; n];
        let mut out_deg = vec![0usize; 2 * n];
        let mut in_deg = vec![0usize; 2 * n];
        for i in net.vars() {
            match net.rule(i) {
                UpdateRule::Controlled => {
                    controlled[i - 1] = true;
                    out_deg[n + i - 1] += 1;
                    in_deg[i - 1] += 1;
                }
                UpdateRule::Conjunction(set) => {
                    in_deg[i - 1] += set.len();
                    for &j in set {
                        out_deg[j - 1] += 1;
                    }
                }
            }
        }

        let out_index = prefix_sums(&out_deg);
        let in_index = prefix_sums(&in_deg);
        let mut out_data = vec![0u32; *out_index.last().unwrap()];
        let mut in_data = vec![0u32; *in_index.last().unwrap()];
        let mut out_cursor = out_index[..2 * n].to_vec();
        let mut in_cursor = in_index[..2 * n].to_vec();

        for i in net.vars() {
            match net.rule(i) {
                UpdateRule::Controlled => {
                    let slot = n + i - 1;
                    out_data[out_cursor[slot]] = simple(i);
                    out_cursor[slot] += 1;
                    in_data[in_cursor[i - 1]] = generator(i);
                    in_cursor[i - 1] += 1;
                }
                UpdateRule::Conjunction(set) => {
                    // Update sets are sorted, so in-lists come out ascending.
                    for &j in set {
                        in_data[in_cursor[i - 1]] = simple(j);
                        in_cursor[i - 1] += 1;
                    }
                }
            }
        }
        // Second pass in ascending target order keeps out-lists sorted.
        for i in net.vars() {
            if let UpdateRule::Conjunction(set) = net.rule(i) {
                for &j in set {
                    out_data[out_cursor[j - 1]] = simple(i);
                    out_cursor[j - 1] += 1;
                }
            }
        }

        DependencyGraph {
            n,
            controlled,
            out_index,
            out_data,
            in_index,
            in_data,
        }
    }

    fn slot(&self, node: Node) -> usize {
        node.dense_slot(self.n)
    }

    fn decode(&self, code: u32) -> Node {
        let slot = code as usize;
        if slot < self.n {
            Node::Simple(slot + 1)
        } else {
            Node::Generator(slot - self.n + 1)
        }
    }

    pub fn var_count(&self) -> usize {
        self.n
    }

    /// Simple nodes plus generators.
    pub fn node_count(&self) -> usize {
        self.n + self.controlled.iter().filter(|&&c| c).count()
    }

    pub fn contains(&self, node: Node) -> bool {
        let v = node.var();
        v >= 1
            && v <= self.n
            && match node {
                Node::Simple(_) => true,
                Node::Generator(_) => self.controlled[v - 1],
            }
    }

    pub fn is_controlled(&self, var: usize) -> bool {
        self.controlled[var - 1]
    }

    pub fn simple_nodes(&self) -> impl Iterator<Item = Node> + '_ {
        (1..=self.n).map(Node::Simple)
    }

    pub fn generators(&self) -> impl Iterator<Item = Node> + '_ {
        (1..=self.n)
            .filter(|&v| self.controlled[v - 1])
            .map(Node::Generator)
    }

    /// All nodes in ascending id order.
    pub fn nodes(&self) -> impl Iterator<Item = Node> + '_ {
        self.simple_nodes().chain(self.generators())
    }

    /// Out-neighbors of `node` in ascending order.
    pub fn out_neighbors(&self, node: Node) -> impl Iterator<Item = Node> + '_ {
        let slot = self.slot(node);
        self.out_data[self.out_index[slot]..self.out_index[slot + 1]]
            .iter()
            .map(|&code| self.decode(code))
    }

    /// In-neighbors of `node` in ascending order.
    pub fn in_neighbors(&self, node: Node) -> impl Iterator<Item = Node> + '_ {
        let slot = self.slot(node);
        self.in_data[self.in_index[slot]..self.in_index[slot + 1]]
            .iter()
            .map(|&code| self.decode(code))
    }

    /// The `k`-th out-neighbor (ascending), for cursor-style traversals.
    pub fn out_neighbor(&self, node: Node, k: usize) -> Node {
        let slot = self.slot(node);
        self.decode(self.out_data[self.out_index[slot] + k])
    }

    pub fn out_degree(&self, node: Node) -> usize {
        let slot = self.slot(node);
        self.out_index[slot + 1] - self.out_index[slot]
    }

    pub fn in_degree(&self, node: Node) -> usize {
        let slot = self.slot(node);
        self.in_index[slot + 1] - self.in_index[slot]
    }

    pub fn has_self_loop(&self, node: Node) -> bool {
        let slot = self.slot(node);
        self.out_data[self.out_index[slot]..self.out_index[slot + 1]]
            .binary_search(&(slot as u32))
            .is_ok()
    }

    /// A channel: a simple node with out-degree one and no self-loop.
    pub fn is_channel(&self, node: Node) -> bool {
        node.is_simple() && self.out_degree(node) == 1 && !self.has_self_loop(node)
    }

    pub fn classify(&self, node: Node) -> Result<NodeClass, UnknownNode> {
        if !self.contains(node) {
            return Err(UnknownNode(node));
        }
        Ok(match node {
            Node::Generator(_) => NodeClass::Generator,
            Node::Simple(v) => NodeClass::Simple {
                directly_controlled: self.controlled[v - 1],
                channel: self.is_channel(node),
            },
        })
    }

    /// Total number of arcs.
    pub fn arc_count(&self) -> usize {
        self.nodes().map(|v| self.out_degree(v)).sum()
    }

    pub fn arcs(&self) -> impl Iterator<Item = (Node, Node)> + '_ {
        self.nodes()
            .flat_map(move |u| self.out_neighbors(u).map(move |w| (u, w)))
    }

    /// DOT text; generators are drawn as boxes.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph dependency {\n");
        for g in self.generators() {
            out.push_str(&format!("    \"{g}\" [shape=box];\n"));
        }
        for v in self.simple_nodes() {
            out.push_str(&format!("    \"{v}\";\n"));
        }
        for (u, w) in self.arcs() {
            out.push_str(&format!("    \"{u}\" -> \"{w}\";\n"));
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::super::{Cbcn, Cbn};
    use super::*;
    use std::collections::BTreeSet;

    fn set(vars: &[usize]) -> BTreeSet<usize> {
        vars.iter().copied().collect()
    }

    /// X1 = U1, X2 = U2, X3 = X1 & X2.
    fn two_inputs_one_sink() -> Cbcn {
        let cbn = Cbn::new(vec![vec![1], vec![2], vec![1, 2]]).unwrap();
        Cbcn::control(&cbn, &set(&[1, 2])).unwrap()
    }

    /// X1 = X2, X2 = X1 & X2, nothing controlled.
    fn two_var_loop() -> Cbcn {
        Cbn::new(vec![vec![2], vec![1, 2]]).unwrap().into()
    }

    #[test]
    fn graph_of_controlled_network() {
        let g = two_inputs_one_sink().dependency_graph();
        let mut arcs: Vec<(Node, Node)> = g.arcs().collect();
        arcs.sort();
        assert_eq!(
            arcs,
            vec![
                (Node::Simple(1), Node::Simple(3)),
                (Node::Simple(2), Node::Simple(3)),
                (Node::Generator(1), Node::Simple(1)),
                (Node::Generator(2), Node::Simple(2)),
            ]
        );
        assert_eq!(g.node_count(), 5);
    }

    #[test]
    fn graph_of_uncontrolled_network() {
        let g = two_var_loop().dependency_graph();
        let mut arcs: Vec<(Node, Node)> = g.arcs().collect();
        arcs.sort();
        assert_eq!(
            arcs,
            vec![
                (Node::Simple(1), Node::Simple(2)),
                (Node::Simple(2), Node::Simple(1)),
                (Node::Simple(2), Node::Simple(2)),
            ]
        );
    }

    #[test]
    fn control_removes_all_in_arcs() {
        // X1 = X1 with X1 controlled: only the generator arc remains.
        let cbn = Cbn::new(vec![vec![1]]).unwrap();
        let net = Cbcn::control(&cbn, &set(&[1])).unwrap();
        let g = net.dependency_graph();
        let arcs: Vec<(Node, Node)> = g.arcs().collect();
        assert_eq!(arcs, vec![(Node::Generator(1), Node::Simple(1))]);
    }

    #[test]
    fn generator_degrees() {
        let g = two_inputs_one_sink().dependency_graph();
        for gen in g.generators() {
            assert_eq!(g.out_degree(gen), 1);
            assert_eq!(g.in_degree(gen), 0);
        }
        for v in g.simple_nodes() {
            assert!(g.in_degree(v) >= 1);
        }
    }

    #[test]
    fn classify_matches_definitions() {
        let g = two_inputs_one_sink().dependency_graph();
        assert_eq!(
            g.classify(Node::Generator(1)).unwrap(),
            NodeClass::Generator
        );
        // X2 is controlled and feeds exactly X3: both flags set.
        let class = g.classify(Node::Simple(2)).unwrap();
        assert!(class.is_channel());
        assert!(class.is_directly_controlled());
        // X3 has no out-arcs: plain simple.
        assert!(g.classify(Node::Simple(3)).unwrap().is_plain_simple());
        assert_eq!(
            g.classify(Node::Generator(3)),
            Err(UnknownNode(Node::Generator(3)))
        );
    }

    #[test]
    fn self_loop_disqualifies_channel() {
        let g = two_var_loop().dependency_graph();
        // X2 feeds X1 and itself: out-degree 2 and a self-loop.
        assert!(g.classify(Node::Simple(2)).unwrap().is_plain_simple());
        // X1 feeds only X2 and has no self-loop.
        assert!(g.classify(Node::Simple(1)).unwrap().is_channel());
    }

    #[test]
    fn fully_controlled_graph_is_all_generator_arcs() {
        let cbn = Cbn::new(vec![vec![2], vec![1]]).unwrap();
        let net = Cbcn::control(&cbn, &set(&[1, 2])).unwrap();
        let g = net.dependency_graph();
        for v in g.simple_nodes() {
            let ins: Vec<Node> = g.in_neighbors(v).collect();
            assert_eq!(ins, vec![Node::Generator(v.var())]);
        }
    }

    #[test]
    fn dot_renders_generators_as_boxes() {
        let dot = two_inputs_one_sink().dependency_graph().to_dot();
        assert!(dot.contains("\"U1\" [shape=box]"));
        assert!(dot.contains("\"X1\" -> \"X3\""));
    }

    #[test]
    fn node_order_is_simple_then_generator() {
        assert!(Node::Simple(3) < Node::Generator(1));
        assert!(Node::Simple(1) < Node::Simple(2));
        assert!(Node::Generator(1) < Node::Generator(2));
    }
}
