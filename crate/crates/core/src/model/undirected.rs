//! Simple undirected graphs and their edge-list text format.
//!
//! The format is one header line `p <vertices> <edges>` followed by one
//! `u v` line per edge. `#` comments and blank lines are ignored. Vertices
//! are numbered `1..=n`.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphFormatError {
    #[error("line {line}: expected header `p <vertices> <edges>`")]
    BadHeader { line: usize },
    #[error("line {line}: expected edge line `u v`")]
    BadEdge { line: usize },
    #[error("line {line}: vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange {
        line: usize,
        vertex: usize,
        n: usize,
    },
    #[error("line {line}: self-edge on vertex {vertex}")]
    SelfEdge { line: usize, vertex: usize },
    #[error("line {line}: duplicate edge ({u}, {v})")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("header announced {expected} edges but {found} were given")]
    EdgeCountMismatch { expected: usize, found: usize },
    #[error("graph must have at least one vertex")]
    Empty,
}

/// A simple undirected graph over vertices `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UndirectedGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<BTreeSet<usize>>,
}

impl UndirectedGraph {
    /// Builds a graph from an edge list. Edges are stored with `u < v`,
    /// sorted; self-edges and duplicates are rejected.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphFormatError> {
        if n == 0 {
            return Err(GraphFormatError::Empty);
        }
        let mut g = UndirectedGraph {
            n,
            edges: Vec::with_capacity(edges.len()),
            adjacency: vec![BTreeSet::new(); n],
        };
        for &(u, v) in edges {
            g.insert_edge(0, u, v)?;
        }
        g.edges.sort_unstable();
        Ok(g)
    }

    fn insert_edge(&mut self, line: usize, u: usize, v: usize) -> Result<(), GraphFormatError> {
        for &x in &[u, v] {
            if x == 0 || x > self.n {
                return Err(GraphFormatError::VertexOutOfRange {
                    line,
                    vertex: x,
                    n: self.n,
                });
            }
        }
        if u == v {
            return Err(GraphFormatError::SelfEdge { line, vertex: u });
        }
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        if !self.adjacency[a - 1].insert(b) {
            return Err(GraphFormatError::DuplicateEdge { line, u: a, v: b });
        }
        self.adjacency[b - 1].insert(a);
        self.edges.push((a, b));
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> {
        1..=self.n
    }

    /// Edges as `(u, v)` with `u < v`, ascending.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &BTreeSet<usize> {
        &self.adjacency[v - 1]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v - 1].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v
            && u >= 1
            && v >= 1
            && u <= self.n
            && v <= self.n
            && self.adjacency[u - 1].contains(&v)
    }

    pub fn isolated_vertices(&self) -> Vec<usize> {
        self.vertices().filter(|&v| self.degree(v) == 0).collect()
    }

    /// True when every vertex outside `set` has a neighbor in `set`.
    pub fn dominated_by(&self, set: &BTreeSet<usize>) -> bool {
        self.vertices()
            .all(|v| set.contains(&v) || self.adjacency[v - 1].iter().any(|u| set.contains(u)))
    }
}

impl fmt::Display for UndirectedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p {} {}", self.n, self.edges.len())?;
        for (u, v) in &self.edges {
            writeln!(f, "{u} {v}")?;
        }
        Ok(())
    }
}

/// Parses the edge-list format described in the module docs.
pub fn parse_edge_list(text: &str) -> Result<UndirectedGraph, GraphFormatError> {
    let mut graph: Option<UndirectedGraph> = None;
    let mut expected_edges = 0usize;
    let mut found_edges = 0usize;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match &mut graph {
            None => {
                if fields.len() != 3 || fields[0] != "p" {
                    return Err(GraphFormatError::BadHeader { line: line_no });
                }
                let n: usize = fields[1]
                    .parse()
                    .map_err(|_| GraphFormatError::BadHeader { line: line_no })?;
                expected_edges = fields[2]
                    .parse()
                    .map_err(|_| GraphFormatError::BadHeader { line: line_no })?;
                if n == 0 {
                    return Err(GraphFormatError::Empty);
                }
                graph = Some(UndirectedGraph {
                    n,
                    edges: Vec::with_capacity(expected_edges),
                    adjacency: vec![BTreeSet::new(); n],
                });
            }
            Some(g) => {
                if fields.len() != 2 {
                    return Err(GraphFormatError::BadEdge { line: line_no });
                }
                let u: usize = fields[0]
                    .parse()
                    .map_err(|_| GraphFormatError::BadEdge { line: line_no })?;
                let v: usize = fields[1]
                    .parse()
                    .map_err(|_| GraphFormatError::BadEdge { line: line_no })?;
                g.insert_edge(line_no, u, v)?;
                found_edges += 1;
            }
        }
    }

    let mut g = graph.ok_or(GraphFormatError::Empty)?;
    if found_edges != expected_edges {
        return Err(GraphFormatError::EdgeCountMismatch {
            expected: expected_edges,
            found: found_edges,
        });
    }
    g.edges.sort_unstable();
    Ok(g)
}
