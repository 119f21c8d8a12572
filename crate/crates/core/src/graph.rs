//! Edge-list and adjacency representations shared by every generator.
//!
//! Node ids are zero-based. Undirected simple graphs store each edge once
//! with `u < v`; multigraph generators store `(min, max)` pairs.

use std::collections::HashSet;

use crate::error::{GraphError, Result};

/// Node identifier, an index into `0..n`.
pub type Node = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub u: Node,
    pub v: Node,
}

impl Edge {
    #[inline]
    pub fn new(u: Node, v: Node) -> Self {
        Edge { u, v }
    }

    /// Endpoints ordered as `(min, max)`.
    #[inline]
    pub fn canonical(u: Node, v: Node) -> Self {
        if u <= v {
            Edge { u, v }
        } else {
            Edge { u: v, v: u }
        }
    }

    #[inline]
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }
}

impl From<(Node, Node)> for Edge {
    fn from((u, v): (Node, Node)) -> Self {
        Edge { u, v }
    }
}

/// A graph as a node count plus an ordered edge list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    pub n: usize,
    pub directed: bool,
    pub allow_loops: bool,
    pub allow_multi: bool,
    pub edges: Vec<Edge>,
}

impl Graph {
    /// Empty undirected simple graph on `n` nodes.
    pub fn new(n: usize) -> Self {
        Graph {
            n,
            directed: false,
            allow_loops: false,
            allow_multi: false,
            edges: Vec::new(),
        }
    }

    pub fn directed(n: usize) -> Self {
        Graph {
            directed: true,
            ..Graph::new(n)
        }
    }

    /// Undirected graph permitting loops and parallel edges.
    pub fn multigraph(n: usize) -> Self {
        Graph {
            allow_loops: true,
            allow_multi: true,
            ..Graph::new(n)
        }
    }

    /// Builds an undirected simple graph, canonicalising each pair to `u < v`.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (Node, Node)>) -> Self {
        let mut g = Graph::new(n);
        g.edges = edges
            .into_iter()
            .map(|(u, v)| Edge::canonical(u, v))
            .collect();
        g
    }

    /// Same flags, no edges.
    pub fn empty_like(&self) -> Self {
        Graph {
            edges: Vec::new(),
            ..self.clone()
        }
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn push(&mut self, u: Node, v: Node) {
        self.edges.push(Edge::new(u, v));
    }

    pub fn has_loops(&self) -> bool {
        self.edges.iter().any(Edge::is_loop)
    }

    pub fn has_multi_edges(&self) -> bool {
        let mut seen = HashSet::with_capacity(self.edges.len());
        !self.edges.iter().all(|e| seen.insert(self.key(*e)))
    }

    /// Checks the structural invariants implied by the flags.
    pub fn validate(&self) -> Result<()> {
        for e in &self.edges {
            for x in [e.u, e.v] {
                if x as usize >= self.n {
                    return Err(GraphError::OutOfRange {
                        node: x as u64,
                        n: self.n as u64,
                    });
                }
            }
        }
        if !self.allow_loops && self.has_loops() {
            return Err(GraphError::Unsupported("self-loop in loop-free graph".into()));
        }
        if !self.allow_multi && self.has_multi_edges() {
            return Err(GraphError::Unsupported("parallel edge in simple graph".into()));
        }
        Ok(())
    }

    /// True when the edge list has neither loops nor duplicates.
    pub fn is_simple(&self) -> bool {
        !self.has_loops() && !self.has_multi_edges()
    }

    /// Key under the directedness-appropriate edge equality.
    #[inline]
    pub(crate) fn key(&self, e: Edge) -> Edge {
        if self.directed {
            e
        } else {
            Edge::canonical(e.u, e.v)
        }
    }

    /// Edges sorted canonically; useful for order-insensitive comparisons.
    pub fn sorted_edges(&self) -> Vec<Edge> {
        let mut edges: Vec<Edge> = self.edges.iter().map(|&e| self.key(e)).collect();
        edges.sort_unstable();
        edges
    }
}

/// Simple graph stored as sorted neighbour lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjacencyGraph {
    pub directed: bool,
    neighbors: Vec<Vec<Node>>,
}

impl AdjacencyGraph {
    /// Builds from a simple graph. Loops and duplicates are rejected so that
    /// set semantics hold; undirected input yields symmetric lists.
    pub fn from_graph(g: &Graph) -> Result<Self> {
        let mut neighbors = vec![Vec::new(); g.n];
        for e in &g.edges {
            if e.u as usize >= g.n || e.v as usize >= g.n {
                return Err(GraphError::OutOfRange {
                    node: e.u.max(e.v) as u64,
                    n: g.n as u64,
                });
            }
            if e.is_loop() {
                return Err(GraphError::Unsupported("self-loop in simple graph".into()));
            }
            neighbors[e.u as usize].push(e.v);
            if !g.directed {
                neighbors[e.v as usize].push(e.u);
            }
        }
        for list in &mut neighbors {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(GraphError::Unsupported("parallel edge in simple graph".into()));
            }
        }
        Ok(AdjacencyGraph {
            directed: g.directed,
            neighbors,
        })
    }

    /// Builds from raw neighbour lists; lists are sorted and deduplicated.
    pub fn from_neighbors(directed: bool, mut neighbors: Vec<Vec<Node>>) -> Self {
        for list in &mut neighbors {
            list.sort_unstable();
            list.dedup();
        }
        AdjacencyGraph {
            directed,
            neighbors,
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.neighbors.len()
    }

    pub fn m(&self) -> usize {
        let total: usize = self.neighbors.iter().map(Vec::len).sum();
        if self.directed {
            total
        } else {
            total / 2
        }
    }

    #[inline]
    pub fn neighbors(&self, v: Node) -> &[Node] {
        &self.neighbors[v as usize]
    }

    #[inline]
    pub fn degree(&self, v: Node) -> usize {
        self.neighbors[v as usize].len()
    }

    #[inline]
    pub fn has_edge(&self, u: Node, v: Node) -> bool {
        self.neighbors[u as usize].binary_search(&v).is_ok()
    }

    pub(crate) fn neighbors_mut(&mut self, v: Node) -> &mut Vec<Node> {
        &mut self.neighbors[v as usize]
    }

    pub fn degrees(&self) -> DegreeSequence {
        DegreeSequence(self.neighbors.iter().map(Vec::len).collect())
    }

    /// Canonical edge list: sorted, `u < v` for undirected graphs.
    pub fn to_graph(&self) -> Graph {
        let mut g = if self.directed {
            Graph::directed(self.n())
        } else {
            Graph::new(self.n())
        };
        for (u, list) in self.neighbors.iter().enumerate() {
            let u = u as Node;
            for &v in list {
                if self.directed || u < v {
                    g.push(u, v);
                }
            }
        }
        g
    }
}

/// Prescribed (or realised) node degrees.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DegreeSequence(pub Vec<usize>);

impl DegreeSequence {
    pub fn new(degrees: Vec<usize>) -> Self {
        DegreeSequence(degrees)
    }

    /// `count` nodes of degree `d`.
    pub fn regular(count: usize, d: usize) -> Self {
        DegreeSequence(vec![d; count])
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn max(&self) -> usize {
        self.0.iter().copied().max().unwrap_or(0)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

impl From<Vec<usize>> for DegreeSequence {
    fn from(v: Vec<usize>) -> Self {
        DegreeSequence(v)
    }
}

/// Graph whose edges carry positive integer multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    pub graph: Graph,
    pub weights: Vec<u64>,
}
