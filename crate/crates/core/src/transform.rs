//! Post-processing: simplification, direction changes and connectivity.

use std::collections::HashSet;

use crate::error::{GraphError, Result};
use crate::graph::{Edge, Graph, Node};
use crate::random::{fisher_yates, RngStream};
use crate::stats::{connected_components, is_connected};

/// Drops loops and repeated edges, keeping first occurrences in order.
pub fn simplify(g: &Graph) -> Graph {
    let mut seen = HashSet::with_capacity(g.edges.len());
    let edges = g
        .edges
        .iter()
        .filter(|e| !e.is_loop() && seen.insert(g.key(**e)))
        .copied()
        .collect();
    Graph {
        n: g.n,
        directed: g.directed,
        allow_loops: false,
        allow_multi: false,
        edges,
    }
}

/// How to make a generated graph connected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConnectPolicy {
    RejectAndRetry { max_tries: u64 },
    ExtractGiant,
    SpanningTreeAugment,
}

/// First connected sample and the number of samples drawn.
#[derive(Debug, Clone, PartialEq)]
pub struct Connected {
    pub graph: Graph,
    pub tries: u64,
}

/// Calls `generator` with substreams `rng.derive("connect-try", t)` for
/// `t = 0, 1, ...` until it returns a connected graph.
pub fn rejection_connected(
    mut generator: impl FnMut(&RngStream) -> Result<Graph>,
    max_tries: u64,
    rng: &RngStream,
) -> Result<Connected> {
    if max_tries == 0 {
        return Err(GraphError::InvalidParameter("max_tries must be at least 1".into()));
    }
    for t in 0..max_tries {
        let g = generator(&rng.derive("connect-try", t))?;
        if is_connected(&g) {
            return Ok(Connected { graph: g, tries: t + 1 });
        }
    }
    Err(GraphError::BudgetExceeded(max_tries))
}

/// Largest component relabelled `0..n'` in node order, with the map from
/// old ids (`None` for dropped nodes). Ties go to the component holding
/// the smallest node id.
#[derive(Debug, Clone, PartialEq)]
pub struct Giant {
    pub graph: Graph,
    pub map: Vec<Option<Node>>,
}

pub fn extract_giant(g: &Graph) -> Result<Giant> {
    if g.directed {
        return Err(GraphError::Unsupported("giant component of a directed graph".into()));
    }
    let comps = connected_components(g);
    let Some(giant) = comps.largest() else {
        return Ok(Giant {
            graph: g.empty_like(),
            map: Vec::new(),
        });
    };
    let mut map = vec![None; g.n];
    let mut next = 0;
    for (v, &label) in comps.labels.iter().enumerate() {
        if label == giant {
            map[v] = Some(next);
            next += 1;
        }
    }
    let edges = g
        .edges
        .iter()
        .filter_map(|e| Some(Edge::new(map[e.u as usize]?, map[e.v as usize]?)))
        .collect();
    Ok(Giant {
        graph: Graph {
            n: next as usize,
            edges,
            ..g.empty_like()
        },
        map,
    })
}

/// Connects the components with `count - 1` bridges: components are
/// visited in random order and each is joined by one edge between a
/// uniform node of it and a uniform node of the part merged so far.
/// Degrees of the bridge endpoints grow; nothing else changes.
pub fn spanning_tree_augment(g: &Graph, rng: &mut RngStream) -> Result<Graph> {
    if g.directed {
        return Err(GraphError::Unsupported("spanning-tree augmentation of a directed graph".into()));
    }
    let comps = connected_components(g);
    let mut out = g.clone();
    if comps.count() <= 1 {
        return Ok(out);
    }
    let mut members: Vec<Vec<Node>> = vec![Vec::new(); comps.count()];
    for (v, &c) in comps.labels.iter().enumerate() {
        members[c].push(v as Node);
    }
    let mut order: Vec<usize> = (0..comps.count()).collect();
    fisher_yates(rng, &mut order);
    let mut merged: Vec<Node> = members[order[0]].clone();
    for &c in &order[1..] {
        let here = &members[c];
        let a = here[rng.below(here.len() as u64) as usize];
        let b = merged[rng.below(merged.len() as u64) as usize];
        out.edges.push(Edge::canonical(a, b));
        merged.extend_from_slice(here);
    }
    Ok(out)
}

/// Applies a connectivity policy to a generator.
pub fn make_connected(
    generator: impl FnMut(&RngStream) -> Result<Graph>,
    policy: ConnectPolicy,
    rng: &RngStream,
) -> Result<Graph> {
    let mut generator = generator;
    match policy {
        ConnectPolicy::RejectAndRetry { max_tries } => Ok(rejection_connected(generator, max_tries, rng)?.graph),
        ConnectPolicy::ExtractGiant => Ok(extract_giant(&generator(&rng.derive("connect-try", 0))?)?.graph),
        ConnectPolicy::SpanningTreeAugment => {
            let g = generator(&rng.derive("connect-try", 0))?;
            spanning_tree_augment(&g, &mut rng.derive("connect-tree", 0))
        }
    }
}

/// Collapses `(u, v)` and `(v, u)` into one undirected edge; loops and
/// repeats are dropped.
pub fn to_undirected(g: &Graph) -> Graph {
    let mut seen = HashSet::with_capacity(g.edges.len());
    let edges = g
        .edges
        .iter()
        .map(|e| Edge::canonical(e.u, e.v))
        .filter(|e| !e.is_loop() && seen.insert(*e))
        .collect();
    Graph {
        edges,
        ..Graph::new(g.n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// Each edge points either way with probability 1/2.
    Random,
    /// From the smaller to the larger id.
    ById,
}

/// Directed copy of an undirected graph.
pub fn orient(g: &Graph, rule: Orientation, rng: &mut RngStream) -> Graph {
    let edges = g
        .edges
        .iter()
        .map(|e| {
            let (lo, hi) = (e.u.min(e.v), e.u.max(e.v));
            match rule {
                Orientation::ById => Edge::new(lo, hi),
                Orientation::Random => {
                    if rng.below(2) == 0 {
                        Edge::new(lo, hi)
                    } else {
                        Edge::new(hi, lo)
                    }
                }
            }
        })
        .collect();
    Graph {
        n: g.n,
        directed: true,
        allow_loops: g.allow_loops,
        allow_multi: g.allow_multi,
        edges,
    }
}
