//! Generators with a prescribed degree sequence, and the Markov chains that
//! randomise a realisation while keeping its degrees.

use std::cmp::Reverse;
use std::collections::{BTreeSet, HashSet};

use crate::error::{GraphError, Result};
use crate::graph::{AdjacencyGraph, DegreeSequence, Edge, Graph, Node};
use crate::parallel::{Partition, PartitionedModel};
use crate::random::{fisher_yates, geometric_unchecked, RngStream};

/// Erdős–Gallai test: for every `k`, the `k` largest degrees sum to at
/// most `k (k - 1) + sum_{i > k} min(d_i, k)`.
pub fn is_graphical(degrees: &DegreeSequence) -> bool {
    let mut d = degrees.0.clone();
    if d.iter().sum::<usize>() % 2 == 1 {
        return false;
    }
    d.sort_unstable_by(|a, b| b.cmp(a));
    let n = d.len();
    let mut suffix = vec![0u128; n + 1];
    for i in (0..n).rev() {
        suffix[i] = suffix[i + 1] + d[i] as u128;
    }
    // p = number of entries with d_i >= k; shrinks as k grows.
    let mut p = n;
    let mut lhs = 0u128;
    for k in 1..=n {
        lhs += d[k - 1] as u128;
        while p > 0 && d[p - 1] < k {
            p -= 1;
        }
        let big = p.saturating_sub(k) as u128;
        let rest = suffix[p.max(k)];
        let k128 = k as u128;
        if lhs > k128 * (k128 - 1) + k128 * big + rest {
            return false;
        }
    }
    true
}

/// Deterministic realisation: repeatedly connect the node of largest
/// residual degree (smallest id on ties) to the next largest ones.
pub fn havel_hakimi(degrees: &DegreeSequence) -> Result<Graph> {
    let n = degrees.len();
    if n > Node::MAX as usize {
        return Err(GraphError::InvalidParameter(format!("n = {n} too large")));
    }
    let mut residual = degrees.0.clone();
    let mut queue: BTreeSet<(Reverse<usize>, Node)> = residual
        .iter()
        .enumerate()
        .filter(|(_, &d)| d > 0)
        .map(|(v, &d)| (Reverse(d), v as Node))
        .collect();
    let mut g = Graph::new(n);
    let mut taken = Vec::new();
    while let Some((Reverse(d), u)) = queue.pop_first() {
        taken.clear();
        for _ in 0..d {
            match queue.pop_first() {
                Some(entry) => taken.push(entry),
                None => return Err(GraphError::NonGraphical),
            }
        }
        residual[u as usize] = 0;
        for &(Reverse(dv), v) in &taken {
            g.edges.push(Edge::canonical(u, v));
            residual[v as usize] = dv - 1;
            if dv > 1 {
                queue.insert((Reverse(dv - 1), v));
            }
        }
    }
    g.edges.sort_unstable();
    Ok(g)
}

/// How [`ChungLu`] treats pairs with `w_i w_j > W`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChungLuMode {
    /// Reject weights with `max w_i^2 > W`.
    #[default]
    Strict,
    /// Clamp such pair probabilities to one and count them.
    Clamp,
}

const CHUNG_LU_ROWS: usize = 1024;

/// Chung-Lu graph via Miller–Hagberg skipping over weight-sorted rows.
#[derive(Debug, Clone)]
pub struct ChungLu {
    /// Weights in non-increasing order.
    sorted: Vec<f64>,
    /// Original label of each sorted position.
    label: Vec<Node>,
    total: f64,
    clamped: u64,
}

impl ChungLu {
    pub fn new(weights: &[f64], mode: ChungLuMode) -> Result<Self> {
        if weights.is_empty() {
            return Err(GraphError::InvalidWeights("no weights".into()));
        }
        if weights.len() > Node::MAX as usize {
            return Err(GraphError::InvalidParameter(format!("n = {} too large", weights.len())));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(GraphError::InvalidWeights("negative or non-finite weight".into()));
        }
        let mut label: Vec<Node> = (0..weights.len() as Node).collect();
        label.sort_by(|&a, &b| weights[b as usize].total_cmp(&weights[a as usize]).then(a.cmp(&b)));
        let sorted: Vec<f64> = label.iter().map(|&v| weights[v as usize]).collect();
        let total: f64 = sorted.iter().sum();
        let max = sorted[0];
        if max * max > total && mode == ChungLuMode::Strict {
            return Err(GraphError::InvalidWeights(format!(
                "max weight {max} violates max w^2 <= W = {total}"
            )));
        }
        let mut clamped = 0u64;
        for i in 0..sorted.len() {
            if sorted[i] * sorted[0] <= total {
                break;
            }
            // Partners j > i with w_i w_j > W form a prefix of the tail.
            let tail = &sorted[i + 1..];
            clamped += tail.partition_point(|&w| sorted[i] * w > total) as u64;
        }
        Ok(ChungLu {
            sorted,
            label,
            total,
            clamped,
        })
    }

    pub fn n(&self) -> usize {
        self.sorted.len()
    }

    /// Pairs whose probability was clamped to one.
    pub fn clamped_pairs(&self) -> u64 {
        self.clamped
    }

    #[inline]
    fn prob(&self, i: usize, j: usize) -> f64 {
        if self.total <= 0.0 {
            return 0.0;
        }
        (self.sorted[i] * self.sorted[j] / self.total).min(1.0)
    }

    fn chunks(&self) -> u64 {
        self.n().div_ceil(CHUNG_LU_ROWS) as u64
    }

    fn emit_row(&self, u: usize, rng: &mut RngStream, sink: &mut dyn FnMut(Edge)) {
        let n = self.n();
        let mut v = u + 1;
        if v >= n {
            return;
        }
        let mut p = self.prob(u, v);
        while v < n && p > 0.0 {
            if p < 1.0 {
                v = v.saturating_add(geometric_unchecked(rng, p).min(n as u64) as usize);
            }
            if v < n {
                let q = self.prob(u, v);
                if q >= p || rng.uniform_f64() < q / p {
                    sink(Edge::canonical(self.label[u], self.label[v]));
                }
                p = q;
                v += 1;
            }
        }
    }
}

impl PartitionedModel for ChungLu {
    fn empty_graph(&self) -> Graph {
        Graph::new(self.n())
    }

    fn emit_part(&self, rng: &RngStream, part: Partition, sink: &mut dyn FnMut(Edge)) -> Result<()> {
        for c in part.range_of(self.chunks()) {
            let mut sub = rng.derive("chung-lu", c);
            let lo = c as usize * CHUNG_LU_ROWS;
            let hi = (lo + CHUNG_LU_ROWS).min(self.n());
            for u in lo..hi {
                self.emit_row(u, &mut sub, sink);
            }
        }
        Ok(())
    }
}

/// Chung-Lu graph; with a partition, only that partition's rows.
pub fn chung_lu(weights: &[f64], mode: ChungLuMode, rng: &RngStream, partition: Option<Partition>) -> Result<Graph> {
    ChungLu::new(weights, mode)?.generate_part(rng, partition.unwrap_or_else(Partition::whole))
}

fn check_even(degrees: &DegreeSequence) -> Result<()> {
    if degrees.sum() % 2 == 1 {
        return Err(GraphError::Infeasible(format!("degree sum {} is odd", degrees.sum())));
    }
    if degrees.len() > Node::MAX as usize {
        return Err(GraphError::InvalidParameter(format!("n = {} too large", degrees.len())));
    }
    Ok(())
}

fn balls(degrees: &[usize]) -> Vec<Node> {
    let mut out = Vec::with_capacity(degrees.iter().sum());
    for (v, &d) in degrees.iter().enumerate() {
        out.extend(std::iter::repeat_n(v as Node, d));
    }
    out
}

fn pairing(degrees: &DegreeSequence, rng: &mut RngStream) -> Graph {
    let mut urn = balls(&degrees.0);
    fisher_yates(rng, &mut urn);
    let mut g = Graph::multigraph(degrees.len());
    g.edges = urn.chunks_exact(2).map(|p| Edge::canonical(p[0], p[1])).collect();
    g
}

/// Configuration model: a uniform pairing of the degree balls. Loops count
/// twice towards their node's degree.
pub fn configuration_model(degrees: &DegreeSequence, rng: &mut RngStream) -> Result<Graph> {
    check_even(degrees)?;
    Ok(pairing(degrees, rng))
}

/// Configuration model with loops and repeated pairs deleted.
pub fn erased_cm(degrees: &DegreeSequence, rng: &mut RngStream) -> Result<Graph> {
    let multi = configuration_model(degrees, rng)?;
    let mut edges: Vec<Edge> = multi.edges.into_iter().filter(|e| !e.is_loop()).collect();
    edges.sort_unstable();
    edges.dedup();
    let mut g = Graph::new(degrees.len());
    g.edges = edges;
    Ok(g)
}

/// Default attempt budget of the rejection samplers.
pub const DEFAULT_MAX_TRIES: u64 = 100_000;

/// Configuration model repeated until the pairing is simple.
pub fn cm_simple_rejection(degrees: &DegreeSequence, rng: &mut RngStream, max_tries: u64) -> Result<Graph> {
    check_even(degrees)?;
    if !is_graphical(degrees) {
        return Err(GraphError::NonGraphical);
    }
    for _ in 0..max_tries {
        let g = pairing(degrees, rng);
        if g.is_simple() {
            let mut out = Graph::new(degrees.len());
            out.edges = g.edges;
            return Ok(out);
        }
    }
    Err(GraphError::BudgetExceeded(max_tries))
}

/// Directed configuration model: shuffled in-balls matched against the
/// out-balls in node order.
pub fn cm_directed(in_degrees: &DegreeSequence, out_degrees: &DegreeSequence, rng: &mut RngStream) -> Result<Graph> {
    if in_degrees.len() != out_degrees.len() {
        return Err(GraphError::InvalidParameter(format!(
            "{} in-degrees but {} out-degrees",
            in_degrees.len(),
            out_degrees.len()
        )));
    }
    if in_degrees.sum() != out_degrees.sum() {
        return Err(GraphError::Infeasible(format!(
            "in-degree sum {} differs from out-degree sum {}",
            in_degrees.sum(),
            out_degrees.sum()
        )));
    }
    let sources = balls(&out_degrees.0);
    let mut targets = balls(&in_degrees.0);
    fisher_yates(rng, &mut targets);
    let mut g = Graph {
        allow_loops: true,
        allow_multi: true,
        ..Graph::directed(in_degrees.len())
    };
    g.edges = sources.into_iter().zip(targets).map(|(u, v)| Edge::new(u, v)).collect();
    Ok(g)
}

/// Random `d`-regular simple graph by whole-pairing rejection. Acceptance
/// decays like `exp(-(d^2 - 1) / 4)`, so this is practical for `d <= 7`.
pub fn random_regular(n: usize, d: usize, rng: &mut RngStream, max_tries: u64) -> Result<Graph> {
    if d >= n.max(1) && !(n == 0 && d == 0) {
        return Err(GraphError::Infeasible(format!("degree {d} needs more than {n} nodes")));
    }
    if (n * d) % 2 == 1 {
        return Err(GraphError::Infeasible(format!("n * d = {} is odd", n * d)));
    }
    cm_simple_rejection(&DegreeSequence::regular(n, d), rng, max_tries)
}

/// Edge-switching Markov chain over simple undirected graphs.
///
/// Edges live in an array so that a uniform edge is one draw; per-node hash
/// sets answer adjacency queries. A switch takes edges `{u, v}`, `{x, y}`
/// and rewires them to `{u, y}, {x, v}` (orientation 0) or
/// `{u, x}, {v, y}` (orientation 1).
#[derive(Debug, Clone)]
pub struct EdgeSwitcher {
    n: usize,
    edges: Vec<(Node, Node)>,
    adj: Vec<HashSet<Node>>,
    degree: Vec<usize>,
    dk2: bool,
    accepted: u64,
    attempted: u64,
}

impl EdgeSwitcher {
    pub fn new(g: &AdjacencyGraph, dk2_restricted: bool) -> Result<Self> {
        if g.directed {
            return Err(GraphError::Unsupported("edge switching needs an undirected graph".into()));
        }
        let n = g.n();
        let mut edges = Vec::with_capacity(g.m());
        let mut adj = Vec::with_capacity(n);
        for u in 0..n as Node {
            adj.push(g.neighbors(u).iter().copied().collect::<HashSet<_>>());
            edges.extend(g.neighbors(u).iter().filter(|&&v| u < v).map(|&v| (u, v)));
        }
        Ok(EdgeSwitcher {
            n,
            degree: (0..n as Node).map(|u| g.degree(u)).collect(),
            edges,
            adj,
            dk2: dk2_restricted,
            accepted: 0,
            attempted: 0,
        })
    }

    pub fn accepted(&self) -> u64 {
        self.accepted
    }

    pub fn attempted(&self) -> u64 {
        self.attempted
    }

    /// Applies the switch of edge slots `e1`, `e2` with the given
    /// orientation if it keeps the graph simple (and, in dK-2 mode, the
    /// joint degree counts). Returns whether it was applied.
    pub fn try_switch(&mut self, e1: usize, e2: usize, orientation: bool) -> bool {
        self.attempted += 1;
        if e1 == e2 {
            return false;
        }
        let (u, v) = self.edges[e1];
        let (x, y) = self.edges[e2];
        let (a, b) = if orientation { ((u, x), (v, y)) } else { ((u, y), (x, v)) };
        if a.0 == a.1 || b.0 == b.1 {
            return false;
        }
        if self.adj[a.0 as usize].contains(&a.1) || self.adj[b.0 as usize].contains(&b.1) {
            return false;
        }
        if self.dk2 {
            let pair = |p: (Node, Node)| {
                let (da, db) = (self.degree[p.0 as usize], self.degree[p.1 as usize]);
                (da.min(db), da.max(db))
            };
            let mut before = [pair((u, v)), pair((x, y))];
            let mut after = [pair(a), pair(b)];
            before.sort_unstable();
            after.sort_unstable();
            if before != after {
                return false;
            }
        }
        for (p, q) in [(u, v), (x, y)] {
            self.adj[p as usize].remove(&q);
            self.adj[q as usize].remove(&p);
        }
        for (p, q) in [a, b] {
            self.adj[p as usize].insert(q);
            self.adj[q as usize].insert(p);
        }
        self.edges[e1] = (a.0.min(a.1), a.0.max(a.1));
        self.edges[e2] = (b.0.min(b.1), b.0.max(b.1));
        self.accepted += 1;
        true
    }

    /// One chain step: two distinct uniform edge slots and a uniform
    /// orientation. Rejected proposals still count as a step.
    pub fn step(&mut self, rng: &mut RngStream) {
        let m = self.edges.len() as u64;
        if m < 2 {
            return;
        }
        let e1 = rng.below(m);
        let mut e2 = rng.below(m - 1);
        if e2 >= e1 {
            e2 += 1;
        }
        let orientation = rng.below(2) == 1;
        self.try_switch(e1 as usize, e2 as usize, orientation);
    }

    pub fn run(&mut self, steps: u64, rng: &mut RngStream) {
        for _ in 0..steps {
            self.step(rng);
        }
    }

    pub fn graph(&self) -> AdjacencyGraph {
        let mut neighbors = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            neighbors[u as usize].push(v);
            neighbors[v as usize].push(u);
        }
        AdjacencyGraph::from_neighbors(false, neighbors)
    }
}

/// `num_swaps` edge-switching steps. Graphs with fewer than two edges are
/// returned unchanged.
pub fn edge_switch(g: &AdjacencyGraph, num_swaps: u64, rng: &mut RngStream, dk2_restricted: bool) -> Result<AdjacencyGraph> {
    let mut chain = EdgeSwitcher::new(g, dk2_restricted)?;
    chain.run(num_swaps, rng);
    Ok(chain.graph())
}

fn check_undirected(g: &AdjacencyGraph) -> Result<()> {
    if g.directed {
        return Err(GraphError::Unsupported("trades need an undirected graph".into()));
    }
    Ok(())
}

fn trade_in_place(g: &mut AdjacencyGraph, u: Node, v: Node, rng: &mut RngStream) -> Result<()> {
    if u == v {
        return Err(GraphError::InvalidTrade(format!("node {u} traded with itself")));
    }
    for x in [u, v] {
        if x as usize >= g.n() {
            return Err(GraphError::OutOfRange {
                node: x as u64,
                n: g.n() as u64,
            });
        }
    }
    let nu = g.neighbors(u);
    let nv = g.neighbors(v);
    let only_u: Vec<Node> = nu.iter().copied().filter(|&w| w != v && nv.binary_search(&w).is_err()).collect();
    let only_v: Vec<Node> = nv.iter().copied().filter(|&w| w != u && nu.binary_search(&w).is_err()).collect();
    if only_u.is_empty() || only_v.is_empty() {
        return Ok(());
    }
    let quota = only_u.len();
    let mut pool: Vec<Node> = only_u.iter().chain(&only_v).copied().collect();
    fisher_yates(rng, &mut pool);
    let (to_u, to_v) = pool.split_at(quota);
    let moved_to_v: Vec<Node> = to_v.iter().copied().filter(|w| only_u.binary_search(w).is_ok()).collect();
    let moved_to_u: Vec<Node> = to_u.iter().copied().filter(|w| only_v.binary_search(w).is_ok()).collect();
    for (from, to, moved) in [(u, v, &moved_to_v), (v, u, &moved_to_u)] {
        for &w in moved.iter() {
            let list = g.neighbors_mut(w);
            let at = list.binary_search(&from).expect("symmetric adjacency");
            list.remove(at);
            let at = list.binary_search(&to).unwrap_err();
            list.insert(at, to);
        }
    }
    let rebuild = |own: &[Node], lose: &[Node], gain: &[Node]| {
        let mut list: Vec<Node> = own.iter().copied().filter(|w| lose.binary_search(w).is_err()).collect();
        list.extend_from_slice(gain);
        list.sort_unstable();
        list
    };
    let mut lose_u = moved_to_v.clone();
    lose_u.sort_unstable();
    let mut lose_v = moved_to_u.clone();
    lose_v.sort_unstable();
    let new_u = rebuild(g.neighbors(u), &lose_u, &moved_to_u);
    let new_v = rebuild(g.neighbors(v), &lose_v, &moved_to_v);
    *g.neighbors_mut(u) = new_u;
    *g.neighbors_mut(v) = new_v;
    Ok(())
}

/// Curveball trade: the neighbours private to `u` or `v` are shuffled and
/// dealt back, each node keeping its number of private neighbours.
pub fn curveball_trade(g: &AdjacencyGraph, u: Node, v: Node, rng: &mut RngStream) -> Result<AdjacencyGraph> {
    check_undirected(g)?;
    let mut out = g.clone();
    trade_in_place(&mut out, u, v, rng)?;
    Ok(out)
}

/// Global Curveball: each round trades along a uniform random matching of
/// all nodes (one node sits out when `n` is odd).
pub fn global_curveball(g: &AdjacencyGraph, rounds: u64, rng: &mut RngStream) -> Result<AdjacencyGraph> {
    check_undirected(g)?;
    let mut out = g.clone();
    let mut order: Vec<Node> = (0..g.n() as Node).collect();
    for _ in 0..rounds {
        fisher_yates(rng, &mut order);
        for pair in order.chunks_exact(2) {
            trade_in_place(&mut out, pair[0], pair[1], rng)?;
        }
    }
    Ok(out)
}

/// Default number of switches per edge for [`fdsm`].
pub const DEFAULT_SWAPS_PER_EDGE: f64 = 10.0;

/// Havel–Hakimi realisation followed by `ceil(swaps_per_edge * m)` edge
/// switches.
pub fn fdsm(degrees: &DegreeSequence, swaps_per_edge: f64, rng: &mut RngStream) -> Result<Graph> {
    if !(swaps_per_edge >= 0.0 && swaps_per_edge.is_finite()) {
        return Err(GraphError::InvalidParameter(format!("swaps per edge {swaps_per_edge}")));
    }
    if !is_graphical(degrees) {
        return Err(GraphError::NonGraphical);
    }
    let start = havel_hakimi(degrees)?;
    let swaps = (swaps_per_edge * start.m() as f64).ceil() as u64;
    if swaps == 0 {
        return Ok(start);
    }
    let adj = AdjacencyGraph::from_graph(&start)?;
    Ok(edge_switch(&adj, swaps, rng, false)?.to_graph())
}
