//! Graph properties: density, degrees, clustering, distances, components.

use std::collections::{BTreeMap, VecDeque};

use crate::error::{GraphError, Result};
use crate::graph::{AdjacencyGraph, DegreeSequence, Graph, Node};
use crate::random::RngStream;
use crate::sampling::{sample_k_of_n, IndexRange};

/// Above this many nodes average distance is estimated from sampled sources.
pub const EXACT_DISTANCE_LIMIT: usize = 10_000;
pub const DISTANCE_SAMPLES: usize = 256;

/// `m / C(n, 2)` for an undirected simple graph; 0 when `n <= 1`.
pub fn density(g: &Graph) -> Result<f64> {
    if g.directed {
        return Err(GraphError::Unsupported("density of a directed graph".into()));
    }
    if !g.is_simple() {
        return Err(GraphError::Unsupported("density of a multigraph".into()));
    }
    if g.n <= 1 {
        return Ok(0.0);
    }
    let pairs = g.n as f64 * (g.n as f64 - 1.0) / 2.0;
    Ok(g.m() as f64 / pairs)
}

/// Degree of every node. Loops count twice; for directed graphs this is
/// in-degree plus out-degree.
pub fn degree_sequence_of(g: &Graph) -> DegreeSequence {
    let mut d = vec![0usize; g.n];
    for e in &g.edges {
        d[e.u as usize] += 1;
        d[e.v as usize] += 1;
    }
    DegreeSequence(d)
}

/// `(in, out)` degree sequences of a directed graph.
pub fn in_out_degrees(g: &Graph) -> (DegreeSequence, DegreeSequence) {
    let mut din = vec![0usize; g.n];
    let mut dout = vec![0usize; g.n];
    for e in &g.edges {
        dout[e.u as usize] += 1;
        din[e.v as usize] += 1;
    }
    (DegreeSequence(din), DegreeSequence(dout))
}

fn common_count(a: &[Node], b: &[Node]) -> usize {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

/// Density of the subgraph induced by `v`'s neighbourhood.
pub fn clustering_local(g: &AdjacencyGraph, v: Node) -> Result<f64> {
    if v as usize >= g.n() {
        return Err(GraphError::OutOfRange {
            node: v as u64,
            n: g.n() as u64,
        });
    }
    Ok(local_cc(g, v))
}

fn local_cc(g: &AdjacencyGraph, v: Node) -> f64 {
    let nv = g.neighbors(v);
    let d = nv.len();
    if d <= 1 {
        return 0.0;
    }
    let twice_links: usize = nv.iter().map(|&u| common_count(nv, g.neighbors(u))).sum();
    twice_links as f64 / (d * (d - 1)) as f64
}

/// Mean of the local clustering coefficient over all nodes, degree-0 and
/// degree-1 nodes included.
pub fn clustering_global(g: &AdjacencyGraph) -> f64 {
    if g.n() == 0 {
        return 0.0;
    }
    let total: f64 = (0..g.n() as Node).map(|v| local_cc(g, v)).sum();
    total / g.n() as f64
}

fn bfs_distance_sum(g: &AdjacencyGraph, source: Node, dist: &mut [u32], queue: &mut VecDeque<Node>) -> (u64, usize) {
    dist.fill(u32::MAX);
    dist[source as usize] = 0;
    queue.clear();
    queue.push_back(source);
    let (mut sum, mut reached) = (0u64, 0usize);
    while let Some(u) = queue.pop_front() {
        let du = dist[u as usize];
        sum += du as u64;
        reached += 1;
        for &w in g.neighbors(u) {
            if dist[w as usize] == u32::MAX {
                dist[w as usize] = du + 1;
                queue.push_back(w);
            }
        }
    }
    (sum, reached)
}

/// Mean shortest-path length over ordered pairs of distinct nodes. With
/// `sample_size`, BFS runs from that many distinct uniformly chosen sources
/// and the per-source means are averaged.
pub fn avg_distance(g: &AdjacencyGraph, sample_size: Option<usize>, rng: &mut RngStream) -> Result<f64> {
    let n = g.n();
    if n <= 1 {
        return Ok(0.0);
    }
    let sources: Vec<Node> = match sample_size {
        Some(k) if k < n => sample_k_of_n(k.max(1) as u64, IndexRange::upto(n as u64), rng)?
            .into_iter()
            .map(|x| x as Node)
            .collect(),
        _ => (0..n as Node).collect(),
    };
    let mut dist = vec![0u32; n];
    let mut queue = VecDeque::new();
    let mut total = 0.0;
    for &s in &sources {
        let (sum, reached) = bfs_distance_sum(g, s, &mut dist, &mut queue);
        if reached != n {
            return Err(GraphError::Disconnected);
        }
        total += sum as f64 / (n - 1) as f64;
    }
    Ok(total / sources.len() as f64)
}

/// Component of every node plus component sizes. Components are numbered
/// in order of their smallest node id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    pub labels: Vec<usize>,
    pub sizes: Vec<usize>,
}

impl Components {
    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    /// Index of the largest component, ties to the smallest label.
    pub fn largest(&self) -> Option<usize> {
        let max = *self.sizes.iter().max()?;
        self.sizes.iter().position(|&s| s == max)
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Connected components, ignoring edge direction.
pub fn connected_components(g: &Graph) -> Components {
    let mut parent: Vec<usize> = (0..g.n).collect();
    for e in &g.edges {
        let a = find(&mut parent, e.u as usize);
        let b = find(&mut parent, e.v as usize);
        if a != b {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            parent[hi] = lo;
        }
    }
    let mut label_of_root = vec![usize::MAX; g.n];
    let mut labels = vec![0; g.n];
    let mut sizes = Vec::new();
    for v in 0..g.n {
        let r = find(&mut parent, v);
        if label_of_root[r] == usize::MAX {
            label_of_root[r] = sizes.len();
            sizes.push(0);
        }
        labels[v] = label_of_root[r];
        sizes[labels[v]] += 1;
    }
    Components { labels, sizes }
}

pub fn is_connected(g: &Graph) -> bool {
    g.n <= 1 || connected_components(g).count() == 1
}

/// Summary statistics of an undirected simple graph.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphStats {
    pub n: usize,
    pub m: usize,
    pub density: f64,
    pub avg_degree: f64,
    pub global_cc: f64,
    /// degree -> number of nodes
    pub degree_histogram: BTreeMap<usize, usize>,
    pub avg_distance: Option<f64>,
    pub component_count: usize,
    pub largest_component_size: usize,
}

impl GraphStats {
    /// Computes all statistics. Average distance is only computed when
    /// requested and the graph is connected; it is exact up to
    /// [`EXACT_DISTANCE_LIMIT`] nodes and sampled beyond.
    pub fn compute(g: &Graph, with_distance: bool, rng: &mut RngStream) -> Result<Self> {
        let density = density(g)?;
        let adj = AdjacencyGraph::from_graph(g)?;
        let mut degree_histogram = BTreeMap::new();
        for v in 0..g.n as Node {
            *degree_histogram.entry(adj.degree(v)).or_insert(0) += 1;
        }
        let comps = connected_components(g);
        let avg_distance = if with_distance && comps.count() == 1 && g.n > 1 {
            let samples = (g.n > EXACT_DISTANCE_LIMIT).then_some(DISTANCE_SAMPLES);
            Some(avg_distance(&adj, samples, rng)?)
        } else {
            None
        };
        Ok(GraphStats {
            n: g.n,
            m: g.m(),
            density,
            avg_degree: if g.n == 0 { 0.0 } else { 2.0 * g.m() as f64 / g.n as f64 },
            global_cc: clustering_global(&adj),
            degree_histogram,
            avg_distance,
            component_count: comps.count(),
            largest_component_size: comps.largest().map_or(0, |c| comps.sizes[c]),
        })
    }
}

/// Discrete power-law fit of a degree tail.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerLawFit {
    pub gamma: f64,
    pub d_min: usize,
    pub tail_size: usize,
    pub ks_distance: f64,
}

/// Maximum-likelihood exponent of the degrees `>= d_min`, using the
/// continuous approximation with the half-integer correction.
pub fn power_law_exponent(degrees: &[usize], d_min: usize) -> Option<f64> {
    if d_min == 0 {
        return None;
    }
    let shift = d_min as f64 - 0.5;
    let (count, log_sum) = degrees
        .iter()
        .filter(|&&d| d >= d_min)
        .fold((0usize, 0.0), |(c, s), &d| (c + 1, s + (d as f64 / shift).ln()));
    (count > 0 && log_sum > 0.0).then(|| 1.0 + count as f64 / log_sum)
}

/// Fits the tail exponent, choosing `d_min` to minimise the KS distance
/// between the empirical tail and the fitted law. Candidate tails keep at
/// least `min_tail` observations.
pub fn fit_power_law_tail(degrees: &[usize], min_tail: usize) -> Option<PowerLawFit> {
    let mut sorted: Vec<usize> = degrees.iter().copied().filter(|&d| d > 0).collect();
    sorted.sort_unstable();
    let mut candidates: Vec<usize> = sorted.clone();
    candidates.dedup();
    let mut best: Option<PowerLawFit> = None;
    for &d_min in &candidates {
        let start = sorted.partition_point(|&d| d < d_min);
        let tail = &sorted[start..];
        if tail.len() < min_tail.max(2) {
            break;
        }
        let Some(gamma) = power_law_exponent(tail, d_min) else {
            continue;
        };
        // KS between empirical and fitted complementary CDFs at each
        // distinct tail value.
        let shift = d_min as f64 - 0.5;
        let n = tail.len() as f64;
        let mut ks = 0.0f64;
        let mut i = 0;
        while i < tail.len() {
            let d = tail[i];
            let emp = (tail.len() - i) as f64 / n;
            let fit = ((d as f64 - 0.5) / shift).powf(1.0 - gamma);
            ks = ks.max((emp - fit).abs());
            while i < tail.len() && tail[i] == d {
                i += 1;
            }
        }
        if best.as_ref().is_none_or(|b| ks < b.ks_distance) {
            best = Some(PowerLawFit {
                gamma,
                d_min,
                tail_size: tail.len(),
                ks_distance: ks,
            });
        }
    }
    best
}
