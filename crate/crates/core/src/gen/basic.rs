//! Erdős–Rényi graphs, preferential attachment, node copying, threshold
//! graphs and weighted random graphs.

use crate::error::{check_probability, GraphError, Result};
use crate::gen::{Region, Variant};
use crate::graph::{Edge, Graph, Node, WeightedGraph};
use crate::parallel::{chunk_bounds, chunk_count, Partition, PartitionedModel};
use crate::random::{geometric_unchecked, PriorIndexHash, RngStream};
use crate::sampling::{bernoulli_skip_with, sample_k_of_n_with, split_sample_counts, IndexRange};

/// Parameters of `G(n, p)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GnpParams {
    pub n: usize,
    pub p: f64,
    pub variant: Variant,
}

impl GnpParams {
    pub fn new(n: usize, p: f64) -> Self {
        GnpParams {
            n,
            p,
            variant: Variant::Undirected,
        }
    }

    pub fn bipartite(left: usize, right: usize, p: f64) -> Self {
        GnpParams {
            n: left + right,
            p,
            variant: Variant::Bipartite { left, right },
        }
    }
}

/// Parameters of `G(n, m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GnmParams {
    pub n: usize,
    pub m: u64,
    pub variant: Variant,
}

impl GnmParams {
    pub fn new(n: usize, m: u64) -> Self {
        GnmParams {
            n,
            m,
            variant: Variant::Undirected,
        }
    }

    pub fn bipartite(left: usize, right: usize, m: u64) -> Self {
        GnmParams {
            n: left + right,
            m,
            variant: Variant::Bipartite { left, right },
        }
    }
}

/// Partitioned `G(n, p)` by Bernoulli skipping over the linearised region.
#[derive(Debug, Clone)]
pub struct Gnp {
    region: Region,
    p: f64,
    chunks: u64,
}

impl Gnp {
    pub fn new(params: &GnpParams) -> Result<Self> {
        check_probability(params.p)?;
        let region = Region::new(params.n, params.variant)?;
        let chunks = chunk_count(region.capacity as u128, params.p * region.capacity as f64);
        Ok(Gnp {
            region,
            p: params.p,
            chunks,
        })
    }
}

impl PartitionedModel for Gnp {
    fn empty_graph(&self) -> Graph {
        self.region.empty_graph()
    }

    fn emit_part(&self, rng: &RngStream, part: Partition, sink: &mut dyn FnMut(Edge)) -> Result<()> {
        for c in part.range_of(self.chunks) {
            let (lo, hi) = chunk_bounds(self.region.capacity as u128, self.chunks, c);
            let mut sub = rng.derive("gnp", c);
            let range = IndexRange::new(lo as u64, hi as u64)?;
            bernoulli_skip_with(range, self.p, &mut sub, |e| sink(self.region.decode(e)))?;
        }
        Ok(())
    }
}

fn run(model: &impl PartitionedModel, rng: &RngStream, partition: Option<Partition>) -> Result<Graph> {
    model.generate_part(rng, partition.unwrap_or_else(Partition::whole))
}

/// `G(n, p)`; with a partition, only that partition's edges.
pub fn gnp(params: &GnpParams, rng: &RngStream, partition: Option<Partition>) -> Result<Graph> {
    run(&Gnp::new(params)?, rng, partition)
}

/// Partitioned `G(n, m)`: per-chunk counts by hypergeometric splitting,
/// then a uniform subset per chunk.
#[derive(Debug, Clone)]
pub struct Gnm {
    region: Region,
    m: u64,
    chunks: u64,
}

impl Gnm {
    pub fn new(params: &GnmParams) -> Result<Self> {
        let region = Region::new(params.n, params.variant)?;
        if params.m > region.capacity {
            return Err(GraphError::Infeasible(format!(
                "m exceeds capacity {}",
                region.capacity
            )));
        }
        let chunks = chunk_count(region.capacity as u128, params.m as f64);
        Ok(Gnm {
            region,
            m: params.m,
            chunks,
        })
    }
}

impl PartitionedModel for Gnm {
    fn empty_graph(&self) -> Graph {
        self.region.empty_graph()
    }

    fn emit_part(&self, rng: &RngStream, part: Partition, sink: &mut dyn FnMut(Edge)) -> Result<()> {
        let cap = self.region.capacity as u128;
        let boundaries: Vec<u64> = (0..=self.chunks)
            .map(|c| (cap * c as u128 / self.chunks as u128) as u64)
            .collect();
        let plan = split_sample_counts(self.m, &boundaries, &mut rng.derive("gnm-split", 0))?;
        for c in part.range_of(self.chunks) {
            let mut sub = rng.derive("gnm", c);
            sample_k_of_n_with(plan.counts[c as usize], plan.part(c as usize), &mut sub, |e| {
                sink(self.region.decode(e))
            })?;
        }
        Ok(())
    }
}

/// `G(n, m)`; with a partition, only that partition's edges.
pub fn gnm(params: &GnmParams, rng: &RngStream, partition: Option<Partition>) -> Result<Graph> {
    run(&Gnm::new(params)?, rng, partition)
}

/// Initial graph for growth models.
#[derive(Debug, Clone, PartialEq)]
pub enum SeedGraph {
    /// No seed nodes.
    Empty,
    /// Complete graph on the given number of nodes.
    Clique(usize),
    Custom(Graph),
}

impl SeedGraph {
    fn build(&self) -> Graph {
        match self {
            SeedGraph::Empty => Graph::new(0),
            SeedGraph::Clique(k) => {
                let k = *k as Node;
                Graph::from_edges(
                    k as usize,
                    (0..k).flat_map(|u| (u + 1..k).map(move |v| (u, v))),
                )
            }
            SeedGraph::Custom(g) => g.clone(),
        }
    }
}

/// Parameters of the Barabási–Albert model.
#[derive(Debug, Clone, PartialEq)]
pub struct BaParams {
    pub n: usize,
    /// Edges per new node.
    pub d: usize,
    pub seed: SeedGraph,
    /// Forbid loops and parallel edges.
    pub simple: bool,
}

/// Seed graph the BA generators start from. Simple mode on an empty seed
/// starts from `K_{d+1}`.
fn ba_seed(params: &BaParams) -> Result<Graph> {
    if params.d == 0 {
        return Err(GraphError::InvalidParameter("d must be at least 1".into()));
    }
    let seed = match (&params.seed, params.simple) {
        (SeedGraph::Empty | SeedGraph::Clique(0), true) => SeedGraph::Clique(params.d + 1).build(),
        (s, _) => s.build(),
    };
    if seed.directed {
        return Err(GraphError::Unsupported("directed seed graph".into()));
    }
    if params.simple && matches!(params.seed, SeedGraph::Clique(k) if k > 0 && params.d >= k) {
        return Err(GraphError::Infeasible(format!(
            "simple mode needs d = {} below the seed size",
            params.d
        )));
    }
    if params.simple {
        let touched = crate::stats::degree_sequence_of(&seed)
            .0
            .iter()
            .filter(|&&d| d > 0)
            .count();
        if touched < params.d {
            return Err(GraphError::Infeasible(format!(
                "simple mode needs at least d = {} seed nodes with edges, seed has {touched}",
                params.d
            )));
        }
    }
    if params.n < seed.n {
        return Err(GraphError::InvalidParameter(format!(
            "n = {} is smaller than the seed ({} nodes)",
            params.n, seed.n
        )));
    }
    if params.n > Node::MAX as usize {
        return Err(GraphError::InvalidParameter(format!("n = {} too large", params.n)));
    }
    Ok(seed)
}

fn ba_output(params: &BaParams) -> Graph {
    if params.simple {
        Graph::new(params.n)
    } else {
        Graph::multigraph(params.n)
    }
}

/// Batagelj–Brandes preferential attachment over the edge array: edge `i`
/// of the array occupies positions `2i-1` (the new node) and `2i` (a copy
/// of a uniformly chosen earlier position).
pub fn ba_sequential(params: &BaParams, rng: &mut RngStream) -> Result<Graph> {
    let seed = ba_seed(params)?;
    let mut out = ba_output(params);
    let d = params.d;
    let added = (params.n - seed.n) * d;
    let mut positions: Vec<Node> = Vec::with_capacity(2 * (seed.m() + added));
    for e in &seed.edges {
        positions.push(e.u);
        positions.push(e.v);
        out.edges.push(Edge::canonical(e.u, e.v));
    }
    let mut chosen: Vec<Node> = Vec::with_capacity(d);
    for j in seed.n..params.n {
        let j = j as Node;
        let before = positions.len() as u64;
        chosen.clear();
        for _ in 0..d {
            positions.push(j);
            let target = if params.simple {
                loop {
                    let t = positions[rng.below(before) as usize];
                    if !chosen.contains(&t) {
                        break t;
                    }
                }
            } else {
                // Positions [1, 2i) in one-based terms, including this
                // edge's own odd position.
                positions[rng.below(positions.len() as u64) as usize]
            };
            chosen.push(target);
            positions.push(target);
            out.edges.push(Edge::canonical(j, target));
        }
    }
    Ok(out)
}

/// Resolves a one-based position of the BA edge array by following `h`
/// from even positions until reaching an odd or seed position.
///
/// `seed_positions` holds the seed's positions; non-seed odd position
/// `2i - 1` belongs to node `seed_nodes + (i - seed_edges - 1) / d`.
pub fn ba_resolve(
    position: u64,
    d: u64,
    seed_nodes: u64,
    seed_positions: &[Node],
    mut h: impl FnMut(u64) -> u64,
) -> Node {
    let seed_len = seed_positions.len() as u64;
    let mut x = position;
    loop {
        if x <= seed_len {
            return seed_positions[(x - 1) as usize];
        }
        if x % 2 == 1 {
            let i = x.div_ceil(2) - seed_len / 2;
            return (seed_nodes + (i - 1) / d) as Node;
        }
        x = h(x);
    }
}

/// Communication-free preferential attachment: every array position is a
/// pure function of the seed, so any range of edges can be produced
/// independently. Loops and parallel edges are kept.
#[derive(Debug, Clone)]
pub struct BaHash {
    n: usize,
    d: u64,
    seed: Graph,
    seed_positions: Vec<Node>,
}

impl BaHash {
    pub fn new(params: &BaParams) -> Result<Self> {
        if params.simple {
            return Err(GraphError::Unsupported(
                "hash-based attachment produces multigraphs; simplify afterwards".into(),
            ));
        }
        let seed = ba_seed(params)?;
        let seed_positions = seed.edges.iter().flat_map(|e| [e.u, e.v]).collect();
        Ok(BaHash {
            n: params.n,
            d: params.d as u64,
            seed,
            seed_positions,
        })
    }

    fn added_edges(&self) -> u64 {
        (self.n - self.seed.n) as u64 * self.d
    }
}

impl PartitionedModel for BaHash {
    fn empty_graph(&self) -> Graph {
        Graph::multigraph(self.n)
    }

    fn emit_part(&self, rng: &RngStream, part: Partition, sink: &mut dyn FnMut(Edge)) -> Result<()> {
        if part.index == 0 {
            for e in &self.seed.edges {
                sink(Edge::canonical(e.u, e.v));
            }
        }
        let h = PriorIndexHash::from_stream(rng);
        let m0 = self.seed.m() as u64;
        for k in part.range_of(self.added_edges()) {
            let i = m0 + k + 1;
            let u = (self.seed.n as u64 + k / self.d) as Node;
            let v = ba_resolve(2 * i, self.d, self.seed.n as u64, &self.seed_positions, |x| {
                h.prior_unchecked(x)
            });
            sink(Edge::canonical(u, v));
        }
        Ok(())
    }
}

/// Hash-based BA; with a partition, only that partition's edges.
pub fn ba_hash(params: &BaParams, rng: &RngStream, partition: Option<Partition>) -> Result<Graph> {
    run(&BaHash::new(params)?, rng, partition)
}

/// Parameters of the node-copy model.
#[derive(Debug, Clone, PartialEq)]
pub struct CopyParams {
    pub n: usize,
    pub d: usize,
    /// Probability of linking to the picked node itself.
    pub p: f64,
    pub seed: Graph,
    pub simple: bool,
}

/// Node copying: each new node makes `d` links; a link picks a uniform
/// earlier node `v` and with probability `p` attaches to it, otherwise
/// copies one of `v`'s own links. A node's links are the ones it made on
/// arrival (seed nodes: their seed neighbours). Picks without links are
/// redrawn.
pub fn node_copy(params: &CopyParams, rng: &mut RngStream) -> Result<Graph> {
    check_probability(params.p)?;
    let seed = &params.seed;
    if seed.n == 0 {
        return Err(GraphError::Infeasible("node copying needs a nonempty seed".into()));
    }
    if seed.directed {
        return Err(GraphError::Unsupported("directed seed graph".into()));
    }
    if params.d == 0 {
        return Err(GraphError::InvalidParameter("d must be at least 1".into()));
    }
    if params.simple && seed.n < params.d {
        return Err(GraphError::Infeasible(format!(
            "simple mode needs at least d = {} seed nodes",
            params.d
        )));
    }
    if params.n < seed.n || params.n > Node::MAX as usize {
        return Err(GraphError::InvalidParameter(format!(
            "n = {} incompatible with a seed of {} nodes",
            params.n, seed.n
        )));
    }
    let mut out = if params.simple {
        Graph::new(params.n)
    } else {
        Graph::multigraph(params.n)
    };
    let mut links: Vec<Vec<Node>> = vec![Vec::new(); params.n];
    for e in &seed.edges {
        out.edges.push(Edge::canonical(e.u, e.v));
        links[e.u as usize].push(e.v);
        if e.u != e.v {
            links[e.v as usize].push(e.u);
        }
    }
    let mut linked = links.iter().filter(|l| !l.is_empty()).count();
    let mut chosen: Vec<Node> = Vec::with_capacity(params.d);
    for j in seed.n..params.n {
        chosen.clear();
        while chosen.len() < params.d {
            let v = rng.below(j as u64) as usize;
            let target = if rng.bernoulli(params.p) || linked == 0 {
                v as Node
            } else if links[v].is_empty() {
                continue;
            } else {
                links[v][rng.below(links[v].len() as u64) as usize]
            };
            if params.simple && chosen.contains(&target) {
                continue;
            }
            chosen.push(target);
        }
        for &t in &chosen {
            out.edges.push(Edge::canonical(t, j as Node));
        }
        links[j].extend_from_slice(&chosen);
        linked += 1;
    }
    Ok(out)
}

/// Threshold graph: node `v` is dominating when its coin, a pure function
/// of the stream and `v`, falls below `p`. Edge `{u, v}` with `u < v`
/// exists iff `v` is dominating.
#[derive(Debug, Clone)]
pub struct ThresholdGraph {
    n: usize,
    p: f64,
}

impl ThresholdGraph {
    pub fn new(n: usize, p_dominating: f64) -> Result<Self> {
        check_probability(p_dominating)?;
        if n > Node::MAX as usize {
            return Err(GraphError::InvalidParameter(format!("n = {n} too large")));
        }
        Ok(ThresholdGraph { n, p: p_dominating })
    }

    pub fn is_dominating(&self, rng: &RngStream, v: Node) -> bool {
        rng.hash_unit(v as u64) < self.p
    }

    pub fn coins(&self, rng: &RngStream) -> Vec<bool> {
        (0..self.n as Node).map(|v| self.is_dominating(rng, v)).collect()
    }

    /// Neighbours of `v`, recomputed from the coins alone.
    pub fn neighbors(&self, rng: &RngStream, v: Node) -> Vec<Node> {
        let mut out: Vec<Node> = if self.is_dominating(rng, v) {
            (0..v).collect()
        } else {
            Vec::new()
        };
        out.extend((v + 1..self.n as Node).filter(|&w| self.is_dominating(rng, w)));
        out
    }
}

impl PartitionedModel for ThresholdGraph {
    fn empty_graph(&self) -> Graph {
        Graph::new(self.n)
    }

    fn emit_part(&self, rng: &RngStream, part: Partition, sink: &mut dyn FnMut(Edge)) -> Result<()> {
        for v in part.range_of(self.n as u64) {
            let v = v as Node;
            if self.is_dominating(rng, v) {
                for u in 0..v {
                    sink(Edge::new(u, v));
                }
            }
        }
        Ok(())
    }
}

/// Threshold graph; with a partition, only edges whose larger endpoint lies
/// in the partition's node range.
pub fn threshold_graph(
    n: usize,
    p_dominating: f64,
    rng: &RngStream,
    partition: Option<Partition>,
) -> Result<Graph> {
    run(&ThresholdGraph::new(n, p_dominating)?, rng, partition)
}

/// Weighted random graph: every pair gets multiplicity `w ~ Geom(p')`;
/// pairs with `w = 0` are omitted.
pub fn wrg(n: usize, p_prime: f64, rng: &mut RngStream) -> Result<WeightedGraph> {
    if !(p_prime > 0.0 && p_prime <= 1.0) {
        return Err(GraphError::InvalidProbability(p_prime));
    }
    let region = Region::new(n, Variant::Undirected)?;
    let mut graph = Graph::new(n);
    bernoulli_skip_with(IndexRange::upto(region.capacity), 1.0 - p_prime, rng, |e| {
        graph.edges.push(region.decode(e));
    })?;
    let weights = (0..graph.m()).map(|_| 1 + geometric_unchecked(rng, p_prime)).collect();
    Ok(WeightedGraph { graph, weights })
}
