//! Stochastic block model, R-MAT and BTER.

use std::collections::BTreeMap;

use crate::error::{check_probability, GraphError, Result};
use crate::gen::degree::{ChungLu, ChungLuMode};
use crate::gen::{Region, Variant};
use crate::graph::{Edge, Graph, Node};
use crate::parallel::{chunk_bounds, chunk_count, Partition, PartitionedModel};
use crate::random::{AliasTable, RngStream};
use crate::sampling::{bernoulli_skip_with, IndexRange};

#[derive(Debug, Clone, PartialEq)]
pub struct SbmParams {
    pub n: usize,
    /// Community probabilities, summing to one.
    pub community_probs: Vec<f64>,
    /// Symmetric `k x k` matrix of edge probabilities.
    pub matrix: Vec<Vec<f64>>,
}

/// Graph with a planted partition; `labels[v]` is the community of `v`.
#[derive(Debug, Clone, PartialEq)]
pub struct Labeled {
    pub graph: Graph,
    pub labels: Vec<u32>,
}

#[derive(Debug, Clone)]
struct SbmUnit {
    left: usize,
    right: usize,
    p: f64,
    lo: u64,
    hi: u64,
    region: Region,
    /// Sub-key of the block this unit belongs to.
    block: u64,
    chunk: u64,
}

/// Stochastic block model. Nodes are sorted by community so that every
/// pair of communities is a rectangle (or triangle) of the adjacency matrix
/// sampled by Bernoulli skipping; each rectangle is cut into chunks.
#[derive(Debug, Clone)]
pub struct Sbm {
    n: usize,
    labels: Vec<u32>,
    /// Nodes in community order.
    order: Vec<Node>,
    units: Vec<SbmUnit>,
    offsets: Vec<usize>,
}

impl Sbm {
    /// Validates the parameters and draws the community of every node.
    pub fn new(params: &SbmParams, rng: &RngStream) -> Result<Self> {
        let k = params.community_probs.len();
        if k == 0 {
            return Err(GraphError::InvalidParameter("no communities".into()));
        }
        if params.n > Node::MAX as usize {
            return Err(GraphError::InvalidParameter(format!("n = {} too large", params.n)));
        }
        let sum: f64 = params.community_probs.iter().sum();
        if params.community_probs.iter().any(|p| !(*p >= 0.0)) || (sum - 1.0).abs() > 1e-12 {
            return Err(GraphError::InvalidParameter(format!(
                "community probabilities must be non-negative and sum to 1 (sum {sum})"
            )));
        }
        if params.matrix.len() != k || params.matrix.iter().any(|row| row.len() != k) {
            return Err(GraphError::InvalidParameter(format!("block matrix must be {k} x {k}")));
        }
        for i in 0..k {
            for j in 0..k {
                let p = params.matrix[i][j];
                check_probability(p).map_err(|_| {
                    GraphError::InvalidParameter(format!("block probability {p} outside [0, 1]"))
                })?;
                if p != params.matrix[j][i] {
                    return Err(GraphError::InvalidParameter("block matrix is not symmetric".into()));
                }
            }
        }
        let table = AliasTable::new(&params.community_probs)
            .map_err(|e| GraphError::InvalidParameter(e.to_string()))?;
        let mut assign = rng.derive("sbm-assign", 0);
        let labels: Vec<u32> = (0..params.n).map(|_| table.sample(&mut assign) as u32).collect();
        let mut sizes = vec![0usize; k];
        for &c in &labels {
            sizes[c as usize] += 1;
        }
        let mut offsets = vec![0usize; k + 1];
        for c in 0..k {
            offsets[c + 1] = offsets[c] + sizes[c];
        }
        let mut next = offsets.clone();
        let mut order = vec![0 as Node; params.n];
        for (v, &c) in labels.iter().enumerate() {
            order[next[c as usize]] = v as Node;
            next[c as usize] += 1;
        }
        let mut units = Vec::new();
        let mut block = 0u64;
        for i in 0..k {
            for j in i..k {
                let p = params.matrix[i][j];
                let region = if i == j {
                    Region::new(sizes[i], Variant::Undirected)?
                } else {
                    Region::new(sizes[i] + sizes[j], Variant::Bipartite { left: sizes[i], right: sizes[j] })?
                };
                let cap = region.capacity as u128;
                let chunks = chunk_count(cap, p * cap as f64);
                if p > 0.0 && cap > 0 {
                    for c in 0..chunks {
                        let (lo, hi) = chunk_bounds(cap, chunks, c);
                        units.push(SbmUnit {
                            left: offsets[i],
                            right: offsets[j],
                            p,
                            lo: lo as u64,
                            hi: hi as u64,
                            region,
                            block,
                            chunk: c,
                        });
                    }
                }
                block += 1;
            }
        }
        Ok(Sbm {
            n: params.n,
            labels,
            order,
            units,
            offsets,
        })
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    /// Community sizes in community order.
    pub fn sizes(&self) -> Vec<usize> {
        self.offsets.windows(2).map(|w| w[1] - w[0]).collect()
    }
}

impl PartitionedModel for Sbm {
    fn empty_graph(&self) -> Graph {
        Graph::new(self.n)
    }

    fn emit_part(&self, rng: &RngStream, part: Partition, sink: &mut dyn FnMut(Edge)) -> Result<()> {
        for idx in part.range_of(self.units.len() as u64) {
            let unit = &self.units[idx as usize];
            let mut sub = rng.derive("sbm-block", unit.block).derive("chunk", unit.chunk);
            let same = unit.left == unit.right;
            let left_size = bipartite_left(&unit.region);
            bernoulli_skip_with(IndexRange::new(unit.lo, unit.hi)?, unit.p, &mut sub, |e| {
                let local = unit.region.decode(e);
                let u = unit.left + local.u as usize;
                let v = if same {
                    unit.left + local.v as usize
                } else {
                    unit.right + (local.v as usize - left_size)
                };
                sink(Edge::canonical(self.order[u], self.order[v]));
            })?;
        }
        Ok(())
    }
}

fn bipartite_left(region: &Region) -> usize {
    match region.variant {
        Variant::Bipartite { left, .. } => left,
        _ => 0,
    }
}

/// Stochastic block model with its ground-truth labels; with a partition,
/// only that partition's edges (labels are always complete).
pub fn sbm(params: &SbmParams, rng: &RngStream, partition: Option<Partition>) -> Result<Labeled> {
    let model = Sbm::new(params, rng)?;
    let graph = model.generate_part(rng, partition.unwrap_or_else(Partition::whole))?;
    Ok(Labeled {
        graph,
        labels: model.labels,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RmatParams {
    /// `n = 2^scale`.
    pub scale: u32,
    pub m: u64,
    /// Quadrant weights `(a, b, c, d)`: top-left, top-right, bottom-left,
    /// bottom-right.
    pub weights: [f64; 4],
    /// Per-level noise amplitude in `[0, 0.5)`.
    pub noise: f64,
    /// Drop repeated edges after generation.
    pub dedup: bool,
    /// Emit `(min, max)` pairs; requires `b = c`.
    pub undirected: bool,
    /// Drop edges on the diagonal.
    pub drop_loops: bool,
}

impl RmatParams {
    pub fn new(scale: u32, m: u64, weights: [f64; 4]) -> Self {
        RmatParams {
            scale,
            m,
            weights,
            noise: 0.0,
            dedup: false,
            undirected: false,
            drop_loops: false,
        }
    }
}

const RMAT_CHUNK: u64 = 16_384;
/// Levels folded into one alias table (`4^6` entries).
const RMAT_BLOCK_LEVELS: u32 = 6;

/// R-MAT sampler. Each edge makes one quadrant choice per level; the
/// choices of up to six consecutive levels are drawn at once from an alias
/// table over their joint outcomes, which has exactly the law of the
/// level-by-level recursion.
///
/// Noise follows the smoothed Kronecker scheme: for each level `l` one
/// `u_l` uniform in `[-mu, mu]` is drawn per graph, and the level uses
/// `b + u_l`, `c + u_l`, `a - 2 u_l a / (a + d)`, `d - 2 u_l d / (a + d)`,
/// clipped at zero and renormalised.
#[derive(Debug, Clone)]
pub struct Rmat {
    params: RmatParams,
    /// Quadrant weights per level, after noise.
    levels: Vec<[f64; 4]>,
    /// One table per run of at most [`RMAT_BLOCK_LEVELS`] levels.
    blocks: Vec<(u32, AliasTable)>,
    naive: Vec<AliasTable>,
}

impl Rmat {
    pub fn new(params: &RmatParams, rng: &RngStream) -> Result<Self> {
        let w = params.weights;
        let sum: f64 = w.iter().sum();
        if w.iter().any(|x| !(*x >= 0.0)) || (sum - 1.0).abs() > 1e-12 {
            return Err(GraphError::InvalidParameter(format!(
                "quadrant weights must be non-negative and sum to 1 (sum {sum})"
            )));
        }
        if params.scale > 32 {
            return Err(GraphError::InvalidParameter(format!("scale {} exceeds 32", params.scale)));
        }
        if !(0.0..0.5).contains(&params.noise) {
            return Err(GraphError::InvalidParameter(format!("noise {} outside [0, 0.5)", params.noise)));
        }
        if params.undirected && w[1] != w[2] {
            return Err(GraphError::InvalidParameter("undirected R-MAT needs b = c".into()));
        }
        let mut noise = rng.derive("rmat-noise", 0);
        let levels: Vec<[f64; 4]> = (0..params.scale)
            .map(|_| {
                if params.noise == 0.0 {
                    return w;
                }
                let u = (2.0 * noise.uniform_f64() - 1.0) * params.noise;
                let ad = w[0] + w[3];
                let shrink = |x: f64| if ad > 0.0 { x - 2.0 * u * x / ad } else { x };
                let q = [shrink(w[0]), w[1] + u, w[2] + u, shrink(w[3])].map(|x| x.max(0.0));
                let t: f64 = q.iter().sum();
                q.map(|x| x / t)
            })
            .collect();
        let naive = levels
            .iter()
            .map(|q| AliasTable::new(q))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| GraphError::InvalidParameter(e.to_string()))?;
        let mut blocks = Vec::new();
        for chunk in levels.chunks(RMAT_BLOCK_LEVELS as usize) {
            let mut joint = vec![1.0f64];
            for q in chunk {
                joint = joint.iter().flat_map(|&p| q.iter().map(move |&x| p * x)).collect();
            }
            let table = AliasTable::new(&joint).map_err(|e| GraphError::InvalidParameter(e.to_string()))?;
            blocks.push((chunk.len() as u32, table));
        }
        Ok(Rmat {
            params: params.clone(),
            levels,
            blocks,
            naive,
        })
    }

    /// Effective quadrant weights of each level.
    pub fn level_weights(&self) -> &[[f64; 4]] {
        &self.levels
    }

    fn chunks(&self) -> u64 {
        self.params.m.div_ceil(RMAT_CHUNK)
    }

    /// One edge through the blocked tables.
    #[inline]
    pub fn sample_blocked(&self, rng: &mut RngStream) -> (u64, u64) {
        let (mut row, mut col) = (0u64, 0u64);
        for (len, table) in &self.blocks {
            let mut idx = table.sample(rng) as u64;
            let (mut r, mut c) = (0u64, 0u64);
            // Base-4 digits, most significant first, are the levels in
            // order; the last level is the lowest digit and the lowest bit.
            for bit in 0..*len {
                let q = idx & 3;
                idx >>= 2;
                r |= (q >> 1) << bit;
                c |= (q & 1) << bit;
            }
            row = (row << len) | r;
            col = (col << len) | c;
        }
        (row, col)
    }

    /// One edge by the level-by-level recursion.
    pub fn sample_naive(&self, rng: &mut RngStream) -> (u64, u64) {
        let (mut row, mut col) = (0u64, 0u64);
        for table in &self.naive {
            let q = table.sample(rng) as u64;
            row = (row << 1) | (q >> 1);
            col = (col << 1) | (q & 1);
        }
        (row, col)
    }

    /// Applies the dedup flag to a generated edge list.
    pub fn finish(&self, mut g: Graph) -> Graph {
        if self.params.dedup {
            g.edges.sort_unstable();
            g.edges.dedup();
            g.allow_multi = false;
        }
        g
    }
}

impl PartitionedModel for Rmat {
    fn empty_graph(&self) -> Graph {
        let n = 1usize << self.params.scale;
        let base = if self.params.undirected { Graph::new(n) } else { Graph::directed(n) };
        Graph {
            allow_loops: !self.params.drop_loops,
            allow_multi: true,
            ..base
        }
    }

    fn emit_part(&self, rng: &RngStream, part: Partition, sink: &mut dyn FnMut(Edge)) -> Result<()> {
        for c in part.range_of(self.chunks()) {
            let mut sub = rng.derive("rmat", c);
            let lo = c * RMAT_CHUNK;
            let hi = (lo + RMAT_CHUNK).min(self.params.m);
            for _ in lo..hi {
                let (u, v) = self.sample_blocked(&mut sub);
                if self.params.drop_loops && u == v {
                    continue;
                }
                let (u, v) = (u as Node, v as Node);
                sink(if self.params.undirected { Edge::canonical(u, v) } else { Edge::new(u, v) });
            }
        }
        Ok(())
    }
}

/// R-MAT graph; with a partition, only that partition's edge range (dedup
/// then acts within the range).
pub fn rmat(params: &RmatParams, rng: &RngStream, partition: Option<Partition>) -> Result<Graph> {
    let model = Rmat::new(params, rng)?;
    let g = model.generate_part(rng, partition.unwrap_or_else(Partition::whole))?;
    Ok(model.finish(g))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BterParams {
    /// Number of nodes of each target degree.
    pub degree_counts: BTreeMap<usize, usize>,
    /// Target clustering coefficient per degree; missing degrees use 0.
    pub clustering: BTreeMap<usize, f64>,
    /// Factor applied to the number of degree-1 nodes, at least 1.
    pub beta: f64,
}


/// An affinity block of consecutive node ids.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffinityBlock {
    pub start: usize,
    pub size: usize,
    pub rho: f64,
}

/// Block structure and Chung-Lu weights of a BTER instance.
///
/// Each degree class `d` (ascending) is cut into homogeneous blocks of
/// `d + 1` nodes with `rho = c_d^(1/3)`. The leftovers of all classes are
/// then packed greedily, in ascending degree order, into mixed blocks whose
/// capacity and `rho` come from their smallest member; this packing is an
/// experimental heuristic. Node ids follow the block order: homogeneous
/// blocks, then mixed blocks, then degree-0 nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct BterPlan {
    pub degrees: Vec<usize>,
    pub blocks: Vec<AffinityBlock>,
    /// Target degree minus expected block degree, floored at 0.
    pub excess: Vec<f64>,
}

impl BterPlan {
    pub fn new(params: &BterParams) -> Result<Self> {
        if !(params.beta >= 1.0 && params.beta.is_finite()) {
            return Err(GraphError::InvalidParameter(format!("beta = {} must be at least 1", params.beta)));
        }
        for (&d, &c) in &params.clustering {
            if !(0.0..=1.0).contains(&c) {
                return Err(GraphError::InvalidParameter(format!("clustering target {c} for degree {d}")));
            }
        }
        let rho_of = |d: usize| params.clustering.get(&d).copied().unwrap_or(0.0).cbrt();
        let mut degrees = Vec::new();
        let mut blocks = Vec::new();
        let mut leftover = Vec::new();
        let mut isolated = 0;
        for (&d, &count) in &params.degree_counts {
            let count = if d == 1 { (count as f64 * params.beta).round() as usize } else { count };
            if d == 0 {
                isolated += count;
                continue;
            }
            let full = count / (d + 1);
            for _ in 0..full {
                blocks.push(AffinityBlock {
                    start: degrees.len(),
                    size: d + 1,
                    rho: rho_of(d),
                });
                degrees.extend(std::iter::repeat_n(d, d + 1));
            }
            leftover.extend(std::iter::repeat_n(d, count - full * (d + 1)));
        }
        let mut i = 0;
        while i < leftover.len() {
            let end = (i + leftover[i] + 1).min(leftover.len());
            blocks.push(AffinityBlock {
                start: degrees.len(),
                size: end - i,
                rho: rho_of(leftover[i]),
            });
            degrees.extend_from_slice(&leftover[i..end]);
            i = end;
        }
        degrees.extend(std::iter::repeat_n(0, isolated));
        if degrees.len() > Node::MAX as usize {
            return Err(GraphError::InvalidParameter(format!("n = {} too large", degrees.len())));
        }
        let mut excess: Vec<f64> = degrees.iter().map(|&d| d as f64).collect();
        for b in &blocks {
            let inside = b.rho * (b.size - 1) as f64;
            for w in &mut excess[b.start..b.start + b.size] {
                *w = (*w - inside).max(0.0);
            }
        }
        Ok(BterPlan { degrees, blocks, excess })
    }

    pub fn n(&self) -> usize {
        self.degrees.len()
    }
}

/// BTER graph: `G(size, rho)` on every affinity block plus a Chung-Lu graph
/// (clamp mode) on the excess degrees, merged without duplicates. Edges are
/// sorted.
pub fn bter(params: &BterParams, rng: &RngStream) -> Result<Graph> {
    let plan = BterPlan::new(params)?;
    let mut g = Graph::new(plan.n());
    for (b, block) in plan.blocks.iter().enumerate() {
        if block.rho <= 0.0 || block.size < 2 {
            continue;
        }
        let region = Region::new(block.size, Variant::Undirected)?;
        let mut sub = rng.derive("bter-block", b as u64);
        let base = block.start as Node;
        bernoulli_skip_with(IndexRange::upto(region.capacity), block.rho, &mut sub, |e| {
            let local = region.decode(e);
            g.edges.push(Edge::new(base + local.u, base + local.v));
        })?;
    }
    if plan.excess.iter().any(|&w| w > 0.0) {
        let cl = ChungLu::new(&plan.excess, ChungLuMode::Clamp)?;
        cl.emit_part(&rng.derive("bter-chung-lu", 0), Partition::whole(), &mut |e| g.edges.push(e))?;
    }
    g.edges.sort_unstable();
    g.edges.dedup();
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::basic::{gnp, GnpParams};
    use crate::gen::degree::chung_lu;
    use crate::stats::{clustering_local, degree_sequence_of};
    use crate::graph::AdjacencyGraph;
    use crate::verify::chi_square_test;

    fn two_block(n: usize) -> SbmParams {
        SbmParams {
            n,
            community_probs: vec![0.5, 0.5],
            matrix: vec![vec![0.5, 0.1], vec![0.1, 0.5]],
        }
    }

    #[test]
    fn sbm_validation() {
        let rng = RngStream::new(1);
        let mut p = two_block(10);
        p.community_probs = vec![0.5, 0.4];
        assert!(sbm(&p, &rng, None).is_err());
        let mut p = two_block(10);
        p.matrix[0][1] = 0.2;
        assert!(sbm(&p, &rng, None).is_err());
        let mut p = two_block(10);
        p.matrix[1][1] = 1.5;
        assert!(sbm(&p, &rng, None).is_err());
    }

    #[test]
    fn sbm_single_block_matches_gnp_edge_counts() {
        let params = SbmParams {
            n: 60,
            community_probs: vec![1.0],
            matrix: vec![vec![0.2]],
        };
        let runs = 300;
        let a: Vec<f64> = (0..runs)
            .map(|s| sbm(&params, &RngStream::new(s), None).unwrap().graph.m() as f64)
            .collect();
        let b: Vec<f64> = (0..runs)
            .map(|s| gnp(&GnpParams::new(60, 0.2), &RngStream::new(s + 10_000), None).unwrap().m() as f64)
            .collect();
        let ks = crate::verify::ks_two_sample(&a, &b);
        assert!(ks.p_value > 0.001, "{ks:?}");
    }

    #[test]
    fn sbm_identity_matrix_gives_cliques() {
        let params = SbmParams {
            n: 40,
            community_probs: vec![0.25; 4],
            matrix: (0..4).map(|i| (0..4).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect(),
        };
        let out = sbm(&params, &RngStream::new(2), None).unwrap();
        let mut expected = Vec::new();
        for u in 0..40 {
            for v in u + 1..40 {
                if out.labels[u] == out.labels[v] {
                    expected.push(Edge::new(u as Node, v as Node));
                }
            }
        }
        assert_eq!(out.graph.sorted_edges(), expected);
    }

    #[test]
    fn sbm_block_densities() {
        let params = two_block(400);
        let mut hits = [[0.0f64; 2]; 2];
        let mut pairs = [[0.0f64; 2]; 2];
        for s in 0..100 {
            let out = sbm(&params, &RngStream::new(s), None).unwrap();
            assert!(out.graph.validate().is_ok());
            let size0 = out.labels.iter().filter(|&&c| c == 0).count() as f64;
            let size1 = 400.0 - size0;
            pairs[0][0] += size0 * (size0 - 1.0) / 2.0;
            pairs[1][1] += size1 * (size1 - 1.0) / 2.0;
            pairs[0][1] += size0 * size1;
            for e in &out.graph.edges {
                let (a, b) = (out.labels[e.u as usize] as usize, out.labels[e.v as usize] as usize);
                hits[a.min(b)][a.max(b)] += 1.0;
            }
        }
        for (i, j) in [(0, 0), (0, 1), (1, 1)] {
            let p = params.matrix[i][j];
            let sd = (pairs[i][j] * p * (1.0 - p)).sqrt();
            assert!((hits[i][j] - pairs[i][j] * p).abs() < 4.0 * sd, "block {i}{j}");
        }
    }

    #[test]
    fn sbm_partitions_concatenate() {
        let params = SbmParams {
            n: 3000,
            community_probs: vec![0.2, 0.3, 0.5],
            matrix: vec![vec![0.05, 0.01, 0.0], vec![0.01, 0.04, 0.002], vec![0.0, 0.002, 0.03]],
        };
        let rng = RngStream::new(3);
        let model = Sbm::new(&params, &rng).unwrap();
        let whole = model.generate(&rng, 1).unwrap();
        assert!(whole.validate().is_ok());
        for t in [4, 13] {
            assert_eq!(model.generate(&rng, t).unwrap(), whole);
        }
    }

    #[test]
    fn rmat_degenerate_cases() {
        let rng = RngStream::new(4);
        let g = rmat(&RmatParams::new(0, 10, [0.25; 4]), &rng, None).unwrap();
        assert!(g.edges.iter().all(|&e| e == Edge::new(0, 0)) && g.m() == 10);
        let g = rmat(&RmatParams::new(7, 100, [1.0, 0.0, 0.0, 0.0]), &rng, None).unwrap();
        assert!(g.edges.iter().all(|&e| e == Edge::new(0, 0)) && g.m() == 100);
        let mut p = RmatParams::new(3, 10, [0.4, 0.3, 0.2, 0.1]);
        p.undirected = true;
        assert!(rmat(&p, &rng, None).is_err());
        assert!(rmat(&RmatParams::new(3, 10, [0.5, 0.3, 0.2, 0.1]), &rng, None).is_err());
    }

    fn cell_probs(levels: &[[f64; 4]]) -> Vec<f64> {
        let s = levels.len();
        let n = 1usize << s;
        let mut out = vec![0.0; n * n];
        for (cell, slot) in out.iter_mut().enumerate() {
            let (row, col) = (cell / n, cell % n);
            let mut p = 1.0;
            for (l, q) in levels.iter().enumerate() {
                let shift = s - 1 - l;
                let quadrant = ((row >> shift) & 1) * 2 + ((col >> shift) & 1);
                p *= q[quadrant];
            }
            *slot = p;
        }
        out
    }

    fn cell_counts(model: &Rmat, draws: usize, naive: bool, seed: u64) -> Vec<u64> {
        let n = 1usize << model.levels.len();
        let mut counts = vec![0u64; n * n];
        let mut rng = RngStream::new(seed);
        for _ in 0..draws {
            let (r, c) = if naive { model.sample_naive(&mut rng) } else { model.sample_blocked(&mut rng) };
            counts[r as usize * n + c as usize] += 1;
        }
        counts
    }

    #[test]
    fn rmat_uniform_weights_uniform_cells() {
        let g = rmat(&RmatParams::new(4, 1_000_000, [0.25; 4]), &RngStream::new(5), None).unwrap();
        let mut counts = vec![0u64; 256];
        for e in &g.edges {
            counts[e.u as usize * 16 + e.v as usize] += 1;
        }
        assert!(chi_square_test(&counts, &[1.0; 256], 0.001).passed);
    }

    #[test]
    fn rmat_blocked_matches_recursion() {
        for (scale, noise) in [(3, 0.0), (6, 0.0), (5, 0.1)] {
            let mut p = RmatParams::new(scale, 0, [0.57, 0.19, 0.19, 0.05]);
            p.noise = noise;
            let model = Rmat::new(&p, &RngStream::new(6)).unwrap();
            let exact = cell_probs(model.level_weights());
            for naive in [false, true] {
                let counts = cell_counts(&model, 400_000, naive, 7);
                let t = chi_square_test(&counts, &exact, 0.001);
                assert!(t.passed, "scale {scale} naive {naive}: {t:?}");
            }
        }
    }

    #[test]
    fn rmat_noise_keeps_levels_normalised() {
        let mut p = RmatParams::new(20, 0, [0.57, 0.19, 0.19, 0.05]);
        p.noise = 0.4;
        let model = Rmat::new(&p, &RngStream::new(8)).unwrap();
        for q in model.level_weights() {
            assert!((q.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(q.iter().all(|&x| x >= 0.0));
            assert_eq!(q[1], q[2]);
        }
        assert_ne!(model.level_weights()[0], model.level_weights()[1]);
    }

    #[test]
    fn rmat_flags_and_partitions() {
        let mut p = RmatParams::new(8, 50_000, [0.45, 0.2, 0.2, 0.15]);
        p.undirected = true;
        p.drop_loops = true;
        let rng = RngStream::new(9);
        let model = Rmat::new(&p, &rng).unwrap();
        let whole = model.generate(&rng, 1).unwrap();
        assert!(whole.edges.iter().all(|e| e.u < e.v));
        for t in [4, 13] {
            assert_eq!(model.generate(&rng, t).unwrap(), whole);
        }
        p.dedup = true;
        let simple = rmat(&p, &rng, None).unwrap();
        assert!(simple.is_simple() && simple.validate().is_ok());
        assert!(simple.m() < whole.m());
    }

    fn classes(pairs: &[(usize, usize)]) -> BTreeMap<usize, usize> {
        pairs.iter().copied().collect()
    }

    #[test]
    fn bter_full_clustering_gives_cliques() {
        let params = BterParams {
            degree_counts: classes(&[(3, 12)]),
            clustering: [(3, 1.0)].into_iter().collect(),
            beta: 1.0,
        };
        let g = bter(&params, &RngStream::new(10)).unwrap();
        assert_eq!(g.m(), 3 * 6);
        assert_eq!(degree_sequence_of(&g).0, vec![3; 12]);
        assert_eq!(crate::stats::connected_components(&g).count(), 3);
    }

    #[test]
    fn bter_zero_clustering_is_chung_lu() {
        let params = BterParams {
            degree_counts: classes(&[(2, 30), (5, 20)]),
            clustering: [(2, 0.0), (5, 0.0)].into_iter().collect(),
            beta: 1.0,
        };
        let rng = RngStream::new(11);
        let plan = BterPlan::new(&params).unwrap();
        assert!(plan.excess.iter().zip(&plan.degrees).all(|(&w, &d)| w == d as f64));
        let expected = chung_lu(&plan.excess, ChungLuMode::Clamp, &rng.derive("bter-chung-lu", 0), None).unwrap();
        assert_eq!(bter(&params, &rng).unwrap().edges, expected.sorted_edges());
    }

    #[test]
    fn bter_plan_blocks() {
        let params = BterParams {
            degree_counts: classes(&[(0, 2), (1, 3), (2, 7)]),
            clustering: [(2, 0.5)].into_iter().collect(),
            beta: 2.0,
        };
        let plan = BterPlan::new(&params).unwrap();
        // Six degree-1 nodes after inflation: three blocks of two. Seven of
        // degree 2: two blocks of three, one leftover.
        assert_eq!(plan.n(), 6 + 7 + 2);
        assert_eq!(plan.blocks.len(), 3 + 2 + 1);
        assert_eq!(plan.blocks[5], AffinityBlock { start: 12, size: 1, rho: 0.5f64.cbrt() });
        assert_eq!(&plan.degrees[13..], &[0, 0]);
        assert!(BterPlan::new(&BterParams { beta: 0.5, ..params.clone() }).is_err());
        let bad = BterParams {
            clustering: [(2, 1.5)].into_iter().collect(),
            ..params
        };
        assert!(BterPlan::new(&bad).is_err());
    }

    #[test]
    fn bter_targets_small_instance() {
        let params = BterParams {
            degree_counts: classes(&[(4, 1000), (9, 1000)]),
            clustering: [(4, 0.5), (9, 0.3)].into_iter().collect(),
            beta: 1.0,
        };
        let g = bter(&params, &RngStream::new(12)).unwrap();
        let plan = BterPlan::new(&params).unwrap();
        let adj = AdjacencyGraph::from_graph(&g).unwrap();
        for (d, c) in [(4, 0.5), (9, 0.3)] {
            let nodes: Vec<usize> = (0..plan.n()).filter(|&v| plan.degrees[v] == d).collect();
            let deg = nodes.iter().map(|&v| adj.degree(v as Node) as f64).sum::<f64>() / nodes.len() as f64;
            let cc = nodes.iter().map(|&v| clustering_local(&adj, v as Node).unwrap_or(0.0)).sum::<f64>()
                / nodes.len() as f64;
            assert!((deg - d as f64).abs() < 0.1 * d as f64, "degree {d}: {deg}");
            assert!((cc - c).abs() < 0.1, "degree {d}: cc {cc}");
        }
    }
}
