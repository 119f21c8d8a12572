//! Random graph models.

pub mod basic;
pub mod block;
pub mod degree;
pub mod spatial;

use crate::error::{GraphError, Result};
use crate::graph::{Edge, Graph, Node};

/// Which cells of the adjacency matrix an Erdős–Rényi style generator
/// samples from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// Upper triangle without the diagonal.
    Undirected,
    DirectedNoLoops,
    DirectedLoops,
    /// Edges between `0..left` and `left..left + right`.
    Bipartite { left: usize, right: usize },
}

/// A matrix region together with its linearisation.
///
/// * Undirected: row-major over the strict upper triangle. Row `u` starts
///   at `S(u) = u (2n - u - 1) / 2`; index `e` lies in the largest row with
///   `S(u) <= e`, found from `u = floor((2n - 1 - sqrt((2n - 1)^2 - 8e)) / 2)`
///   and corrected with exact integer comparisons; then
///   `v = u + 1 + e - S(u)`.
/// * Directed without loops: `u = e / (n - 1)`, `r = e % (n - 1)`,
///   `v = r + (r >= u)`.
/// * Directed with loops: `u = e / n`, `v = e % n`.
/// * Bipartite: `u = e / right`, `v = left + e % right`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Region {
    pub n: u64,
    pub variant: Variant,
    pub capacity: u64,
}

impl Region {
    pub fn new(n: usize, variant: Variant) -> Result<Self> {
        let nn = n as u128;
        let cap: u128 = match variant {
            Variant::Undirected => nn * nn.saturating_sub(1) / 2,
            Variant::DirectedNoLoops => nn * nn.saturating_sub(1),
            Variant::DirectedLoops => nn * nn,
            Variant::Bipartite { left, right } => {
                if left + right != n {
                    return Err(GraphError::InvalidParameter(format!(
                        "bipartite sides {left} + {right} do not sum to n = {n}"
                    )));
                }
                left as u128 * right as u128
            }
        };
        if n > Node::MAX as usize + 1 {
            return Err(GraphError::InvalidParameter(format!("n = {n} exceeds node id range")));
        }
        if cap > u64::MAX as u128 {
            return Err(GraphError::InvalidParameter(format!(
                "matrix region of n = {n} exceeds 64-bit indexing"
            )));
        }
        Ok(Region {
            n: n as u64,
            variant,
            capacity: cap as u64,
        })
    }

    pub fn empty_graph(&self) -> Graph {
        match self.variant {
            Variant::Undirected | Variant::Bipartite { .. } => Graph::new(self.n as usize),
            Variant::DirectedNoLoops => Graph::directed(self.n as usize),
            Variant::DirectedLoops => Graph {
                allow_loops: true,
                ..Graph::directed(self.n as usize)
            },
        }
    }

    #[inline]
    fn row_start(&self, u: u64) -> u128 {
        let u = u as u128;
        u * (2 * self.n as u128 - u - 1) / 2
    }

    #[inline]
    pub fn decode(&self, e: u64) -> Edge {
        match self.variant {
            Variant::Undirected => {
                let n = self.n as f64;
                let b = 2.0 * n - 1.0;
                let disc = (b * b - 8.0 * e as f64).max(0.0);
                let mut u = (((b - disc.sqrt()) / 2.0).floor().max(0.0) as u64).min(self.n - 2);
                let e128 = e as u128;
                while u > 0 && self.row_start(u) > e128 {
                    u -= 1;
                }
                while u + 2 < self.n && self.row_start(u + 1) <= e128 {
                    u += 1;
                }
                let v = u + 1 + (e128 - self.row_start(u)) as u64;
                Edge::new(u as Node, v as Node)
            }
            Variant::DirectedNoLoops => {
                let (u, r) = (e / (self.n - 1), e % (self.n - 1));
                Edge::new(u as Node, (r + (r >= u) as u64) as Node)
            }
            Variant::DirectedLoops => Edge::new((e / self.n) as Node, (e % self.n) as Node),
            Variant::Bipartite { left, right } => {
                let right = right as u64;
                Edge::new((e / right) as Node, (left as u64 + e % right) as Node)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn enumerate(n: usize, variant: Variant) -> Vec<Edge> {
        let mut out = Vec::new();
        match variant {
            Variant::Undirected => {
                for u in 0..n {
                    for v in u + 1..n {
                        out.push(Edge::new(u as Node, v as Node));
                    }
                }
            }
            Variant::DirectedNoLoops | Variant::DirectedLoops => {
                for u in 0..n {
                    for v in 0..n {
                        if u != v || variant == Variant::DirectedLoops {
                            out.push(Edge::new(u as Node, v as Node));
                        }
                    }
                }
            }
            Variant::Bipartite { left, right } => {
                for u in 0..left {
                    for v in 0..right {
                        out.push(Edge::new(u as Node, (left + v) as Node));
                    }
                }
            }
        }
        out
    }

    #[test]
    fn decode_matches_row_major_enumeration() {
        for n in 2..40 {
            let variants = [
                Variant::Undirected,
                Variant::DirectedNoLoops,
                Variant::DirectedLoops,
                Variant::Bipartite { left: n / 3, right: n - n / 3 },
            ];
            for variant in variants {
                let region = Region::new(n, variant).unwrap();
                let expected = enumerate(n, variant);
                assert_eq!(region.capacity as usize, expected.len());
                let decoded: Vec<Edge> = (0..region.capacity).map(|e| region.decode(e)).collect();
                assert_eq!(decoded, expected, "n = {n}, {variant:?}");
            }
        }
    }

    #[test]
    fn decode_huge_triangle_boundaries() {
        let n = 1u64 << 32;
        let region = Region::new(n as usize, Variant::Undirected).unwrap();
        assert_eq!(region.decode(0), Edge::new(0, 1));
        assert_eq!(region.decode(n - 2), Edge::new(0, (n - 1) as Node));
        assert_eq!(region.decode(n - 1), Edge::new(1, 2));
        let last = region.capacity - 1;
        assert_eq!(region.decode(last), Edge::new((n - 2) as Node, (n - 1) as Node));
        // Every row start decodes to the first cell of its row.
        for u in [3u64, 1 << 20, (1 << 31) + 7, n - 3] {
            let s = region.row_start(u) as u64;
            assert_eq!(region.decode(s), Edge::new(u as Node, (u + 1) as Node));
            assert_eq!(region.decode(s - 1), Edge::new((u - 1) as Node, (n - 1) as Node));
        }
    }
}
