//! Partitioned, communication-free execution.
//!
//! Partitioned generators fix a chunk plan that depends only on the model
//! parameters. Each chunk draws from its own substream, and a partition
//! `(index, count)` owns a contiguous run of chunks. Concatenating the
//! partitions in index order therefore yields the same bytes for every
//! partition count.

use std::ops::Range;

use crate::error::{GraphError, Result};
use crate::graph::{Edge, Graph};
use crate::random::RngStream;

/// Target expected number of edges per chunk.
pub(crate) const CHUNK_TARGET: f64 = 8192.0;
pub(crate) const MAX_CHUNKS: u64 = 4096;

/// Slice `index` of `count` equal slices of the work.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Partition {
    pub index: usize,
    pub count: usize,
}

impl Partition {
    pub fn new(index: usize, count: usize) -> Result<Self> {
        if count == 0 || index >= count {
            return Err(GraphError::InvalidParameter(format!(
                "partition {index} of {count}"
            )));
        }
        Ok(Partition { index, count })
    }

    /// The single partition covering everything.
    pub fn whole() -> Self {
        Partition { index: 0, count: 1 }
    }

    /// This partition's share of `0..total`.
    pub fn range_of(&self, total: u64) -> Range<u64> {
        let t = total as u128;
        let lo = t * self.index as u128 / self.count as u128;
        let hi = t * (self.index as u128 + 1) / self.count as u128;
        lo as u64..hi as u64
    }
}

/// Number of chunks for a universe of `universe` slots expected to yield
/// `expected` items: one per [`CHUNK_TARGET`] items, at most
/// [`MAX_CHUNKS`], never more than the universe.
pub(crate) fn chunk_count(universe: u128, expected: f64) -> u64 {
    let c = (expected / CHUNK_TARGET).ceil();
    let c = if c.is_finite() { c.clamp(1.0, MAX_CHUNKS as f64) as u64 } else { 1 };
    c.min(universe.max(1).min(u64::MAX as u128) as u64)
}

/// Bounds of chunk `c` out of `chunks` over `0..universe`.
pub(crate) fn chunk_bounds(universe: u128, chunks: u64, c: u64) -> (u128, u128) {
    let lo = universe * c as u128 / chunks as u128;
    let hi = universe * (c as u128 + 1) / chunks as u128;
    (lo, hi)
}

/// Runs `work` for partitions `0..threads` on scoped threads and returns
/// the results in partition order.
pub fn run_partitioned<T: Send>(threads: usize, work: impl Fn(Partition) -> T + Sync) -> Vec<T> {
    let threads = threads.max(1);
    if threads == 1 {
        return vec![work(Partition::whole())];
    }
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|index| {
                let work = &work;
                scope.spawn(move || work(Partition { index, count: threads }))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("partition worker panicked"))
            .collect()
    })
}

/// A model whose edge stream splits into independently computable
/// partitions.
pub trait PartitionedModel: Sync {
    /// Graph with the model's node count and flags and no edges.
    fn empty_graph(&self) -> Graph;

    /// Emits the edges owned by `part`, in canonical order.
    fn emit_part(&self, rng: &RngStream, part: Partition, sink: &mut dyn FnMut(Edge)) -> Result<()>;

    fn generate_part(&self, rng: &RngStream, part: Partition) -> Result<Graph> {
        let mut g = self.empty_graph();
        self.emit_part(rng, part, &mut |e| g.edges.push(e))?;
        Ok(g)
    }

    /// Whole graph generated on `threads` workers; the result does not
    /// depend on `threads`.
    fn generate(&self, rng: &RngStream, threads: usize) -> Result<Graph> {
        let parts = run_partitioned(threads, |p| self.generate_part(rng, p));
        let mut g = self.empty_graph();
        for part in parts {
            g.edges.extend(part?.edges);
        }
        Ok(g)
    }

    /// Counts edges without materialising them.
    fn count_edges(&self, rng: &RngStream, threads: usize) -> Result<u64> {
        let counts = run_partitioned(threads, |p| {
            let mut c = 0u64;
            self.emit_part(rng, p, &mut |_| c += 1).map(|_| c)
        });
        counts.into_iter().sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_ranges_tile() {
        for count in 1..20 {
            let mut next = 0;
            for index in 0..count {
                let r = Partition::new(index, count).unwrap().range_of(97);
                assert_eq!(r.start, next);
                next = r.end;
            }
            assert_eq!(next, 97);
        }
        assert!(Partition::new(3, 3).is_err());
    }

    #[test]
    fn chunk_plan_limits() {
        assert_eq!(chunk_count(10, 1e9), 10);
        assert_eq!(chunk_count(1 << 40, 0.0), 1);
        assert_eq!(chunk_count(1 << 40, 1e12), MAX_CHUNKS);
        assert_eq!(chunk_count(1 << 40, 3.0 * CHUNK_TARGET), 3);
    }

    #[test]
    fn run_partitioned_preserves_order() {
        let out = run_partitioned(5, |p| p.index);
        assert_eq!(out, vec![0, 1, 2, 3, 4]);
    }
}
