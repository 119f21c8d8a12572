//! Vose's alias method.

use super::RngStream;
use crate::error::{GraphError, Result};

/// One equal-mass bucket: `primary` with probability `threshold`, else `alias`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AliasBucket {
    pub threshold: f64,
    pub primary: u32,
    pub alias: u32,
}

/// Constant-time sampler for a fixed discrete distribution.
#[derive(Debug, Clone)]
pub struct AliasTable {
    buckets: Vec<AliasBucket>,
}

impl AliasTable {
    pub fn new(weights: &[f64]) -> Result<Self> {
        if weights.is_empty() {
            return Err(GraphError::InvalidWeights("no weights".into()));
        }
        if weights.len() > u32::MAX as usize {
            return Err(GraphError::InvalidWeights("too many weights".into()));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(GraphError::InvalidWeights(format!("weight {w}")));
        }
        let total: f64 = weights.iter().sum();
        if !(total > 0.0 && total.is_finite()) {
            return Err(GraphError::InvalidWeights(format!("total weight {total}")));
        }
        let n = weights.len();
        let mut scaled: Vec<f64> = weights.iter().map(|w| w * n as f64 / total).collect();
        let mut small = Vec::new();
        let mut large = Vec::new();
        for (i, &s) in scaled.iter().enumerate() {
            if s < 1.0 {
                small.push(i);
            } else {
                large.push(i);
            }
        }
        let mut buckets = vec![
            AliasBucket {
                threshold: 1.0,
                primary: 0,
                alias: 0,
            };
            n
        ];
        while let (Some(&s), Some(&l)) = (small.last(), large.last()) {
            small.pop();
            buckets[s] = AliasBucket {
                threshold: scaled[s],
                primary: s as u32,
                alias: l as u32,
            };
            scaled[l] = (scaled[l] + scaled[s]) - 1.0;
            if scaled[l] < 1.0 {
                large.pop();
                small.push(l);
            }
        }
        // Leftovers carry mass 1 up to rounding.
        for i in large.into_iter().chain(small) {
            buckets[i] = AliasBucket {
                threshold: 1.0,
                primary: i as u32,
                alias: i as u32,
            };
        }
        Ok(AliasTable { buckets })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.buckets.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.buckets.is_empty()
    }

    pub fn buckets(&self) -> &[AliasBucket] {
        &self.buckets
    }

    #[inline]
    pub fn sample(&self, rng: &mut RngStream) -> usize {
        let b = &self.buckets[rng.below(self.buckets.len() as u64) as usize];
        if rng.uniform_f64() < b.threshold {
            b.primary as usize
        } else {
            b.alias as usize
        }
    }

    /// Probability of each element reconstructed from the buckets.
    pub fn masses(&self) -> Vec<f64> {
        let n = self.buckets.len() as f64;
        let mut mass = vec![0.0; self.buckets.len()];
        for b in &self.buckets {
            mass[b.primary as usize] += b.threshold / n;
            mass[b.alias as usize] += (1.0 - b.threshold) / n;
        }
        mass
    }
}

/// Free-function form of [`AliasTable::new`].
pub fn alias_build(weights: &[f64]) -> Result<AliasTable> {
    AliasTable::new(weights)
}

/// Free-function form of [`AliasTable::sample`].
pub fn alias_sample(table: &AliasTable, rng: &mut RngStream) -> usize {
    table.sample(rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_invalid_weights() {
        assert!(AliasTable::new(&[]).is_err());
        assert!(AliasTable::new(&[0.0, 0.0]).is_err());
        assert!(AliasTable::new(&[1.0, -1.0]).is_err());
        assert!(AliasTable::new(&[1.0, f64::NAN]).is_err());
    }

    #[test]
    fn figure_weights() {
        let t = AliasTable::new(&[0.1, 0.2, 0.3, 0.4]).unwrap();
        assert_eq!(t.len(), 4);
        let mut r = RngStream::new(9);
        let draws = 1_000_000;
        let mut counts = [0u64; 4];
        for _ in 0..draws {
            counts[t.sample(&mut r)] += 1;
        }
        for (i, &c) in counts.iter().enumerate() {
            let p = (i + 1) as f64 / 10.0;
            let sigma = (p * (1.0 - p) / draws as f64).sqrt();
            assert!((c as f64 / draws as f64 - p).abs() < 3.0 * sigma, "{counts:?}");
        }
    }

    #[test]
    fn single_and_uniform() {
        let t = AliasTable::new(&[3.0]).unwrap();
        let mut r = RngStream::new(0);
        assert!((0..100).all(|_| t.sample(&mut r) == 0));
        let t = AliasTable::new(&[2.0; 8]).unwrap();
        assert!(t.buckets().iter().all(|b| b.threshold == 1.0));
    }

    #[test]
    fn replay_is_deterministic() {
        let t = AliasTable::new(&[0.5, 0.5]).unwrap();
        let mut a = RngStream::new(4);
        let mut b = RngStream::new(4);
        for _ in 0..100 {
            assert_eq!(t.sample(&mut a), t.sample(&mut b));
        }
    }

    proptest! {
        #[test]
        fn conserves_mass(weights in prop::collection::vec(0.0f64..100.0, 1..64)) {
            prop_assume!(weights.iter().any(|&w| w > 0.0));
            let t = AliasTable::new(&weights).unwrap();
            let total: f64 = weights.iter().sum();
            let tol = weights.len() as f64 * f64::EPSILON * 4.0;
            for (m, w) in t.masses().iter().zip(&weights) {
                prop_assert!((m - w / total).abs() <= tol, "{} vs {}", m, w / total);
            }
        }
    }
}
