//! Deterministic, hierarchical randomness.
//!
//! Every random decision in the crate is drawn from an [`RngStream`]: a
//! position in a keyed pseudorandom function. A stream is identified by a
//! 64-bit seed plus a path of `(tag, index)` pairs, and two streams with the
//! same identity yield the same sequence regardless of which thread, process
//! or evaluation order asks for it. Partitioned generators derive one
//! substream per chunk of work, so any worker can recompute any chunk.
//!
//! # Construction
//!
//! The construction is fixed so that outputs stay bit-compatible across
//! implementations:
//!
//! * `mix64` is the SplitMix64 finaliser
//!   (`x ^= x >> 30; x *= 0xbf58476d1ce4e5b9; x ^= x >> 27;
//!   x *= 0x94d049bb133111eb; x ^= x >> 31`).
//! * The root key of seed `s` is `k[j] = mix64(s + (j + 1) * 0x9e3779b97f4a7c15)`
//!   for `j = 0..4`.
//! * Absorbing a word `w` into key `k`: `c = mix64(w ^ 0x6a09e667f3bcc909)`,
//!   then for `j = 0..4`: `c = mix64(k[j] ^ (c + (j + 1) * 0x9e3779b97f4a7c15))`,
//!   `k'[j] = c`.
//! * A child `(tag, index)` absorbs `fnv1a64(tag)` and then `index`.
//! * Sequential draws come from ChaCha8 keyed with the four key words in
//!   little-endian order, stream 0, starting at word position 0.
//! * Counter-free (pure) hashes of a key and up to two words are
//!   `mix64(mix64(mix64(a ^ k[0]) ^ k[1]) + b ^ k[2]) ^ k[3]`, mixed once more.

mod alias;
mod deviates;

pub use alias::{alias_build, alias_sample, AliasBucket, AliasTable};
pub use deviates::{binomial, geometric, hypergeometric};
pub(crate) use deviates::{binomial_unchecked, geometric_unchecked, hypergeometric_unchecked};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{GraphError, Result};

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

#[inline]
pub(crate) fn mix64(mut x: u64) -> u64 {
    x ^= x >> 30;
    x = x.wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x ^= x >> 27;
    x = x.wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

fn root_key(seed: u64) -> [u64; 4] {
    let mut k = [0u64; 4];
    for (j, w) in k.iter_mut().enumerate() {
        *w = mix64(seed.wrapping_add(GOLDEN.wrapping_mul(j as u64 + 1)));
    }
    k
}

fn absorb(key: &[u64; 4], word: u64) -> [u64; 4] {
    let mut out = [0u64; 4];
    let mut carry = mix64(word ^ 0x6a09_e667_f3bc_c909);
    for j in 0..4 {
        carry = mix64(key[j] ^ carry.wrapping_add(GOLDEN.wrapping_mul(j as u64 + 1)));
        out[j] = carry;
    }
    out
}

#[inline]
fn prf(key: &[u64; 4], a: u64, b: u64) -> u64 {
    let h = mix64(a ^ key[0]);
    let h = mix64(h ^ key[1]);
    let h = mix64(h.wrapping_add(b) ^ key[2]);
    mix64(h ^ key[3])
}

#[inline]
fn unit_from_bits(x: u64) -> f64 {
    (x >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// A reproducible source of randomness identified by `(seed, path)`.
#[derive(Clone, Debug)]
pub struct RngStream {
    key: [u64; 4],
    core: ChaCha8Rng,
}

impl RngStream {
    /// Root stream of `seed`.
    pub fn new(seed: u64) -> Self {
        Self::from_key(root_key(seed))
    }

    fn from_key(key: [u64; 4]) -> Self {
        let mut bytes = [0u8; 32];
        for (chunk, word) in bytes.chunks_exact_mut(8).zip(key.iter()) {
            chunk.copy_from_slice(&word.to_le_bytes());
        }
        RngStream {
            key,
            core: ChaCha8Rng::from_seed(bytes),
        }
    }

    /// Independent child stream at `path + (tag, index)`, starting fresh.
    /// The parent's position is irrelevant.
    pub fn derive(&self, tag: &str, index: u64) -> RngStream {
        let k = absorb(&self.key, fnv1a64(tag.as_bytes()));
        Self::from_key(absorb(&k, index))
    }

    /// Number of 32-bit words consumed so far.
    pub fn position(&self) -> u128 {
        self.core.get_word_pos()
    }

    /// Pure function of the stream identity and `index`; does not advance.
    #[inline]
    pub fn hash_u64(&self, index: u64) -> u64 {
        prf(&self.key, index, 0)
    }

    /// Pure function of the identity and two words; does not advance.
    #[inline]
    pub fn hash2_u64(&self, a: u64, b: u64) -> u64 {
        prf(&self.key, a, b)
    }

    /// Pure uniform value in `[0, 1)` for `index`.
    #[inline]
    pub fn hash_unit(&self, index: u64) -> f64 {
        unit_from_bits(self.hash_u64(index))
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.core.next_u64()
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    #[inline]
    pub fn uniform_f64(&mut self) -> f64 {
        unit_from_bits(self.next_u64())
    }

    /// Uniform in `(0, 1]`; safe to take the logarithm of.
    #[inline]
    pub fn uniform_open01(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Unbiased uniform integer in `[0, n)`; `n` must be positive.
    #[inline]
    pub(crate) fn below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        // Lemire's multiply-and-reject.
        let mut m = self.next_u64() as u128 * n as u128;
        if (m as u64) < n {
            let threshold = n.wrapping_neg() % n;
            while (m as u64) < threshold {
                m = self.next_u64() as u128 * n as u128;
            }
        }
        (m >> 64) as u64
    }

    /// Unbiased uniform integer in `[lo, hi)`.
    pub fn uniform_int(&mut self, lo: u64, hi: u64) -> Result<u64> {
        if lo >= hi {
            return Err(GraphError::EmptyRange { lo, hi });
        }
        Ok(lo + self.below(hi - lo))
    }

    /// True with probability `p` (clamped to `[0, 1]`).
    #[inline]
    pub fn bernoulli(&mut self, p: f64) -> bool {
        if p >= 1.0 {
            true
        } else if p <= 0.0 {
            false
        } else {
            self.uniform_f64() < p
        }
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.core.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.core.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.core.fill_bytes(dst)
    }
}

/// Free-function form of [`RngStream::uniform_int`].
pub fn uniform_int(rng: &mut RngStream, lo: u64, hi: u64) -> Result<u64> {
    rng.uniform_int(lo, hi)
}

/// In-place uniform random permutation.
pub fn fisher_yates<T>(rng: &mut RngStream, items: &mut [T]) {
    let n = items.len();
    for i in 0..n.saturating_sub(1) {
        let j = i + rng.below((n - i) as u64) as usize;
        items.swap(i, j);
    }
}

/// Bucket-then-shuffle permutation: each item goes to one of `buckets`
/// uniformly, each bucket is shuffled on its own substream, and buckets are
/// concatenated. The result is a uniform permutation; buckets are
/// independent units of work.
pub fn bucketed_permutation<T>(rng: &RngStream, items: Vec<T>, buckets: usize) -> Vec<T> {
    let buckets = buckets.max(1);
    let mut assign = rng.derive("perm-assign", 0);
    let mut parts: Vec<Vec<T>> = (0..buckets).map(|_| Vec::new()).collect();
    for item in items {
        parts[assign.below(buckets as u64) as usize].push(item);
    }
    let mut out = Vec::new();
    for (b, mut part) in parts.into_iter().enumerate() {
        fisher_yates(&mut rng.derive("perm-bucket", b as u64), &mut part);
        out.append(&mut part);
    }
    out
}

/// Pseudorandom earlier position for the communication-free
/// Barabási–Albert generator: a pure function of `seed` and `i`, uniform on
/// `[1, i)`.
#[derive(Clone, Debug)]
pub struct PriorIndexHash {
    key: [u64; 4],
}

impl PriorIndexHash {
    pub fn new(seed: u64) -> Self {
        Self::from_stream(&RngStream::new(seed))
    }

    /// The hash keyed by a stream's identity.
    pub fn from_stream(rng: &RngStream) -> Self {
        PriorIndexHash {
            key: absorb(&rng.key, fnv1a64(b"prior-index")),
        }
    }

    /// Uniform on `[1, i)`; `i` must be at least 2.
    #[inline]
    pub fn prior(&self, i: u64) -> Result<u64> {
        if i < 2 {
            return Err(GraphError::InvalidParameter(format!(
                "prior position requested for i = {i}, need i >= 2"
            )));
        }
        Ok(self.prior_unchecked(i))
    }

    #[inline]
    pub(crate) fn prior_unchecked(&self, i: u64) -> u64 {
        let range = i - 1;
        let threshold = range.wrapping_neg() % range;
        let mut attempt = 0u64;
        loop {
            let m = prf(&self.key, i, attempt) as u128 * range as u128;
            if (m as u64) >= threshold {
                return 1 + (m >> 64) as u64;
            }
            attempt += 1;
        }
    }
}

/// `h(i)` with `1 <= h(i) < i`, pure in `(seed, i)`.
pub fn hash_prior_index(seed: u64, i: u64) -> Result<u64> {
    PriorIndexHash::new(seed).prior(i)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_identity_same_sequence() {
        let a = RngStream::new(7).derive("x", 3);
        let b = RngStream::new(7).derive("x", 3);
        let da: Vec<u64> = (0..16).scan(a, |r, _| Some(r.next_u64())).collect();
        let db: Vec<u64> = (0..16).scan(b, |r, _| Some(r.next_u64())).collect();
        assert_eq!(da, db);
    }

    #[test]
    fn derive_ignores_parent_position() {
        let mut a = RngStream::new(1);
        let before = a.derive("t", 0).next_u64();
        a.next_u64();
        assert_eq!(a.derive("t", 0).next_u64(), before);
    }

    #[test]
    fn distinct_paths_differ() {
        let root = RngStream::new(1);
        let x = root.derive("t", 0).next_u64();
        assert_ne!(x, root.derive("t", 1).next_u64());
        assert_ne!(x, root.derive("u", 0).next_u64());
        assert_ne!(x, RngStream::new(2).derive("t", 0).next_u64());
    }

    #[test]
    fn uniform_int_edge_cases() {
        let mut r = RngStream::new(0);
        for _ in 0..100 {
            assert_eq!(r.uniform_int(0, 1).unwrap(), 0);
            let x = r.uniform_int(5, 9).unwrap();
            assert!((5..9).contains(&x));
        }
        assert_eq!(
            r.uniform_int(3, 3),
            Err(GraphError::EmptyRange { lo: 3, hi: 3 })
        );
    }

    #[test]
    fn uniform_int_frequencies_within_four_sigma() {
        let mut r = RngStream::new(11);
        let mut counts = [0u64; 6];
        for _ in 0..60_000 {
            counts[r.uniform_int(0, 6).unwrap() as usize] += 1;
        }
        // Binomial(60000, 1/6): sigma = sqrt(60000 * 1/6 * 5/6).
        let sigma = (60_000.0f64 * (1.0 / 6.0) * (5.0 / 6.0)).sqrt();
        for c in counts {
            assert!((c as f64 - 10_000.0).abs() < 4.0 * sigma, "{counts:?}");
        }
    }

    #[test]
    fn open_unit_interval_never_zero() {
        let mut r = RngStream::new(3);
        for _ in 0..10_000 {
            let u = r.uniform_open01();
            assert!(u > 0.0 && u <= 1.0);
        }
    }

    #[test]
    fn fisher_yates_trivial_inputs() {
        let mut r = RngStream::new(0);
        let mut empty: [u8; 0] = [];
        fisher_yates(&mut r, &mut empty);
        let mut one = [42];
        fisher_yates(&mut r, &mut one);
        assert_eq!(one, [42]);
    }

    #[test]
    fn bucketed_permutation_is_a_permutation() {
        let rng = RngStream::new(5);
        let mut out = bucketed_permutation(&rng, (0..1000).collect(), 7);
        assert_ne!(out, (0..1000).collect::<Vec<_>>());
        out.sort_unstable();
        assert_eq!(out, (0..1000).collect::<Vec<_>>());
    }

    #[test]
    fn prior_index_forced_and_pure() {
        for seed in 0..50 {
            assert_eq!(hash_prior_index(seed, 2).unwrap(), 1);
        }
        assert!(hash_prior_index(0, 1).is_err());
        let h = PriorIndexHash::new(99);
        let expected = h.prior(16).unwrap();
        let handles: Vec<_> = (0..8)
            .map(|_| std::thread::spawn(|| hash_prior_index(99, 16).unwrap()))
            .collect();
        for t in handles {
            assert_eq!(t.join().unwrap(), expected);
        }
        for i in 2..500 {
            let x = h.prior(i).unwrap();
            assert!((1..i).contains(&x));
        }
    }

    #[test]
    fn substreams_uncorrelated() {
        let root = RngStream::new(2024);
        let mut a = root.derive("corr", 0);
        let mut b = root.derive("corr", 1);
        let n = 100_000;
        let (mut sx, mut sy, mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for _ in 0..n {
            let x = a.uniform_f64();
            let y = b.uniform_f64();
            sx += x;
            sy += y;
            sxx += x * x;
            syy += y * y;
            sxy += x * y;
        }
        let nf = n as f64;
        let cov = sxy / nf - (sx / nf) * (sy / nf);
        let vx = sxx / nf - (sx / nf).powi(2);
        let vy = syy / nf - (sy / nf).powi(2);
        let rho = cov / (vx * vy).sqrt();
        assert!(rho.abs() < 0.01, "rho = {rho}");
    }
}
