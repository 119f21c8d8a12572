//! Output-sensitive subset sampling.
//!
//! All samplers emit indices in ascending order and consume no randomness
//! on degenerate inputs (empty range, `p = 0`, `p = 1`, `k = 0`, `k = N`),
//! which keeps the positions of sibling streams stable.

use crate::error::{check_probability, GraphError, Result};
use crate::random::{binomial_unchecked, geometric_unchecked, hypergeometric_unchecked, RngStream};

/// Half-open index range `[lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexRange {
    pub lo: u64,
    pub hi: u64,
}

impl IndexRange {
    pub fn new(lo: u64, hi: u64) -> Result<Self> {
        if lo > hi {
            return Err(GraphError::InvalidParameter(format!("range [{lo}, {hi})")));
        }
        Ok(IndexRange { lo, hi })
    }

    /// `[0, n)`.
    pub fn upto(n: u64) -> Self {
        IndexRange { lo: 0, hi: n }
    }

    #[inline]
    pub fn len(&self) -> u64 {
        self.hi - self.lo
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.hi == self.lo
    }
}

/// Includes each index of `range` independently with probability `p`.
pub fn bernoulli_skip(range: IndexRange, p: f64, rng: &mut RngStream) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    bernoulli_skip_with(range, p, rng, |i| out.push(i))?;
    Ok(out)
}

/// Streaming form of [`bernoulli_skip`]. Returns the number of geometric
/// deviates drawn, which never exceeds the output size plus one.
pub fn bernoulli_skip_with(
    range: IndexRange,
    p: f64,
    rng: &mut RngStream,
    mut emit: impl FnMut(u64),
) -> Result<u64> {
    check_probability(p)?;
    if range.is_empty() || p == 0.0 {
        return Ok(0);
    }
    if p == 1.0 {
        (range.lo..range.hi).for_each(emit);
        return Ok(0);
    }
    let mut draws = 1;
    let mut pos = range.lo.saturating_add(geometric_unchecked(rng, p));
    while pos < range.hi {
        emit(pos);
        draws += 1;
        pos = pos
            .saturating_add(1)
            .saturating_add(geometric_unchecked(rng, p));
    }
    Ok(draws)
}

/// Uniform `k`-subset of `range`, ascending.
pub fn sample_k_of_n(k: u64, range: IndexRange, rng: &mut RngStream) -> Result<Vec<u64>> {
    let mut out = Vec::with_capacity(k.min(1 << 24) as usize);
    sample_k_of_n_with(k, range, rng, |i| out.push(i))?;
    Ok(out)
}

/// Streaming form of [`sample_k_of_n`].
pub fn sample_k_of_n_with(
    k: u64,
    range: IndexRange,
    rng: &mut RngStream,
    mut emit: impl FnMut(u64),
) -> Result<()> {
    let n = range.len();
    if k > n {
        return Err(GraphError::Infeasible(format!(
            "cannot sample {k} of {n} without replacement"
        )));
    }
    if k == 0 {
        return Ok(());
    }
    if k == n {
        (range.lo..range.hi).for_each(emit);
        return Ok(());
    }
    vitter_d(k, n, rng, &mut |i| emit(range.lo + i));
    Ok(())
}

// Vitter's sequential sampling: Method D while the sampling ratio is small,
// switching to Method A once `13 k >= N` where skips stop paying off.
const ALPHA_INV: u64 = 13;

fn vitter_d(mut k: u64, mut n: u64, rng: &mut RngStream, emit: &mut dyn FnMut(u64)) {
    let mut next = 0u64;
    let mut kf = k as f64;
    let mut nf = n as f64;
    let mut kinv = 1.0 / kf;
    let mut vprime = (rng.uniform_open01().ln() * kinv).exp();
    let mut qu1 = n - k + 1;
    let mut qu1f = nf - kf + 1.0;
    let mut threshold = ALPHA_INV * k;
    while k > 1 && threshold < n {
        let kmin1inv = 1.0 / (kf - 1.0);
        let s = loop {
            let (x, s) = loop {
                let x = nf * (1.0 - vprime);
                let s = x as u64;
                if s < qu1 {
                    break (x, s);
                }
                vprime = (rng.uniform_open01().ln() * kinv).exp();
            };
            let u = rng.uniform_open01();
            let neg_s = -(s as f64);
            let y1 = (u * nf / qu1f).ln() * kmin1inv;
            let y1 = y1.exp();
            vprime = y1 * (1.0 - x / nf) * (qu1f / (neg_s + qu1f));
            if vprime <= 1.0 {
                break s;
            }
            let mut y2 = 1.0;
            let mut top = nf - 1.0;
            let (mut bottom, limit) = if k - 1 > s {
                (nf - kf, n - s)
            } else {
                (nf + neg_s - 1.0, qu1)
            };
            let mut t = n - 1;
            while t >= limit {
                y2 = y2 * top / bottom;
                top -= 1.0;
                bottom -= 1.0;
                t -= 1;
            }
            if nf / (nf - x) >= y1 * (y2.ln() * kmin1inv).exp() {
                vprime = (rng.uniform_open01().ln() * kmin1inv).exp();
                break s;
            }
            vprime = (rng.uniform_open01().ln() * kinv).exp();
        };
        next += s;
        emit(next);
        next += 1;
        n -= s + 1;
        nf = n as f64;
        k -= 1;
        kf -= 1.0;
        kinv = kmin1inv;
        qu1 -= s;
        qu1f -= s as f64;
        threshold -= ALPHA_INV;
    }
    if k > 1 {
        vitter_a(k, n, next, rng, emit);
    } else {
        let s = ((n as f64 * vprime) as u64).min(n - 1);
        emit(next + s);
    }
}

fn vitter_a(mut k: u64, n: u64, mut next: u64, rng: &mut RngStream, emit: &mut dyn FnMut(u64)) {
    let mut top = (n - k) as f64;
    let mut nf = n as f64;
    let mut remaining = n;
    while k >= 2 {
        let v = rng.uniform_f64();
        let mut s = 0u64;
        let mut quot = top / nf;
        while quot > v {
            s += 1;
            top -= 1.0;
            nf -= 1.0;
            quot = quot * top / nf;
        }
        next += s;
        emit(next);
        next += 1;
        remaining -= s + 1;
        nf -= 1.0;
        k -= 1;
    }
    let s = rng.below(remaining);
    emit(next + s);
}

/// Cut points of a range and the number of samples falling in each part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionPlan {
    pub boundaries: Vec<u64>,
    pub counts: Vec<u64>,
}

impl PartitionPlan {
    pub fn part(&self, i: usize) -> IndexRange {
        IndexRange {
            lo: self.boundaries[i],
            hi: self.boundaries[i + 1],
        }
    }

    pub fn parts(&self) -> usize {
        self.counts.len()
    }
}

/// `parts + 1` evenly spaced cut points over `range`.
pub fn even_boundaries(range: IndexRange, parts: u64) -> Vec<u64> {
    let parts = parts.max(1) as u128;
    let len = range.len() as u128;
    (0..=parts)
        .map(|i| range.lo + (i * len / parts) as u64)
        .collect()
}

fn check_boundaries(boundaries: &[u64]) -> Result<()> {
    if boundaries.len() < 2 || boundaries.windows(2).any(|w| w[0] > w[1]) {
        return Err(GraphError::InvalidParameter(
            "boundaries must be at least two monotone cut points".into(),
        ));
    }
    Ok(())
}

fn split_counts(
    k: u64,
    boundaries: &[u64],
    rng: &mut RngStream,
    draw_left: &mut dyn FnMut(&mut RngStream, u64, u64, u64) -> u64,
) -> Vec<u64> {
    fn rec(
        k: u64,
        b: &[u64],
        lo: usize,
        hi: usize,
        rng: &mut RngStream,
        out: &mut [u64],
        draw_left: &mut dyn FnMut(&mut RngStream, u64, u64, u64) -> u64,
    ) {
        if hi - lo == 1 {
            out[lo] = k;
            return;
        }
        let mid = (lo + hi) / 2;
        let left_size = b[mid] - b[lo];
        let size = b[hi] - b[lo];
        let left = draw_left(rng, k, left_size, size);
        rec(left, b, lo, mid, rng, out, draw_left);
        rec(k - left, b, mid, hi, rng, out, draw_left);
    }
    let parts = boundaries.len() - 1;
    let mut out = vec![0; parts];
    rec(k, boundaries, 0, parts, rng, &mut out, draw_left);
    out
}

/// Per-part counts of a uniform `k`-subset without replacement, by
/// recursive hypergeometric splitting (left child first).
pub fn split_sample_counts(k: u64, boundaries: &[u64], rng: &mut RngStream) -> Result<PartitionPlan> {
    check_boundaries(boundaries)?;
    let total = boundaries[boundaries.len() - 1] - boundaries[0];
    if k > total {
        return Err(GraphError::Infeasible(format!(
            "cannot sample {k} of {total} without replacement"
        )));
    }
    let counts = split_counts(k, boundaries, rng, &mut |r, k, left, size| {
        hypergeometric_unchecked(r, k, left, size)
    });
    Ok(PartitionPlan {
        boundaries: boundaries.to_vec(),
        counts,
    })
}

/// Per-part counts for sampling with replacement, by recursive binomial
/// splitting.
pub fn sample_with_replacement_split(
    k: u64,
    boundaries: &[u64],
    rng: &mut RngStream,
) -> Result<PartitionPlan> {
    check_boundaries(boundaries)?;
    let total = boundaries[boundaries.len() - 1] - boundaries[0];
    if total == 0 && k > 0 {
        return Err(GraphError::Infeasible("sampling from an empty range".into()));
    }
    let counts = split_counts(k, boundaries, rng, &mut |r, k, left, size| {
        if size == 0 {
            0
        } else {
            binomial_unchecked(r, k, left as f64 / size as f64)
        }
    });
    Ok(PartitionPlan {
        boundaries: boundaries.to_vec(),
        counts,
    })
}

/// Multinomial counts of `k` draws over cells with the given weights, by
/// recursive binomial splitting (left half first).
pub fn multinomial_split(k: u64, weights: &[f64], rng: &mut RngStream) -> Result<Vec<u64>> {
    if weights.is_empty() {
        return Err(GraphError::InvalidWeights("no cells".into()));
    }
    if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(GraphError::InvalidWeights("negative or non-finite weight".into()));
    }
    let mut prefix = Vec::with_capacity(weights.len() + 1);
    prefix.push(0.0);
    for w in weights {
        prefix.push(prefix[prefix.len() - 1] + w);
    }
    if k > 0 && prefix[weights.len()] <= 0.0 {
        return Err(GraphError::InvalidWeights("zero total weight".into()));
    }
    fn rec(k: u64, prefix: &[f64], lo: usize, hi: usize, rng: &mut RngStream, out: &mut [u64]) {
        if hi - lo == 1 || k == 0 {
            out[lo] = k;
            return;
        }
        let mid = (lo + hi) / 2;
        let total = prefix[hi] - prefix[lo];
        let left = if total > 0.0 {
            binomial_unchecked(rng, k, ((prefix[mid] - prefix[lo]) / total).clamp(0.0, 1.0))
        } else {
            0
        };
        rec(left, prefix, lo, mid, rng, out);
        rec(k - left, prefix, mid, hi, rng, out);
    }
    let mut out = vec![0; weights.len()];
    rec(k, &prefix, 0, weights.len(), rng, &mut out);
    Ok(out)
}

/// Default attempt budget for [`rejection_sample`].
pub const DEFAULT_REJECTION_BUDGET: u64 = 1_000_000;

/// Draws proposals until one is accepted.
pub fn rejection_sample<T>(
    mut propose: impl FnMut(&mut RngStream) -> T,
    mut accept_prob: impl FnMut(&T) -> f64,
    rng: &mut RngStream,
    budget: u64,
) -> Result<T> {
    for _ in 0..budget {
        let x = propose(rng);
        let q = accept_prob(&x);
        if q >= 1.0 || rng.uniform_f64() < q {
            return Ok(x);
        }
    }
    Err(GraphError::BudgetExceeded(budget))
}

/// Indices whose probabilities lie within a factor of two of `bound`.
#[derive(Debug, Clone, PartialEq)]
pub struct Group {
    pub members: Vec<u64>,
    pub bound: f64,
}

/// Groups the positive entries of `p` by `floor(log2 p_i)`; bounds are the
/// upper ends of the dyadic intervals, capped at 1.
pub fn log2_groups(p: &[f64]) -> Result<Vec<Group>> {
    let mut by_exp: std::collections::BTreeMap<i32, Vec<u64>> = Default::default();
    for (i, &pi) in p.iter().enumerate() {
        check_probability(pi)?;
        if pi > 0.0 {
            by_exp.entry(pi.log2().floor() as i32).or_default().push(i as u64);
        }
    }
    Ok(by_exp
        .into_iter()
        .rev()
        .map(|(e, members)| Group {
            members,
            bound: 2f64.powi(e + 1).min(1.0),
        })
        .collect())
}

/// Includes each grouped index `i` independently with probability `p(i)`:
/// Bernoulli skipping at the group bound followed by acceptance with
/// `p(i) / bound`. Output is ascending.
pub fn weighted_subset_sample(
    p: impl Fn(u64) -> f64,
    groups: &[Group],
    rng: &mut RngStream,
) -> Result<Vec<u64>> {
    let mut seen: Vec<u64> = groups.iter().flat_map(|g| g.members.iter().copied()).collect();
    seen.sort_unstable();
    if seen.windows(2).any(|w| w[0] == w[1]) {
        return Err(GraphError::InvalidGrouping("groups overlap".into()));
    }
    for g in groups {
        check_probability(g.bound).map_err(|_| {
            GraphError::InvalidGrouping(format!("bound {} is not a probability", g.bound))
        })?;
        let mut min = f64::INFINITY;
        for &i in &g.members {
            let pi = p(i);
            check_probability(pi)?;
            if pi > g.bound {
                return Err(GraphError::InvalidGrouping(format!(
                    "p({i}) = {pi} exceeds group bound {}",
                    g.bound
                )));
            }
            min = min.min(pi);
        }
        if !g.members.is_empty() && g.bound > 2.0 * min {
            return Err(GraphError::InvalidGrouping(format!(
                "bound {} exceeds twice the group minimum {min}",
                g.bound
            )));
        }
    }
    let mut out = Vec::new();
    for g in groups {
        if g.bound == 0.0 {
            continue;
        }
        let range = IndexRange::upto(g.members.len() as u64);
        let mut hits = Vec::new();
        bernoulli_skip_with(range, g.bound, rng, |j| hits.push(j))?;
        for j in hits {
            let i = g.members[j as usize];
            if rng.bernoulli(p(i) / g.bound) {
                out.push(i);
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}
