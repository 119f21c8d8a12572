//! Geometric, binomial and hypergeometric deviates.

use rand_distr::Distribution;

use super::RngStream;
use crate::error::{check_probability, GraphError, Result};

// Below this mean the inversion / waiting-time methods are both exact and
// cheap; above it we hand over to rand_distr's BTPE and H2PE samplers.
const SMALL_MEAN: f64 = 16.0;

/// Number of failures before the first success, `P[S = k] = (1-p)^k p`.
pub fn geometric(rng: &mut RngStream, p: f64) -> Result<u64> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(GraphError::InvalidProbability(p));
    }
    Ok(geometric_unchecked(rng, p))
}

/// `p` must lie in `(0, 1]`. Saturates at `u64::MAX`.
#[inline]
pub(crate) fn geometric_unchecked(rng: &mut RngStream, p: f64) -> u64 {
    if p >= 1.0 {
        return 0;
    }
    // ln_1p keeps ln(1-p) accurate for tiny p, where 1-p rounds to 1.
    let s = (rng.uniform_open01().ln() / (-p).ln_1p()).floor();
    // `as` saturates for values beyond u64::MAX.
    s as u64
}

/// Exact `Binomial(trials, p)`.
pub fn binomial(rng: &mut RngStream, trials: u64, p: f64) -> Result<u64> {
    check_probability(p)?;
    Ok(binomial_unchecked(rng, trials, p))
}

pub(crate) fn binomial_unchecked(rng: &mut RngStream, trials: u64, p: f64) -> u64 {
    if trials == 0 || p <= 0.0 {
        return 0;
    }
    if p >= 1.0 {
        return trials;
    }
    if p > 0.5 {
        return trials - binomial_unchecked(rng, trials, 1.0 - p);
    }
    if trials as f64 * p < SMALL_MEAN {
        // Count successes by skipping over failures.
        let mut count = 0;
        let mut pos = geometric_unchecked(rng, p);
        while pos < trials {
            count += 1;
            pos = pos.saturating_add(1).saturating_add(geometric_unchecked(rng, p));
        }
        return count;
    }
    rand_distr::Binomial::new(trials, p)
        .expect("validated binomial parameters")
        .sample(rng)
}

/// Exact hypergeometric: number of marked items among `draws` items drawn
/// without replacement from `population` items of which `successes` are
/// marked.
pub fn hypergeometric(
    rng: &mut RngStream,
    draws: u64,
    successes: u64,
    population: u64,
) -> Result<u64> {
    if draws > population || successes > population {
        return Err(GraphError::InvalidParameter(format!(
            "hypergeometric(draws {draws}, successes {successes}, population {population})"
        )));
    }
    Ok(hypergeometric_unchecked(rng, draws, successes, population))
}

pub(crate) fn hypergeometric_unchecked(
    rng: &mut RngStream,
    draws: u64,
    successes: u64,
    population: u64,
) -> u64 {
    let n = population;
    if draws == 0 || successes == 0 {
        return 0;
    }
    if draws == n {
        return successes;
    }
    if successes == n {
        return draws;
    }
    // Reduce to draws, successes <= n/2 via complements, then sample the
    // symmetric law in (a, b) = (min, max).
    if draws > n / 2 {
        return successes - hypergeometric_unchecked(rng, n - draws, successes, n);
    }
    if successes > n / 2 {
        return draws - hypergeometric_unchecked(rng, draws, n - successes, n);
    }
    let (a, b) = if draws <= successes {
        (draws, successes)
    } else {
        (successes, draws)
    };
    let mean = a as f64 * b as f64 / n as f64;
    if mean >= SMALL_MEAN {
        return rand_distr::Hypergeometric::new(n, b, a)
            .expect("validated hypergeometric parameters")
            .sample(rng);
    }
    // Inversion from x = 0. pmf(0) = prod_{i<a} (1 - b/(n-i)).
    let mut log_p0 = 0.0;
    for i in 0..a {
        log_p0 += (-(b as f64) / (n - i) as f64).ln_1p();
    }
    loop {
        let mut u = rng.uniform_f64();
        let mut pmf = log_p0.exp();
        let mut x = 0u64;
        loop {
            if u < pmf {
                return x;
            }
            u -= pmf;
            if x == a {
                // Rounding left residual mass past the support; redraw.
                break;
            }
            let (xf, af, bf, nf) = (x as f64, a as f64, b as f64, n as f64);
            pmf *= (af - xf) * (bf - xf) / ((xf + 1.0) * (nf - af - bf + xf + 1.0));
            x += 1;
        }
    }
}
