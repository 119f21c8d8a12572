//! Goodness-of-fit statistics and brute-force oracles used to check the
//! generators.

use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::gen::spatial::{hyperbolic_distance, EuclidPoint, HypPoint};
use crate::graph::{Edge, Node};

/// Outcome of a chi-square goodness-of-fit test.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    pub passed: bool,
}

/// Pearson's test of `observed` counts against cell probabilities
/// `expected` (normalised here). Adjacent cells are pooled until each
/// pooled cell expects at least five observations.
pub fn chi_square_test(observed: &[u64], expected: &[f64], alpha: f64) -> ChiSquare {
    assert_eq!(observed.len(), expected.len(), "cell count mismatch");
    let total: u64 = observed.iter().sum();
    let mass: f64 = expected.iter().sum();
    let fail = |statistic| ChiSquare {
        statistic,
        dof: 0,
        p_value: 0.0,
        passed: false,
    };
    if observed
        .iter()
        .zip(expected)
        .any(|(&o, &e)| e <= 0.0 && o > 0)
    {
        return fail(f64::INFINITY);
    }
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let (mut po, mut pe) = (0.0, 0.0);
    for (&o, &e) in observed.iter().zip(expected) {
        po += o as f64;
        pe += e / mass * total as f64;
        if pe >= 5.0 {
            bins.push((po, pe));
            po = 0.0;
            pe = 0.0;
        }
    }
    if pe > 0.0 || po > 0.0 {
        match bins.last_mut() {
            Some(last) => {
                last.0 += po;
                last.1 += pe;
            }
            None => bins.push((po, pe)),
        }
    }
    if bins.len() < 2 {
        return ChiSquare {
            statistic: 0.0,
            dof: 0,
            p_value: 1.0,
            passed: true,
        };
    }
    let statistic: f64 = bins.iter().map(|(o, e)| (o - e) * (o - e) / e).sum();
    let dof = bins.len() - 1;
    let dist = ChiSquared::new(dof as f64).expect("positive degrees of freedom");
    let p_value = dist.sf(statistic);
    ChiSquare {
        statistic,
        dof,
        p_value,
        passed: p_value >= alpha,
    }
}

/// Outcome of a two-sample Kolmogorov–Smirnov test.
#[derive(Debug, Clone, PartialEq)]
pub struct KolmogorovSmirnov {
    pub statistic: f64,
    pub p_value: f64,
}

/// Two-sample KS test with the asymptotic Kolmogorov distribution. On
/// discrete data the test is conservative.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> KolmogorovSmirnov {
    assert!(!a.is_empty() && !b.is_empty(), "empty sample");
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    let ne = (na * nb / (na + nb)).sqrt();
    let lambda = (ne + 0.12 + 0.11 / ne) * d;
    KolmogorovSmirnov {
        statistic: d,
        p_value: kolmogorov_q(lambda),
    }
}

fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda < 1e-3 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..=100 {
        let term = (-2.0 * (k as f64 * lambda).powi(2)).exp();
        sum += sign * term;
        if term < 1e-12 {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// All pairs within Euclidean (or torus) distance `r`, as sorted `(u < v)`.
pub fn rgg_oracle(points: &[EuclidPoint], r: f64, torus: bool) -> Vec<Edge> {
    let mut out = Vec::new();
    for u in 0..points.len() {
        for v in u + 1..points.len() {
            if points[u].distance(&points[v], torus) <= r {
                out.push(Edge::new(u as Node, v as Node));
            }
        }
    }
    out
}

/// All pairs at hyperbolic distance at most `radius`, as sorted `(u < v)`.
pub fn rhg_oracle(points: &[HypPoint], radius: f64) -> Vec<Edge> {
    let mut out = Vec::new();
    for u in 0..points.len() {
        for v in u + 1..points.len() {
            if hyperbolic_distance(&points[u], &points[v]) <= radius {
                out.push(Edge::new(u as Node, v as Node));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chi_square_accepts_exact_and_rejects_skew() {
        let exp = [0.25; 4];
        assert!(chi_square_test(&[2500, 2500, 2500, 2500], &exp, 0.001).passed);
        assert!(!chi_square_test(&[4000, 2000, 2000, 2000], &exp, 0.001).passed);
        assert!(!chi_square_test(&[1, 0], &[0.0, 1.0], 0.001).passed);
    }

    #[test]
    fn chi_square_pools_small_cells() {
        let res = chi_square_test(&[50, 48, 1, 1], &[0.5, 0.49, 0.005, 0.005], 0.001);
        assert_eq!(res.dof, 1);
    }

    #[test]
    fn chi_square_p_value_matches_table() {
        // 1 dof: P[X > 3.841] = 0.05. obs (n/2 + h, n/2 - h) gives X = 4h^2/n.
        let res = chi_square_test(&[5098, 4902], &[0.5, 0.5], 0.001);
        assert!((res.statistic - 3.8416).abs() < 1e-9);
        assert!((res.p_value - 0.05).abs() < 1e-3);
    }

    #[test]
    fn ks_identical_and_shifted() {
        let a: Vec<f64> = (0..1000).map(|i| i as f64).collect();
        assert!(ks_two_sample(&a, &a).p_value > 0.99);
        let b: Vec<f64> = a.iter().map(|x| x + 300.0).collect();
        let res = ks_two_sample(&a, &b);
        assert!((res.statistic - 0.3).abs() < 1e-12);
        assert!(res.p_value < 1e-6);
    }
}
