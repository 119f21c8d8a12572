//! Acceptance suite. Prints one `[criterion N] PASS|FAIL` line per
//! criterion and exits non-zero if any fails.

use std::collections::{BTreeMap, HashMap};
use std::time::{Duration, Instant};

use graphforge::gen::basic::{
    BaHash, BaParams, Gnm, GnmParams, Gnp, GnpParams, SeedGraph, ThresholdGraph,
};
use graphforge::gen::block::{bter, BterParams, BterPlan, Rmat, RmatParams, Sbm, SbmParams};
use graphforge::gen::degree::{
    cm_directed, configuration_model, curveball_trade, global_curveball, havel_hakimi, ChungLu, ChungLuMode,
    EdgeSwitcher,
};
use graphforge::gen::spatial::{rhg_radius_for_degree, Rgg, RggParams, Rhg, RhgParams};
use graphforge::random::{binomial, fisher_yates, geometric, hypergeometric};
use graphforge::sampling::{sample_k_of_n, IndexRange};
use graphforge::stats::{clustering_local, fit_power_law_tail};
use graphforge::verify::{chi_square_test, rgg_oracle, rhg_oracle};
use graphforge::{AdjacencyGraph, DegreeSequence, Edge, Graph, Node, PartitionedModel, RngStream};

const ALPHA: f64 = 0.001;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

// ln k! for k up to the table length, by running sums.
struct LnFactorial(Vec<f64>);

impl LnFactorial {
    fn new(max: u64) -> Self {
        let mut t = Vec::with_capacity(max as usize + 1);
        let mut acc = 0.0;
        t.push(0.0);
        for i in 1..=max {
            acc += (i as f64).ln();
            t.push(acc);
        }
        LnFactorial(t)
    }

    fn choose(&self, n: u64, k: u64) -> f64 {
        self.0[n as usize] - self.0[k as usize] - self.0[(n - k) as usize]
    }
}

fn histogram(draws: impl Iterator<Item = u64>, cells: usize) -> Vec<u64> {
    let mut h = vec![0u64; cells];
    for x in draws {
        h[(x as usize).min(cells - 1)] += 1;
    }
    h
}

// Degrees counted straight from the edge list; a loop counts twice.
fn degrees(g: &Graph) -> Vec<usize> {
    let mut d = vec![0; g.n];
    for e in &g.edges {
        d[e.u as usize] += 1;
        d[e.v as usize] += 1;
    }
    d
}

fn criterion_1() -> Outcome {
    let draws = 100_000u64;
    let lnf = LnFactorial::new(1_000_000);
    let mut sampling = Duration::ZERO;
    let mut failures = Vec::new();
    let mut rng = RngStream::new(1001);
    let mut check = |name: String, observed: Vec<u64>, pmf: Vec<f64>| {
        // The last cell carries the upper tail.
        let mut expected = pmf;
        let mass: f64 = expected.iter().sum();
        *expected.last_mut().unwrap() += (1.0 - mass).max(0.0);
        let t = chi_square_test(&observed, &expected, ALPHA);
        if !t.passed {
            failures.push(format!("{name} p={:.2e}", t.p_value));
        }
    };
    for p in [0.9, 0.5, 0.1, 0.01, 1e-4] {
        // Values are grouped into runs of `width`; each group is again
        // geometric with success probability 1 - (1-p)^width.
        let width = ((0.1 / p) as u64).max(1);
        let cells = 80;
        let t = Instant::now();
        let h = histogram((0..draws).map(|_| geometric(&mut rng, p).unwrap() / width), cells);
        sampling += t.elapsed();
        let q = (1.0 - p).powf(width as f64);
        let pmf = (0..cells).map(|b| q.powi(b as i32) * (1.0 - q)).collect();
        check(format!("geometric({p})"), h, pmf);
    }
    for (n, p) in [(10u64, 0.5), (50, 0.1), (1000, 0.3), (100_000, 0.001), (1_000_000, 0.5)] {
        let mean = n as f64 * p;
        let sd = (mean * (1.0 - p)).sqrt();
        let lo = (mean - 6.0 * sd).max(0.0) as u64;
        let hi = ((mean + 6.0 * sd) as u64).min(n);
        let cells = (hi - lo + 1) as usize;
        let t = Instant::now();
        let h = histogram(
            (0..draws).map(|_| binomial(&mut rng, n, p).unwrap().clamp(lo, hi) - lo),
            cells,
        );
        sampling += t.elapsed();
        let pmf = (lo..=hi)
            .map(|k| (lnf.choose(n, k) + k as f64 * p.ln() + (n - k) as f64 * (1.0 - p).ln()).exp())
            .collect();
        check(format!("binomial({n}, {p})"), h, pmf);
    }
    for (draws_k, succ, pop) in [(5u64, 10u64, 20u64), (30, 40, 100), (500, 300, 1000), (2000, 50_000, 100_000), (100, 5, 1_000_000)] {
        let lo = draws_k.saturating_sub(pop - succ);
        let hi = draws_k.min(succ);
        let mean = draws_k as f64 * succ as f64 / pop as f64;
        let var = mean * (1.0 - succ as f64 / pop as f64) * (pop - draws_k) as f64 / (pop as f64 - 1.0).max(1.0);
        let lo = lo.max((mean - 7.0 * var.sqrt()).max(0.0) as u64);
        let hi = hi.min((mean + 7.0 * var.sqrt()).ceil() as u64 + 1);
        let cells = (hi - lo + 1) as usize;
        let t = Instant::now();
        let h = histogram(
            (0..draws).map(|_| hypergeometric(&mut rng, draws_k, succ, pop).unwrap().clamp(lo, hi) - lo),
            cells,
        );
        sampling += t.elapsed();
        let pmf = (lo..=hi)
            .map(|k| (lnf.choose(succ, k) + lnf.choose(pop - succ, draws_k - k) - lnf.choose(pop, draws_k)).exp())
            .collect();
        check(format!("hypergeometric({draws_k}, {succ}, {pop})"), h, pmf);
    }
    let fast = sampling < Duration::from_secs(30);
    outcome(
        failures.is_empty() && fast,
        if failures.is_empty() {
            format!("15 parameterizations at alpha=0.001, sampling {:.2}s", sampling.as_secs_f64())
        } else {
            failures.join(", ")
        },
    )
}

fn criterion_2() -> Outcome {
    let runs = 150_000;
    let rng = RngStream::new(2002);
    // G(4, 2): key each graph by the bit mask of its edges over the six pairs.
    let pair_bit = |e: &Edge| {
        let (u, v) = (e.u.min(e.v), e.u.max(e.v));
        [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
            .iter()
            .position(|&p| p == (u, v))
            .expect("pair of K4")
    };
    let model = Gnm::new(&GnmParams::new(4, 2)).unwrap();
    let mut graphs: HashMap<u32, u64> = HashMap::new();
    for i in 0..runs {
        let g = model.generate(&rng.derive("run", i), 1).unwrap();
        let mask = g.edges.iter().fold(0u32, |m, e| m | 1 << pair_bit(e));
        *graphs.entry(mask).or_default() += 1;
    }
    let masks: Vec<u32> = (0u32..64).filter(|m| m.count_ones() == 2).collect();
    let ok_support = graphs.keys().all(|m| masks.contains(m));
    let obs: Vec<u64> = masks.iter().map(|m| graphs.get(m).copied().unwrap_or(0)).collect();
    let g = chi_square_test(&obs, &[1.0; 15], ALPHA);

    let mut r = RngStream::new(2003);
    let mut subsets: HashMap<u64, u64> = HashMap::new();
    for _ in 0..runs {
        let s = sample_k_of_n(2, IndexRange::upto(6), &mut r).unwrap();
        *subsets.entry(s.iter().fold(0, |m, &i| m | 1 << i)).or_default() += 1;
    }
    let obs: Vec<u64> = (0u64..64)
        .filter(|m| m.count_ones() == 2)
        .map(|m| subsets.get(&m).copied().unwrap_or(0))
        .collect();
    let s = chi_square_test(&obs, &[1.0; 15], ALPHA);
    let subset_support = subsets.len() == 15;

    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut counts = [0u64; 6];
    for _ in 0..60_000 {
        let mut items = [0, 1, 2];
        fisher_yates(&mut r, &mut items);
        counts[perms.iter().position(|p| *p == items).unwrap()] += 1;
    }
    let f = chi_square_test(&counts, &[1.0; 6], ALPHA);
    outcome(
        g.passed && s.passed && f.passed && ok_support && subset_support,
        format!(
            "G(4,2) p={:.3}, k-of-N p={:.3}, Fisher-Yates p={:.3}",
            g.p_value, s.p_value, f.p_value
        ),
    )
}

fn edge_bytes(g: &Graph) -> Vec<u8> {
    let mut out = Vec::with_capacity(g.edges.len() * 8);
    for e in &g.edges {
        out.extend_from_slice(&e.u.to_le_bytes());
        out.extend_from_slice(&e.v.to_le_bytes());
    }
    out
}

fn criterion_3() -> Outcome {
    let rng = RngStream::new(3003);
    let models: Vec<(&str, Box<dyn PartitionedModel>)> = vec![
        ("gnp", Box::new(Gnp::new(&GnpParams::new(20_000, 0.0005)).unwrap())),
        ("gnm", Box::new(Gnm::new(&GnmParams::new(20_000, 100_000)).unwrap())),
        (
            "rmat",
            Box::new(Rmat::new(&RmatParams { noise: 0.1, ..RmatParams::new(14, 100_000, [0.57, 0.19, 0.19, 0.05]) }, &rng).unwrap()),
        ),
        (
            "sbm",
            Box::new(
                Sbm::new(
                    &SbmParams {
                        n: 5000,
                        community_probs: vec![0.2, 0.3, 0.5],
                        matrix: vec![vec![0.01, 0.001, 0.002], vec![0.001, 0.02, 0.0], vec![0.002, 0.0, 0.005]],
                    },
                    &rng,
                )
                .unwrap(),
            ),
        ),
        ("rgg", Box::new(Rgg::new(&RggParams::new(20_000, 0.01)).unwrap())),
        (
            "rhg",
            Box::new(
                Rhg::new(&RhgParams {
                    n: 20_000,
                    alpha: 0.75,
                    radius: rhg_radius_for_degree(20_000, 0.75, 10.0).unwrap(),
                })
                .unwrap(),
            ),
        ),
        (
            "ba_hash",
            Box::new(
                BaHash::new(&BaParams {
                    n: 20_000,
                    d: 4,
                    seed: SeedGraph::Clique(5),
                    simple: false,
                })
                .unwrap(),
            ),
        ),
        ("threshold_graph", Box::new(ThresholdGraph::new(3000, 0.05).unwrap())),
    ];
    let mut bad = Vec::new();
    for (name, model) in &models {
        let one = edge_bytes(&model.generate(&rng, 1).unwrap());
        for threads in [4, 13] {
            if edge_bytes(&model.generate(&rng, threads).unwrap()) != one {
                bad.push(format!("{name}@{threads}"));
            }
        }
    }
    outcome(
        bad.is_empty(),
        if bad.is_empty() {
            "8 models identical for threads {1, 4, 13}".to_string()
        } else {
            format!("differs: {}", bad.join(", "))
        },
    )
}

fn criterion_4() -> Outcome {
    let mut bad = Vec::new();
    for torus in [false, true] {
        for seed in 0..50 {
            let rng = RngStream::new(4000 + seed);
            let (n, r, dim) = if seed % 2 == 0 { (1000, 0.05, 2) } else { (600, 0.12, 3) };
            let model = Rgg::new(&RggParams {
                dim,
                torus,
                ..RggParams::new(n, r)
            })
            .unwrap();
            let g = model.generate(&rng, 1).unwrap();
            if g.sorted_edges() != rgg_oracle(&model.points(&rng).unwrap(), r, torus) {
                bad.push(format!("rgg seed={seed} torus={torus}"));
            }
        }
    }
    for seed in 0..20 {
        let rng = RngStream::new(4100 + seed);
        let alpha = [0.55, 0.75, 1.0][seed as usize % 3];
        let radius = rhg_radius_for_degree(500, alpha, 8.0).unwrap();
        let model = Rhg::new(&RhgParams { n: 500, alpha, radius }).unwrap();
        let g = model.generate(&rng, 1).unwrap();
        if g.sorted_edges() != rhg_oracle(&model.points(&rng).unwrap(), radius) {
            bad.push(format!("rhg seed={seed}"));
        }
    }
    outcome(
        bad.is_empty(),
        if bad.is_empty() {
            "100 rgg and 20 rhg instances match the all-pairs oracles".to_string()
        } else {
            bad.join(", ")
        },
    )
}

fn criterion_5() -> Outcome {
    let mut bad = Vec::new();
    let mut rng = RngStream::new(5005);
    for i in 0..200 {
        let n = 2 + rng.uniform_int(0, 200).unwrap() as usize;
        let d: Vec<usize> = (0..n).map(|_| rng.uniform_int(0, 12).unwrap() as usize).collect();
        let mut d = d;
        if d.iter().sum::<usize>() % 2 == 1 {
            d[0] += 1;
        }
        let g = configuration_model(&DegreeSequence(d.clone()), &mut rng).unwrap();
        if degrees(&g) != d {
            bad.push(format!("cm #{i}"));
        }
        let out: Vec<usize> = (0..n).map(|_| rng.uniform_int(0, 8).unwrap() as usize).collect();
        let mut inn = out.clone();
        fisher_yates(&mut rng, &mut inn);
        let g = cm_directed(&DegreeSequence(inn.clone()), &DegreeSequence(out.clone()), &mut rng).unwrap();
        let (mut gi, mut go) = (vec![0; n], vec![0; n]);
        for e in &g.edges {
            go[e.u as usize] += 1;
            gi[e.v as usize] += 1;
        }
        if gi != inn || go != out {
            bad.push(format!("cm_directed #{i}"));
        }
    }
    // Graphical sequences taken from random graphs.
    for i in 0..1000u64 {
        let n = 1 + rng.uniform_int(0, 120).unwrap() as usize;
        let p = rng.uniform_f64() * 0.3;
        let src = Gnp::new(&GnpParams::new(n, p)).unwrap().generate(&rng.derive("hh", i), 1).unwrap();
        let d = degrees(&src);
        let g = havel_hakimi(&DegreeSequence(d.clone())).unwrap();
        if degrees(&g) != d || !g.is_simple() {
            bad.push(format!("havel_hakimi #{i}"));
        }
    }
    let base = Gnp::new(&GnpParams::new(300, 0.03)).unwrap().generate(&RngStream::new(5006), 1).unwrap();
    let target = degrees(&base);
    let adj = AdjacencyGraph::from_graph(&base).unwrap();
    let steps = 1_000_000u64;
    let mut es = EdgeSwitcher::new(&adj, false).unwrap();
    es.run(steps / 3, &mut rng);
    let after = es.graph().to_graph();
    if degrees(&after) != target || !after.is_simple() {
        bad.push("edge switching".into());
    }
    let small = Gnp::new(&GnpParams::new(40, 0.15)).unwrap().generate(&RngStream::new(5007), 1).unwrap();
    let small_target = degrees(&small);
    let mut g = AdjacencyGraph::from_graph(&small).unwrap();
    for _ in 0..steps / 3 {
        let u = rng.uniform_int(0, 40).unwrap() as Node;
        let v = (u + 1 + rng.uniform_int(0, 39).unwrap() as Node) % 40;
        g = curveball_trade(&g, u, v, &mut rng).unwrap();
    }
    let after = g.to_graph();
    if degrees(&after) != small_target || !after.is_simple() {
        bad.push("curveball".into());
    }
    // 150 trades per round.
    let rounds = (steps / 3).div_ceil(150);
    let after = global_curveball(&adj, rounds, &mut rng).unwrap().to_graph();
    if degrees(&after) != target || !after.is_simple() {
        bad.push("global curveball".into());
    }
    outcome(
        bad.is_empty(),
        if bad.is_empty() {
            "400 CM instances, 1000 Havel-Hakimi sequences, 1e6 chain steps exact".to_string()
        } else {
            bad.join(", ")
        },
    )
}

// All simple graphs on the degree sequence, as sorted edge lists.
fn enumerate(d: &[usize]) -> Vec<Vec<Edge>> {
    let n = d.len() as Node;
    let pairs: Vec<Edge> = (0..n).flat_map(|u| (u + 1..n).map(move |v| Edge::new(u, v))).collect();
    let m = d.iter().sum::<usize>() / 2;
    (0u32..1 << pairs.len())
        .filter(|mask| mask.count_ones() as usize == m)
        .map(|mask| {
            pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, e)| *e)
                .collect::<Vec<_>>()
        })
        .filter(|edges| {
            let mut deg = vec![0; d.len()];
            for e in edges {
                deg[e.u as usize] += 1;
                deg[e.v as usize] += 1;
            }
            deg == d
        })
        .collect()
}

fn criterion_6() -> Outcome {
    let chains = 10_000u64;
    let steps = 100u64;
    let mut lines = Vec::new();
    let mut ok = true;
    for d in [vec![1, 1, 1, 1], vec![2, 2, 1, 1]] {
        let ensemble = enumerate(&d);
        let start = AdjacencyGraph::from_graph(&havel_hakimi(&DegreeSequence(d.clone())).unwrap()).unwrap();
        for method in ["es", "gcb"] {
            let mut counts = vec![0u64; ensemble.len()];
            let root = RngStream::new(6006);
            for c in 0..chains {
                let mut rng = root.derive(method, c);
                let g = if method == "es" {
                    let mut chain = EdgeSwitcher::new(&start, false).unwrap();
                    chain.run(steps, &mut rng);
                    chain.graph()
                } else {
                    global_curveball(&start, steps, &mut rng).unwrap()
                };
                let edges = g.to_graph().sorted_edges();
                match ensemble.iter().position(|x| *x == edges) {
                    Some(i) => counts[i] += 1,
                    None => ok = false,
                }
            }
            let t = chi_square_test(&counts, &vec![1.0; ensemble.len()], ALPHA);
            ok &= t.passed;
            lines.push(format!("{method} {d:?} ({} graphs) p={:.3}", ensemble.len(), t.p_value));
        }
    }
    outcome(ok, lines.join("; "))
}

fn criterion_7() -> Outcome {
    let n = 1000;
    let runs = 200u64;
    let gamma = 2.5;
    let weights: Vec<f64> = (0..n).map(|i| 40.0 * ((i + 1) as f64).powf(-1.0 / (gamma - 1.0)) + 2.0).collect();
    let total: f64 = weights.iter().sum();
    let model = ChungLu::new(&weights, ChungLuMode::Clamp).unwrap();
    let root = RngStream::new(7007);
    let mut sums = vec![0u64; n];
    for r in 0..runs {
        for e in &model.generate(&root.derive("run", r), 1).unwrap().edges {
            sums[e.u as usize] += 1;
            sums[e.v as usize] += 1;
        }
    }
    let mut worst = 0.0f64;
    for i in 0..n {
        let (mut mean, mut var) = (0.0, 0.0);
        for j in 0..n {
            if j != i {
                let p = (weights[i] * weights[j] / total).min(1.0);
                mean += p;
                var += p * (1.0 - p);
            }
        }
        let (mean, sd) = (mean * runs as f64, (var * runs as f64).sqrt());
        let z = (sums[i] as f64 - mean).abs() / sd.max(1e-9);
        worst = worst.max(z);
    }
    outcome(worst <= 4.0, format!("largest per-node deviation {worst:.2} sigma over {runs} runs"))
}

fn criterion_8() -> Outcome {
    let n = 100_000;
    let alpha = 0.75;
    let start = Instant::now();
    let radius = rhg_radius_for_degree(n, alpha, 10.0).unwrap();
    let g = Rhg::new(&RhgParams { n, alpha, radius })
        .unwrap()
        .generate(&RngStream::new(8008), 1)
        .unwrap();
    let elapsed = start.elapsed();
    let fit = fit_power_law_tail(&degrees(&g), 100);
    let gamma = fit.as_ref().map_or(f64::NAN, |f| f.gamma);
    let ok = (gamma - 2.5).abs() <= 0.3 && elapsed < Duration::from_secs(60);
    outcome(
        ok,
        format!(
            "gamma={gamma:.3} (d_min={}, tail={}), avg degree {:.2}, {:.1}s",
            fit.as_ref().map_or(0, |f| f.d_min),
            fit.as_ref().map_or(0, |f| f.tail_size),
            2.0 * g.m() as f64 / n as f64,
            elapsed.as_secs_f64()
        ),
    )
}

// Cell probabilities of an R-MAT edge given per-level quadrant weights;
// level 0 decides the top bit.
fn rmat_cells(levels: &[[f64; 4]]) -> Vec<f64> {
    let s = levels.len();
    let side = 1usize << s;
    let mut out = vec![0.0; side * side];
    for (row, cells) in out.chunks_mut(side).enumerate() {
        for (col, cell) in cells.iter_mut().enumerate() {
            *cell = levels
                .iter()
                .enumerate()
                .map(|(l, w)| {
                    let bit = s - 1 - l;
                    w[(row >> bit & 1) << 1 | (col >> bit & 1)]
                })
                .product();
        }
    }
    out
}

fn criterion_9() -> Outcome {
    let root = RngStream::new(9009);
    let mut lines = Vec::new();
    let mut ok = true;

    let m = 1_000_000u64;
    let uniform = Rmat::new(&RmatParams::new(4, m, [0.25; 4]), &root).unwrap();
    let g = uniform.generate(&root, 1).unwrap();
    let h = histogram(g.edges.iter().map(|e| (e.u * 16 + e.v) as u64), 256);
    let t = chi_square_test(&h, &[1.0; 256], ALPHA);
    ok &= t.passed;
    lines.push(format!("uniform p={:.3}", t.p_value));

    let w = [0.57, 0.19, 0.19, 0.05];
    let skewed = Rmat::new(&RmatParams::new(10, m, w), &root).unwrap();
    let g = skewed.generate(&root.derive("skewed", 0), 1).unwrap();
    let mut quad = [0u64; 4];
    for e in &g.edges {
        quad[((e.u >> 9) << 1 | (e.v >> 9)) as usize] += 1;
    }
    let worst = (0..4)
        .map(|q| {
            let sd = (m as f64 * w[q] * (1.0 - w[q])).sqrt();
            (quad[q] as f64 - m as f64 * w[q]).abs() / sd
        })
        .fold(0.0, f64::max);
    ok &= worst <= 4.0;
    lines.push(format!("quadrants within {worst:.2} sigma"));

    for noise in [0.0, 0.2] {
        let model = Rmat::new(&RmatParams { noise, ..RmatParams::new(6, 0, w) }, &root.derive("noise", 0)).unwrap();
        let cells = rmat_cells(model.level_weights());
        let mut blocked = vec![0u64; 4096];
        let mut naive = vec![0u64; 4096];
        let (mut a, mut b) = (root.derive("blocked", 0), root.derive("naive", 0));
        for _ in 0..2_000_000 {
            let (r, c) = model.sample_blocked(&mut a);
            blocked[(r * 64 + c) as usize] += 1;
            let (r, c) = model.sample_naive(&mut b);
            naive[(r * 64 + c) as usize] += 1;
        }
        let tb = chi_square_test(&blocked, &cells, ALPHA);
        let tn = chi_square_test(&naive, &cells, ALPHA);
        ok &= tb.passed && tn.passed;
        lines.push(format!("noise {noise}: blocked p={:.3}, naive p={:.3}", tb.p_value, tn.p_value));
    }
    outcome(ok, lines.join("; "))
}

fn criterion_10() -> Outcome {
    let params = BterParams {
        degree_counts: BTreeMap::from([(4, 5000), (9, 5000)]),
        clustering: BTreeMap::from([(4, 0.5), (9, 0.3)]),
        beta: 1.0,
    };
    let plan = BterPlan::new(&params).unwrap();
    let root = RngStream::new(10_010);
    let mut ok = true;
    let mut worst_deg = 0.0f64;
    let mut worst_cc = 0.0f64;
    for r in 0..20 {
        let g = bter(&params, &root.derive("run", r)).unwrap();
        let adj = AdjacencyGraph::from_graph(&g).unwrap();
        for (d, target_cc) in [(4usize, 0.5), (9, 0.3)] {
            let class: Vec<Node> = (0..plan.n() as Node).filter(|&v| plan.degrees[v as usize] == d).collect();
            let mean_deg = class.iter().map(|&v| adj.degree(v) as f64).sum::<f64>() / class.len() as f64;
            let mean_cc =
                class.iter().map(|&v| clustering_local(&adj, v).unwrap()).sum::<f64>() / class.len() as f64;
            let rel = (mean_deg - d as f64).abs() / d as f64;
            let abs = (mean_cc - target_cc).abs();
            worst_deg = worst_deg.max(rel);
            worst_cc = worst_cc.max(abs);
            ok &= rel <= 0.1 && abs <= 0.1;
        }
    }
    outcome(
        ok,
        format!(
            "worst class degree error {:.1}%, worst class cc error {worst_cc:.3} over 20 runs",
            100.0 * worst_deg
        ),
    )
}

fn criterion_11() -> Outcome {
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    let model = Gnm::new(&GnmParams::new(10_000_000, 100_000_000)).unwrap();
    let start = Instant::now();
    let m = model.count_edges(&RngStream::new(11_011), threads).unwrap();
    let elapsed = start.elapsed();
    outcome(
        m == 100_000_000 && elapsed < Duration::from_secs(60),
        format!("{m} edges in {:.1}s on {threads} thread(s)", elapsed.as_secs_f64()),
    )
}

fn main() {
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let criteria: [(u32, fn() -> Outcome); 11] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
        (11, criterion_11),
    ];
    let mut failed = 0;
    for (id, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| f == &id.to_string()) {
            continue;
        }
        let start = Instant::now();
        let out = run();
        failed += !out.passed as u32;
        println!(
            "[criterion {id}] {} {} ({:.1}s)",
            if out.passed { "PASS" } else { "FAIL" },
            out.detail,
            start.elapsed().as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
