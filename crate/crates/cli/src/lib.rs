//! Command implementations behind the `graphforge` binary.

pub mod format;

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use graphforge::gen::basic::{
    ba_sequential, node_copy, wrg, BaHash, BaParams, CopyParams, Gnm, GnmParams, Gnp, GnpParams, SeedGraph,
    ThresholdGraph,
};
use graphforge::gen::block::{bter, BterParams, Rmat, RmatParams, Sbm, SbmParams};
use graphforge::gen::degree::{
    cm_directed, cm_simple_rejection, configuration_model, curveball_trade, erased_cm, fdsm, havel_hakimi,
    random_regular, ChungLu, ChungLuMode, EdgeSwitcher, DEFAULT_MAX_TRIES, DEFAULT_SWAPS_PER_EDGE,
};
use graphforge::gen::spatial::{rhg_radius_for_degree, Rgg, RggParams, Rhg, RhgParams, Waxman};
use graphforge::gen::Variant;
use graphforge::stats::{is_connected, GraphStats};
use graphforge::transform::{extract_giant, simplify, spanning_tree_augment, to_undirected};
use graphforge::verify::{chi_square_test, rgg_oracle, rhg_oracle};
use graphforge::{AdjacencyGraph, DegreeSequence, Graph, GraphError, Node, PartitionedModel, RngStream};

use format::{EdgeList, Format};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("refused: {0}")]
    Budget(String),
    #[error("verification failed: {0}")]
    Verify(String),
}

impl CliError {
    /// 0 success, 1 usage or parse, 2 infeasible parameters, 3 budget.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Graph(e) if e.is_infeasible() => 2,
            CliError::Graph(GraphError::BudgetExceeded(_)) | CliError::Budget(_) => 3,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "graphforge", version, about = "Reproducible random graph generation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a graph.
    Gen(GenArgs),
    /// Randomise a simple undirected graph, keeping its degrees.
    Randomize(RandomizeArgs),
    /// Print graph statistics.
    Stats(StatsArgs),
    /// Check generators against brute-force oracles on small instances.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// 64-bit seed, or `random` to draw one (it is printed).
    #[arg(long, global = true, default_value = "0")]
    pub seed: String,
    /// Worker threads; output does not depend on it.
    #[arg(long, global = true, env = "GRAPHFORGE_THREADS", default_value_t = 1)]
    pub threads: usize,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Output file; standard output when absent. Sidecar files
    /// (`<out>.labels`, `<out>.points`) need a path.
    #[arg(long, short, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Connect {
    /// Keep the largest component.
    Giant,
    /// Add bridges between components.
    Tree,
    /// Regenerate until connected.
    Retry,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub run: RunArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Make the output connected.
    #[arg(long, global = true, value_enum)]
    pub connect: Option<Connect>,
    /// Attempts for `--connect retry` and the rejection samplers.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_TRIES)]
    pub max_tries: u64,
    #[command(subcommand)]
    pub model: Model,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Model {
    /// G(n, p).
    Gnp {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        directed: bool,
        /// Directed with self-loops.
        #[arg(long)]
        loops: bool,
        /// Bipartite with this many left nodes.
        #[arg(long)]
        left: Option<usize>,
    },
    /// G(n, m).
    Gnm {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        directed: bool,
        #[arg(long)]
        loops: bool,
        #[arg(long)]
        left: Option<usize>,
    },
    /// Barabási–Albert, sequential.
    Ba {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        /// Seed clique size (default: empty seed, or K_{d+1} when simple).
        #[arg(long)]
        init_clique: Option<usize>,
        #[arg(long)]
        simple: bool,
    },
    /// Barabási–Albert, hash-based and partitioned.
    BaHash {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        init_clique: Option<usize>,
    },
    /// Node-copy model on a seed clique.
    NodeCopy {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        p: f64,
        /// Seed clique size (default d + 1).
        #[arg(long)]
        init_clique: Option<usize>,
        #[arg(long)]
        simple: bool,
    },
    /// Threshold graph with dominating probability p.
    Threshold {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
    },
    /// Weighted random graph; text output only.
    Wrg {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p_prime: f64,
    },
    /// Random geometric graph on the unit square or cube.
    Rgg {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.0)]
        r: f64,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long)]
        torus: bool,
        /// Waxman mode with this alpha (needs --waxman-beta).
        #[arg(long, requires = "waxman_beta")]
        waxman_alpha: Option<f64>,
        #[arg(long, requires = "waxman_alpha")]
        waxman_beta: Option<f64>,
    },
    /// Threshold random hyperbolic graph.
    Rhg {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        alpha: f64,
        /// Disk radius.
        #[arg(long = "R", conflicts_with = "avg_degree")]
        radius: Option<f64>,
        /// Target average degree, used to pick the radius.
        #[arg(long)]
        avg_degree: Option<f64>,
    },
    /// Chung-Lu graph from a weight file (one weight per line).
    ChungLu {
        #[arg(long)]
        weights: PathBuf,
        /// Clamp probabilities above one instead of failing.
        #[arg(long)]
        clamp: bool,
    },
    /// Configuration model from a degree file.
    Cm {
        #[arg(long)]
        degrees: PathBuf,
        #[arg(long, value_enum, default_value_t = CmMode::Multi)]
        mode: CmMode,
    },
    /// Directed configuration model.
    CmDirected {
        #[arg(long)]
        in_degrees: PathBuf,
        #[arg(long)]
        out_degrees: PathBuf,
    },
    /// Deterministic Havel–Hakimi realisation.
    HavelHakimi {
        #[arg(long)]
        degrees: PathBuf,
    },
    /// Havel–Hakimi followed by edge switching.
    Fdsm {
        #[arg(long)]
        degrees: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SWAPS_PER_EDGE)]
        swaps_per_edge: f64,
    },
    /// Random d-regular graph.
    Regular {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
    },
    /// Stochastic block model.
    Sbm {
        #[arg(long)]
        n: usize,
        /// Community probabilities, comma separated.
        #[arg(long)]
        probs: String,
        /// Block matrix rows separated by `;`, entries by `,`.
        #[arg(long)]
        matrix: String,
    },
    /// R-MAT.
    Rmat {
        #[arg(long)]
        scale: u32,
        #[arg(long)]
        m: u64,
        /// Quadrant weights `a,b,c,d`.
        #[arg(long, default_value = "0.57,0.19,0.19,0.05")]
        abcd: String,
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        #[arg(long)]
        undirected: bool,
        #[arg(long)]
        dedup: bool,
        #[arg(long)]
        drop_loops: bool,
    },
    /// BTER from degree classes `degree:count:cc`, comma separated.
    Bter {
        #[arg(long)]
        classes: String,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CmMode {
    /// Keep loops and parallel edges.
    Multi,
    /// Delete loops and parallel edges.
    Erased,
    /// Redraw until simple.
    Simple,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Edge switching; amount = number of switches (default 10 per edge).
    Es,
    /// Single Curveball trades between uniform node pairs; amount = trades.
    Curveball,
    /// Global Curveball; amount = rounds.
    Gcb,
}

#[derive(Debug, Args)]
pub struct RandomizeArgs {
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Es)]
    pub method: Method,
    #[arg(long)]
    pub amount: Option<u64>,
    /// Keep the joint degree matrix (edge switching only).
    #[arg(long)]
    pub dk2: bool,
    #[command(flatten)]
    pub run: RunArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    pub input: PathBuf,
    /// Also compute the average distance (sampled on large graphs).
    #[arg(long)]
    pub distance: bool,
    /// Print `key=value` lines.
    #[arg(long)]
    pub machine: bool,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Largest instance the oracles will run on.
    #[arg(long, global = true, default_value_t = 2000)]
    pub max_n: usize,
    /// Number of seeds to check.
    #[arg(long, global = true, default_value_t = 10)]
    pub seeds: u64,
    #[command(flatten)]
    pub run: RunArgs,
    #[command(subcommand)]
    pub check: Check,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Check {
    /// Random geometric graph against all-pairs distances.
    Rgg {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.1)]
        r: f64,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long)]
        torus: bool,
    },
    /// Hyperbolic graph against all-pairs distances.
    Rhg {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.75)]
        alpha: f64,
        #[arg(long, default_value_t = 10.0)]
        avg_degree: f64,
    },
    /// k-of-N sampling against the uniform law over subsets.
    Sample {
        #[arg(long = "N")]
        universe: u64,
        #[arg(long)]
        k: u64,
        #[arg(long, default_value_t = 100_000)]
        draws: u64,
    },
}

/// Resolves `--seed`, printing drawn seeds to standard error.
pub fn resolve_seed(text: &str) -> Result<u64, CliError> {
    if text == "random" {
        use std::hash::{BuildHasher, RandomState};
        let seed = RandomState::new().hash_one(std::time::SystemTime::now());
        eprintln!("seed={seed}");
        return Ok(seed);
    }
    text.parse()
        .map_err(|_| CliError::Usage(format!("--seed must be a 64-bit integer or `random`, got `{text}`")))
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Gen(args) => cmd_gen(&args),
        Command::Randomize(args) => cmd_randomize(&args),
        Command::Stats(args) => cmd_stats(&args, &mut std::io::stdout().lock()),
        Command::Verify(args) => cmd_verify(&args, &mut std::io::stdout().lock()),
    }
}

/// A generated graph with its optional sidecar data.
#[derive(Debug, Clone, PartialEq)]
pub struct Generated {
    pub list: EdgeList,
    pub labels: Option<Vec<u32>>,
    /// One text line per node.
    pub points: Option<Vec<String>>,
}

impl Generated {
    fn plain(graph: Graph) -> Self {
        Generated {
            list: EdgeList::plain(graph),
            labels: None,
            points: None,
        }
    }
}

fn open(path: &Path) -> Result<BufReader<File>, CliError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CliError::Usage(format!("cannot open {}: {e}", path.display())))
}

fn degrees_from(path: &Path) -> Result<DegreeSequence, CliError> {
    Ok(DegreeSequence::new(format::read_degrees(open(path)?)?))
}

fn parse_list(text: &str, what: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("{what}: `{x}` is not a number")))
        })
        .collect()
}

fn variant(n: usize, directed: bool, loops: bool, left: Option<usize>) -> Result<Variant, CliError> {
    match (left, directed || loops) {
        (Some(_), true) => Err(CliError::Usage("bipartite graphs are undirected".into())),
        (Some(l), false) if l > n => Err(CliError::Usage(format!("--left {l} exceeds n = {n}"))),
        (Some(l), false) => Ok(Variant::Bipartite { left: l, right: n - l }),
        (None, _) if loops => Ok(Variant::DirectedLoops),
        (None, true) => Ok(Variant::DirectedNoLoops),
        (None, false) => Ok(Variant::Undirected),
    }
}

fn ba_seed(init: Option<usize>) -> SeedGraph {
    init.map_or(SeedGraph::Empty, SeedGraph::Clique)
}

fn clique(k: usize) -> Graph {
    let k = k as Node;
    Graph::from_edges(k as usize, (0..k).flat_map(|u| (u + 1..k).map(move |v| (u, v))))
}

/// Runs one model. Partitioned models use `threads` workers.
pub fn generate(model: &Model, rng: &RngStream, threads: usize, max_tries: u64) -> Result<Generated, CliError> {
    let out = match model {
        &Model::Gnp { n, p, directed, loops, left } => {
            let params = GnpParams {
                n,
                p,
                variant: variant(n, directed, loops, left)?,
            };
            Generated::plain(Gnp::new(&params)?.generate(rng, threads)?)
        }
        &Model::Gnm { n, m, directed, loops, left } => {
            let params = GnmParams {
                n,
                m,
                variant: variant(n, directed, loops, left)?,
            };
            Generated::plain(Gnm::new(&params)?.generate(rng, threads)?)
        }
        &Model::Ba { n, d, init_clique, simple } => {
            let params = BaParams {
                n,
                d,
                seed: ba_seed(init_clique),
                simple,
            };
            Generated::plain(ba_sequential(&params, &mut rng.clone())?)
        }
        &Model::BaHash { n, d, init_clique } => {
            let params = BaParams {
                n,
                d,
                seed: ba_seed(init_clique),
                simple: false,
            };
            Generated::plain(BaHash::new(&params)?.generate(rng, threads)?)
        }
        &Model::NodeCopy { n, d, p, init_clique, simple } => {
            let params = CopyParams {
                n,
                d,
                p,
                seed: clique(init_clique.unwrap_or(d + 1)),
                simple,
            };
            Generated::plain(node_copy(&params, &mut rng.clone())?)
        }
        &Model::Threshold { n, p } => Generated::plain(ThresholdGraph::new(n, p)?.generate(rng, threads)?),
        &Model::Wrg { n, p_prime } => {
            let w = wrg(n, p_prime, &mut rng.clone())?;
            Generated {
                list: EdgeList {
                    graph: w.graph,
                    weights: Some(w.weights),
                },
                labels: None,
                points: None,
            }
        }
        &Model::Rgg { n, r, dim, torus, waxman_alpha, waxman_beta } => {
            let waxman = match (waxman_alpha, waxman_beta) {
                (Some(alpha), Some(beta)) => Some(Waxman { alpha, beta }),
                _ => None,
            };
            let model = Rgg::new(&RggParams { n, r, dim, torus, waxman })?;
            let graph = model.generate(rng, threads)?;
            let points = model
                .points(rng)?
                .iter()
                .map(|p| {
                    let c = &p.coords[..p.dim as usize];
                    c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
                })
                .collect();
            Generated {
                list: EdgeList::plain(graph),
                labels: None,
                points: Some(points),
            }
        }
        &Model::Rhg { n, alpha, radius, avg_degree } => {
            let radius = match (radius, avg_degree) {
                (Some(r), _) => r,
                (None, Some(k)) => rhg_radius_for_degree(n, alpha, k)?,
                (None, None) => return Err(CliError::Usage("rhg needs --R or --avg-degree".into())),
            };
            let model = Rhg::new(&RhgParams { n, alpha, radius })?;
            let graph = model.generate(rng, threads)?;
            let points = model.points(rng)?.iter().map(|p| format!("{} {}", p.r, p.theta)).collect();
            Generated {
                list: EdgeList::plain(graph),
                labels: None,
                points: Some(points),
            }
        }
        Model::ChungLu { weights, clamp } => {
            let w = format::read_weights(open(weights)?)?;
            let mode = if *clamp { ChungLuMode::Clamp } else { ChungLuMode::Strict };
            let model = ChungLu::new(&w, mode)?;
            if model.clamped_pairs() > 0 {
                eprintln!("warning: {} pair probabilities clamped to 1", model.clamped_pairs());
            }
            Generated::plain(model.generate(rng, threads)?)
        }
        Model::Cm { degrees, mode } => {
            let d = degrees_from(degrees)?;
            let mut r = rng.clone();
            Generated::plain(match mode {
                CmMode::Multi => configuration_model(&d, &mut r)?,
                CmMode::Erased => erased_cm(&d, &mut r)?,
                CmMode::Simple => cm_simple_rejection(&d, &mut r, max_tries)?,
            })
        }
        Model::CmDirected { in_degrees, out_degrees } => Generated::plain(cm_directed(
            &degrees_from(in_degrees)?,
            &degrees_from(out_degrees)?,
            &mut rng.clone(),
        )?),
        Model::HavelHakimi { degrees } => Generated::plain(havel_hakimi(&degrees_from(degrees)?)?),
        Model::Fdsm { degrees, swaps_per_edge } => {
            Generated::plain(fdsm(&degrees_from(degrees)?, *swaps_per_edge, &mut rng.clone())?)
        }
        &Model::Regular { n, d } => Generated::plain(random_regular(n, d, &mut rng.clone(), max_tries)?),
        Model::Sbm { n, probs, matrix } => {
            let params = SbmParams {
                n: *n,
                community_probs: parse_list(probs, "--probs")?,
                matrix: matrix
                    .split(';')
                    .map(|row| parse_list(row, "--matrix"))
                    .collect::<Result<_, _>>()?,
            };
            let model = Sbm::new(&params, rng)?;
            Generated {
                list: EdgeList::plain(model.generate(rng, threads)?),
                labels: Some(model.labels().to_vec()),
                points: None,
            }
        }
        Model::Rmat { scale, m, abcd, noise, undirected, dedup, drop_loops } => {
            let w = parse_list(abcd, "--abcd")?;
            let weights: [f64; 4] = w
                .try_into()
                .map_err(|_| CliError::Usage("--abcd needs four weights".into()))?;
            let params = RmatParams {
                scale: *scale,
                m: *m,
                weights,
                noise: *noise,
                dedup: *dedup,
                undirected: *undirected,
                drop_loops: *drop_loops,
            };
            let model = Rmat::new(&params, rng)?;
            Generated::plain(model.finish(model.generate(rng, threads)?))
        }
        Model::Bter { classes, beta } => {
            let mut params = BterParams {
                degree_counts: Default::default(),
                clustering: Default::default(),
                beta: *beta,
            };
            for class in classes.split(',') {
                let parts: Vec<&str> = class.trim().split(':').collect();
                let bad = || CliError::Usage(format!("--classes entry `{class}` is not degree:count:cc"));
                if parts.len() != 3 {
                    return Err(bad());
                }
                let d: usize = parts[0].parse().map_err(|_| bad())?;
                let count: usize = parts[1].parse().map_err(|_| bad())?;
                let cc: f64 = parts[2].parse().map_err(|_| bad())?;
                *params.degree_counts.entry(d).or_insert(0) += count;
                params.clustering.insert(d, cc);
            }
            Generated::plain(bter(&params, rng)?)
        }
    };
    Ok(out)
}

fn remap<T: Clone>(items: Option<Vec<T>>, map: &[Option<Node>]) -> Option<Vec<T>> {
    items.map(|items| {
        items
            .iter()
            .zip(map)
            .filter(|(_, m)| m.is_some())
            .map(|(x, _)| x.clone())
            .collect()
    })
}

fn connect(
    model: &Model,
    rng: &RngStream,
    threads: usize,
    policy: Connect,
    max_tries: u64,
) -> Result<Generated, CliError> {
    match policy {
        Connect::Retry => {
            for t in 0..max_tries.max(1) {
                let g = generate(model, &rng.derive("connect-try", t), threads, max_tries)?;
                if is_connected(&g.list.graph) {
                    return Ok(g);
                }
            }
            Err(GraphError::BudgetExceeded(max_tries.max(1)).into())
        }
        Connect::Giant | Connect::Tree => {
            let g = generate(model, rng, threads, max_tries)?;
            if g.list.weights.is_some() || g.list.graph.directed {
                return Err(CliError::Usage("--connect giant/tree needs an unweighted undirected graph".into()));
            }
            if policy == Connect::Giant {
                let giant = extract_giant(&g.list.graph)?;
                Ok(Generated {
                    list: EdgeList::plain(giant.graph),
                    labels: remap(g.labels, &giant.map),
                    points: remap(g.points, &giant.map),
                })
            } else {
                let graph = spanning_tree_augment(&g.list.graph, &mut rng.derive("connect-tree", 0))?;
                Ok(Generated {
                    list: EdgeList::plain(graph),
                    ..g
                })
            }
        }
    }
}

fn sidecar(out: &Path, ext: &str) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".");
    name.push(ext);
    PathBuf::from(name)
}

fn write_output(list: &EdgeList, output: &OutputArgs) -> Result<(), CliError> {
    match &output.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            format::write(list, output.format, &mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            format::write(list, output.format, &mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

pub fn cmd_gen(args: &GenArgs) -> Result<(), CliError> {
    let rng = RngStream::new(resolve_seed(&args.run.seed)?);
    let threads = args.run.threads.max(1);
    let g = match args.connect {
        Some(policy) => connect(&args.model, &rng, threads, policy, args.max_tries)?,
        None => generate(&args.model, &rng, threads, args.max_tries)?,
    };
    write_output(&g.list, &args.output)?;
    let has_sidecars = g.labels.is_some() || g.points.is_some();
    match &args.output.out {
        Some(out) => {
            if let Some(labels) = &g.labels {
                let mut w = BufWriter::new(File::create(sidecar(out, "labels"))?);
                for (v, c) in labels.iter().enumerate() {
                    writeln!(w, "{v} {c}")?;
                }
                w.flush()?;
            }
            if let Some(points) = &g.points {
                let mut w = BufWriter::new(File::create(sidecar(out, "points"))?);
                for line in points {
                    writeln!(w, "{line}")?;
                }
                w.flush()?;
            }
        }
        None if has_sidecars => eprintln!("note: sidecar files are only written with --out"),
        None => {}
    }
    Ok(())
}

fn read_graph(path: &Path) -> Result<EdgeList, CliError> {
    format::read(&mut open(path)?)
}

pub fn cmd_randomize(args: &RandomizeArgs) -> Result<(), CliError> {
    let input = read_graph(&args.input)?.graph;
    if input.directed {
        return Err(CliError::Usage("randomize needs an undirected graph".into()));
    }
    if !input.is_simple() {
        return Err(CliError::Usage("randomize needs a simple graph (no loops or parallel edges)".into()));
    }
    let adj = AdjacencyGraph::from_graph(&input)?;
    let mut rng = RngStream::new(resolve_seed(&args.run.seed)?);
    if args.dk2 && args.method != Method::Es {
        return Err(CliError::Usage("--dk2 applies to edge switching only".into()));
    }
    let out = match args.method {
        Method::Es => {
            let amount = args
                .amount
                .unwrap_or((DEFAULT_SWAPS_PER_EDGE * adj.m() as f64).ceil() as u64);
            let mut chain = EdgeSwitcher::new(&adj, args.dk2)?;
            chain.run(amount, &mut rng);
            eprintln!("switches accepted: {} of {}", chain.accepted(), chain.attempted());
            chain.graph()
        }
        Method::Curveball => {
            let amount = args.amount.unwrap_or(10 * adj.n() as u64);
            let mut g = adj;
            if g.n() >= 2 {
                for _ in 0..amount {
                    let u = rng.uniform_int(0, g.n() as u64)? as Node;
                    let mut v = rng.uniform_int(0, g.n() as u64 - 1)? as Node;
                    if v >= u {
                        v += 1;
                    }
                    g = curveball_trade(&g, u, v, &mut rng)?;
                }
            }
            g
        }
        Method::Gcb => {
            let amount = args.amount.unwrap_or(10);
            graphforge::gen::degree::global_curveball(&adj, amount, &mut rng)?
        }
    };
    write_output(&EdgeList::plain(out.to_graph()), &args.output)
}

pub fn cmd_stats(args: &StatsArgs, out: &mut impl Write) -> Result<(), CliError> {
    let input = read_graph(&args.input)?.graph;
    let g = if input.directed { to_undirected(&input) } else { simplify(&input) };
    if g.m() != input.m() || input.directed {
        eprintln!("note: statistics are for the simple undirected view ({} edges)", g.m());
    }
    let mut rng = RngStream::new(resolve_seed(&args.run.seed)?);
    let s = GraphStats::compute(&g, args.distance, &mut rng)?;
    let mut rows: Vec<(&str, String)> = vec![
        ("n", s.n.to_string()),
        ("m", s.m.to_string()),
        ("density", s.density.to_string()),
        ("avg_degree", s.avg_degree.to_string()),
        ("clustering", s.global_cc.to_string()),
        ("components", s.component_count.to_string()),
        ("largest_component", s.largest_component_size.to_string()),
        ("max_degree", s.degree_histogram.keys().next_back().copied().unwrap_or(0).to_string()),
    ];
    if args.distance {
        let d = s.avg_distance.map_or("disconnected".to_string(), |d| d.to_string());
        rows.push(("avg_distance", d));
    }
    for (k, v) in rows {
        if args.machine {
            writeln!(out, "{k}={v}")?;
        } else {
            writeln!(out, "{k:<18} {v}")?;
        }
    }
    Ok(())
}

pub fn cmd_verify(args: &VerifyArgs, out: &mut impl Write) -> Result<(), CliError> {
    let base = resolve_seed(&args.run.seed)?;
    let n = match &args.check {
        Check::Rgg { n, .. } | Check::Rhg { n, .. } => *n as u64,
        Check::Sample { universe, .. } => *universe,
    };
    if n > args.max_n as u64 {
        return Err(CliError::Budget(format!(
            "instance size {n} exceeds the oracle budget of {} (raise --max-n)",
            args.max_n
        )));
    }
    let mut failures = 0;
    match args.check {
        Check::Rgg { n, r, dim, torus } => {
            for s in 0..args.seeds {
                let rng = RngStream::new(base.wrapping_add(s));
                let model = Rgg::new(&RggParams { n, r, dim, torus, waxman: None })?;
                let g = model.generate(&rng, args.run.threads.max(1))?;
                let ok = g.sorted_edges() == rgg_oracle(&model.points(&rng)?, r, torus);
                failures += !ok as u32;
                writeln!(out, "{} rgg seed={} edges={}", verdict(ok), base.wrapping_add(s), g.m())?;
            }
        }
        Check::Rhg { n, alpha, avg_degree } => {
            let radius = rhg_radius_for_degree(n, alpha, avg_degree)?;
            for s in 0..args.seeds {
                let rng = RngStream::new(base.wrapping_add(s));
                let model = Rhg::new(&RhgParams { n, alpha, radius })?;
                let g = model.generate(&rng, args.run.threads.max(1))?;
                let ok = g.sorted_edges() == rhg_oracle(&model.points(&rng)?, radius);
                failures += !ok as u32;
                writeln!(out, "{} rhg seed={} edges={}", verdict(ok), base.wrapping_add(s), g.m())?;
            }
        }
        Check::Sample { universe, k, draws } => {
            if k > universe || universe > 20 {
                return Err(CliError::Usage("sample check needs k <= N <= 20".into()));
            }
            let mut counts = vec![0u64; 1 << universe];
            let mut rng = RngStream::new(base);
            for _ in 0..draws {
                let s = graphforge::sampling::sample_k_of_n(k, graphforge::sampling::IndexRange::upto(universe), &mut rng)?;
                counts[s.iter().fold(0usize, |m, &i| m | 1 << i)] += 1;
            }
            let subsets: Vec<u64> = (0..counts.len())
                .filter(|m| m.count_ones() as u64 == k)
                .map(|m| counts[m])
                .collect();
            let t = chi_square_test(&subsets, &vec![1.0; subsets.len()], 0.001);
            failures += !t.passed as u32;
            writeln!(
                out,
                "{} sample N={universe} k={k} subsets={} chi2={:.2} p={:.4}",
                verdict(t.passed),
                subsets.len(),
                t.statistic,
                t.p_value
            )?;
        }
    }
    if failures > 0 {
        return Err(CliError::Verify(format!("{failures} check(s) failed")));
    }
    Ok(())
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}
