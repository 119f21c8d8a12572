//! Edge-list file formats.
//!
//! Text: optional header `# n=<n> directed=<0|1>`, then one `u v` (or
//! `u v w` for weighted graphs) per line. Other `#` lines and blank lines
//! are ignored. Without a header, `n` is one more than the largest id.
//!
//! Binary: `GFG1`, `n` as u64 LE, one directed byte, then `(u, v)` pairs of
//! u64 LE until the end of the file.

use std::io::{BufRead, Read, Write};

use graphforge::{Edge, Graph, Node};

use crate::CliError;

pub const MAGIC: &[u8; 4] = b"GFG1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Bin,
}

/// Edge list with optional per-edge weights, as stored on disk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeList {
    pub graph: Graph,
    pub weights: Option<Vec<u64>>,
}

impl EdgeList {
    pub fn plain(graph: Graph) -> Self {
        EdgeList { graph, weights: None }
    }
}

pub fn write(list: &EdgeList, format: Format, out: &mut impl Write) -> Result<(), CliError> {
    match format {
        Format::Text => write_text(list, out),
        Format::Bin => {
            if list.weights.is_some() {
                return Err(CliError::Usage("weighted graphs can only be written as text".into()));
            }
            write_binary(&list.graph, out)
        }
    }
}

pub fn write_text(list: &EdgeList, out: &mut impl Write) -> Result<(), CliError> {
    let g = &list.graph;
    writeln!(out, "# n={} directed={}", g.n, g.directed as u8)?;
    match &list.weights {
        Some(w) => {
            for (e, w) in g.edges.iter().zip(w) {
                writeln!(out, "{} {} {}", e.u, e.v, w)?;
            }
        }
        None => {
            for e in &g.edges {
                writeln!(out, "{} {}", e.u, e.v)?;
            }
        }
    }
    Ok(())
}

pub fn write_binary(g: &Graph, out: &mut impl Write) -> Result<(), CliError> {
    out.write_all(MAGIC)?;
    out.write_all(&(g.n as u64).to_le_bytes())?;
    out.write_all(&[g.directed as u8])?;
    for e in &g.edges {
        out.write_all(&(e.u as u64).to_le_bytes())?;
        out.write_all(&(e.v as u64).to_le_bytes())?;
    }
    Ok(())
}

/// Reads either format, telling them apart by the magic bytes.
pub fn read(input: &mut impl Read) -> Result<EdgeList, CliError> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    if bytes.starts_with(MAGIC) {
        read_binary(&bytes).map(EdgeList::plain)
    } else {
        read_text(&bytes[..])
    }
}

fn node(x: u64, line: usize) -> Result<Node, CliError> {
    Node::try_from(x).map_err(|_| CliError::Parse(format!("line {line}: node id {x} too large")))
}

fn finish(n: usize, directed: bool, edges: Vec<Edge>) -> Graph {
    let mut g = if directed { Graph::directed(n) } else { Graph::new(n) };
    g.edges = edges;
    g.allow_loops = g.has_loops();
    g.allow_multi = g.has_multi_edges();
    g
}

pub fn read_text(input: impl BufRead) -> Result<EdgeList, CliError> {
    let mut header: Option<(usize, bool)> = None;
    let mut edges = Vec::new();
    let mut weights = Vec::new();
    let mut weighted: Option<bool> = None;
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        if let Some(rest) = t.strip_prefix('#') {
            if edges.is_empty() && header.is_none() {
                header = parse_header(rest.trim());
            }
            continue;
        }
        let fields: Vec<&str> = t.split_whitespace().collect();
        if !(fields.len() == 2 || fields.len() == 3) {
            return Err(CliError::Parse(format!("line {lineno}: expected `u v` or `u v w`")));
        }
        let has_weight = fields.len() == 3;
        if *weighted.get_or_insert(has_weight) != has_weight {
            return Err(CliError::Parse(format!("line {lineno}: mixed weighted and unweighted lines")));
        }
        let num = |s: &str| {
            s.parse::<u64>()
                .map_err(|_| CliError::Parse(format!("line {lineno}: `{s}` is not a non-negative integer")))
        };
        edges.push(Edge::new(node(num(fields[0])?, lineno)?, node(num(fields[1])?, lineno)?));
        if has_weight {
            weights.push(num(fields[2])?);
        }
    }
    let (n, directed) = match header {
        Some(h) => h,
        None => (edges.iter().map(|e| e.u.max(e.v) as usize + 1).max().unwrap_or(0), false),
    };
    if let Some(e) = edges.iter().find(|e| e.u.max(e.v) as usize >= n) {
        return Err(CliError::Parse(format!("edge {} {} exceeds n = {n}", e.u, e.v)));
    }
    Ok(EdgeList {
        graph: finish(n, directed, edges),
        weights: (weighted == Some(true)).then_some(weights),
    })
}

fn parse_header(text: &str) -> Option<(usize, bool)> {
    let mut n = None;
    let mut directed = Some(false);
    for field in text.split_whitespace() {
        match field.split_once('=')? {
            ("n", v) => n = v.parse().ok(),
            ("directed", "0") => directed = Some(false),
            ("directed", "1") => directed = Some(true),
            _ => return None,
        }
    }
    Some((n?, directed?))
}

pub fn read_binary(bytes: &[u8]) -> Result<Graph, CliError> {
    let body = bytes
        .strip_prefix(MAGIC)
        .ok_or_else(|| CliError::Parse("missing GFG1 magic".into()))?;
    if body.len() < 9 || (body.len() - 9) % 16 != 0 {
        return Err(CliError::Parse("truncated binary edge list".into()));
    }
    let word = |b: &[u8]| u64::from_le_bytes(b.try_into().expect("eight bytes"));
    let n = usize::try_from(word(&body[..8])).map_err(|_| CliError::Parse("n too large".into()))?;
    let directed = match body[8] {
        0 => false,
        1 => true,
        b => return Err(CliError::Parse(format!("directed flag {b}"))),
    };
    let mut edges = Vec::with_capacity((body.len() - 9) / 16);
    for (i, pair) in body[9..].chunks_exact(16).enumerate() {
        let (u, v) = (word(&pair[..8]), word(&pair[8..]));
        if u.max(v) >= n as u64 {
            return Err(CliError::Parse(format!("edge {i}: {u} {v} exceeds n = {n}")));
        }
        edges.push(Edge::new(node(u, i)?, node(v, i)?));
    }
    Ok(finish(n, directed, edges))
}

/// One non-negative integer per line; blank and `#` lines are skipped.
pub fn read_degrees(input: impl BufRead) -> Result<Vec<usize>, CliError> {
    read_numbers(input)
}

/// One non-negative real per line.
pub fn read_weights(input: impl BufRead) -> Result<Vec<f64>, CliError> {
    let w: Vec<f64> = read_numbers(input)?;
    if let Some(x) = w.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
        return Err(CliError::Parse(format!("weight {x} is not a non-negative real")));
    }
    Ok(w)
}

fn read_numbers<T: std::str::FromStr>(input: impl BufRead) -> Result<Vec<T>, CliError> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        out.push(
            t.parse()
                .map_err(|_| CliError::Parse(format!("line {}: `{t}` is not a valid number", i + 1)))?,
        );
    }
    Ok(out)
}
