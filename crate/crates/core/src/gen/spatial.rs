//! Random geometric graphs and threshold random hyperbolic graphs.
//!
//! Both generators place points region by region (grid cells for RGG,
//! concentric bands for RHG). Region sizes come from a multinomial split of
//! `n`, each region's points from its own substream, and node ids are
//! assigned region-major. A partition owns a range of regions and
//! recomputes any neighbouring region it needs to compare against.

use std::collections::HashMap;
use std::f64::consts::PI;

use crate::error::{GraphError, Result};
use crate::gen::{Region, Variant};
use crate::graph::{Edge, Graph, Node};
use crate::parallel::{Partition, PartitionedModel};
use crate::random::RngStream;
use crate::sampling::{bernoulli_skip_with, multinomial_split, IndexRange};

/// Point of the unit square or cube. Unused coordinates are zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EuclidPoint {
    pub coords: [f64; 3],
    pub dim: u8,
}

impl EuclidPoint {
    pub fn new2(x: f64, y: f64) -> Self {
        EuclidPoint {
            coords: [x, y, 0.0],
            dim: 2,
        }
    }

    pub fn new3(x: f64, y: f64, z: f64) -> Self {
        EuclidPoint {
            coords: [x, y, z],
            dim: 3,
        }
    }

    /// Euclidean distance, or the flat-torus distance when `torus`.
    #[inline]
    pub fn distance(&self, other: &EuclidPoint, torus: bool) -> f64 {
        let mut s = 0.0;
        for k in 0..3 {
            let mut d = (self.coords[k] - other.coords[k]).abs();
            if torus {
                d = d.min(1.0 - d);
            }
            s += d * d;
        }
        s.sqrt()
    }
}

/// Waxman connection probability `beta * exp(-dist / (L alpha))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Waxman {
    pub alpha: f64,
    pub beta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RggParams {
    pub n: usize,
    pub r: f64,
    /// 2 or 3.
    pub dim: usize,
    pub torus: bool,
    pub waxman: Option<Waxman>,
}

impl RggParams {
    pub fn new(n: usize, r: f64) -> Self {
        RggParams {
            n,
            r,
            dim: 2,
            torus: false,
            waxman: None,
        }
    }
}

/// Graph plus the coordinates of its nodes, indexed by node id.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedded<P> {
    pub graph: Graph,
    pub points: Vec<P>,
}

#[derive(Debug, Clone)]
struct Grid {
    g: usize,
    dim: usize,
    cells: usize,
}

impl Grid {
    fn new(g: usize, dim: usize) -> Self {
        Grid {
            g,
            dim,
            cells: g.pow(dim as u32),
        }
    }

    fn coords(&self, mut c: usize) -> [usize; 3] {
        let mut out = [0; 3];
        for k in (0..self.dim).rev() {
            out[k] = c % self.g;
            c /= self.g;
        }
        out
    }

    fn index(&self, coords: [usize; 3]) -> usize {
        coords[..self.dim].iter().fold(0, |acc, &x| acc * self.g + x)
    }

    fn cell_of(&self, p: &EuclidPoint) -> usize {
        let mut coords = [0; 3];
        for k in 0..self.dim {
            coords[k] = ((p.coords[k] * self.g as f64) as usize).min(self.g - 1);
        }
        self.index(coords)
    }

    /// Neighbouring cells with a larger index, deduplicated.
    fn forward_neighbors(&self, c: usize, torus: bool) -> Vec<usize> {
        let base = self.coords(c);
        let mut out = Vec::new();
        let offsets = 3usize.pow(self.dim as u32);
        for o in 0..offsets {
            let mut coords = [0; 3];
            let mut rem = o;
            let mut valid = true;
            for k in 0..self.dim {
                let delta = (rem % 3) as isize - 1;
                rem /= 3;
                let x = base[k] as isize + delta;
                if torus {
                    coords[k] = x.rem_euclid(self.g as isize) as usize;
                } else if x < 0 || x >= self.g as isize {
                    valid = false;
                } else {
                    coords[k] = x as usize;
                }
            }
            if valid {
                let idx = self.index(coords);
                if idx > c {
                    out.push(idx);
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Smallest distance between points of two cells.
    fn min_distance(&self, a: usize, b: usize, torus: bool) -> f64 {
        let (ca, cb) = (self.coords(a), self.coords(b));
        let side = 1.0 / self.g as f64;
        let mut s = 0.0;
        for k in 0..self.dim {
            let mut gap = ca[k].abs_diff(cb[k]);
            if torus {
                gap = gap.min(self.g - gap);
            }
            let d = gap.saturating_sub(1) as f64 * side;
            s += d * d;
        }
        s.sqrt()
    }
}

/// Grid-partitioned random geometric graph.
#[derive(Debug, Clone)]
pub struct Rgg {
    params: RggParams,
    grid: Grid,
    /// Waxman distance scale `L * alpha`.
    scale: f64,
}

impl Rgg {
    pub fn new(params: &RggParams) -> Result<Self> {
        if !(params.dim == 2 || params.dim == 3) {
            return Err(GraphError::InvalidParameter(format!("dimension {}", params.dim)));
        }
        if params.n > Node::MAX as usize {
            return Err(GraphError::InvalidParameter(format!("n = {} too large", params.n)));
        }
        let dim = params.dim as f64;
        let g = if let Some(w) = params.waxman {
            if !(w.alpha > 0.0 && w.alpha <= 1.0 && w.beta > 0.0 && w.beta <= 1.0) {
                return Err(GraphError::InvalidParameter(format!(
                    "Waxman alpha = {}, beta = {} must lie in (0, 1]",
                    w.alpha, w.beta
                )));
            }
            // About sqrt(n) cells keep the number of cell pairs linear.
            let target = (params.n as f64).sqrt().ceil();
            (target.powf(1.0 / dim).floor() as usize).max(1)
        } else {
            if !(params.r > 0.0 && params.r.is_finite()) {
                return Err(GraphError::InvalidParameter(format!("radius {}", params.r)));
            }
            // Cell side at least r, and no more cells than points.
            let by_radius = (1.0 / params.r).floor();
            let by_count = (params.n as f64).powf(1.0 / dim).floor();
            (by_radius.min(by_count) as usize).max(1)
        };
        let diameter = if params.torus { dim.sqrt() / 2.0 } else { dim.sqrt() };
        let scale = params.waxman.map_or(1.0, |w| diameter * w.alpha);
        Ok(Rgg {
            params: params.clone(),
            grid: Grid::new(g, params.dim),
            scale,
        })
    }

    pub fn cells(&self) -> usize {
        self.grid.cells
    }

    fn counts(&self, rng: &RngStream) -> Result<Vec<u64>> {
        let weights = vec![1.0; self.grid.cells];
        multinomial_split(self.params.n as u64, &weights, &mut rng.derive("rgg-counts", 0))
    }

    fn cell_points(&self, rng: &RngStream, c: usize, count: u64) -> Vec<EuclidPoint> {
        let mut sub = rng.derive("rgg-cell", c as u64);
        let base = self.grid.coords(c);
        let g = self.grid.g as f64;
        (0..count)
            .map(|_| {
                let mut coords = [0.0; 3];
                for k in 0..self.grid.dim {
                    let x = (base[k] as f64 + sub.uniform_f64()) / g;
                    coords[k] = x.min(1.0 - f64::EPSILON / 2.0);
                }
                EuclidPoint {
                    coords,
                    dim: self.grid.dim as u8,
                }
            })
            .collect()
    }

    /// All points in node-id order.
    pub fn points(&self, rng: &RngStream) -> Result<Vec<EuclidPoint>> {
        self.points_part(rng, Partition::whole())
    }

    /// Points of the partition's cells, in node-id order.
    pub fn points_part(&self, rng: &RngStream, part: Partition) -> Result<Vec<EuclidPoint>> {
        let counts = self.counts(rng)?;
        Ok(part
            .range_of(self.grid.cells as u64)
            .flat_map(|c| self.cell_points(rng, c as usize, counts[c as usize]))
            .collect())
    }

    #[inline]
    fn connect_probability(&self, dist: f64) -> f64 {
        let w = self.params.waxman.expect("Waxman mode");
        w.beta * (-dist / self.scale).exp()
    }
}

struct CellCache<'a> {
    model: &'a Rgg,
    rng: &'a RngStream,
    counts: Vec<u64>,
    offsets: Vec<u64>,
    points: HashMap<usize, Vec<EuclidPoint>>,
}

impl<'a> CellCache<'a> {
    fn new(model: &'a Rgg, rng: &'a RngStream) -> Result<Self> {
        let counts = model.counts(rng)?;
        let mut offsets = Vec::with_capacity(counts.len() + 1);
        offsets.push(0);
        for &c in &counts {
            offsets.push(offsets[offsets.len() - 1] + c);
        }
        Ok(CellCache {
            model,
            rng,
            counts,
            offsets,
            points: HashMap::new(),
        })
    }

    fn load(&mut self, c: usize) {
        if !self.points.contains_key(&c) {
            let pts = self.model.cell_points(self.rng, c, self.counts[c]);
            self.points.insert(c, pts);
        }
    }
}

impl PartitionedModel for Rgg {
    fn empty_graph(&self) -> Graph {
        Graph::new(self.params.n)
    }

    fn emit_part(&self, rng: &RngStream, part: Partition, sink: &mut dyn FnMut(Edge)) -> Result<()> {
        let mut cache = CellCache::new(self, rng)?;
        let torus = self.params.torus;
        let cells = part.range_of(self.grid.cells as u64);
        if self.params.waxman.is_some() {
            for c in cells {
                let c = c as usize;
                self.emit_waxman_cell(rng, &mut cache, c, sink)?;
                // Cells finished by every later cell pair can be dropped.
                cache.points.retain(|&k, _| k >= c);
            }
            return Ok(());
        }
        let r = self.params.r;
        for c in cells {
            let c = c as usize;
            cache.load(c);
            let neighbors = self.grid.forward_neighbors(c, torus);
            for &nb in &neighbors {
                cache.load(nb);
            }
            let here = &cache.points[&c];
            let base = cache.offsets[c];
            for (i, p) in here.iter().enumerate() {
                let u = (base + i as u64) as Node;
                for (j, q) in here.iter().enumerate().skip(i + 1) {
                    if p.distance(q, torus) <= r {
                        sink(Edge::new(u, (base + j as u64) as Node));
                    }
                }
                for &nb in &neighbors {
                    let nb_base = cache.offsets[nb];
                    for (j, q) in cache.points[&nb].iter().enumerate() {
                        if p.distance(q, torus) <= r {
                            sink(Edge::new(u, (nb_base + j as u64) as Node));
                        }
                    }
                }
            }
            cache.points.retain(|&k, _| k > c);
        }
        Ok(())
    }
}

impl Rgg {
    /// All pairs with one endpoint in cell `c` and the other in a cell
    /// `c2 >= c`: Bernoulli skipping at the pair's distance bound, then
    /// acceptance with the true probability over the bound.
    fn emit_waxman_cell(
        &self,
        rng: &RngStream,
        cache: &mut CellCache<'_>,
        c: usize,
        sink: &mut dyn FnMut(Edge),
    ) -> Result<()> {
        let torus = self.params.torus;
        let cells = self.grid.cells;
        cache.load(c);
        for c2 in c..cells {
            let (s1, s2) = (cache.counts[c], cache.counts[c2]);
            if s1 == 0 || s2 == 0 {
                continue;
            }
            cache.load(c2);
            let bound = self.connect_probability(self.grid.min_distance(c, c2, torus));
            let mut sub = rng.derive("rgg-waxman", (c * cells + c2) as u64);
            let (b1, b2) = (cache.offsets[c], cache.offsets[c2]);
            let a = &cache.points[&c];
            let b = &cache.points[&c2];
            let mut hits = Vec::new();
            if c == c2 {
                let region = Region::new(s1 as usize, Variant::Undirected)?;
                bernoulli_skip_with(IndexRange::upto(region.capacity), bound, &mut sub, |e| {
                    hits.push(region.decode(e))
                })?;
            } else {
                bernoulli_skip_with(IndexRange::upto(s1 * s2), bound, &mut sub, |e| {
                    hits.push(Edge::new((e / s2) as Node, (e % s2) as Node))
                })?;
            }
            for h in hits {
                let (p, q) = (&a[h.u as usize], &b[h.v as usize]);
                let accept = self.connect_probability(p.distance(q, torus)) / bound;
                if sub.bernoulli(accept) {
                    sink(Edge::new((b1 + h.u as u64) as Node, (b2 + h.v as u64) as Node));
                }
            }
        }
        Ok(())
    }
}

/// Random geometric graph; with a partition, only the partition's cells
/// (their points and the edges whose smaller endpoint lies in them).
pub fn rgg(params: &RggParams, rng: &RngStream, partition: Option<Partition>) -> Result<Embedded<EuclidPoint>> {
    let model = Rgg::new(params)?;
    let part = partition.unwrap_or_else(Partition::whole);
    Ok(Embedded {
        graph: model.generate_part(rng, part)?,
        points: model.points_part(rng, part)?,
    })
}

/// Threshold edges among given points, found through the same grid.
/// Sorted `(u < v)`.
pub fn rgg_from_points(points: &[EuclidPoint], r: f64, torus: bool) -> Result<Graph> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(GraphError::InvalidParameter(format!("radius {r}")));
    }
    let dim = points.iter().map(|p| p.dim as usize).max().unwrap_or(2).max(2);
    let g = ((1.0 / r).floor().min((points.len() as f64).powf(1.0 / dim as f64).floor()) as usize).max(1);
    let grid = Grid::new(g, dim);
    let mut cells: Vec<Vec<usize>> = vec![Vec::new(); grid.cells];
    for (i, p) in points.iter().enumerate() {
        cells[grid.cell_of(p)].push(i);
    }
    let mut out = Graph::new(points.len());
    for c in 0..grid.cells {
        let neighbors = grid.forward_neighbors(c, torus);
        for (a, &i) in cells[c].iter().enumerate() {
            for &j in cells[c].iter().skip(a + 1) {
                if points[i].distance(&points[j], torus) <= r {
                    out.edges.push(Edge::canonical(i as Node, j as Node));
                }
            }
            for &nb in &neighbors {
                for &j in &cells[nb] {
                    if points[i].distance(&points[j], torus) <= r {
                        out.edges.push(Edge::canonical(i as Node, j as Node));
                    }
                }
            }
        }
    }
    out.edges.sort_unstable();
    Ok(out)
}

/// Point of the hyperbolic disk in polar coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypPoint {
    pub r: f64,
    pub theta: f64,
}

/// `acosh(cosh(r_a - r_b) + 2 sin^2(dtheta / 2) sinh r_a sinh r_b)`, the
/// hyperbolic law of cosines written to stay accurate for nearby points.
#[inline]
pub fn hyperbolic_distance(a: &HypPoint, b: &HypPoint) -> f64 {
    let dtheta = PI - (PI - (a.theta - b.theta).abs()).abs();
    let s = (dtheta / 2.0).sin();
    let c = (a.r - b.r).cosh() + 2.0 * s * s * a.r.sinh() * b.r.sinh();
    c.max(1.0).acosh()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RhgParams {
    pub n: usize,
    /// Dispersion; must exceed 1/2.
    pub alpha: f64,
    /// Disk radius and connection threshold.
    pub radius: f64,
}

/// Band-partitioned threshold hyperbolic random graph.
#[derive(Debug, Clone)]
pub struct Rhg {
    params: RhgParams,
    /// Band boundaries from 0 to R.
    bounds: Vec<f64>,
    masses: Vec<f64>,
}

/// Disk radius giving expected average degree about `avg_degree`:
/// `R = 2 ln(2 xi^2 n / (pi k))` with `xi = alpha / (alpha - 1/2)`.
pub fn rhg_radius_for_degree(n: usize, alpha: f64, avg_degree: f64) -> Result<f64> {
    if !(alpha > 0.5 && alpha.is_finite()) {
        return Err(GraphError::InvalidParameter(format!("alpha = {alpha} must exceed 1/2")));
    }
    if !(avg_degree > 0.0 && avg_degree.is_finite()) {
        return Err(GraphError::InvalidParameter(format!("average degree {avg_degree}")));
    }
    let xi = alpha / (alpha - 0.5);
    let r = 2.0 * (2.0 * xi * xi * n as f64 / (PI * avg_degree)).ln();
    if !(r > 0.0) {
        return Err(GraphError::Infeasible(format!(
            "average degree {avg_degree} is too large for n = {n}"
        )));
    }
    Ok(r)
}

// ln sinh(x) for x > 0 without overflow.
fn ln_sinh(x: f64) -> f64 {
    if x > 20.0 {
        x - std::f64::consts::LN_2 + (-(-2.0 * x).exp()).ln_1p()
    } else {
        x.sinh().ln()
    }
}

impl Rhg {
    pub fn new(params: &RhgParams) -> Result<Self> {
        if !(params.alpha > 0.5 && params.alpha.is_finite()) {
            return Err(GraphError::InvalidParameter(format!(
                "alpha = {} must exceed 1/2",
                params.alpha
            )));
        }
        if !(params.radius > 0.0 && params.radius.is_finite()) {
            return Err(GraphError::InvalidParameter(format!("radius {}", params.radius)));
        }
        if params.n > Node::MAX as usize {
            return Err(GraphError::InvalidParameter(format!("n = {} too large", params.n)));
        }
        let bands = ((params.n.max(2) as f64).log2().ceil() as usize).max(1);
        // Widths halve outward: band k spans R 2^{-(k+1)} / (1 - 2^{-B}).
        let norm = 1.0 - 0.5f64.powi(bands as i32);
        let mut bounds = vec![0.0];
        let mut acc = 0.0;
        for k in 0..bands {
            acc += 0.5f64.powi(k as i32 + 1) / norm;
            bounds.push(if k + 1 == bands { params.radius } else { params.radius * acc });
        }
        let model = Rhg {
            params: params.clone(),
            bounds,
            masses: Vec::new(),
        };
        let cdf: Vec<f64> = model.bounds.iter().map(|&b| model.radial_cdf(b)).collect();
        let masses = cdf.windows(2).map(|w| (w[1] - w[0]).max(0.0)).collect();
        Ok(Rhg { masses, ..model })
    }

    pub fn bands(&self) -> usize {
        self.bounds.len() - 1
    }

    /// `P[r <= x] = (cosh(alpha x) - 1) / (cosh(alpha R) - 1)
    /// = (sinh(alpha x / 2) / sinh(alpha R / 2))^2`.
    fn radial_cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let a = self.params.alpha;
        (2.0 * (ln_sinh(a * x / 2.0) - ln_sinh(a * self.params.radius / 2.0))).exp().min(1.0)
    }

    fn radial_inverse(&self, u: f64) -> f64 {
        let a = self.params.alpha;
        if u <= 0.0 {
            return 0.0;
        }
        // sinh(alpha r / 2) = sqrt(u) sinh(alpha R / 2), in log space.
        let ln_target = 0.5 * u.ln() + ln_sinh(a * self.params.radius / 2.0);
        let r = if ln_target > 20.0 {
            2.0 * (ln_target + std::f64::consts::LN_2) / a
        } else {
            2.0 * ln_target.exp().asinh() / a
        };
        r.min(self.params.radius)
    }

    fn band_counts(&self, rng: &RngStream) -> Result<Vec<u64>> {
        multinomial_split(self.params.n as u64, &self.masses, &mut rng.derive("rhg-counts", 0))
    }

    /// Band `k`'s points sorted by angle.
    fn band_points(&self, rng: &RngStream, k: usize, count: u64) -> Vec<HypPoint> {
        let mut sub = rng.derive("rhg-band", k as u64);
        let (lo, hi) = (self.radial_cdf(self.bounds[k]), self.radial_cdf(self.bounds[k + 1]));
        let mut pts: Vec<HypPoint> = (0..count)
            .map(|_| {
                let u = lo + sub.uniform_f64() * (hi - lo);
                let r = self
                    .radial_inverse(u)
                    .clamp(self.bounds[k], self.bounds[k + 1]);
                HypPoint {
                    r,
                    theta: sub.uniform_f64() * 2.0 * PI,
                }
            })
            .collect();
        pts.sort_by(|a, b| a.theta.total_cmp(&b.theta));
        pts
    }

    /// All points in node-id order.
    pub fn points(&self, rng: &RngStream) -> Result<Vec<HypPoint>> {
        self.points_part(rng, Partition::whole())
    }

    pub fn points_part(&self, rng: &RngStream, part: Partition) -> Result<Vec<HypPoint>> {
        let counts = self.band_counts(rng)?;
        Ok(part
            .range_of(self.bands() as u64)
            .flat_map(|k| self.band_points(rng, k as usize, counts[k as usize]))
            .collect())
    }
}

impl PartitionedModel for Rhg {
    fn empty_graph(&self) -> Graph {
        Graph::new(self.params.n)
    }

    fn emit_part(&self, rng: &RngStream, part: Partition, sink: &mut dyn FnMut(Edge)) -> Result<()> {
        let owned = part.range_of(self.bands() as u64);
        if owned.is_empty() {
            return Ok(());
        }
        let counts = self.band_counts(rng)?;
        let mut offset = 0u64;
        let mut bands = Vec::with_capacity(self.bands());
        for (k, &c) in counts.iter().enumerate() {
            let pts = if k as u64 >= owned.start {
                self.band_points(rng, k, c)
            } else {
                Vec::new()
            };
            bands.push(BandPoints {
                inner: self.bounds[k],
                ids: (offset..offset + c).map(|i| i as Node).collect(),
                points: pts,
            });
            offset += c;
        }
        band_edges(&bands, self.params.radius, owned.start as usize..owned.end as usize, sink);
        Ok(())
    }
}

struct BandPoints {
    inner: f64,
    ids: Vec<Node>,
    /// Sorted by angle, parallel to `ids`.
    points: Vec<HypPoint>,
}

/// Largest angular difference at which a point at radius `r_u` can reach a
/// point at radius at least `r_lo` within distance `radius`.
fn angular_reach(r_u: f64, r_lo: f64, radius: f64) -> f64 {
    if r_u + r_lo <= radius {
        return PI;
    }
    // cosh R = cosh(r_u - r) + 2 sin^2(t/2) sinh r_u sinh r
    let denom = 2.0 * r_u.sinh() * r_lo.sinh();
    if denom <= 0.0 {
        return PI;
    }
    let s2 = (radius.cosh() - (r_u - r_lo).cosh()) / denom;
    if s2 <= 0.0 {
        return 0.0;
    }
    if s2 >= 1.0 {
        return PI;
    }
    (2.0 * s2.sqrt().asin() + 1e-9).min(PI)
}

/// Indices of `points` (sorted by angle) within `reach` of `theta`.
fn angular_window(points: &[HypPoint], theta: f64, reach: f64, mut visit: impl FnMut(usize)) {
    if reach >= PI {
        (0..points.len()).for_each(visit);
        return;
    }
    let find = |x: f64| points.partition_point(|p| p.theta < x);
    let (lo, hi) = (theta - reach, theta + reach);
    let mut ranges: Vec<(usize, usize)> = Vec::with_capacity(2);
    if lo < 0.0 {
        ranges.push((find(lo + 2.0 * PI), points.len()));
        ranges.push((0, points.partition_point(|p| p.theta <= hi)));
    } else if hi >= 2.0 * PI {
        ranges.push((find(lo), points.len()));
        ranges.push((0, points.partition_point(|p| p.theta <= hi - 2.0 * PI)));
    } else {
        ranges.push((find(lo), points.partition_point(|p| p.theta <= hi)));
    }
    for (a, b) in ranges {
        (a..b).for_each(&mut visit);
    }
}

/// Emits every edge whose first endpoint, in `(band, radius, id)` order,
/// lies in one of `owned` bands.
fn band_edges(bands: &[BandPoints], radius: f64, owned: std::ops::Range<usize>, sink: &mut dyn FnMut(Edge)) {
    let mut found: Vec<Node> = Vec::new();
    for k in owned {
        let here = &bands[k];
        for (i, p) in here.points.iter().enumerate() {
            let u = here.ids[i];
            found.clear();
            for (j, other) in bands.iter().enumerate().skip(k) {
                let r_lo = if j == k { p.r.max(other.inner) } else { other.inner };
                let reach = angular_reach(p.r, r_lo, radius);
                angular_window(&other.points, p.theta, reach, |idx| {
                    let q = &other.points[idx];
                    let v = other.ids[idx];
                    if j == k && (q.r, v) <= (p.r, u) {
                        return;
                    }
                    if hyperbolic_distance(p, q) <= radius {
                        found.push(v);
                    }
                });
            }
            found.sort_unstable();
            for &v in &found {
                sink(Edge::canonical(u, v));
            }
        }
    }
}

/// Threshold RHG; with a partition, only that partition's bands.
pub fn rhg_threshold(params: &RhgParams, rng: &RngStream, partition: Option<Partition>) -> Result<Embedded<HypPoint>> {
    let model = Rhg::new(params)?;
    let part = partition.unwrap_or_else(Partition::whole);
    Ok(Embedded {
        graph: model.generate_part(rng, part)?,
        points: model.points_part(rng, part)?,
    })
}

/// Threshold edges among given points, found through the band search.
/// Sorted `(u < v)`.
pub fn rhg_from_points(points: &[HypPoint], alpha: f64, radius: f64) -> Result<Graph> {
    let model = Rhg::new(&RhgParams {
        n: points.len(),
        alpha,
        radius,
    })?;
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); model.bands()];
    for (i, p) in points.iter().enumerate() {
        if !(p.r >= 0.0 && p.r <= radius) {
            return Err(GraphError::InvalidParameter(format!("radius {} outside the disk", p.r)));
        }
        let k = model.bounds[1..].partition_point(|&b| b < p.r).min(model.bands() - 1);
        members[k].push(i);
    }
    let bands: Vec<BandPoints> = members
        .into_iter()
        .enumerate()
        .map(|(k, mut idx)| {
            idx.sort_by(|&a, &b| points[a].theta.total_cmp(&points[b].theta));
            BandPoints {
                inner: model.bounds[k],
                ids: idx.iter().map(|&i| i as Node).collect(),
                points: idx.iter().map(|&i| points[i]).collect(),
            }
        })
        .collect();
    let mut out = Graph::new(points.len());
    band_edges(&bands, radius, 0..bands.len(), &mut |e| out.edges.push(e));
    out.edges.sort_unstable();
    Ok(out)
}
