//! Level sets of the model Hamiltonians in Cartesian coordinates
//! `x = √(2I) cos φ`, `y = √(2I) sin φ`.
//!
//! Contours are extracted by marching squares with linear interpolation on
//! cell edges; cells whose four corners alternate are resolved by sampling the
//! Hamiltonian at the cell centre.

use std::fmt::Write as _;

use serde::Serialize;

use crate::bifurcation::rescale::{RescaledModel, Scaling};
use crate::bifurcation::{critical_points, ModelHamiltonian, PointKind};
use crate::error::{Error, Result};

/// Default number of cells per axis of an automatically sized grid.
pub const DEFAULT_CELLS: usize = 512;
/// Saddle energies closer than this (relative to the energy scale) are merged.
pub const MERGE_TOLERANCE: f64 = 1e-12;
/// Relative offset of the neighbouring levels traced around a critical level.
pub const NEIGHBOR_OFFSET: f64 = 1e-6;

/// `Re zⁿ` for `z = x + iy`, i.e. `|z|ⁿ cos nφ` without any angle.
fn re_power(x: f64, y: f64, n: u32) -> f64 {
    let (mut re, mut im) = (1.0, 0.0);
    for _ in 0..n {
        (re, im) = (re * x - im * y, re * y + im * x);
    }
    re
}

/// `I^{n/2} cos nφ` at `(x, y)`.
fn resonant_term(x: f64, y: f64, n: u32) -> f64 {
    re_power(x, y, n) * 2f64.powf(-(n as f64) / 2.0)
}

/// A critical point at polar position `(radius, phi)`; its family consists
/// of the rotations by multiples of `2π/n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PlanarCritical {
    pub radius: f64,
    pub phi: f64,
    pub energy: f64,
    pub kind: PointKind,
}

impl PlanarCritical {
    /// The `n` points of the family.
    pub fn orbit(&self, n: u32) -> Vec<(f64, f64)> {
        (0..n)
            .map(|k| {
                let a = self.phi + std::f64::consts::TAU * k as f64 / n as f64;
                (self.radius * a.cos(), self.radius * a.sin())
            })
            .collect()
    }
}

/// A Hamiltonian on the plane with `n`-fold rotational symmetry.
pub trait PlanarHamiltonian: Sync {
    fn order(&self) -> u32;

    fn value(&self, x: f64, y: f64) -> f64;

    /// One representative of every critical family away from the origin.
    fn critical_features(&self) -> Vec<PlanarCritical>;

    /// Energy of the origin when it is a degenerate saddle, whose level set
    /// is then critical as well.
    fn degenerate_origin(&self) -> Option<f64> {
        None
    }
}

/// `h(x, y)` of a model Hamiltonian.
pub fn evaluate_xy(model: &ModelHamiltonian, x: f64, y: f64) -> f64 {
    model.value(x, y)
}

impl PlanarHamiltonian for ModelHamiltonian {
    fn order(&self) -> u32 {
        self.n
    }

    fn value(&self, x: f64, y: f64) -> f64 {
        let i = 0.5 * (x * x + y * y);
        let cubic = if self.n == 5 { 0.0 } else { i * i * i };
        let c = if self.n == 6 { self.b0 } else { 1.0 };
        self.delta * i + self.nu * i * i + cubic + c * resonant_term(x, y, self.n)
    }

    fn critical_features(&self) -> Vec<PlanarCritical> {
        critical_points(self)
            .points
            .iter()
            .map(|p| PlanarCritical { radius: (2.0 * p.action).sqrt(), phi: p.phi_class, energy: p.energy, kind: p.kind })
            .collect()
    }

    fn degenerate_origin(&self) -> Option<f64> {
        let flat = self.delta == 0.0 && self.nu == 0.0;
        (flat && (self.n == 5 || (self.n == 6 && self.b0.abs() > 1.0))).then_some(0.0)
    }
}

/// A limit model whose rescaled action `J` is a positive multiple of `I`,
/// drawn in the plane `J = (x² + y²)/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaledPlanar(RescaledModel);

impl ScaledPlanar {
    pub fn new(model: RescaledModel) -> Result<Self> {
        match model.scaling {
            Scaling::Outer | Scaling::Cubic => Ok(Self(model)),
            Scaling::N6 if model.epsilon > 0.0 => Ok(Self(model)),
            Scaling::N6 => Err(Error::Domain("the n6 limit is planar only for nu > 0".into())),
            s => Err(Error::Domain(format!("the {} limit lives on a cylinder, not the plane", s.name()))),
        }
    }

    pub fn model(&self) -> &RescaledModel {
        &self.0
    }
}

impl PlanarHamiltonian for ScaledPlanar {
    fn order(&self) -> u32 {
        self.0.n
    }

    fn value(&self, x: f64, y: f64) -> f64 {
        let m = &self.0;
        let j = 0.5 * (x * x + y * y);
        match m.scaling {
            Scaling::Outer => j + resonant_term(x, y, 5),
            Scaling::Cubic => {
                let s = if m.epsilon < 0.0 { -1.0 } else { 1.0 };
                m.a * j + j * j + s * resonant_term(x, y, 5)
            }
            _ => m.a * j + j * j + j * j * j + m.b0 * resonant_term(x, y, 6),
        }
    }

    fn critical_features(&self) -> Vec<PlanarCritical> {
        let n = self.0.n as f64;
        self.0
            .limit_critical_points()
            .iter()
            .filter(|p| p.j > 0.0)
            .map(|p| PlanarCritical {
                radius: (2.0 * p.j).sqrt(),
                phi: if p.sigma > 0 { 0.0 } else { std::f64::consts::PI / n },
                energy: p.value,
                kind: p.kind,
            })
            .collect()
    }
}

/// A rectangular sampling grid of `nx × ny` cells.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridSpec {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn new(xmin: f64, xmax: f64, ymin: f64, ymax: f64, nx: usize, ny: usize) -> Result<Self> {
        if nx < 16 || ny < 16 {
            return Err(Error::Domain(format!("grid needs at least 16x16 cells, got {nx}x{ny}")));
        }
        let finite = [xmin, xmax, ymin, ymax].iter().all(|v| v.is_finite());
        if !finite || xmin >= xmax || ymin >= ymax {
            return Err(Error::Domain(format!("invalid grid extent [{xmin}, {xmax}] x [{ymin}, {ymax}]")));
        }
        Ok(Self { xmin, xmax, ymin, ymax, nx, ny })
    }

    /// The square `[−r, r]²`.
    pub fn square(r: f64, nx: usize, ny: usize) -> Result<Self> {
        Self::new(-r, r, -r, r, nx, ny)
    }

    /// Grid centred on the origin covering every critical point of `h`:
    /// 1.5 times the largest critical radius (1 when there is none).
    pub fn auto(h: &dyn PlanarHamiltonian, nx: usize, ny: usize) -> Result<Self> {
        let r = h.critical_features().iter().map(|f| f.radius).fold(0.0, f64::max);
        Self::square(if r > 0.0 { 1.5 * r } else { 1.0 }, nx, ny)
    }

    pub fn dx(&self) -> f64 {
        (self.xmax - self.xmin) / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        (self.ymax - self.ymin) / self.ny as f64
    }

    pub fn cell_diagonal(&self) -> f64 {
        self.dx().hypot(self.dy())
    }

    pub fn node(&self, i: usize, j: usize) -> (f64, f64) {
        (self.xmin + i as f64 * self.dx(), self.ymin + j as f64 * self.dy())
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        (self.xmin..=self.xmax).contains(&x) && (self.ymin..=self.ymax).contains(&y)
    }

    /// Cell containing `(x, y)`, clamped to the grid.
    pub fn cell_of(&self, x: f64, y: f64) -> (usize, usize) {
        let i = ((x - self.xmin) / self.dx()).floor().clamp(0.0, (self.nx - 1) as f64);
        let j = ((y - self.ymin) / self.dy()).floor().clamp(0.0, (self.ny - 1) as f64);
        (i as usize, j as usize)
    }

    /// Fails unless every critical point of `h` lies inside the grid.
    pub fn check_covers(&self, h: &dyn PlanarHamiltonian) -> Result<()> {
        let reach = [self.xmax, -self.xmin, self.ymax, -self.ymin].into_iter().fold(f64::INFINITY, f64::min);
        match h.critical_features().iter().map(|f| f.radius).find(|&r| r > reach) {
            Some(r) => Err(Error::Domain(format!("grid does not cover the critical radius {r}"))),
            None => Ok(()),
        }
    }
}

/// Samples of `h` at the grid nodes, row by row.
#[derive(Clone, Debug)]
pub struct Samples {
    pub grid: GridSpec,
    pub values: Vec<f64>,
}

impl Samples {
    pub fn new(h: &dyn PlanarHamiltonian, grid: GridSpec) -> Self {
        let mut values = Vec::with_capacity((grid.nx + 1) * (grid.ny + 1));
        for j in 0..=grid.ny {
            for i in 0..=grid.nx {
                let (x, y) = grid.node(i, j);
                values.push(h.value(x, y));
            }
        }
        Self { grid, values }
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[j * (self.grid.nx + 1) + i]
    }

    /// Largest spread of `h` over the corners of the cell at `(i, j)`.
    pub fn cell_variation(&self, i: usize, j: usize) -> f64 {
        let c = [self.at(i, j), self.at(i + 1, j), self.at(i + 1, j + 1), self.at(i, j + 1)];
        let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
        hi - lo
    }

    pub fn range(&self) -> (f64, f64) {
        let lo = self.values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Polyline {
    pub points: Vec<(f64, f64)>,
    /// The last point connects back to the first.
    pub closed: bool,
}

/// All contour lines of one level.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContourSet {
    pub level: f64,
    pub polylines: Vec<Polyline>,
    /// The level is a saddle energy.
    pub critical: bool,
}

impl ContourSet {
    pub fn vertices(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.polylines.iter().flat_map(|p| p.points.iter().copied())
    }

    pub fn segments(&self) -> impl Iterator<Item = ((f64, f64), (f64, f64))> + '_ {
        self.polylines.iter().flat_map(|p| {
            let k = p.points.len();
            let count = if p.closed && k > 1 { k } else { k.saturating_sub(1) };
            (0..count).map(move |s| (p.points[s], p.points[(s + 1) % k]))
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.polylines.iter().map(|p| p.points.len()).sum()
    }
}

/// Edge identifiers: horizontal edge `(i,j)–(i+1,j)` is `2·node`, vertical
/// edge `(i,j)–(i,j+1)` is `2·node + 1`.
struct EdgeIndex {
    stride: usize,
}

impl EdgeIndex {
    fn horizontal(&self, i: usize, j: usize) -> usize {
        2 * (j * self.stride + i)
    }

    fn vertical(&self, i: usize, j: usize) -> usize {
        2 * (j * self.stride + i) + 1
    }

    fn endpoints(&self, e: usize) -> ((usize, usize), (usize, usize)) {
        let node = e / 2;
        let (i, j) = (node % self.stride, node / self.stride);
        if e % 2 == 0 {
            ((i, j), (i + 1, j))
        } else {
            ((i, j), (i, j + 1))
        }
    }
}

const NONE: usize = usize::MAX;

/// Contour lines of `h = level`.
pub fn contour(h: &dyn PlanarHamiltonian, level: f64, grid: GridSpec) -> ContourSet {
    contour_samples(h, &Samples::new(h, grid), level)
}

/// Contour lines of `h = level` from precomputed node samples.
pub fn contour_samples(h: &dyn PlanarHamiltonian, samples: &Samples, level: f64) -> ContourSet {
    let grid = samples.grid;
    let edges = EdgeIndex { stride: grid.nx + 1 };
    let inside = |i: usize, j: usize| samples.at(i, j) >= level;

    let mut segments: Vec<[usize; 2]> = Vec::new();
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            let corners = [inside(i, j), inside(i + 1, j), inside(i + 1, j + 1), inside(i, j + 1)];
            // bottom, right, top, left
            let cell_edges =
                [edges.horizontal(i, j), edges.vertical(i + 1, j), edges.horizontal(i, j + 1), edges.vertical(i, j)];
            let crossed: Vec<usize> = (0..4).filter(|&k| corners[k] != corners[(k + 1) % 4]).collect();
            match crossed.len() {
                2 => segments.push([cell_edges[crossed[0]], cell_edges[crossed[1]]]),
                4 => {
                    let (x, y) = grid.node(i, j);
                    let centre = h.value(x + 0.5 * grid.dx(), y + 0.5 * grid.dy()) >= level;
                    // Cut off each corner whose state differs from the centre;
                    // corner k is flanked by edges k−1 and k.
                    for k in (0..4).filter(|&k| corners[k] != centre) {
                        segments.push([cell_edges[(k + 3) % 4], cell_edges[k]]);
                    }
                }
                _ => {}
            }
        }
    }

    let point = |e: usize| {
        let (a, b) = edges.endpoints(e);
        let (va, vb) = (samples.at(a.0, a.1), samples.at(b.0, b.1));
        let t = ((level - va) / (vb - va)).clamp(0.0, 1.0);
        let (pa, pb) = (grid.node(a.0, a.1), grid.node(b.0, b.1));
        (pa.0 + t * (pb.0 - pa.0), pa.1 + t * (pb.1 - pa.1))
    };

    let mut incident = vec![[NONE; 2]; 2 * (grid.nx + 1) * (grid.ny + 1)];
    for (s, seg) in segments.iter().enumerate() {
        for &e in seg {
            let slot = if incident[e][0] == NONE { 0 } else { 1 };
            incident[e][slot] = s;
        }
    }

    let mut used = vec![false; segments.len()];
    let walk = |start_edge: usize, start_seg: usize, used: &mut Vec<bool>| {
        let mut points = vec![point(start_edge)];
        let (mut edge, mut seg) = (start_edge, start_seg);
        loop {
            used[seg] = true;
            let [a, b] = segments[seg];
            edge = if a == edge { b } else { a };
            let next = incident[edge].into_iter().find(|&t| t != NONE && t != seg);
            match next {
                Some(t) if used[t] => return Polyline { points, closed: true },
                Some(t) => {
                    points.push(point(edge));
                    seg = t;
                }
                None => {
                    points.push(point(edge));
                    return Polyline { points, closed: false };
                }
            }
        }
    };

    let mut polylines = Vec::new();
    // Open lines start on the grid boundary, where an edge has one segment.
    for e in 0..incident.len() {
        let [a, b] = incident[e];
        if a != NONE && b == NONE && !used[a] {
            polylines.push(walk(e, a, &mut used));
        }
    }
    for s in 0..segments.len() {
        if !used[s] {
            polylines.push(walk(segments[s][0], s, &mut used));
        }
    }
    ContourSet { level, polylines, critical: false }
}

/// Distinct critical energies of `h`, merged within [`MERGE_TOLERANCE`].
pub fn critical_energies(h: &dyn PlanarHamiltonian) -> Vec<f64> {
    let mut energies: Vec<f64> =
        h.critical_features().iter().filter(|f| f.kind == PointKind::Saddle).map(|f| f.energy).collect();
    energies.extend(h.degenerate_origin());
    energies.sort_by(f64::total_cmp);
    let scale = energies.iter().fold(0.0f64, |m, e| m.max(e.abs())).max(f64::MIN_POSITIVE);
    let mut merged: Vec<f64> = Vec::new();
    for e in energies {
        match merged.last() {
            Some(&last) if (e - last).abs() <= MERGE_TOLERANCE * scale => {}
            _ => merged.push(e),
        }
    }
    merged
}

/// Critical level sets of `h` on an automatically sized 512² grid.
pub fn critical_level_sets(h: &dyn PlanarHamiltonian) -> Result<Vec<ContourSet>> {
    let grid = GridSpec::auto(h, DEFAULT_CELLS, DEFAULT_CELLS)?;
    critical_level_sets_on(h, grid, false)
}

/// Critical level sets of `h` on `grid`, one per distinct saddle energy.
///
/// With `neighbors`, the levels `E ± 10⁻⁶·s` are traced as well, `s` being
/// the spread of `h` over the grid.
pub fn critical_level_sets_on(h: &dyn PlanarHamiltonian, grid: GridSpec, neighbors: bool) -> Result<Vec<ContourSet>> {
    grid.check_covers(h)?;
    let samples = Samples::new(h, grid);
    let (lo, hi) = samples.range();
    let offset = NEIGHBOR_OFFSET * (hi - lo);
    let mut out = Vec::new();
    for e in critical_energies(h) {
        if neighbors {
            out.push(contour_samples(h, &samples, e - offset));
        }
        out.push(ContourSet { critical: true, ..contour_samples(h, &samples, e) });
        if neighbors {
            out.push(contour_samples(h, &samples, e + offset));
        }
    }
    Ok(out)
}

/// Largest vertex residual `|h − level|`, absolute and relative to the
/// spread of `h` over the cell holding the vertex.
pub fn vertex_residual(h: &dyn PlanarHamiltonian, set: &ContourSet, samples: &Samples) -> (f64, f64) {
    let mut abs = 0.0f64;
    let mut cells = 0.0f64;
    for (x, y) in set.vertices() {
        let r = (h.value(x, y) - set.level).abs();
        let (i, j) = samples.grid.cell_of(x, y);
        let spread = samples.cell_variation(i, j);
        abs = abs.max(r);
        if r > 0.0 {
            cells = cells.max(if spread > 0.0 { r / spread } else { f64::INFINITY });
        }
    }
    (abs, cells)
}

/// Buckets of segments for nearest-segment queries.
struct SegmentIndex {
    grid: GridSpec,
    buckets: Vec<Vec<((f64, f64), (f64, f64))>>,
}

impl SegmentIndex {
    fn new(set: &ContourSet, grid: GridSpec) -> Self {
        let mut buckets = vec![Vec::new(); grid.nx * grid.ny];
        for (a, b) in set.segments() {
            let ca = grid.cell_of(a.0, a.1);
            let cb = grid.cell_of(b.0, b.1);
            for j in ca.1.min(cb.1)..=ca.1.max(cb.1) {
                for i in ca.0.min(cb.0)..=ca.0.max(cb.0) {
                    buckets[j * grid.nx + i].push((a, b));
                }
            }
        }
        Self { grid, buckets }
    }

    /// Distance to the nearest segment within `reach` cells, if any.
    fn distance(&self, p: (f64, f64), reach: usize) -> Option<f64> {
        let (ci, cj) = self.grid.cell_of(p.0, p.1);
        let mut best: Option<f64> = None;
        for j in cj.saturating_sub(reach)..=(cj + reach).min(self.grid.ny - 1) {
            for i in ci.saturating_sub(reach)..=(ci + reach).min(self.grid.nx - 1) {
                for &(a, b) in &self.buckets[j * self.grid.nx + i] {
                    let d = point_segment_distance(p, a, b);
                    best = Some(best.map_or(d, |m: f64| m.min(d)));
                }
            }
        }
        best
    }
}

pub fn point_segment_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 { (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0) } else { 0.0 };
    (p.0 - a.0 - t * dx).hypot(p.1 - a.1 - t * dy)
}

/// Largest distance, in cell diagonals, from the image of a vertex under the
/// rotation by `2π/n` or the reflection `y → −y` to the contour itself.
/// Images leaving the grid (less a one-cell margin) are skipped; images with
/// no segment within three cells count as infinitely far.
pub fn symmetry_defect(set: &ContourSet, n: u32, grid: GridSpec) -> f64 {
    let index = SegmentIndex::new(set, grid);
    let (s, c) = (std::f64::consts::TAU / n as f64).sin_cos();
    let diag = grid.cell_diagonal();
    let inner = |x: f64, y: f64| {
        x > grid.xmin + grid.dx() && x < grid.xmax - grid.dx() && y > grid.ymin + grid.dy() && y < grid.ymax - grid.dy()
    };
    let mut worst = 0.0f64;
    for (x, y) in set.vertices() {
        for image in [(c * x - s * y, s * x + c * y), (x, -y)] {
            if !inner(image.0, image.1) {
                continue;
            }
            let d = index.distance(image, 3).unwrap_or(f64::INFINITY);
            worst = worst.max(d / diag);
        }
    }
    worst
}

/// Largest distance, in cell diagonals, from a vertex to the nearest line
/// `cos nφ = 0` through the origin.
pub fn ray_defect(set: &ContourSet, n: u32, grid: GridSpec) -> f64 {
    let diag = grid.cell_diagonal();
    let nf = n as f64;
    set.vertices()
        .map(|(x, y)| {
            let r = x.hypot(y);
            (0..n)
                .map(|k| {
                    let theta = std::f64::consts::PI * (0.5 + k as f64) / nf;
                    (y * theta.cos() - x * theta.sin()).abs()
                })
                .fold(r, f64::min)
                / diag
        })
        .fold(0.0, f64::max)
}

/// Number of the `2n` half-lines `cos nφ = 0` along which the contour
/// reaches beyond `radius`.
pub fn rays_reached(set: &ContourSet, n: u32, radius: f64) -> usize {
    let mut hit = vec![false; 2 * n as usize];
    let nf = n as f64;
    let width = std::f64::consts::PI / nf;
    for (x, y) in set.vertices() {
        if x.hypot(y) < radius {
            continue;
        }
        let phi = y.atan2(x).rem_euclid(std::f64::consts::TAU);
        // Half-line k sits at (k + 1/2)π/n.
        let k = ((phi / width) - 0.5).round().rem_euclid(2.0 * nf) as usize;
        hit[k] = true;
    }
    hit.iter().filter(|&&h| h).count()
}

/// `level,polyline_id,x,y` rows for every vertex.
pub fn contours_csv(sets: &[ContourSet]) -> String {
    let mut s = String::from("level,polyline_id,x,y\n");
    let mut id = 0usize;
    for set in sets {
        for p in &set.polylines {
            for &(x, y) in &p.points {
                let _ = writeln!(s, "{},{},{},{}", set.level, id, x, y);
            }
            id += 1;
        }
    }
    s
}

/// An SVG drawing of `sets` with its viewBox equal to the grid extent;
/// critical levels are stroked heavier.
pub fn contours_svg(sets: &[ContourSet], grid: GridSpec, title: &str) -> String {
    let (w, h) = (grid.xmax - grid.xmin, grid.ymax - grid.ymin);
    let size = w.max(h);
    let digits = (6 - size.log10().floor() as i32).max(3) as usize;
    let f = |v: f64| format!("{:.*}", digits, v);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="800" height="{}" viewBox="{} {} {} {}">"#,
        (800.0 * h / w).round(),
        f(grid.xmin),
        f(-grid.ymax),
        f(w),
        f(h)
    );
    let _ = writeln!(s, "<title>{}</title>", escape(title));
    let _ = writeln!(s, r#"<rect x="{}" y="{}" width="{}" height="{}" fill="white"/>"#, f(grid.xmin), f(-grid.ymax), f(w), f(h));
    for set in sets {
        let (stroke, width) = if set.critical { ("black", 0.004 * size) } else { ("#777777", 0.0015 * size) };
        for p in &set.polylines {
            let mut d = String::new();
            for (k, &(x, y)) in p.points.iter().enumerate() {
                let _ = write!(d, "{}{} {}", if k == 0 { "M" } else { " L" }, f(x), f(-y));
            }
            if p.closed {
                d.push_str(" Z");
            }
            let _ = writeln!(
                s,
                r#"<path d="{d}" fill="none" stroke="{stroke}" stroke-width="{}" stroke-linejoin="round"/>"#,
                f(width)
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
