//! Ground-truth field oracles and surface machinery: analytic SDFs,
//! polygon and triangle-mesh SDFs, the Koch snowflake, active-cell
//! selection, level-set extraction, and Chamfer distance.

pub mod marching;
pub mod mesh;
mod tables;

pub use marching::{grid_points, marching_cubes, marching_squares, sample_field_grid, Contour, SurfaceMesh};
pub use mesh::{box_mesh, load_obj, parse_obj, uv_sphere_mesh, write_obj, TriMesh};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::path::Path;

use crate::encoding::sample_standard_normal;
use crate::error::{Error, Result};
use crate::par;
use crate::points::Points;

/// Named 1-D target signals for the aliasing experiments. These play the
/// role of the ground-truth field in 1-D; amplitudes stay within the tanh
/// head's range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Signal1d {
    /// `0.8 · sin(2π f x)`.
    Sine { freq: f64 },
    /// Band-limited mix with components at 1, 3, and 6 cycles per unit.
    Composite,
}

impl Signal1d {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Signal1d::Sine { freq } => 0.8 * (2.0 * PI * freq * x).sin(),
            Signal1d::Composite => {
                0.3 * (2.0 * PI * x).sin()
                    + 0.25 * (2.0 * PI * 3.0 * x).sin()
                    + 0.2 * (2.0 * PI * 6.0 * x).cos()
            }
        }
    }

    /// Highest frequency component, cycles per unit coordinate.
    pub fn max_frequency(&self) -> f64 {
        match self {
            Signal1d::Sine { freq } => *freq,
            Signal1d::Composite => 6.0,
        }
    }
}

/// Closed polygon (vertices in order, implicitly closed).
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    pub vertices: Vec<[f64; 2]>,
}

impl Polygon {
    pub fn new(vertices: Vec<[f64; 2]>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidConfig("polygon needs at least 3 vertices".into()));
        }
        Ok(Self { vertices })
    }

    pub fn edge_count(&self) -> usize {
        self.vertices.len()
    }

    /// Signed distance: min distance over edges, sign by even–odd
    /// crossing parity (positive outside).
    pub fn signed_distance(&self, p: [f64; 2]) -> f64 {
        let n = self.vertices.len();
        let mut d2 = f64::INFINITY;
        let mut inside = false;
        let mut j = n - 1;
        for i in 0..n {
            let a = self.vertices[j];
            let b = self.vertices[i];
            d2 = d2.min(point_segment_dist_sq(p, a, b));
            if ((b[1] > p[1]) != (a[1] > p[1]))
                && (p[0] < (a[0] - b[0]) * (p[1] - b[1]) / (a[1] - b[1]) + b[0])
            {
                inside = !inside;
            }
            j = i;
        }
        let d = d2.sqrt();
        if inside {
            -d
        } else {
            d
        }
    }

    pub fn perimeter(&self) -> f64 {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                let a = self.vertices[i];
                let b = self.vertices[(i + 1) % n];
                ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt()
            })
            .sum()
    }

    /// Recenter and uniformly rescale so the longest bounding-box axis
    /// spans exactly [−1, 1]; near-identity maps are skipped so the
    /// operation is bitwise idempotent.
    pub fn normalize(&self) -> Self {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for v in &self.vertices {
            for k in 0..2 {
                lo[k] = lo[k].min(v[k]);
                hi[k] = hi[k].max(v[k]);
            }
        }
        let center = [(lo[0] + hi[0]) * 0.5, (lo[1] + hi[1]) * 0.5];
        let half = ((hi[0] - lo[0]) * 0.5).max((hi[1] - lo[1]) * 0.5);
        let tol = 16.0 * f64::EPSILON;
        if half > 0.0 && (half - 1.0).abs() <= tol && center.iter().all(|c| c.abs() <= tol) {
            return self.clone();
        }
        let half = if half > 0.0 { half } else { 1.0 };
        Self {
            vertices: self
                .vertices
                .iter()
                .map(|v| [(v[0] - center[0]) / half, (v[1] - center[1]) / half])
                .collect(),
        }
    }
}

fn point_segment_dist_sq(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let ab = [b[0] - a[0], b[1] - a[1]];
    let ap = [p[0] - a[0], p[1] - a[1]];
    let len2 = ab[0] * ab[0] + ab[1] * ab[1];
    let t = if len2 > 0.0 {
        ((ap[0] * ab[0] + ap[1] * ab[1]) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let dx = ap[0] - t * ab[0];
    let dy = ap[1] - t * ab[1];
    dx * dx + dy * dy
}

/// Koch snowflake of the given refinement degree (≤ 3), normalized so the
/// maximal extent spans [−1, 1]. The base triangle has 3 edges; each
/// refinement replaces every edge with 4, so degree k has 3·4^k edges.
pub fn koch_snowflake(degree: u32) -> Result<Polygon> {
    if degree > 3 {
        return Err(Error::InvalidConfig(format!("koch degree must be ≤ 3, got {degree}")));
    }
    let mut verts: Vec<[f64; 2]> = (0..3)
        .map(|k| {
            let ang = PI / 2.0 + 2.0 * PI * k as f64 / 3.0;
            [ang.cos(), ang.sin()]
        })
        .collect();
    for _ in 0..degree {
        let n = verts.len();
        let mut next = Vec::with_capacity(4 * n);
        for i in 0..n {
            let p = verts[i];
            let q = verts[(i + 1) % n];
            let d = [(q[0] - p[0]) / 3.0, (q[1] - p[1]) / 3.0];
            let m1 = [p[0] + d[0], p[1] + d[1]];
            let m2 = [p[0] + 2.0 * d[0], p[1] + 2.0 * d[1]];
            let mid = [p[0] + 1.5 * d[0], p[1] + 1.5 * d[1]];
            let h = 3f64.sqrt() / 2.0;
            // two apex candidates; the outward one is farther from the center
            let c1 = [mid[0] - d[1] * h, mid[1] + d[0] * h];
            let c2 = [mid[0] + d[1] * h, mid[1] - d[0] * h];
            let apex = if c1[0] * c1[0] + c1[1] * c1[1] >= c2[0] * c2[0] + c2[1] * c2[1] {
                c1
            } else {
                c2
            };
            next.push(p);
            next.push(m1);
            next.push(apex);
            next.push(m2);
        }
        verts = next;
    }
    Ok(Polygon::new(verts)?.normalize())
}

/// A ground-truth field to fit: 1-D signals, analytic shapes, polygons,
/// or triangle meshes. Shapes are assumed normalized to [−1, 1] extents.
#[derive(Debug, Clone)]
pub enum SdfTarget {
    Signal1d(Signal1d),
    Circle { radius: f64 },
    Sphere { radius: f64 },
    /// Axis-aligned box; dimension follows the half-extent count (2 or 3).
    Box { half_extents: Vec<f64> },
    Polygon(Polygon),
    TriMesh(TriMesh),
}

impl SdfTarget {
    /// Spatial dimension of the field.
    pub fn dim(&self) -> usize {
        match self {
            SdfTarget::Signal1d(_) => 1,
            SdfTarget::Circle { .. } | SdfTarget::Polygon(_) => 2,
            SdfTarget::Sphere { .. } | SdfTarget::TriMesh(_) => 3,
            SdfTarget::Box { half_extents } => half_extents.len(),
        }
    }

    /// True when the target bounds a surface (everything except 1-D signals).
    pub fn has_surface(&self) -> bool {
        !matches!(self, SdfTarget::Signal1d(_))
    }

    /// False only for meshes whose watertightness check failed.
    pub fn sign_reliable(&self) -> bool {
        match self {
            SdfTarget::TriMesh(m) => m.is_watertight(),
            _ => true,
        }
    }

    /// Field value; for shapes the signed distance (positive outside).
    /// Does not revalidate mesh watertightness — use [`eval_sdf`] at API
    /// boundaries.
    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim());
        match self {
            SdfTarget::Signal1d(s) => s.eval(x[0]),
            SdfTarget::Circle { radius } => (x[0] * x[0] + x[1] * x[1]).sqrt() - radius,
            SdfTarget::Sphere { radius } => {
                (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt() - radius
            }
            SdfTarget::Box { half_extents } => {
                let mut outside2 = 0.0f64;
                let mut inside = f64::NEG_INFINITY;
                for (xi, h) in x.iter().zip(half_extents) {
                    let q = xi.abs() - h;
                    if q > 0.0 {
                        outside2 += q * q;
                    }
                    inside = inside.max(q);
                }
                if outside2 > 0.0 {
                    outside2.sqrt()
                } else {
                    inside
                }
            }
            SdfTarget::Polygon(p) => p.signed_distance([x[0], x[1]]),
            SdfTarget::TriMesh(m) => m.signed_distance([x[0], x[1], x[2]]),
        }
    }

    /// Parse a target spec: `signal:sin4`, `signal:composite`,
    /// `circle:0.5`, `sphere:0.5`, `box:0.5,0.3[,0.2]`, `koch:3`,
    /// `mesh:path.obj`.
    pub fn parse(spec: &str) -> Result<Self> {
        let (kind, arg) = spec
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("target spec '{spec}' needs kind:arg")))?;
        let num = |s: &str| -> Result<f64> {
            s.parse::<f64>().map_err(|_| Error::Parse(format!("bad number '{s}' in '{spec}'")))
        };
        match kind {
            "signal" => {
                if arg == "composite" {
                    Ok(SdfTarget::Signal1d(Signal1d::Composite))
                } else if let Some(f) = arg.strip_prefix("sin") {
                    Ok(SdfTarget::Signal1d(Signal1d::Sine { freq: num(f)? }))
                } else {
                    Err(Error::Parse(format!("unknown signal '{arg}'")))
                }
            }
            "circle" => Ok(SdfTarget::Circle { radius: num(arg)? }),
            "sphere" => Ok(SdfTarget::Sphere { radius: num(arg)? }),
            "box" => {
                let he: Vec<f64> = arg.split(',').map(num).collect::<Result<_>>()?;
                if !(2..=3).contains(&he.len()) {
                    return Err(Error::Parse("box needs 2 or 3 half-extents".into()));
                }
                Ok(SdfTarget::Box { half_extents: he })
            }
            "koch" => {
                let d: u32 = arg
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad koch degree '{arg}'")))?;
                Ok(SdfTarget::Polygon(koch_snowflake(d)?))
            }
            "mesh" => load_mesh(Path::new(arg)),
            other => Err(Error::Parse(format!("unknown target kind '{other}'"))),
        }
    }

    /// Draw `count` points uniformly on the surface.
    pub fn surface_samples(&self, count: usize, seed: u64) -> Result<Points> {
        if !self.has_surface() {
            return Err(Error::InvalidConfig("1-D signals have no surface to sample".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pts = Points::with_capacity(self.dim(), count);
        match self {
            SdfTarget::Circle { radius } => {
                for _ in 0..count {
                    let t = 2.0 * PI * rng.gen::<f64>();
                    pts.push(&[radius * t.cos(), radius * t.sin()]);
                }
            }
            SdfTarget::Sphere { radius } => {
                for _ in 0..count {
                    let mut v = [0.0f64; 3];
                    loop {
                        for c in v.iter_mut() {
                            *c = sample_standard_normal(&mut rng);
                        }
                        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
                        if n > 1e-12 {
                            v.iter_mut().for_each(|c| *c *= radius / n);
                            break;
                        }
                    }
                    pts.push(&v);
                }
            }
            SdfTarget::Box { half_extents } if half_extents.len() == 2 => {
                let rect = Polygon::new(vec![
                    [-half_extents[0], -half_extents[1]],
                    [half_extents[0], -half_extents[1]],
                    [half_extents[0], half_extents[1]],
                    [-half_extents[0], half_extents[1]],
                ])?;
                sample_polygon_boundary(&rect, count, &mut rng, &mut pts);
            }
            SdfTarget::Box { half_extents } => {
                let m = box_mesh([half_extents[0], half_extents[1], half_extents[2]]);
                sample_mesh_surface(&m, count, &mut rng, &mut pts);
            }
            SdfTarget::Polygon(p) => sample_polygon_boundary(p, count, &mut rng, &mut pts),
            SdfTarget::TriMesh(m) => sample_mesh_surface(m, count, &mut rng, &mut pts),
            SdfTarget::Signal1d(_) => unreachable!(),
        }
        Ok(pts)
    }
}

fn sample_polygon_boundary(p: &Polygon, count: usize, rng: &mut ChaCha8Rng, out: &mut Points) {
    let n = p.vertices.len();
    let lengths: Vec<f64> = (0..n)
        .map(|i| {
            let a = p.vertices[i];
            let b = p.vertices[(i + 1) % n];
            ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt()
        })
        .collect();
    let total: f64 = lengths.iter().sum();
    for _ in 0..count {
        let mut s = rng.gen::<f64>() * total;
        let mut i = 0;
        while i + 1 < n && s > lengths[i] {
            s -= lengths[i];
            i += 1;
        }
        let t = if lengths[i] > 0.0 { (s / lengths[i]).min(1.0) } else { 0.0 };
        let a = p.vertices[i];
        let b = p.vertices[(i + 1) % n];
        out.push(&[a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
    }
}

fn sample_mesh_surface(m: &TriMesh, count: usize, rng: &mut ChaCha8Rng, out: &mut Points) {
    let areas = m.face_areas();
    let total: f64 = areas.iter().sum();
    for _ in 0..count {
        let mut s = rng.gen::<f64>() * total;
        let mut fi = 0;
        while fi + 1 < areas.len() && s > areas[fi] {
            s -= areas[fi];
            fi += 1;
        }
        let f = m.faces[fi];
        let (a, b, c) = (
            m.vertices[f[0] as usize],
            m.vertices[f[1] as usize],
            m.vertices[f[2] as usize],
        );
        let (mut u, mut v) = (rng.gen::<f64>(), rng.gen::<f64>());
        if u + v > 1.0 {
            u = 1.0 - u;
            v = 1.0 - v;
        }
        out.push(&[
            a[0] + u * (b[0] - a[0]) + v * (c[0] - a[0]),
            a[1] + u * (b[1] - a[1]) + v * (c[1] - a[1]),
            a[2] + u * (b[2] - a[2]) + v * (c[2] - a[2]),
        ]);
    }
}

/// Signed distance with full precondition checks (the hot paths use
/// [`SdfTarget::eval`] after one upfront [`check_labelable`] call).
pub fn eval_sdf(target: &SdfTarget, x: &[f64]) -> Result<f64> {
    check_labelable(target)?;
    if x.len() != target.dim() {
        return Err(Error::UnsupportedDim(x.len()));
    }
    Ok(target.eval(x))
}

/// Errors when signed distances from this target cannot be trusted.
pub fn check_labelable(target: &SdfTarget) -> Result<()> {
    if !target.sign_reliable() {
        return Err(Error::SignUnreliable);
    }
    Ok(())
}

/// Batch SDF labeling, parallel over fixed chunks.
pub fn label_points(target: &SdfTarget, pts: &Points) -> Result<Vec<f64>> {
    check_labelable(target)?;
    let chunks = par::map_chunks(pts.len(), 1024, |r| {
        r.map(|i| target.eval(pts.get(i))).collect::<Vec<f64>>()
    });
    Ok(chunks.concat())
}

/// Load a triangle-mesh target from an OBJ file, normalized to [−1, 1]
/// extents with pseudo-normals precomputed.
pub fn load_mesh(path: &Path) -> Result<SdfTarget> {
    Ok(SdfTarget::TriMesh(load_obj(path)?.normalize()))
}

/// Normalize a polygon or mesh target to [−1, 1] extents (identity for
/// analytic shapes and signals, which are defined normalized).
pub fn normalize_shape(target: &SdfTarget) -> SdfTarget {
    match target {
        SdfTarget::Polygon(p) => SdfTarget::Polygon(p.normalize()),
        SdfTarget::TriMesh(m) => SdfTarget::TriMesh(m.normalize()),
        other => other.clone(),
    }
}

/// Coarse regular grid over [−1,1]^ℓ with the cells intersecting the
/// target surface marked active.
#[derive(Debug, Clone, PartialEq)]
pub struct CellGrid {
    pub dim: usize,
    pub resolution: usize,
    active: Vec<bool>,
}

pub const DEFAULT_CELL_RESOLUTION: usize = 20;

impl CellGrid {
    pub fn cell_count(&self) -> usize {
        self.resolution.pow(self.dim as u32)
    }

    pub fn active_count(&self) -> usize {
        self.active.iter().filter(|&&a| a).count()
    }

    pub fn is_active(&self, idx: usize) -> bool {
        self.active[idx]
    }

    pub fn active_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.active.iter().enumerate().filter(|(_, &a)| a).map(|(i, _)| i)
    }

    /// Index of the cell containing `p` (domain boundary points fall into
    /// the adjacent interior cell).
    pub fn cell_of(&self, p: &[f64]) -> usize {
        let mut idx = 0usize;
        let mut stride = 1usize;
        for &c in p.iter().take(self.dim) {
            let f = ((c + 1.0) * 0.5 * self.resolution as f64).floor();
            let i = (f as isize).clamp(0, self.resolution as isize - 1) as usize;
            idx += stride * i;
            stride *= self.resolution;
        }
        idx
    }

    /// Center coordinates of cell `idx`.
    pub fn center(&self, idx: usize) -> Vec<f64> {
        let mut rem = idx;
        let mut out = Vec::with_capacity(self.dim);
        let edge = 2.0 / self.resolution as f64;
        for _ in 0..self.dim {
            let i = rem % self.resolution;
            rem /= self.resolution;
            out.push(-1.0 + (i as f64 + 0.5) * edge);
        }
        out
    }

    /// Lower corner of cell `idx`.
    pub fn lower_corner(&self, idx: usize) -> Vec<f64> {
        let mut rem = idx;
        let mut out = Vec::with_capacity(self.dim);
        let edge = 2.0 / self.resolution as f64;
        for _ in 0..self.dim {
            let i = rem % self.resolution;
            rem /= self.resolution;
            out.push(-1.0 + i as f64 * edge);
        }
        out
    }

    pub fn cell_edge(&self) -> f64 {
        2.0 / self.resolution as f64
    }
}

/// Mark every cell whose center is within half a cell diagonal of the
/// surface. The bound is conservative: a surface touching a cell cannot
/// be farther than √ℓ/2 · edge from its center, so no intersecting cell
/// is missed (extra cells are harmless).
pub fn active_cells(target: &SdfTarget, grid_res: usize) -> Result<CellGrid> {
    if !target.has_surface() {
        return Err(Error::InvalidConfig("active cells need a target with a surface".into()));
    }
    check_labelable(target)?;
    assert!(grid_res >= 1);
    let dim = target.dim();
    let grid = CellGrid { dim, resolution: grid_res, active: Vec::new() };
    let bound = (dim as f64).sqrt() * 0.5 * grid.cell_edge();
    let total = grid.cell_count();
    let active = par::map_chunks(total, 512, |r| {
        r.map(|idx| target.eval(&grid.center(idx)).abs() <= bound).collect::<Vec<bool>>()
    })
    .concat();
    Ok(CellGrid { dim, resolution: grid_res, active })
}

/// Symmetric Chamfer distance between two point sets:
/// `½·(mean_a min_b ‖a−b‖² + mean_b min_a ‖a−b‖²)`, with an exact
/// grid-accelerated nearest-neighbor search.
pub fn chamfer_distance(a: &Points, b: &Points) -> f64 {
    assert!(!a.is_empty() && !b.is_empty(), "chamfer needs non-empty sets");
    assert_eq!(a.dim(), b.dim());
    0.5 * (mean_min_dist_sq(a, b) + mean_min_dist_sq(b, a))
}

fn mean_min_dist_sq(from: &Points, to: &Points) -> f64 {
    let index = GridIndex::build(to);
    let d2 = par::map_chunks(from.len(), 512, |r| {
        r.map(|i| index.min_dist_sq(from.get(i))).sum::<f64>()
    });
    d2.iter().sum::<f64>() / from.len() as f64
}

#[inline]
fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Uniform-grid NN index. Expanding-ring search with a safe lower bound
/// per ring keeps results exactly equal to a brute-force scan.
struct GridIndex<'a> {
    pts: &'a Points,
    lo: [f64; 3],
    edge: f64,
    res: [usize; 3],
    cells: Vec<Vec<u32>>,
}

impl<'a> GridIndex<'a> {
    fn build(pts: &'a Points) -> Self {
        let dim = pts.dim();
        let mut lo = [0.0f64; 3];
        let mut hi = [0.0f64; 3];
        for d in 0..dim {
            lo[d] = f64::INFINITY;
            hi[d] = f64::NEG_INFINITY;
        }
        for p in pts.iter() {
            for d in 0..dim {
                lo[d] = lo[d].min(p[d]);
                hi[d] = hi[d].max(p[d]);
            }
        }
        let max_extent = (0..dim).map(|d| hi[d] - lo[d]).fold(0.0f64, f64::max);
        let target_res = (pts.len() as f64).powf(1.0 / dim as f64).ceil().clamp(1.0, 64.0);
        let edge = if max_extent > 0.0 { max_extent / target_res } else { 1.0 };
        let mut res = [1usize; 3];
        for d in 0..dim {
            res[d] = (((hi[d] - lo[d]) / edge).floor() as usize + 1).max(1);
        }
        let mut cells = vec![Vec::new(); res[0] * res[1] * res[2]];
        for (i, p) in pts.iter().enumerate() {
            let c = Self::cell_coords_static(p, &lo, edge, &res, dim);
            cells[c[0] + res[0] * (c[1] + res[1] * c[2])].push(i as u32);
        }
        Self { pts, lo, edge, res, cells }
    }

    fn cell_coords_static(p: &[f64], lo: &[f64; 3], edge: f64, res: &[usize; 3], dim: usize) -> [usize; 3] {
        let mut c = [0usize; 3];
        for d in 0..dim {
            let i = ((p[d] - lo[d]) / edge).floor() as isize;
            c[d] = i.clamp(0, res[d] as isize - 1) as usize;
        }
        c
    }

    fn min_dist_sq(&self, q: &[f64]) -> f64 {
        let dim = self.pts.dim();
        let qc = Self::cell_coords_static(q, &self.lo, self.edge, &self.res, dim);
        let max_ring = self.res.iter().max().copied().unwrap_or(1) + 1;
        let mut best = f64::INFINITY;
        for ring in 0..=max_ring {
            if ring >= 1 {
                let lower = (ring as f64 - 1.0) * self.edge;
                if lower * lower > best {
                    break;
                }
            }
            self.scan_ring(q, &qc, ring, dim, &mut best);
        }
        best
    }

    fn scan_ring(&self, q: &[f64], qc: &[usize; 3], ring: usize, dim: usize, best: &mut f64) {
        let r = ring as isize;
        let lo_d = |d: usize| qc[d] as isize - r;
        let hi_d = |d: usize| qc[d] as isize + r;
        let zr = if dim == 3 { (lo_d(2), hi_d(2)) } else { (0, 0) };
        let yr = if dim >= 2 { (lo_d(1), hi_d(1)) } else { (0, 0) };
        for z in zr.0..=zr.1 {
            if z < 0 || z >= self.res[2] as isize {
                continue;
            }
            for y in yr.0..=yr.1 {
                if y < 0 || y >= self.res[1] as isize {
                    continue;
                }
                for x in lo_d(0)..=hi_d(0) {
                    if x < 0 || x >= self.res[0] as isize {
                        continue;
                    }
                    let cheb = (x - qc[0] as isize)
                        .abs()
                        .max((y - qc[1] as isize).abs())
                        .max((z - qc[2] as isize).abs());
                    if cheb != r {
                        continue;
                    }
                    let cell = &self.cells[x as usize
                        + self.res[0] * (y as usize + self.res[1] * z as usize)];
                    for &pi in cell {
                        let d2 = dist_sq(q, self.pts.get(pi as usize));
                        if d2 < *best {
                            *best = d2;
                        }
                    }
                }
            }
        }
    }
}
