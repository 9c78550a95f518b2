//! Triangle meshes with signed distance queries.
//!
//! Sign is determined by the angle-weighted pseudo-normal of the closest
//! feature (face, edge, or vertex), which is exact for watertight meshes.

use std::collections::HashMap;
use std::path::Path;

use crate::error::{Error, Result};

type V3 = [f64; 3];

#[inline]
pub(crate) fn sub(a: V3, b: V3) -> V3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub(crate) fn add(a: V3, b: V3) -> V3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[inline]
pub(crate) fn scale(a: V3, s: f64) -> V3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

#[inline]
pub(crate) fn dot3(a: V3, b: V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub(crate) fn cross(a: V3, b: V3) -> V3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
fn norm(a: V3) -> f64 {
    dot3(a, a).sqrt()
}

fn normalized(a: V3) -> V3 {
    let n = norm(a);
    if n > 0.0 {
        scale(a, 1.0 / n)
    } else {
        a
    }
}

/// Closest feature of a triangle to a query point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Feature {
    Vertex(u8),
    Edge(u8), // 0: ab, 1: bc, 2: ca
    Face,
}

/// Closest point on triangle abc to p, with the feature it lies on
/// (Ericson, Real-Time Collision Detection §5.1.5).
fn closest_point_on_triangle(p: V3, a: V3, b: V3, c: V3) -> (V3, Feature) {
    let ab = sub(b, a);
    let ac = sub(c, a);
    let ap = sub(p, a);
    let d1 = dot3(ab, ap);
    let d2 = dot3(ac, ap);
    if d1 <= 0.0 && d2 <= 0.0 {
        return (a, Feature::Vertex(0));
    }

    let bp = sub(p, b);
    let d3 = dot3(ab, bp);
    let d4 = dot3(ac, bp);
    if d3 >= 0.0 && d4 <= d3 {
        return (b, Feature::Vertex(1));
    }

    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        let v = d1 / (d1 - d3);
        return (add(a, scale(ab, v)), Feature::Edge(0));
    }

    let cp = sub(p, c);
    let d5 = dot3(ab, cp);
    let d6 = dot3(ac, cp);
    if d6 >= 0.0 && d5 <= d6 {
        return (c, Feature::Vertex(2));
    }

    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        let w = d2 / (d2 - d6);
        return (add(a, scale(ac, w)), Feature::Edge(2));
    }

    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 {
        let w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return (add(b, scale(sub(c, b), w)), Feature::Edge(1));
    }

    let denom = 1.0 / (va + vb + vc);
    let v = vb * denom;
    let w = vc * denom;
    (add(a, add(scale(ab, v), scale(ac, w))), Feature::Face)
}

/// Triangle mesh with cached pseudo-normals for signed distance queries.
#[derive(Debug, Clone)]
pub struct TriMesh {
    pub vertices: Vec<V3>,
    pub faces: Vec<[u32; 3]>,
    face_normals: Vec<V3>,
    vertex_normals: Vec<V3>,
    edge_normals: HashMap<(u32, u32), V3>,
    face_areas: Vec<f64>,
    watertight: bool,
}

fn edge_key(i: u32, j: u32) -> (u32, u32) {
    if i < j {
        (i, j)
    } else {
        (j, i)
    }
}

impl TriMesh {
    pub fn new(vertices: Vec<V3>, faces: Vec<[u32; 3]>) -> Result<Self> {
        if vertices.is_empty() || faces.is_empty() {
            return Err(Error::EmptyMesh);
        }
        for f in &faces {
            for &i in f {
                if i as usize >= vertices.len() {
                    return Err(Error::Parse(format!("face index {i} out of range")));
                }
            }
        }

        let mut face_normals = Vec::with_capacity(faces.len());
        let mut face_areas = Vec::with_capacity(faces.len());
        let mut vertex_normals = vec![[0.0; 3]; vertices.len()];
        let mut edge_normals: HashMap<(u32, u32), V3> = HashMap::new();
        let mut undirected: HashMap<(u32, u32), u32> = HashMap::new();
        let mut directed_dup = false;
        let mut directed: std::collections::HashSet<(u32, u32)> = std::collections::HashSet::new();

        for f in &faces {
            let [ia, ib, ic] = *f;
            let (a, b, c) = (vertices[ia as usize], vertices[ib as usize], vertices[ic as usize]);
            let n = cross(sub(b, a), sub(c, a));
            let area2 = norm(n);
            face_areas.push(0.5 * area2);
            let nf = if area2 > 0.0 { scale(n, 1.0 / area2) } else { [0.0; 3] };
            face_normals.push(nf);

            // Angle-weighted vertex contributions.
            let corners = [(ia, a, b, c), (ib, b, c, a), (ic, c, a, b)];
            for (iv, v, u, w) in corners {
                let e1 = normalized(sub(u, v));
                let e2 = normalized(sub(w, v));
                let angle = dot3(e1, e2).clamp(-1.0, 1.0).acos();
                let vn = &mut vertex_normals[iv as usize];
                *vn = add(*vn, scale(nf, angle));
            }

            for (i, j) in [(ia, ib), (ib, ic), (ic, ia)] {
                *undirected.entry(edge_key(i, j)).or_insert(0) += 1;
                if !directed.insert((i, j)) {
                    directed_dup = true;
                }
                let en = edge_normals.entry(edge_key(i, j)).or_insert([0.0; 3]);
                *en = add(*en, nf);
            }
        }

        let watertight = !directed_dup && undirected.values().all(|&c| c == 2);
        for v in vertex_normals.iter_mut() {
            *v = normalized(*v);
        }
        for v in edge_normals.values_mut() {
            *v = normalized(*v);
        }

        Ok(Self { vertices, faces, face_normals, vertex_normals, edge_normals, face_areas, watertight })
    }

    /// True when every edge is shared by exactly two consistently oriented
    /// faces; signed distances are only trustworthy in that case.
    pub fn is_watertight(&self) -> bool {
        self.watertight
    }

    pub fn face_areas(&self) -> &[f64] {
        &self.face_areas
    }

    /// Signed distance: min distance over all triangles, sign from the
    /// pseudo-normal of the closest feature (positive outside).
    pub fn signed_distance(&self, p: V3) -> f64 {
        let mut best_d2 = f64::INFINITY;
        let mut best: Option<(usize, V3, Feature)> = None;
        for (fi, f) in self.faces.iter().enumerate() {
            let (a, b, c) = (
                self.vertices[f[0] as usize],
                self.vertices[f[1] as usize],
                self.vertices[f[2] as usize],
            );
            let (cp, feat) = closest_point_on_triangle(p, a, b, c);
            let d = sub(p, cp);
            let d2 = dot3(d, d);
            if d2 < best_d2 {
                best_d2 = d2;
                best = Some((fi, cp, feat));
            }
        }
        let (fi, cp, feat) = best.expect("mesh has at least one face");
        let f = self.faces[fi];
        let pseudo = match feat {
            Feature::Face => self.face_normals[fi],
            Feature::Vertex(k) => self.vertex_normals[f[k as usize] as usize],
            Feature::Edge(k) => {
                let (i, j) = match k {
                    0 => (f[0], f[1]),
                    1 => (f[1], f[2]),
                    _ => (f[2], f[0]),
                };
                self.edge_normals[&edge_key(i, j)]
            }
        };
        let dist = best_d2.sqrt();
        if dot3(sub(p, cp), pseudo) >= 0.0 {
            dist
        } else {
            -dist
        }
    }

    pub fn bounding_box(&self) -> (V3, V3) {
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for v in &self.vertices {
            for k in 0..3 {
                lo[k] = lo[k].min(v[k]);
                hi[k] = hi[k].max(v[k]);
            }
        }
        (lo, hi)
    }

    /// Recenter and uniformly rescale so the longest bounding-box axis
    /// spans exactly [−1, 1]. Maps within 16 ulp of the identity are
    /// skipped, which makes normalization idempotent bit-for-bit.
    pub fn normalize(&self) -> Self {
        let (lo, hi) = self.bounding_box();
        let center = [
            (lo[0] + hi[0]) * 0.5,
            (lo[1] + hi[1]) * 0.5,
            (lo[2] + hi[2]) * 0.5,
        ];
        let half = (0..3).map(|k| (hi[k] - lo[k]) * 0.5).fold(0.0f64, f64::max);
        let tol = 16.0 * f64::EPSILON;
        if half > 0.0
            && (half - 1.0).abs() <= tol
            && center.iter().all(|c| c.abs() <= tol)
        {
            return self.clone();
        }
        let half = if half > 0.0 { half } else { 1.0 };
        let vertices = self
            .vertices
            .iter()
            .map(|v| {
                [
                    (v[0] - center[0]) / half,
                    (v[1] - center[1]) / half,
                    (v[2] - center[2]) / half,
                ]
            })
            .collect();
        Self::new(vertices, self.faces.clone()).expect("renormalized mesh stays valid")
    }
}

/// Parse an OBJ file with triangular faces; `v` and `f` records only,
/// everything else ignored.
pub fn load_obj(path: &Path) -> Result<TriMesh> {
    let text = std::fs::read_to_string(path)?;
    parse_obj(&text)
}

pub fn parse_obj(text: &str) -> Result<TriMesh> {
    let mut vertices: Vec<V3> = Vec::new();
    let mut faces: Vec<[u32; 3]> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        let mut it = line.split_whitespace();
        match it.next() {
            Some("v") => {
                let mut v = [0.0f64; 3];
                for coord in v.iter_mut() {
                    *coord = it
                        .next()
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| Error::Parse(format!("bad vertex line {}", lineno + 1)))?;
                }
                vertices.push(v);
            }
            Some("f") => {
                let idx: Vec<u32> = it
                    .map(|tok| {
                        let first = tok.split('/').next().unwrap_or("");
                        first
                            .parse::<u32>()
                            .ok()
                            .and_then(|i| i.checked_sub(1))
                            .ok_or_else(|| Error::Parse(format!("bad face index on line {}", lineno + 1)))
                    })
                    .collect::<Result<_>>()?;
                if idx.len() != 3 {
                    return Err(Error::NonTriangularFace { line: lineno + 1 });
                }
                faces.push([idx[0], idx[1], idx[2]]);
            }
            _ => {}
        }
    }
    TriMesh::new(vertices, faces)
}

pub fn write_obj(vertices: &[V3], faces: &[[u32; 3]]) -> String {
    let mut out = String::new();
    for v in vertices {
        out.push_str(&format!("v {} {} {}\n", v[0], v[1], v[2]));
    }
    for f in faces {
        out.push_str(&format!("f {} {} {}\n", f[0] + 1, f[1] + 1, f[2] + 1));
    }
    out
}

/// Axis-aligned box mesh (12 triangles, outward orientation); handy as a
/// small watertight test shape.
pub fn box_mesh(half_extents: V3) -> TriMesh {
    let [hx, hy, hz] = half_extents;
    let vertices = vec![
        [-hx, -hy, -hz],
        [hx, -hy, -hz],
        [hx, hy, -hz],
        [-hx, hy, -hz],
        [-hx, -hy, hz],
        [hx, -hy, hz],
        [hx, hy, hz],
        [-hx, hy, hz],
    ];
    let faces = vec![
        [0, 2, 1],
        [0, 3, 2], // -z
        [4, 5, 6],
        [4, 6, 7], // +z
        [0, 1, 5],
        [0, 5, 4], // -y
        [2, 3, 7],
        [2, 7, 6], // +y
        [1, 2, 6],
        [1, 6, 5], // +x
        [3, 0, 4],
        [3, 4, 7], // -x
    ];
    TriMesh::new(vertices, faces).expect("box mesh is valid")
}

/// Longitude/latitude sphere mesh; watertight, with `2·slices·(stacks−1)`
/// triangles.
pub fn uv_sphere_mesh(radius: f64, stacks: usize, slices: usize) -> TriMesh {
    assert!(stacks >= 2 && slices >= 3);
    let mut vertices: Vec<V3> = Vec::new();
    vertices.push([0.0, 0.0, radius]); // north pole
    for s in 1..stacks {
        let phi = std::f64::consts::PI * s as f64 / stacks as f64;
        for m in 0..slices {
            let theta = 2.0 * std::f64::consts::PI * m as f64 / slices as f64;
            vertices.push([
                radius * phi.sin() * theta.cos(),
                radius * phi.sin() * theta.sin(),
                radius * phi.cos(),
            ]);
        }
    }
    vertices.push([0.0, 0.0, -radius]); // south pole
    let south = (vertices.len() - 1) as u32;
    let ring = |s: usize, m: usize| -> u32 { (1 + (s - 1) * slices + (m % slices)) as u32 };

    let mut faces: Vec<[u32; 3]> = Vec::new();
    for m in 0..slices {
        faces.push([0, ring(1, m), ring(1, m + 1)]);
    }
    for s in 1..stacks - 1 {
        for m in 0..slices {
            let (a, b, c, d) = (ring(s, m), ring(s + 1, m), ring(s + 1, m + 1), ring(s, m + 1));
            faces.push([a, b, c]);
            faces.push([a, c, d]);
        }
    }
    for m in 0..slices {
        faces.push([south, ring(stacks - 1, m + 1), ring(stacks - 1, m)]);
    }
    TriMesh::new(vertices, faces).expect("sphere mesh is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_mesh_is_watertight_and_signed() {
        let m = box_mesh([0.5, 0.5, 0.5]);
        assert!(m.is_watertight());
        assert!((m.signed_distance([1.0, 0.0, 0.0]) - 0.5).abs() < 1e-12);
        assert!((m.signed_distance([0.0, 0.0, 0.0]) + 0.5).abs() < 1e-12);
        // corner region
        let d = m.signed_distance([1.0, 1.0, 1.0]);
        assert!((d - 3f64.sqrt() * 0.5).abs() < 1e-12);
    }

    #[test]
    fn open_sheet_is_flagged() {
        let m = TriMesh::new(
            vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [1.0, 1.0, 0.0]],
            vec![[0, 1, 2], [1, 3, 2]],
        )
        .unwrap();
        assert!(!m.is_watertight());
    }

    #[test]
    fn sphere_mesh_distances_track_analytic() {
        let m = uv_sphere_mesh(0.5, 24, 32);
        assert!(m.is_watertight());
        for (p, want) in [
            ([0.9f64, 0.0, 0.0], 0.4),
            ([0.0, 0.0, 0.0], -0.5),
            ([0.0, 0.25, 0.0], -0.25),
        ] {
            let got = m.signed_distance(p);
            assert!((got - want).abs() < 0.01, "at {p:?}: {got} vs {want}");
        }
    }

    #[test]
    fn normalize_maps_bbox_to_unit_and_is_idempotent() {
        let mut m = box_mesh([5.0, 2.0, 1.0]);
        for v in &mut m.vertices {
            v[0] += 3.0;
            v[1] -= 10.0;
        }
        let m = TriMesh::new(m.vertices.clone(), m.faces.clone()).unwrap();
        let n = m.normalize();
        let (lo, hi) = n.bounding_box();
        assert_eq!(lo[0], -1.0);
        assert_eq!(hi[0], 1.0);
        assert!(hi[1] <= 1.0 && lo[1] >= -1.0);
        let n2 = n.normalize();
        assert_eq!(n.vertices, n2.vertices);
    }

    #[test]
    fn obj_round_trip_and_errors() {
        let m = box_mesh([0.3, 0.3, 0.3]);
        let text = write_obj(&m.vertices, &m.faces);
        let back = parse_obj(&text).unwrap();
        assert_eq!(back.vertices, m.vertices);
        assert_eq!(back.faces, m.faces);

        assert!(matches!(parse_obj(""), Err(Error::EmptyMesh)));
        let quad = "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n";
        assert!(matches!(parse_obj(quad), Err(Error::NonTriangularFace { line: 5 })));
        let with_slashes = "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1/1 2/2 3/3\n";
        assert!(parse_obj(with_slashes).is_ok());
    }
}
