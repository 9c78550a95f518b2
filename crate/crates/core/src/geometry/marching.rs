//! Zero-level-set extraction on a regular grid over [−1,1]^ℓ: marching
//! squares in 2-D, marching cubes in 3-D, linear interpolation of edge
//! crossings. Inside means field < 0. A field with no sign change yields
//! an empty result, not an error.

use std::collections::HashMap;

use super::tables::{CORNER_OFFSETS, EDGE_CORNERS, TRI_TABLE};
use crate::par;
use crate::points::Points;

/// Zero contour of a 2-D field: vertex positions and index segments.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Contour {
    pub vertices: Vec<[f64; 2]>,
    pub segments: Vec<[usize; 2]>,
}

impl Contour {
    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y\n");
        for v in &self.vertices {
            out.push_str(&format!("{},{}\n", v[0], v[1]));
        }
        out
    }

    /// Segments as SVG polylines over the [−1,1]² domain mapped into a
    /// square viewport.
    pub fn to_svg(&self, size: f64) -> String {
        let map = |v: &[f64; 2]| {
            let x = (v[0] + 1.0) * 0.5 * size;
            let y = (1.0 - v[1]) * 0.5 * size;
            (x, y)
        };
        let mut out = format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">\n"
        );
        out.push_str(&format!(
            "<rect width=\"{size}\" height=\"{size}\" fill=\"white\" stroke=\"#ccc\"/>\n"
        ));
        for s in &self.segments {
            let (x1, y1) = map(&self.vertices[s[0]]);
            let (x2, y2) = map(&self.vertices[s[1]]);
            out.push_str(&format!(
                "<line x1=\"{x1:.3}\" y1=\"{y1:.3}\" x2=\"{x2:.3}\" y2=\"{y2:.3}\" stroke=\"black\" stroke-width=\"1\"/>\n"
            ));
        }
        out.push_str("</svg>\n");
        out
    }
}

/// Triangle mesh extracted from a 3-D field.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SurfaceMesh {
    pub vertices: Vec<[f64; 3]>,
    pub faces: Vec<[u32; 3]>,
}

impl SurfaceMesh {
    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn area(&self) -> f64 {
        use super::mesh::{cross, sub};
        self.faces
            .iter()
            .map(|f| {
                let (a, b, c) = (
                    self.vertices[f[0] as usize],
                    self.vertices[f[1] as usize],
                    self.vertices[f[2] as usize],
                );
                let n = cross(sub(b, a), sub(c, a));
                0.5 * (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt()
            })
            .sum()
    }

    /// Signed volume via the divergence theorem; positive for outward
    /// orientation of a closed surface.
    pub fn signed_volume(&self) -> f64 {
        use super::mesh::{cross, dot3};
        self.faces
            .iter()
            .map(|f| {
                let (a, b, c) = (
                    self.vertices[f[0] as usize],
                    self.vertices[f[1] as usize],
                    self.vertices[f[2] as usize],
                );
                dot3(a, cross(b, c)) / 6.0
            })
            .sum()
    }
}

/// Grid corner coordinate along one axis.
#[inline]
fn coord(i: usize, resolution: usize) -> f64 {
    -1.0 + 2.0 * i as f64 / resolution as f64
}

/// All (resolution+1)^dim grid corners, x-fastest.
pub fn grid_points(dim: usize, resolution: usize) -> Points {
    assert!((1..=3).contains(&dim) && resolution >= 1);
    let n = resolution + 1;
    let total = n.pow(dim as u32);
    let mut pts = Points::with_capacity(dim, total);
    let mut buf = vec![0.0f64; dim];
    for idx in 0..total {
        let mut rem = idx;
        for d in buf.iter_mut() {
            *d = coord(rem % n, resolution);
            rem /= n;
        }
        pts.push(&buf);
    }
    pts
}

/// Evaluate a field on the extraction grid (parallel over fixed chunks).
pub fn sample_field_grid<F>(field: F, dim: usize, resolution: usize) -> Vec<f64>
where
    F: Fn(&[f64]) -> f64 + Sync + Send,
{
    let pts = grid_points(dim, resolution);
    let chunks = par::map_chunks(pts.len(), 1024, |r| {
        r.map(|i| field(pts.get(i))).collect::<Vec<f64>>()
    });
    chunks.concat()
}

#[inline]
fn interp(pa: [f64; 2], pb: [f64; 2], va: f64, vb: f64) -> [f64; 2] {
    let t = (va / (va - vb)).clamp(0.0, 1.0);
    [pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1])]
}

/// Marching squares over `(resolution+1)²` corner values (x-fastest).
pub fn marching_squares(values: &[f64], resolution: usize) -> Contour {
    let n = resolution + 1;
    assert_eq!(values.len(), n * n);
    let mut contour = Contour::default();
    // corner order per cell: 0 (x,y), 1 (x+1,y), 2 (x+1,y+1), 3 (x,y+1)
    // edges: 0 bottom, 1 right, 2 top, 3 left
    const EDGE_ENDS: [(usize, usize); 4] = [(0, 1), (1, 2), (2, 3), (3, 0)];
    for iy in 0..resolution {
        for ix in 0..resolution {
            let corner_idx = [
                ix + n * iy,
                ix + 1 + n * iy,
                ix + 1 + n * (iy + 1),
                ix + n * (iy + 1),
            ];
            let pos = [
                [coord(ix, resolution), coord(iy, resolution)],
                [coord(ix + 1, resolution), coord(iy, resolution)],
                [coord(ix + 1, resolution), coord(iy + 1, resolution)],
                [coord(ix, resolution), coord(iy + 1, resolution)],
            ];
            let v: Vec<f64> = corner_idx.iter().map(|&i| values[i]).collect();
            let mut case = 0usize;
            for (bit, &val) in v.iter().enumerate() {
                if val < 0.0 {
                    case |= 1 << bit;
                }
            }
            if case == 0 || case == 15 {
                continue;
            }
            let edge_point = |e: usize| {
                let (a, b) = EDGE_ENDS[e];
                interp(pos[a], pos[b], v[a], v[b])
            };
            let pairs: &[(usize, usize)] = match case {
                1 => &[(3, 0)],
                2 => &[(0, 1)],
                3 => &[(3, 1)],
                4 => &[(1, 2)],
                6 => &[(0, 2)],
                7 => &[(3, 2)],
                8 => &[(2, 3)],
                9 => &[(0, 2)],
                11 => &[(1, 2)],
                12 => &[(1, 3)],
                13 => &[(0, 1)],
                14 => &[(3, 0)],
                5 | 10 => {
                    let center = (v[0] + v[1] + v[2] + v[3]) * 0.25;
                    let center_in = center < 0.0;
                    if (case == 5) == center_in {
                        // the two inside corners connect through the middle
                        &[(0, 1), (2, 3)]
                    } else {
                        &[(3, 0), (1, 2)]
                    }
                }
                _ => unreachable!(),
            };
            for &(ea, eb) in pairs {
                let pa = edge_point(ea);
                let pb = edge_point(eb);
                if pa == pb {
                    continue; // degenerate, both crossings at a shared corner
                }
                let base = contour.vertices.len();
                contour.vertices.push(pa);
                contour.vertices.push(pb);
                contour.segments.push([base, base + 1]);
            }
        }
    }
    contour
}

/// Marching cubes over `(resolution+1)³` corner values (x-fastest).
/// Crossing vertices are computed once per grid edge and shared, so the
/// output has proper connectivity.
pub fn marching_cubes(values: &[f64], resolution: usize) -> SurfaceMesh {
    let n = resolution + 1;
    assert_eq!(values.len(), n * n * n);
    let corner = |ix: usize, iy: usize, iz: usize| ix + n * (iy + n * iz);

    let mut mesh = SurfaceMesh::default();
    // (low corner grid index, axis) -> vertex index
    let mut edge_cache: HashMap<(usize, u8), u32> = HashMap::new();

    for iz in 0..resolution {
        for iy in 0..resolution {
            for ix in 0..resolution {
                let corners: Vec<usize> = CORNER_OFFSETS
                    .iter()
                    .map(|&(dx, dy, dz)| corner(ix + dx, iy + dy, iz + dz))
                    .collect();
                let mut case = 0usize;
                for (bit, &ci) in corners.iter().enumerate() {
                    if values[ci] < 0.0 {
                        case |= 1 << bit;
                    }
                }
                if case == 0 || case == 255 {
                    continue;
                }
                let row = &TRI_TABLE[case];
                let mut tri = [0u32; 3];
                for (t, &e) in row.iter().take_while(|&&e| e >= 0).enumerate() {
                    let e = e as usize;
                    let (ca, cb) = EDGE_CORNERS[e];
                    let (ga, gb) = (corners[ca], corners[cb]);
                    // canonical low-to-high key along the edge axis
                    let (lo, hi) = if ga < gb { (ga, gb) } else { (gb, ga) };
                    let axis = match hi - lo {
                        1 => 0u8,
                        d if d == n => 1,
                        _ => 2,
                    };
                    let vid = *edge_cache.entry((lo, axis)).or_insert_with(|| {
                        let (va, vb) = (values[lo], values[hi]);
                        let t = (va / (va - vb)).clamp(0.0, 1.0);
                        let (lx, ly, lz) =
                            (lo % n, (lo / n) % n, lo / (n * n));
                        let mut p = [
                            coord(lx, resolution),
                            coord(ly, resolution),
                            coord(lz, resolution),
                        ];
                        p[axis as usize] += t * 2.0 / resolution as f64;
                        mesh.vertices.push(p);
                        (mesh.vertices.len() - 1) as u32
                    });
                    tri[t % 3] = vid;
                    if t % 3 == 2 && tri[0] != tri[1] && tri[1] != tri[2] && tri[0] != tri[2] {
                        // table order faces the negative side; flip so
                        // normals point outward (toward positive field)
                        mesh.faces.push([tri[0], tri[2], tri[1]]);
                    }
                }
            }
        }
    }
    mesh
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle_values(r: f64, resolution: usize) -> Vec<f64> {
        let n = resolution + 1;
        let mut v = Vec::with_capacity(n * n);
        for iy in 0..n {
            for ix in 0..n {
                let (x, y) = (coord(ix, resolution), coord(iy, resolution));
                v.push((x * x + y * y).sqrt() - r);
            }
        }
        v
    }

    #[test]
    fn circle_contour_vertices_near_radius() {
        let resolution = 128;
        let c = marching_squares(&circle_values(0.5, resolution), resolution);
        assert!(!c.is_empty());
        let tol = 2.0 * 2f64.sqrt() / resolution as f64; // one cell diagonal
        for v in &c.vertices {
            let r = (v[0] * v[0] + v[1] * v[1]).sqrt();
            assert!((r - 0.5).abs() <= tol, "vertex radius {r}");
        }
        // total length close to the circumference
        let len: f64 = c
            .segments
            .iter()
            .map(|s| {
                let (a, b) = (c.vertices[s[0]], c.vertices[s[1]]);
                ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
            })
            .sum();
        let circumference = std::f64::consts::PI;
        assert!((len - circumference).abs() / circumference < 0.02, "length {len}");
    }

    #[test]
    fn positive_field_gives_empty_contour_and_mesh() {
        let c = marching_squares(&vec![1.0; 17 * 17], 16);
        assert!(c.is_empty());
        let m = marching_cubes(&vec![1.0; 9 * 9 * 9], 8);
        assert!(m.is_empty());
    }

    fn sphere_values(r: f64, resolution: usize) -> Vec<f64> {
        let n = resolution + 1;
        let mut v = Vec::with_capacity(n * n * n);
        for iz in 0..n {
            for iy in 0..n {
                for ix in 0..n {
                    let (x, y, z) =
                        (coord(ix, resolution), coord(iy, resolution), coord(iz, resolution));
                    v.push((x * x + y * y + z * z).sqrt() - r);
                }
            }
        }
        v
    }

    #[test]
    fn sphere_mesh_area_and_volume() {
        let resolution = 64;
        let m = marching_cubes(&sphere_values(0.5, resolution), resolution);
        assert!(!m.is_empty());
        let area = m.area();
        let expect = 4.0 * std::f64::consts::PI * 0.25;
        assert!((area - expect).abs() / expect < 0.1, "area {area} vs {expect}");
        let vol = m.signed_volume();
        let expect_v = 4.0 / 3.0 * std::f64::consts::PI * 0.125;
        assert!(
            (vol - expect_v).abs() / expect_v < 0.1,
            "volume {vol} vs {expect_v} (sign checks orientation)"
        );
    }

    #[test]
    fn sphere_mesh_is_closed() {
        // Every edge shared by exactly two consistently oriented faces —
        // a strong end-to-end check of the triangulation table.
        for resolution in [16usize, 33] {
            let m = marching_cubes(&sphere_values(0.6, resolution), resolution);
            let tm = super::super::mesh::TriMesh::new(m.vertices.clone(), m.faces.clone()).unwrap();
            assert!(tm.is_watertight(), "open surface at resolution {resolution}");
        }
    }

    #[test]
    fn vertices_lie_on_grid_edges() {
        let resolution = 20;
        let m = marching_cubes(&sphere_values(0.55, resolution), resolution);
        let step = 2.0 / resolution as f64;
        for v in &m.vertices {
            // at least 2 of 3 coordinates are exactly on grid planes
            let on_grid = v
                .iter()
                .filter(|&&c| {
                    let k = (c + 1.0) / step;
                    (k - k.round()).abs() < 1e-9
                })
                .count();
            assert!(on_grid >= 2, "vertex {v:?} not on a grid edge");
        }
    }
}
