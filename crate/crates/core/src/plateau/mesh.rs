//! Polar triangulations of the unit disk and piecewise affine maps on them.

use std::f64::consts::TAU;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::geometry::{signed_triangle_area, BoundaryLoop, Mat2, Point2, SampledCircleMap};

use super::PlateauError;

/// Source triangles smaller than this are rejected.
pub const MIN_TRIANGLE_AREA: f64 = 1e-14;

/// A center vertex plus `n_rings` concentric rings at radii `j / n_rings`,
/// every ring carrying the same list of angles.
#[derive(Clone, Debug, PartialEq)]
pub struct DiskMesh {
    pub vertices: Vec<Point2>,
    pub triangles: Vec<[usize; 3]>,
    pub boundary: Vec<usize>,
    n_rings: usize,
    angles: Vec<f64>,
}

/// Size summary of a mesh.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MeshStats {
    pub vertices: usize,
    pub triangles: usize,
    pub rings: usize,
    pub angular: usize,
}

impl DiskMesh {
    /// Polar mesh with the given strictly increasing angles in `[0, 2π)`.
    pub fn polar(n_rings: usize, angles: Vec<f64>) -> Self {
        let n_rings = n_rings.max(1);
        let m = angles.len();
        assert!(m >= 3, "polar mesh needs at least three angles");
        let mut vertices = Vec::with_capacity(1 + n_rings * m);
        vertices.push(Point2::ORIGIN);
        for j in 1..=n_rings {
            let r = j as f64 / n_rings as f64;
            for &a in &angles {
                vertices.push(Point2::polar(r, a));
            }
        }
        let idx = |j: usize, k: usize| 1 + (j - 1) * m + (k % m);
        let mut triangles = Vec::with_capacity(m * (2 * n_rings - 1));
        for k in 0..m {
            triangles.push([0, idx(1, k), idx(1, k + 1)]);
        }
        for j in 1..n_rings {
            for k in 0..m {
                let (a, b, c, d) = (idx(j, k), idx(j + 1, k), idx(j + 1, k + 1), idx(j, k + 1));
                triangles.push([a, b, c]);
                triangles.push([a, c, d]);
            }
        }
        let boundary = (0..m).map(|k| idx(n_rings, k)).collect();
        DiskMesh {
            vertices,
            triangles,
            boundary,
            n_rings,
            angles,
        }
    }

    pub fn uniform(n_rings: usize, n_angular: usize) -> Self {
        let m = n_angular.max(3);
        Self::polar(n_rings, (0..m).map(|k| TAU * k as f64 / m as f64).collect())
    }

    pub fn n_rings(&self) -> usize {
        self.n_rings
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    /// Vertex index on ring `j` (1-based; 0 is the center) at angle slot `k`.
    pub fn index(&self, j: usize, k: usize) -> usize {
        if j == 0 {
            0
        } else {
            1 + (j - 1) * self.angles.len() + (k % self.angles.len())
        }
    }

    pub fn is_boundary(&self, v: usize) -> bool {
        v > (self.n_rings - 1) * self.angles.len()
    }

    /// `(ring, slot)` of a vertex; the center is `(0, 0)`.
    pub fn ring_slot(&self, v: usize) -> (usize, usize) {
        if v == 0 {
            (0, 0)
        } else {
            let m = self.angles.len();
            (1 + (v - 1) / m, (v - 1) % m)
        }
    }

    pub fn stats(&self) -> MeshStats {
        MeshStats {
            vertices: self.vertices.len(),
            triangles: self.triangles.len(),
            rings: self.n_rings,
            angular: self.angles.len(),
        }
    }

    /// Total source area (the inscribed polygon's area).
    pub fn area(&self) -> f64 {
        self.triangles
            .iter()
            .map(|t| signed_triangle_area(self.vertices[t[0]], self.vertices[t[1]], self.vertices[t[2]]))
            .sum()
    }
}

/// Boundary angles and values that reproduce a loop exactly: every loop
/// vertex is a boundary vertex and the others are spread by arc length
/// (constant-speed parametrization).
pub fn loop_boundary(lp: &BoundaryLoop, n_angular: usize) -> (Vec<f64>, Vec<Point2>) {
    let (angles, values, _) = loop_slots(lp, n_angular);
    (angles, values)
}

/// As [`loop_boundary`], also returning the boundary slot of every loop vertex.
pub(crate) fn loop_slots(lp: &BoundaryLoop, n_angular: usize) -> (Vec<f64>, Vec<Point2>, Vec<usize>) {
    let verts = lp.vertices();
    let n = verts.len();
    let slots = n_angular.max(n).max(3);
    if n == 1 {
        let angles = (0..slots).map(|k| TAU * k as f64 / slots as f64).collect();
        return (angles, vec![verts[0]; slots], vec![0]);
    }
    let lens: Vec<f64> = lp.edges().map(|(a, b)| a.dist(b)).collect();
    let total: f64 = lens.iter().sum();
    // largest remainder allocation with at least one slot per edge
    let mut counts: Vec<usize> = vec![1; n];
    let spare = slots - n;
    let ideal: Vec<f64> = lens.iter().map(|l| l / total * spare as f64).collect();
    let mut used = 0;
    for (c, x) in counts.iter_mut().zip(&ideal) {
        *c += x.floor() as usize;
        used += x.floor() as usize;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        let fi = ideal[i] - ideal[i].floor();
        let fj = ideal[j] - ideal[j].floor();
        fj.total_cmp(&fi).then(i.cmp(&j))
    });
    for &i in order.iter().take(spare - used) {
        counts[i] += 1;
    }
    let mut angles = Vec::with_capacity(slots);
    let mut values = Vec::with_capacity(slots);
    let mut vertex_slot = Vec::with_capacity(n);
    let mut acc = 0.0;
    for i in 0..n {
        let (a, b) = (verts[i], verts[(i + 1) % n]);
        let t0 = TAU * acc / total;
        acc += lens[i];
        let t1 = TAU * acc / total;
        vertex_slot.push(values.len());
        for s in 0..counts[i] {
            let f = s as f64 / counts[i] as f64;
            angles.push(t0 + f * (t1 - t0));
            values.push(a.lerp(b, f));
        }
    }
    (angles, values, vertex_slot)
}

/// Boundary angles for sampled data: the sample angles, each interval split
/// evenly so that at least `n_angular` angles result.
pub fn sampled_boundary(map: &SampledCircleMap, n_angular: usize) -> (Vec<f64>, Vec<Point2>) {
    let s = map.samples();
    let n = s.len();
    let per = n_angular.div_ceil(n).max(1);
    let mut angles = Vec::with_capacity(n * per);
    for i in 0..n {
        let a0 = s[i].0;
        let a1 = if i + 1 < n { s[i + 1].0 } else { s[0].0 + TAU };
        for k in 0..per {
            angles.push(a0 + (a1 - a0) * k as f64 / per as f64);
        }
    }
    // keep angles inside [0, 2π) and sorted (the first sample may exceed 0)
    let mut pairs: Vec<(f64, Point2)> = angles
        .into_iter()
        .map(|a| (a.rem_euclid(TAU), map.eval(a)))
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    pairs.dedup_by(|x, y| x.0 == y.0);
    pairs.into_iter().unzip()
}

/// A piecewise affine map on a disk mesh.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteMap {
    pub mesh: Arc<DiskMesh>,
    pub values: Vec<Point2>,
}

impl DiscreteMap {
    pub fn new(mesh: Arc<DiskMesh>, values: Vec<Point2>) -> Self {
        assert_eq!(mesh.vertices.len(), values.len(), "one value per vertex");
        DiscreteMap { mesh, values }
    }

    /// Signed target area of each triangle.
    pub fn signed_areas(&self) -> impl Iterator<Item = f64> + '_ {
        self.mesh
            .triangles
            .iter()
            .map(|t| signed_triangle_area(self.values[t[0]], self.values[t[1]], self.values[t[2]]))
    }

    /// Gradient of the affine piece on triangle `t`.
    pub fn triangle_gradient(&self, t: usize) -> Mat2 {
        let [a, b, c] = self.mesh.triangles[t];
        let (xa, xb, xc) = (self.mesh.vertices[a], self.mesh.vertices[b], self.mesh.vertices[c]);
        let (va, vb, vc) = (self.values[a], self.values[b], self.values[c]);
        let e = Mat2::from_columns(xb - xa, xc - xa);
        let det = e.det();
        // inverse of the edge matrix
        let inv = Mat2::new(e.m[1][1] / det, -e.m[0][1] / det, -e.m[1][0] / det, e.m[0][0] / det);
        let dv = Mat2::from_columns(vb - va, vc - va);
        mat_mul(&dv, &inv)
    }

    /// Largest operator norm of the gradient over all triangles.
    pub fn lipschitz_constant(&self) -> f64 {
        (0..self.mesh.triangles.len())
            .map(|t| self.triangle_gradient(t).operator_norm())
            .fold(0.0, f64::max)
    }

    /// Triangle containing `p` (or the nearest candidate for points just
    /// outside the mesh polygon) with barycentric coordinates.
    pub fn locate(&self, p: Point2) -> (usize, [f64; 3]) {
        let m = self.mesh.angles.len();
        let nr = self.mesh.n_rings;
        let r = p.norm();
        let theta = p.angle().rem_euclid(TAU);
        let pos = self.mesh.angles.partition_point(|a| *a <= theta);
        let k = if pos == 0 { m - 1 } else { pos - 1 };
        let ring = ((r * nr as f64).floor() as usize).min(nr - 1);
        let mut best = (f64::NEG_INFINITY, 0usize, [0.0; 3]);
        // band j lies between the polygons through rings j and j + 1, whose
        // chords dip below the circles, so the point may sit further out
        for band in ring..nr {
            let cands = if band == 0 {
                [k, k]
            } else {
                let base = m + (band - 1) * 2 * m;
                [base + 2 * k, base + 2 * k + 1]
            };
            for t in cands {
                let bc = barycentric(&self.mesh, t, p);
                let worst = bc[0].min(bc[1]).min(bc[2]);
                if worst > best.0 {
                    best = (worst, t, bc);
                }
            }
            if best.0 >= -1e-12 {
                break;
            }
        }
        (best.1, best.2)
    }

    /// Evaluates the piecewise affine map (extended affinely from the
    /// nearest triangle outside the mesh polygon).
    pub fn eval(&self, p: Point2) -> Point2 {
        let (t, bc) = self.locate(p);
        let [a, b, c] = self.mesh.triangles[t];
        self.values[a] * bc[0] + self.values[b] * bc[1] + self.values[c] * bc[2]
    }

    /// Gradient of the affine piece containing `p`.
    pub fn gradient_at(&self, p: Point2) -> Mat2 {
        self.triangle_gradient(self.locate(p).0)
    }
}

fn barycentric(mesh: &DiskMesh, t: usize, p: Point2) -> [f64; 3] {
    let [a, b, c] = mesh.triangles[t];
    let (xa, xb, xc) = (mesh.vertices[a], mesh.vertices[b], mesh.vertices[c]);
    let area = signed_triangle_area(xa, xb, xc);
    let la = signed_triangle_area(p, xb, xc) / area;
    let lb = signed_triangle_area(xa, p, xc) / area;
    [la, lb, 1.0 - la - lb]
}

pub(crate) fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut m = [[0.0; 2]; 2];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = a.m[i][0] * b.m[0][j] + a.m[i][1] * b.m[1][j];
        }
    }
    Mat2 { m }
}

/// Σ_T |J_T|·area(T), i.e. the total unsigned area of the image triangles.
pub fn discrete_jacobian_mass(map: &DiscreteMap) -> Result<f64, PlateauError> {
    let mesh = &map.mesh;
    let mut total = 0.0;
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let src = signed_triangle_area(mesh.vertices[tri[0]], mesh.vertices[tri[1]], mesh.vertices[tri[2]]);
        if src < MIN_TRIANGLE_AREA {
            return Err(PlateauError::DegenerateTriangle { triangle: t, area: src });
        }
        let v = &map.values;
        total += signed_triangle_area(v[tri[0]], v[tri[1]], v[tri[2]]).abs();
    }
    Ok(total)
}

/// `v(ρ, θ) = ρ·φ(θ)` with φ interpolated linearly in angle.
pub fn cone_extension(boundary: &SampledCircleMap, mesh: Arc<DiskMesh>) -> DiscreteMap {
    let angles = mesh.angles.clone();
    cone_from(Point2::ORIGIN, |k| boundary.eval(angles[k]), mesh)
}

/// `v(ρ, θ_k) = c + ρ·(φ_k − c)` from the boundary value of each angle slot.
pub(crate) fn cone_from(c: Point2, phi: impl Fn(usize) -> Point2, mesh: Arc<DiskMesh>) -> DiscreteMap {
    let nr = mesh.n_rings as f64;
    let values = (0..mesh.vertices.len())
        .map(|v| {
            let (j, k) = mesh.ring_slot(v);
            if j == 0 {
                c
            } else {
                c + (phi(k) - c) * (j as f64 / nr)
            }
        })
        .collect();
    DiscreteMap::new(mesh, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn orientation_and_area() {
        let m = DiskMesh::uniform(6, 40);
        for t in &m.triangles {
            assert!(signed_triangle_area(m.vertices[t[0]], m.vertices[t[1]], m.vertices[t[2]]) > 0.0);
        }
        let expect = 0.5 * 40.0 * (TAU / 40.0).sin();
        assert_abs_diff_eq!(m.area(), expect, epsilon = 1e-12);
        assert_eq!(m.boundary.len(), 40);
        assert!(m.boundary.iter().all(|&b| m.is_boundary(b) && (m.vertices[b].norm() - 1.0).abs() < 1e-15));
        let used: std::collections::BTreeSet<usize> = m.triangles.iter().flatten().copied().collect();
        assert_eq!(used.len(), m.vertices.len());
    }

    #[test]
    fn identity_and_constant_masses() {
        let mesh = Arc::new(DiskMesh::uniform(8, 64));
        let id = DiscreteMap::new(mesh.clone(), mesh.vertices.clone());
        let mass = discrete_jacobian_mass(&id).unwrap();
        assert_abs_diff_eq!(mass, mesh.area(), epsilon = 1e-12);
        assert!((mass - PI).abs() < 0.01);
        let c = DiscreteMap::new(mesh.clone(), vec![Point2::new(2.0, 3.0); mesh.vertices.len()]);
        assert_eq!(discrete_jacobian_mass(&c).unwrap(), 0.0);
        assert_abs_diff_eq!(id.lipschitz_constant(), 1.0, epsilon = 1e-12);
        let p = Point2::new(0.31, -0.52);
        assert_abs_diff_eq!(id.eval(p).dist(p), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn locate_finds_the_containing_triangle() {
        // coarse, uneven angles make the ring chords dip well below j/n
        let angles = vec![0.0, 0.4, 1.9, 2.2, 3.9, 5.0];
        let mesh = Arc::new(DiskMesh::polar(5, angles));
        let a = Mat2::new(1.5, -0.3, 0.7, 2.0);
        let affine = DiscreteMap::new(mesh.clone(), mesh.vertices.iter().map(|&v| a.apply(v)).collect());
        let mut inside = 0;
        for i in 0..60 {
            for j in 0..60 {
                let p = Point2::new(-1.0 + (i as f64 + 0.5) / 30.0, -1.0 + (j as f64 + 0.5) / 30.0);
                let (t, bc) = affine.locate(p);
                if bc.iter().all(|&b| b >= 0.0) {
                    inside += 1;
                } else {
                    // not inside the polygon: no triangle may contain it
                    let tri = mesh.triangles.iter().any(|t| {
                        let [x, y, z] = t.map(|v| mesh.vertices[v]);
                        signed_triangle_area(x, y, p) >= 0.0 && signed_triangle_area(y, z, p) >= 0.0 && signed_triangle_area(z, x, p) >= 0.0
                    });
                    assert!(!tri, "{p:?} lies in a triangle but was located in {t}");
                }
                assert_abs_diff_eq!(affine.eval(p).dist(a.apply(p)), 0.0, epsilon = 1e-12);
            }
        }
        assert!(inside > 1000);
    }

    #[test]
    fn loop_boundary_hits_vertices() {
        let lp = BoundaryLoop::new(vec![Point2::new(0.0, 0.0), Point2::new(3.0, 0.0), Point2::new(0.0, 4.0)]).unwrap();
        let (angles, values) = loop_boundary(&lp, 24);
        assert_eq!(angles.len(), 24);
        for v in lp.vertices() {
            assert!(values.contains(v));
        }
        assert!(angles.windows(2).all(|w| w[1] > w[0]));
        // edge lengths 3, 5, 4 of perimeter 12 → 6, 10, 8 slots
        assert_abs_diff_eq!(angles[6], TAU * 3.0 / 12.0, epsilon = 1e-15);
        assert_eq!(values[6], Point2::new(3.0, 0.0));
    }

    #[test]
    fn degenerate_mesh_triangle_is_reported() {
        let mut mesh = DiskMesh::uniform(2, 8);
        mesh.vertices[1] = mesh.vertices[2];
        let map = DiscreteMap::new(Arc::new(mesh.clone()), mesh.vertices.clone());
        assert!(matches!(discrete_jacobian_mass(&map), Err(PlateauError::DegenerateTriangle { .. })));
    }
}
