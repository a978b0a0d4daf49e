//! Fixtures shared by the kernel benchmarks.

use std::f64::consts::TAU;
use std::sync::Arc;

use bv_relax::geometry::{BoundaryLoop, Point2};
use bv_relax::plateau::{DiscreteMap, DiskMesh};

/// Star polygon `{n/k}`: `n` points on the unit circle joined every `k`-th.
pub fn star(n: usize, k: usize) -> BoundaryLoop {
    BoundaryLoop::new((0..n).map(|i| Point2::polar(1.0, TAU * (i * k % n) as f64 / n as f64)).collect())
        .expect("non-empty")
}

/// The self-intersecting pentagon whose Plateau value is 5/3.
pub fn pentagon() -> BoundaryLoop {
    let p = Point2::new;
    BoundaryLoop::new(vec![p(0.0, 0.0), p(2.0, 0.0), p(2.0, 2.0), p(1.0, -1.0), p(0.0, 2.0)]).expect("non-empty")
}

/// A smooth, folded map on a uniform disk mesh.
pub fn folded_map(rings: usize, angular: usize) -> DiscreteMap {
    let mesh = Arc::new(DiskMesh::uniform(rings, angular));
    let values = mesh
        .vertices
        .iter()
        .map(|v| Point2::new(v.x * v.x - v.y * v.y, 2.0 * v.x * v.y + 0.3 * v.x))
        .collect();
    DiscreteMap::new(mesh, values)
}
