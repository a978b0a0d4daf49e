//! Winding numbers of polygonal loops and the integral ∫|w| by quadtree.
//!
//! Cells that no edge touches have constant winding. Cells crossed by a single
//! straight line (possibly carrying several coincident edges) are integrated
//! exactly by half-plane clipping. Everything else is refined, largest error
//! bound first, until the accumulated bound drops below the tolerance.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{point_segment_distance, BoundaryLoop, GeometryError, Point2};

/// Points closer than this to a loop edge have no well-defined winding.
pub const TOL_EDGE: f64 = 1e-12;

const MAX_DEPTH: u32 = 40;
const MAX_CELLS: usize = 4_000_000;

/// Signed number of turns of `lp` around `y`.
pub fn polygon_winding(lp: &BoundaryLoop, y: Point2) -> Result<i64, GeometryError> {
    for (i, (a, b)) in lp.edges().enumerate() {
        if point_segment_distance(y, a, b) < TOL_EDGE {
            return Err(GeometryError::PointOnBoundary {
                x: y.x,
                y: y.y,
                edge: i,
                tol: TOL_EDGE,
            });
        }
    }
    if lp.is_point() && lp.vertices()[0].dist(y) < TOL_EDGE {
        return Err(GeometryError::PointOnBoundary {
            x: y.x,
            y: y.y,
            edge: 0,
            tol: TOL_EDGE,
        });
    }
    let edges: Vec<_> = lp.edges().collect();
    Ok(winding_raw(&edges, y))
}

/// Crossing-rule winding number with no proximity check.
pub(crate) fn winding_raw(edges: &[(Point2, Point2)], y: Point2) -> i64 {
    let mut w = 0i64;
    for &(a, b) in edges {
        if a.y <= y.y {
            if b.y > y.y && (b - a).cross(y - a) > 0.0 {
                w += 1;
            }
        } else if b.y <= y.y && (b - a).cross(y - a) < 0.0 {
            w -= 1;
        }
    }
    w
}

/// Result of a winding integral, with its rigorous error bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WindingIntegral {
    pub value: f64,
    pub error_bound: f64,
    pub cells: usize,
}

/// ∫_{ℝ²} |w(y)| dy to absolute error `tol` (degenerate loops give 0).
pub fn winding_area_integral(lp: &BoundaryLoop, tol: f64) -> f64 {
    winding_area_integral_detailed(lp, tol).value
}

#[derive(Debug)]
struct Cell {
    x0: f64,
    y0: f64,
    size: f64,
    depth: u32,
    edges: Vec<u32>,
    bound: f64,
    estimate: f64,
    id: u64,
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Cell {}
impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        // max-heap on bound; older cells first on ties
        self.bound
            .total_cmp(&other.bound)
            .then_with(|| other.id.cmp(&self.id))
    }
}

enum Outcome {
    Exact(f64),
    Open { estimate: f64, bound: f64 },
}

pub fn winding_area_integral_detailed(lp: &BoundaryLoop, tol: f64) -> WindingIntegral {
    let tol = if tol > 0.0 { tol } else { 1e-9 };
    if lp.len() < 3 || lp.is_degenerate() {
        return WindingIntegral {
            value: 0.0,
            error_bound: 0.0,
            cells: 0,
        };
    }
    let edges: Vec<(Point2, Point2)> = lp.edges().filter(|(a, b)| a != b).collect();
    let (lo, hi) = lp.bounding_box();
    let extent = (hi.x - lo.x).max(hi.y - lo.y);
    let half = 0.5 * extent * 1.083_7 + 1e-9 * extent.max(1e-300);
    let centre = Point2::new(
        0.5 * (lo.x + hi.x) + 0.012_345_7 * half,
        0.5 * (lo.y + hi.y) - 0.007_716_3 * half,
    );
    let scale = extent;
    let geo = Geo {
        edges: &edges,
        scale,
    };

    let mut exact_sum = 0.0;
    let mut open_bound = 0.0;
    let mut heap = BinaryHeap::new();
    let mut next_id = 0u64;
    let mut cells = 1usize;

    let root_edges: Vec<u32> = (0..edges.len() as u32).collect();
    let mut pending = vec![(centre.x - half, centre.y - half, 2.0 * half, 0u32, root_edges)];

    loop {
        for (x0, y0, size, depth, parent_edges) in pending.drain(..) {
            let local: Vec<u32> = parent_edges
                .into_iter()
                .filter(|&e| {
                    let (a, b) = edges[e as usize];
                    clip_segment(a, b, x0, y0, size).is_some()
                })
                .collect();
            match geo.resolve(x0, y0, size, &local) {
                Outcome::Exact(v) => exact_sum += v,
                Outcome::Open { estimate, bound } => {
                    open_bound += bound;
                    heap.push(Cell {
                        x0,
                        y0,
                        size,
                        depth,
                        edges: local,
                        bound,
                        estimate,
                        id: next_id,
                    });
                    next_id += 1;
                }
            }
        }
        if open_bound <= tol || cells >= MAX_CELLS {
            break;
        }
        let Some(cell) = heap.pop() else { break };
        if cell.depth >= MAX_DEPTH {
            heap.push(cell);
            break;
        }
        open_bound -= cell.bound;
        let h = 0.5 * cell.size;
        for (dx, dy) in [(0.0, 0.0), (h, 0.0), (0.0, h), (h, h)] {
            pending.push((cell.x0 + dx, cell.y0 + dy, h, cell.depth + 1, cell.edges.clone()));
        }
        cells += 4;
    }

    // Deterministic order: by id.
    let mut open: Vec<Cell> = heap.into_vec();
    open.sort_by_key(|c| c.id);
    let open_est: f64 = open.iter().map(|c| c.estimate).sum();
    let bound: f64 = open.iter().map(|c| c.bound).sum();
    WindingIntegral {
        value: (exact_sum + open_est).max(0.0),
        error_bound: bound,
        cells,
    }
}

struct Geo<'a> {
    edges: &'a [(Point2, Point2)],
    scale: f64,
}

impl Geo<'_> {
    fn resolve(&self, x0: f64, y0: f64, size: f64, local: &[u32]) -> Outcome {
        let area = size * size;
        let centre = Point2::new(x0 + 0.5 * size, y0 + 0.5 * size);
        if local.is_empty() {
            return Outcome::Exact(winding_raw(self.edges, centre).unsigned_abs() as f64 * area);
        }
        if let Some(v) = self.single_line_cell(x0, y0, size, local) {
            return Outcome::Exact(v);
        }
        let wc = winding_raw(self.edges, centre).unsigned_abs() as f64;
        Outcome::Open {
            estimate: wc * area,
            bound: local.len() as f64 * area,
        }
    }

    /// Exact integral when every edge meeting the cell is a full chord of the
    /// same straight line.
    fn single_line_cell(&self, x0: f64, y0: f64, size: f64, local: &[u32]) -> Option<f64> {
        let inside = |p: Point2| p.x >= x0 && p.x <= x0 + size && p.y >= y0 && p.y <= y0 + size;
        let (la, lb) = self.edges[local[0] as usize];
        let dir = lb - la;
        let dn = dir.norm();
        let line_tol = 1e-13 * self.scale.max(dn);
        for &e in local {
            let (a, b) = self.edges[e as usize];
            if inside(a) || inside(b) {
                return None;
            }
            if dir.cross(a - la).abs() > line_tol * dn || dir.cross(b - la).abs() > line_tol * dn {
                return None;
            }
        }
        let corners = [
            Point2::new(x0, y0),
            Point2::new(x0 + size, y0),
            Point2::new(x0 + size, y0 + size),
            Point2::new(x0, y0 + size),
        ];
        let side = |p: Point2| dir.cross(p - la);
        let reference = *corners
            .iter()
            .max_by(|p, q| side(**p).abs().total_cmp(&side(**q).abs()))
            .unwrap();
        let ref_side = side(reference).signum();
        let w_ref = winding_raw(self.edges, reference);
        // Crossing from the left of an edge to its right lowers w by one.
        let mut w_other = w_ref;
        for &e in local {
            let (a, b) = self.edges[e as usize];
            let left = (b - a).cross(reference - a) > 0.0;
            w_other += if left { -1 } else { 1 };
        }
        let area_ref = clipped_area(&corners, |p| side(p) * ref_side);
        let area = size * size;
        let area_ref = area_ref.clamp(0.0, area);
        Some(w_ref.unsigned_abs() as f64 * area_ref + w_other.unsigned_abs() as f64 * (area - area_ref))
    }
}

/// Area of the part of a convex polygon where `f ≥ 0` (`f` affine).
fn clipped_area(poly: &[Point2], f: impl Fn(Point2) -> f64) -> f64 {
    let n = poly.len();
    let mut out: Vec<Point2> = Vec::with_capacity(n + 2);
    for i in 0..n {
        let p = poly[i];
        let q = poly[(i + 1) % n];
        let fp = f(p);
        let fq = f(q);
        if fp >= 0.0 {
            out.push(p);
        }
        if (fp >= 0.0) != (fq >= 0.0) {
            let t = fp / (fp - fq);
            out.push(p.lerp(q, t));
        }
    }
    let m = out.len();
    if m < 3 {
        return 0.0;
    }
    0.5 * (0..m).map(|i| out[i].cross(out[(i + 1) % m])).sum::<f64>().abs()
}

/// Liang–Barsky clip of segment `ab` to the closed square; returns the
/// parameter interval inside.
fn clip_segment(a: Point2, b: Point2, x0: f64, y0: f64, size: f64) -> Option<(f64, f64)> {
    let d = b - a;
    let mut t0 = 0.0f64;
    let mut t1 = 1.0f64;
    let checks = [
        (-d.x, a.x - x0),
        (d.x, x0 + size - a.x),
        (-d.y, a.y - y0),
        (d.y, y0 + size - a.y),
    ];
    for (p, q) in checks {
        if p == 0.0 {
            if q < 0.0 {
                return None;
            }
        } else {
            let r = q / p;
            if p < 0.0 {
                if r > t1 {
                    return None;
                }
                t0 = t0.max(r);
            } else {
                if r < t0 {
                    return None;
                }
                t1 = t1.min(r);
            }
        }
    }
    Some((t0, t1))
}
