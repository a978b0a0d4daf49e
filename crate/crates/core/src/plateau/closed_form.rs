//! Loop classes whose Plateau value is known exactly.

use serde::{Deserialize, Serialize};

use crate::geometry::{polygon_winding, segment_intersection, BoundaryLoop, Point2};

/// Shared-vertex snapping radius for bouquets.
pub const SNAP_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ClosedFormClass {
    /// Point or collinear loop.
    Degenerate,
    /// Simple polygon.
    Jordan,
    /// d-fold coherent traversal of a simple polygon.
    MultipleCover { folds: usize },
    /// Two petals traversed as a commutator `a b ā b̄`.
    Bouquet,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosedForm {
    pub value: f64,
    pub class: ClosedFormClass,
}

/// Exact value for recognized loops, `None` otherwise.
pub fn plateau_closed_form(lp: &BoundaryLoop) -> Option<ClosedForm> {
    if lp.is_degenerate() {
        return Some(ClosedForm {
            value: 0.0,
            class: ClosedFormClass::Degenerate,
        });
    }
    let v = lp.vertices();
    if is_simple(v) {
        return Some(ClosedForm {
            value: lp.signed_area().abs(),
            class: ClosedFormClass::Jordan,
        });
    }
    let n = v.len();
    for m in 3..=n / 2 {
        if !n.is_multiple_of(m) || !(m..n).all(|i| v[i] == v[i % m]) {
            continue;
        }
        let base = &v[..m];
        if is_simple(base) {
            let folds = n / m;
            return Some(ClosedForm {
                value: folds as f64 * crate::geometry::polygon_signed_area(base).abs(),
                class: ClosedFormClass::MultipleCover { folds },
            });
        }
        break;
    }
    bouquet(lp).map(|b| ClosedForm {
        value: 2.0 * b.areas[0].min(b.areas[1]),
        class: ClosedFormClass::Bouquet,
    })
}

/// No two edges meet except consecutive ones at their shared vertex.
pub fn is_simple(v: &[Point2]) -> bool {
    let n = v.len();
    if n < 3 {
        return false;
    }
    if v.iter().enumerate().any(|(i, p)| v[i + 1..].contains(p)) {
        return false;
    }
    let edge = |i: usize| (v[i], v[(i + 1) % n]);
    for i in 0..n {
        let (a, b) = edge(i);
        // consecutive edges must not fold back onto each other
        let (_, c) = edge((i + 1) % n);
        let (d1, d2) = (b - a, c - b);
        if d1.cross(d2).abs() <= 1e-14 * d1.norm() * d2.norm() && d1.dot(d2) < 0.0 {
            return false;
        }
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let (c, d) = edge(j);
            if segment_intersection(a, b, c, d).is_some() {
                return false;
            }
        }
    }
    true
}

/// A loop `c → petal → c → petal → …` of four runs at the shared vertex `c`
/// forming the word `a b ā b̄` (up to rotation).
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Bouquet {
    /// The snapped loop, rotated to start at `center`.
    pub lp: BoundaryLoop,
    pub center: Point2,
    /// Vertex index where each run starts; run `k` ends where run `k + 1`
    /// starts (cyclically).
    pub run_starts: [usize; 4],
    /// Petal areas (runs 0/2 form petal 0, runs 1/3 petal 1).
    pub areas: [f64; 2],
}

pub(crate) fn bouquet(lp: &BoundaryLoop) -> Option<Bouquet> {
    let v = lp.vertices();
    // candidate center: the vertex with most visits (within the snap radius)
    let visits = |c: Point2| v.iter().filter(|p| p.dist(c) <= SNAP_TOL).count();
    let mut center = v[0];
    for &c in v {
        if visits(c) > visits(center) {
            center = c;
        }
    }
    if visits(center) != 4 {
        return None;
    }
    let snapped: Vec<Point2> = v
        .iter()
        .map(|&p| if p.dist(center) <= SNAP_TOL { center } else { p })
        .collect();
    let first = snapped.iter().position(|&p| p == center)?;
    let mut rotated = snapped[first..].to_vec();
    rotated.extend_from_slice(&snapped[..first]);
    let lp = BoundaryLoop::new(rotated).ok()?;
    let w = lp.vertices();
    let starts: Vec<usize> = (0..w.len()).filter(|&i| w[i] == center).collect();
    if starts.len() != 4 {
        return None;
    }
    let run = |k: usize| -> Vec<Point2> {
        let end = if k == 3 { w.len() } else { starts[k + 1] };
        w[starts[k]..end].to_vec()
    };
    let runs: Vec<Vec<Point2>> = (0..4).map(run).collect();
    if runs.iter().any(|r| r.len() < 3 || !is_simple(r)) {
        return None;
    }
    let reverse_of = |a: &[Point2], b: &[Point2]| {
        a.len() == b.len() && a[1..].iter().zip(b[1..].iter().rev()).all(|(p, q)| p.dist(*q) <= SNAP_TOL)
    };
    if !reverse_of(&runs[0], &runs[2]) || !reverse_of(&runs[1], &runs[3]) {
        return None;
    }
    if !petals_disjoint(&runs[0], &runs[1], center) {
        return None;
    }
    let area = |r: &[Point2]| crate::geometry::polygon_signed_area(r).abs();
    Some(Bouquet {
        center,
        run_starts: [starts[0], starts[1], starts[2], starts[3]],
        areas: [area(&runs[0]), area(&runs[1])],
        lp,
    })
}

/// The petals meet only at `c` and neither lies inside the other.
fn petals_disjoint(a: &[Point2], b: &[Point2], c: Point2) -> bool {
    let edges = |p: &[Point2]| -> Vec<(Point2, Point2)> { (0..p.len()).map(|i| (p[i], p[(i + 1) % p.len()])).collect() };
    let (ea, eb) = (edges(a), edges(b));
    for &(p, q) in &ea {
        for &(r, s) in &eb {
            if let Some((t, _)) = segment_intersection(p, q, r, s) {
                if p.lerp(q, t).dist(c) > SNAP_TOL {
                    return false;
                }
            }
        }
    }
    let outside = |probe: Point2, other: &[Point2]| {
        let lp = BoundaryLoop::new(other.to_vec()).expect("petal");
        matches!(polygon_winding(&lp, probe), Ok(0))
    };
    let probes = |p: &[Point2]| -> Vec<Point2> {
        let mut out: Vec<Point2> = p[1..].to_vec();
        out.push(c.lerp(p[1], 0.5));
        out.push(c.lerp(p[p.len() - 1], 0.5));
        out
    };
    probes(a).into_iter().all(|x| outside(x, b)) && probes(b).into_iter().all(|x| outside(x, a))
}
