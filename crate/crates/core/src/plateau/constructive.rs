//! Explicit competitor for two-petal bouquets `a b ā b̄`.
//!
//! Outer annulus: both occurrences of the smaller petal are coned down to the
//! shared vertex `c` (image area twice the smaller petal, with opposite
//! signs), while the larger petal stays fixed along rays. What is left on the
//! inner circle is the larger petal followed by its reverse, which the inner
//! disk retracts along the petal itself: a truncation parameter `T` steps
//! from corner to corner of the petal, one ring at a time, so every inner
//! triangle lands on a single edge and has zero Jacobian.

use std::sync::Arc;

use crate::geometry::{BoundaryLoop, Point2};

use super::closed_form::bouquet;
use super::mesh::{loop_slots, DiscreteMap, DiskMesh};

/// Piecewise affine competitor for a recognized bouquet, `None` for other
/// loops or when the mesh has too few rings for the retraction.
pub fn bouquet_competitor(lp: &BoundaryLoop, n_rings: usize, n_angular: usize) -> Option<DiscreteMap> {
    let b = bouquet(lp)?;
    let (angles, phi, vslot) = loop_slots(&b.lp, n_angular);
    let m = angles.len();
    let c = b.center;
    let start = |k: usize| vslot[b.run_starts[k % 4]];
    let end = |k: usize| if k % 4 == 3 { m } else { start(k + 1) };
    let run_of = |s: usize| (0..4).find(|&k| s >= start(k) && s < end(k)).expect("slot in a run");

    let small = if b.areas[0] <= b.areas[1] { 0 } else { 1 };
    let occ1 = 1 - small;
    let (gap, occ2, other_gap) = (occ1 + 1, occ1 + 2, (occ1 + 3) % 4);

    // the larger petal as traversed by its first occurrence, by arc length
    let mut path: Vec<Point2> = phi[start(occ1)..end(occ1)].to_vec();
    path.push(c);
    let mut tau = vec![0.0];
    for w in path.windows(2) {
        tau.push(tau.last().unwrap() + w[0].dist(w[1]));
    }
    let length = *tau.last().unwrap();
    let mut corners: Vec<f64> = (0..path.len())
        .filter(|&i| i == path.len() - 1 || vslot.contains(&(start(occ1) + i)))
        .map(|i| tau[i])
        .collect();
    corners.dedup();
    let q = corners.len() - 1;
    let eval = |t: f64| -> Point2 {
        let t = t.clamp(0.0, length);
        let i = tau.partition_point(|&x| x <= t).clamp(1, tau.len() - 1) - 1;
        let span = tau[i + 1] - tau[i];
        if span == 0.0 {
            path[i]
        } else {
            path[i].lerp(path[i + 1], (t - tau[i]) / span)
        }
    };
    // arc-length position of each slot inside its own run
    let mut pos = vec![0.0; m];
    for k in 0..4 {
        let mut acc = 0.0;
        for s in start(k)..end(k) {
            if s > start(k) {
                acc += phi[s - 1].dist(phi[s]);
            }
            pos[s] = acc;
        }
    }

    let n_rings = n_rings.max(2);
    let j1 = q.max(n_rings / 2);
    if j1 >= n_rings {
        return None;
    }
    let truncation = |j: usize| -> f64 {
        let i = j1 - j;
        if i <= q {
            corners[q - i]
        } else {
            0.0
        }
    };
    let mesh = Arc::new(DiskMesh::polar(n_rings, angles));
    let values = (0..mesh.vertices.len())
        .map(|v| {
            let (j, k) = mesh.ring_slot(v);
            if j == 0 {
                return c;
            }
            let run = run_of(k);
            if j >= j1 {
                let s = (j - j1) as f64 / (n_rings - j1) as f64;
                if run % 2 == small {
                    c + (phi[k] - c) * s
                } else {
                    phi[k]
                }
            } else {
                let t = truncation(j);
                match run {
                    r if r == occ1 => eval(pos[k].min(t)),
                    r if r == occ2 => eval((length - pos[k]).min(t)),
                    r if r == gap => eval(t),
                    r if r == other_gap => c,
                    _ => unreachable!(),
                }
            }
        })
        .collect();
    Some(DiscreteMap::new(mesh, values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plateau::discrete_jacobian_mass;

    fn lp(v: &[(f64, f64)]) -> BoundaryLoop {
        BoundaryLoop::new(v.iter().map(|&(x, y)| Point2::new(x, y)).collect()).unwrap()
    }

    #[test]
    fn double_eight_mass_is_twice_smaller_petal() {
        let (a1, a2, a3, a4, a5) = ((0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (-2.0, 0.0), (-2.0, -2.0));
        let w = lp(&[a1, a2, a3, a1, a4, a5, a1, a3, a2, a1, a5, a4]);
        let map = bouquet_competitor(&w, 24, 96).unwrap();
        let mass = discrete_jacobian_mass(&map).unwrap();
        assert!((mass - 1.0).abs() < 1e-12, "{mass}");
        // boundary reproduces the loop
        for &b in &map.mesh.boundary {
            let p = map.values[b];
            assert!(w.edges().any(|(a, c)| crate::geometry::point_segment_distance(p, a, c) < 1e-12));
        }
        // rotated start, larger petal first
        let w2 = lp(&[a1, a4, a5, a1, a3, a2, a1, a5, a4, a1, a2, a3]);
        let mass2 = discrete_jacobian_mass(&bouquet_competitor(&w2, 24, 96).unwrap()).unwrap();
        assert!((mass2 - 1.0).abs() < 1e-12, "{mass2}");
    }

    #[test]
    fn quadrilateral_petals() {
        let c = (0.0, 0.0);
        let p = [(1.0, 0.0), (2.0, 1.0), (1.0, 2.0)]; // area 2 kite-ish
        let q = [(-1.0, 0.0), (-1.0, -1.0), (0.0, -1.0)]; // unit square corner
        let pa = crate::geometry::polygon_signed_area(&[Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(2.0, 1.0), Point2::new(1.0, 2.0)]).abs();
        let w = lp(&[c, p[0], p[1], p[2], c, q[0], q[1], q[2], c, p[2], p[1], p[0], c, q[2], q[1], q[0]]);
        let mass = discrete_jacobian_mass(&bouquet_competitor(&w, 16, 64).unwrap()).unwrap();
        assert!((mass - 2.0 * pa.min(1.0)).abs() < 1e-12, "{mass}");
    }

    #[test]
    fn not_a_bouquet() {
        assert!(bouquet_competitor(&lp(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]), 8, 32).is_none());
    }
}
