//! Structural checks of the jump network.

use std::f64::consts::TAU;
use std::fmt;

use serde::Serialize;

use crate::geometry::{point_segment_distance, segment_intersection, Point2, RegionSpec};

use super::PiecewiseMapScene;

const POINT_TOL: f64 = 1e-9;
const TRANSVERSALITY_WARN: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    OffJunctionIntersection { curves: (usize, usize), at: Point2 },
    SelfIntersection { curve: usize, at: Point2 },
    DanglingEndpoint { curve: usize, at: Point2 },
    TooFewSectors { junction: usize, count: usize },
    AngleSum { junction: usize, sum: f64 },
    NonPositiveAngle { junction: usize, sector: usize },
    IncidenceMismatch { junction: usize, declared: usize, found: usize },
    Coverage { regions_area: f64, domain_area: f64 },
    Structure { message: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::OffJunctionIntersection { curves, at } => {
                write!(f, "curves intersect off-junction: curves {} and {} meet at {at}", curves.0, curves.1)
            }
            Violation::SelfIntersection { curve, at } => {
                write!(f, "curve {curve} is not injective: self-intersection at {at}")
            }
            Violation::DanglingEndpoint { curve, at } => {
                write!(f, "curve {curve} ends at {at}, which is neither a junction nor on the domain boundary")
            }
            Violation::TooFewSectors { junction, count } => {
                write!(f, "N_i < 3: junction {junction} declares {count} sectors")
            }
            Violation::AngleSum { junction, sum } => {
                write!(f, "junction {junction}: sector angles sum to {sum}, not 2π")
            }
            Violation::NonPositiveAngle { junction, sector } => {
                write!(f, "junction {junction}: sector {sector} angle outside (0, 2π)")
            }
            Violation::IncidenceMismatch {
                junction,
                declared,
                found,
            } => write!(f, "junction {junction}: {declared} sectors declared but {found} incident curve ends"),
            Violation::Coverage {
                regions_area,
                domain_area,
            } => write!(f, "regions cover area {regions_area}, domain has area {domain_area}"),
            Violation::Structure { message } => write!(f, "{message}"),
        }
    }
}

/// Outcome of [`PiecewiseMapScene::validate_network`].
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub failures: Vec<Violation>,
    pub warnings: Vec<String>,
    pub junctions: usize,
    pub sectors: Vec<usize>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn summary(&self) -> String {
        if self.passed() {
            format!("pass ({} junctions)", self.junctions)
        } else {
            let msgs: Vec<String> = self.failures.iter().map(|v| v.to_string()).collect();
            format!("fail: {}", msgs.join("; "))
        }
    }
}

/// Distance from `p` to the boundary of a region.
pub(crate) fn boundary_distance(domain: &RegionSpec, p: Point2) -> f64 {
    match domain {
        RegionSpec::Disk { center, radius } => (p.dist(*center) - radius).abs(),
        RegionSpec::Polygon { vertices } => {
            let n = vertices.len();
            (0..n)
                .map(|i| point_segment_distance(p, vertices[i], vertices[(i + 1) % n]))
                .fold(f64::INFINITY, f64::min)
        }
        other => {
            let v = other.boundary_polygon(4096);
            let n = v.len();
            (0..n)
                .map(|i| point_segment_distance(p, v[i], v[(i + 1) % n]))
                .fold(f64::INFINITY, f64::min)
        }
    }
}

/// Outward unit normal of the boundary nearest to `p`.
fn boundary_normal(domain: &RegionSpec, p: Point2) -> Point2 {
    match domain {
        RegionSpec::Disk { center, .. } => {
            let d = p - *center;
            d * (1.0 / d.norm())
        }
        other => {
            let v = other.boundary_polygon(4096);
            let n = v.len();
            let i = (0..n)
                .min_by(|&i, &j| {
                    point_segment_distance(p, v[i], v[(i + 1) % n])
                        .total_cmp(&point_segment_distance(p, v[j], v[(j + 1) % n]))
                })
                .unwrap();
            let e = v[(i + 1) % n] - v[i];
            // boundary polygons are counterclockwise
            Point2::new(e.y, -e.x) * (1.0 / e.norm())
        }
    }
}

impl PiecewiseMapScene {
    /// Checks that the jump set is a network whose curves meet only at
    /// declared junctions and end at junctions or on ∂Ω.
    pub fn validate_network(&self) -> ValidationReport {
        let mut rep = ValidationReport {
            junctions: self.junctions.len(),
            sectors: self.junctions.iter().map(|j| j.sector_values.len()).collect(),
            ..Default::default()
        };
        if let Err(e) = self.check_structure() {
            rep.failures.push(Violation::Structure { message: e.to_string() });
            return rep;
        }
        let at_junction = |p: Point2| self.junctions.iter().any(|j| j.point.dist(p) <= POINT_TOL);
        let on_boundary = |p: Point2| boundary_distance(&self.domain, p) <= POINT_TOL;

        // junction data
        for (i, j) in self.junctions.iter().enumerate() {
            let n = j.sector_values.len();
            if n < 3 {
                rep.failures.push(Violation::TooFewSectors { junction: i, count: n });
            }
            for (k, a) in j.sector_angles.iter().enumerate() {
                if !(*a > 0.0 && *a < TAU) {
                    rep.failures.push(Violation::NonPositiveAngle { junction: i, sector: k });
                }
            }
            let sum: f64 = j.sector_angles.iter().sum();
            if (sum - TAU).abs() > 1e-9 {
                rep.failures.push(Violation::AngleSum { junction: i, sum });
            }
            let mut found = 0;
            for c in &self.jump_curves {
                let (s, e) = (c.curve.start_point(), c.curve.end_point());
                found += (s.dist(j.point) <= POINT_TOL) as usize + (e.dist(j.point) <= POINT_TOL) as usize;
                if s.dist(j.point) > POINT_TOL
                    && e.dist(j.point) > POINT_TOL
                    && c.curve.distance(j.point) <= POINT_TOL
                {
                    found += 2;
                }
            }
            if found != n {
                rep.failures.push(Violation::IncidenceMismatch {
                    junction: i,
                    declared: n,
                    found,
                });
            }
            if found == n && n >= 3 {
                if let Some(w) = self.junction_declaration_mismatch(i) {
                    rep.warnings.push(w);
                }
            }
        }

        // endpoints and transversality
        for (l, c) in self.jump_curves.iter().enumerate() {
            let (d0, d1) = c.curve.outgoing_directions();
            for (p, dir) in [(c.curve.start_point(), d0), (c.curve.end_point(), d1)] {
                if at_junction(p) {
                    continue;
                }
                if on_boundary(p) {
                    let n = boundary_normal(&self.domain, p);
                    let angle = dir.dot(n).abs().clamp(0.0, 1.0).asin();
                    if angle < TRANSVERSALITY_WARN {
                        rep.warnings.push(format!(
                            "curve {l} meets the boundary at {p} at angle {angle:.2e} rad (below {TRANSVERSALITY_WARN:e})"
                        ));
                    }
                } else {
                    rep.failures.push(Violation::DanglingEndpoint { curve: l, at: p });
                }
            }
        }

        // intersections
        let polys: Vec<Vec<Point2>> = self.jump_curves.iter().map(|c| c.curve.polyline(256)).collect();
        let shared_boundary_end = |p: Point2, l: usize, m: usize| {
            let is_end = |k: usize| {
                let c = &self.jump_curves[k].curve;
                c.start_point().dist(p) <= POINT_TOL || c.end_point().dist(p) <= POINT_TOL
            };
            on_boundary(p) && is_end(l) && is_end(m)
        };
        for l in 0..polys.len() {
            for m in l + 1..polys.len() {
                if let Some(at) = first_bad_crossing(&polys[l], &polys[m], |p| {
                    at_junction(p) || shared_boundary_end(p, l, m)
                }) {
                    rep.failures.push(Violation::OffJunctionIntersection { curves: (l, m), at });
                }
            }
            let p = &polys[l];
            'outer: for i in 0..p.len().saturating_sub(1) {
                for k in i + 2..p.len() - 1 {
                    if let Some((t, _)) = segment_intersection(p[i], p[i + 1], p[k], p[k + 1]) {
                        rep.failures.push(Violation::SelfIntersection {
                            curve: l,
                            at: p[i].lerp(p[i + 1], t),
                        });
                        break 'outer;
                    }
                }
            }
        }

        // coverage
        let domain_area = self.domain.area();
        let regions_area = self.region_area();
        if (domain_area - regions_area).abs() > 1e-9 * domain_area.max(1.0) {
            rep.failures.push(Violation::Coverage {
                regions_area,
                domain_area,
            });
        }
        rep
    }

    fn junction_declaration_mismatch(&self, i: usize) -> Option<String> {
        let j = &self.junctions[i];
        let limit = self.junction_limit(i, self.junction_radius(i)).ok()?;
        let declared = crate::geometry::PiecewiseConstantCircle::new(
            j.start_angle,
            j.sector_angles.clone(),
            j.sector_values.clone(),
        )
        .ok()?;
        // compare at the middle of each computed sector
        let angles = limit.jump_angles();
        for (k, a) in angles.iter().enumerate() {
            let mid = a + 0.5 * limit.arcs[k];
            if declared.value_at(mid).dist(limit.values[k]) > 1e-6 {
                return Some(format!(
                    "junction {i}: declared sector data disagree with the region values near angle {mid:.4}"
                ));
            }
        }
        None
    }
}

fn first_bad_crossing(p: &[Point2], q: &[Point2], allowed: impl Fn(Point2) -> bool) -> Option<Point2> {
    for a in p.windows(2) {
        for b in q.windows(2) {
            if let Some((t, _)) = segment_intersection(a[0], a[1], b[0], b[1]) {
                let x = a[0].lerp(a[1], t);
                if !allowed(x) {
                    return Some(x);
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::PiecewiseConstantCircle;
    use crate::scene::{infinite_triple_point_scene, n_uple_scene, JumpCurve, SourceCurve};

    fn triple() -> PiecewiseMapScene {
        let g = PiecewiseConstantCircle::uniform(vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(0.0, 1.0),
        ])
        .unwrap();
        n_uple_scene(&g, Point2::ORIGIN, 1.0)
    }

    #[test]
    fn triple_point_passes() {
        let r = triple().validate_network();
        assert!(r.passed(), "{}", r.summary());
        assert_eq!(r.junctions, 1);
        assert_eq!(r.sectors, vec![3]);
        assert!(r.warnings.is_empty(), "{:?}", r.warnings);
    }

    #[test]
    fn infinite_triple_truncation_passes() {
        let (s, _) = infinite_triple_point_scene(
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(0.0, 1.0),
            4,
        );
        let r = s.validate_network();
        assert!(r.passed(), "{}", r.summary());
        assert!(r.warnings.is_empty(), "{:?}", r.warnings);
    }

    #[test]
    fn crossing_segments_fail() {
        let mut s = crate::scene::straight_jump_scene(0.0, 1.0, Point2::new(1.0, 0.0), Point2::ORIGIN);
        s.jump_curves.push(JumpCurve::new(SourceCurve::segment(
            Point2::new(0.5, -1.0),
            Point2::new(0.5, 1.0),
        )));
        let r = s.validate_network();
        assert!(!r.passed());
        assert!(r.summary().contains("curves intersect off-junction"));
    }

    #[test]
    fn two_sector_junction_fails() {
        let mut s = triple();
        s.junctions[0].sector_values.truncate(2);
        s.junctions[0].sector_angles = vec![TAU / 2.0; 2];
        let r = s.validate_network();
        assert!(r.summary().contains("N_i < 3"), "{}", r.summary());
    }

    #[test]
    fn tangential_exit_warns() {
        let mut s = crate::scene::straight_jump_scene(0.0, 1.0, Point2::new(1.0, 0.0), Point2::ORIGIN);
        // runs along the top edge
        s.jump_curves.push(JumpCurve::new(SourceCurve::segment(
            Point2::new(0.0, 1.0),
            Point2::new(1.0, 1.0),
        )));
        let r = s.validate_network();
        assert!(r.warnings.iter().any(|w| w.contains("angle")), "{:?}", r.warnings);
    }
}
