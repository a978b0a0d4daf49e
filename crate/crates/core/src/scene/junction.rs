//! Circular slices around junction points and their limits as ρ → 0.

use std::f64::consts::TAU;

use crate::geometry::{PiecewiseConstantCircle, Point2, SampledCircleMap};

use super::{PiecewiseMapScene, PlanarMap, SceneError};

pub const DEFAULT_TRACE_SAMPLES: usize = 256;
const POINT_TOL: f64 = 1e-9;

/// `u(p + ρν)` sampled on the circle, plus the limiting piecewise constant
/// datum γ^i.
#[derive(Clone, Debug, PartialEq)]
pub struct JunctionTrace {
    pub rho: f64,
    pub samples: SampledCircleMap,
    pub limit: PiecewiseConstantCircle,
}

impl PiecewiseMapScene {
    fn incident_directions(&self, i: usize) -> Result<(Vec<usize>, Vec<f64>), SceneError> {
        let p = self.junctions.get(i).ok_or(SceneError::NoJunction(i))?.point;
        let mut curves = Vec::new();
        let mut dirs = Vec::new();
        for (l, c) in self.jump_curves.iter().enumerate() {
            let (d0, d1) = c.curve.outgoing_directions();
            let mut hit = false;
            if c.curve.start_point().dist(p) <= POINT_TOL {
                dirs.push(d0.angle().rem_euclid(TAU));
                hit = true;
            }
            if c.curve.end_point().dist(p) <= POINT_TOL {
                dirs.push(d1.angle().rem_euclid(TAU));
                hit = true;
            }
            if !hit && c.curve.distance(p) <= POINT_TOL {
                return Err(SceneError::Invalid(format!(
                    "curve {l} passes through junction {i}; split it there"
                )));
            }
            if hit {
                curves.push(l);
            }
        }
        dirs.sort_by(f64::total_cmp);
        Ok((curves, dirs))
    }

    /// Largest convenient radius: half the distance to anything that is not
    /// incident to junction `i` (other curves, other junctions, ∂Ω), capped at 1.
    pub fn junction_radius(&self, i: usize) -> f64 {
        let Some(j) = self.junctions.get(i) else {
            return 0.0;
        };
        let p = j.point;
        let incident = self.incident_directions(i).map(|x| x.0).unwrap_or_default();
        let mut d = super::validate::boundary_distance(&self.domain, p).min(1.0);
        for (l, c) in self.jump_curves.iter().enumerate() {
            if !incident.contains(&l) {
                d = d.min(c.curve.distance(p));
            }
        }
        for (k, o) in self.junctions.iter().enumerate() {
            if k != i {
                d = d.min(o.point.dist(p));
            }
        }
        0.5 * d
    }

    /// The piecewise constant limit of `u(p_i + ρν)` as ρ → 0; sector
    /// boundaries are the tangent directions of the incident curves. Closed
    /// form for constant/affine regions, Richardson extrapolation over
    /// `ρ, ρ/2, ρ/4` otherwise.
    pub fn junction_limit(&self, i: usize, rho: f64) -> Result<PiecewiseConstantCircle, SceneError> {
        let p = self.junctions.get(i).ok_or(SceneError::NoJunction(i))?.point;
        let (_, dirs) = self.incident_directions(i)?;
        if dirs.is_empty() {
            let v = self.try_eval(p + Point2::new(0.5 * rho, 0.0))?;
            return Ok(PiecewiseConstantCircle::constant(v));
        }
        let n = dirs.len();
        let mut arcs = Vec::with_capacity(n);
        let mut values = Vec::with_capacity(n);
        for k in 0..n {
            let a0 = dirs[k];
            let mut a1 = if k + 1 < n { dirs[k + 1] } else { dirs[0] + TAU };
            if n == 1 {
                a1 = a0 + TAU;
            }
            let mid = 0.5 * (a0 + a1);
            let nu = Point2::polar(1.0, mid);
            let probe = p + nu * (0.5 * rho);
            let region = self.region_at(probe).ok_or(SceneError::NoRegion(probe))?;
            let map = &self.regions[region].map;
            let value = if map.is_closed_form() {
                map.eval(p)
            } else {
                let f = |h: f64| map.eval(p + nu * h);
                f(rho) * (1.0 / 3.0) - f(0.5 * rho) * 2.0 + f(0.25 * rho) * (8.0 / 3.0)
            };
            arcs.push(a1 - a0);
            values.push(value);
        }
        // make the arcs sum to 2π exactly up to rounding
        let total: f64 = arcs.iter().sum();
        let fix = TAU - total;
        arcs[n - 1] += fix;
        Ok(PiecewiseConstantCircle::new(dirs[0], arcs, values)?)
    }

    /// Samples `u` on `∂B_ρ(p_i)` and records the limit datum.
    pub fn junction_trace(&self, i: usize, rho: f64, n_samples: usize) -> Result<JunctionTrace, SceneError> {
        let p = self.junctions.get(i).ok_or(SceneError::NoJunction(i))?.point;
        let (incident, _) = self.incident_directions(i)?;
        for (l, c) in self.jump_curves.iter().enumerate() {
            if !incident.contains(&l) && c.curve.distance(p) < rho {
                return Err(SceneError::BallTooLarge {
                    junction: i,
                    rho,
                    curve: l,
                });
            }
        }
        let n = n_samples.max(SampledCircleMap::MIN_SAMPLES);
        let mut samples = Vec::with_capacity(n);
        for k in 0..n {
            let a = TAU * k as f64 / n as f64;
            let q = p + Point2::polar(rho, a);
            let v = self.eval(q);
            if !v.is_finite() {
                return Err(SceneError::NoRegion(q));
            }
            samples.push((a, v));
        }
        Ok(JunctionTrace {
            rho,
            samples: SampledCircleMap::new(samples)?,
            limit: self.junction_limit(i, rho)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Mat2, RegionSpec};
    use crate::scene::{n_uple_scene, Region, RegionMapSpec};

    fn values() -> Vec<Point2> {
        vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(0.0, 1.0)]
    }

    #[test]
    fn triple_point_limit() {
        let g = PiecewiseConstantCircle::uniform(values()).unwrap();
        let s = n_uple_scene(&g, Point2::ORIGIN, 1.0);
        for rho in [0.9, 0.3, 0.01] {
            let tr = s.junction_trace(0, rho, 64).unwrap();
            assert_eq!(tr.limit.values, values());
            for (k, arc) in tr.limit.arcs.iter().enumerate() {
                assert!((*arc - TAU / 3.0).abs() < 1e-12, "arc {k}");
            }
        }
    }

    fn affine_scene(callable: bool) -> (PiecewiseMapScene, Vec<Point2>) {
        let p = Point2::new(0.2, -0.1);
        let mut g = PiecewiseConstantCircle::uniform(values()).unwrap();
        g.start_angle = 0.3;
        let mut s = n_uple_scene(&g, p, 1.0);
        let mats = [
            Mat2::new(1.0, 2.0, 0.0, -1.0),
            Mat2::new(0.5, 0.0, 3.0, 1.0),
            Mat2::IDENTITY,
        ];
        let mut expect = Vec::new();
        for (k, r) in s.regions.iter_mut().enumerate() {
            let b = values()[k];
            let a = mats[k];
            expect.push(a.apply(p) + b);
            r.map = if callable {
                // Lipschitz perturbation vanishing quadratically at p
                RegionMapSpec::callable("perturbed", move |x| {
                    let d = x - p;
                    a.apply(x) + b + Point2::new(d.norm_sq(), -0.5 * d.norm_sq())
                })
            } else {
                RegionMapSpec::affine(a, b)
            };
        }
        (s, expect)
    }

    #[test]
    fn affine_limits_are_exact() {
        let (s, expect) = affine_scene(false);
        for rho in [0.5, 0.05] {
            let lim = s.junction_limit(0, rho).unwrap();
            assert_eq!(lim.values, expect);
        }
    }

    #[test]
    fn callable_limits_by_extrapolation() {
        let (s, expect) = affine_scene(true);
        let lim = s.junction_limit(0, 0.4).unwrap();
        let half = s.junction_limit(0, 0.2).unwrap();
        for k in 0..3 {
            assert!(lim.values[k].dist(expect[k]) < 1e-6, "{k}: {:?}", lim.values[k]);
            assert!(lim.values[k].dist(half.values[k]) < 1e-6);
        }
    }

    #[test]
    fn ball_too_large() {
        let mut s = n_uple_scene(&PiecewiseConstantCircle::uniform(values()).unwrap(), Point2::ORIGIN, 1.0);
        s.regions.push(Region::new(RegionSpec::disk(Point2::new(5.0, 0.0), 0.1), RegionMapSpec::constant(Point2::ORIGIN)));
        s.jump_curves.push(crate::scene::JumpCurve::new(crate::scene::SourceCurve::segment(
            Point2::new(0.5, 0.5),
            Point2::new(0.6, 0.6),
        )));
        assert!(matches!(s.junction_trace(0, 0.9, 32), Err(SceneError::BallTooLarge { curve: 3, .. })));
        assert!(s.junction_trace(0, 0.5, 32).is_ok());
    }
}
