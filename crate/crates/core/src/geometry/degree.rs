//! Degree of a sampled circle map around a point, by angle lifting.

use std::f64::consts::{PI, TAU};

use super::{GeometryError, Point2, SampledCircleMap};

const ORIGIN_TOL: f64 = 1e-9;

/// Total lifted angle of `map` around `origin`, divided by 2π.
///
/// Each consecutive increment (including the closing one) must be below π in
/// magnitude; otherwise the lift is ambiguous and the caller should resample.
pub fn circle_map_degree(map: &SampledCircleMap, origin: Point2) -> Result<i64, GeometryError> {
    let rel: Vec<Point2> = map.values().map(|p| p - origin).collect();
    for (i, p) in rel.iter().enumerate() {
        if p.norm() < ORIGIN_TOL {
            return Err(GeometryError::OriginHit { index: i });
        }
    }
    let n = rel.len();
    let mut total = 0.0;
    for i in 0..n {
        let a = rel[i];
        let b = rel[(i + 1) % n];
        let inc = a.cross(b).atan2(a.dot(b));
        if inc.abs() >= PI * (1.0 - 1e-12) {
            return Err(GeometryError::Ambiguous {
                index: i,
                increment: inc,
            });
        }
        total += inc;
    }
    Ok((total / TAU).round() as i64)
}
