//! Planar primitives: points, closed polygonal loops, sampled circle maps,
//! winding numbers, degree of circle maps and deterministic quadrature.

mod circle;
mod degree;
mod quadrature;
mod winding;

use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use circle::PiecewiseConstantCircle;
pub use degree::circle_map_degree;
pub(crate) use quadrature::polygon_signed_area;
pub use quadrature::{integrate_1d, quadrature_2d, quadrature_2d_detailed, QuadratureReport, RegionSpec};
pub use winding::{
    polygon_winding, winding_area_integral, winding_area_integral_detailed, WindingIntegral,
    TOL_EDGE,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("point ({x}, {y}) lies within {tol:e} of loop edge {edge}")]
    PointOnBoundary { x: f64, y: f64, edge: usize, tol: f64 },
    #[error("angular increment {increment:.4} rad at sample {index} is not below pi; resample more finely")]
    Ambiguous { index: usize, increment: f64 },
    #[error("sample {index} coincides with the origin")]
    OriginHit { index: usize },
    #[error("integrand returned a non-finite value at ({x}, {y})")]
    NonFinite { x: f64, y: f64 },
    #[error("invalid input: {0}")]
    Invalid(String),
}

/// A point (or vector) of the source or target plane.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    #[inline]
    pub fn polar(radius: f64, angle: f64) -> Self {
        Point2::new(radius * angle.cos(), radius * angle.sin())
    }

    #[inline]
    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// Scalar cross product `self ∧ other`.
    #[inline]
    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn dist(self, other: Point2) -> f64 {
        (self - other).norm()
    }

    /// Counterclockwise rotation by a right angle.
    #[inline]
    pub fn perp(self) -> Point2 {
        Point2::new(-self.y, self.x)
    }

    #[inline]
    pub fn lerp(self, other: Point2, s: f64) -> Point2 {
        self + (other - self) * s
    }

    #[inline]
    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl From<[f64; 2]> for Point2 {
    fn from(a: [f64; 2]) -> Self {
        Point2::new(a[0], a[1])
    }
}

impl From<Point2> for [f64; 2] {
    fn from(p: Point2) -> Self {
        [p.x, p.y]
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Add for Point2 {
    type Output = Point2;
    #[inline]
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Point2 {
    #[inline]
    fn add_assign(&mut self, o: Point2) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Point2 {
    type Output = Point2;
    #[inline]
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    #[inline]
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    #[inline]
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

/// A 2×2 real matrix stored row-major; the gradient of a planar map has the
/// gradients of the two components as rows.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[[f64; 2]; 2]", into = "[[f64; 2]; 2]")]
pub struct Mat2 {
    pub m: [[f64; 2]; 2],
}

impl Mat2 {
    pub const ZERO: Mat2 = Mat2 { m: [[0.0; 2]; 2] };
    pub const IDENTITY: Mat2 = Mat2 {
        m: [[1.0, 0.0], [0.0, 1.0]],
    };

    pub const fn new(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        Mat2 {
            m: [[a11, a12], [a21, a22]],
        }
    }

    pub fn diag(a: f64, b: f64) -> Self {
        Mat2::new(a, 0.0, 0.0, b)
    }

    /// Matrix whose columns are `c1` and `c2`.
    pub fn from_columns(c1: Point2, c2: Point2) -> Self {
        Mat2::new(c1.x, c2.x, c1.y, c2.y)
    }

    #[inline]
    pub fn det(&self) -> f64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    /// Frobenius norm, i.e. |∇u| with |∇u|² = |∇u₁|² + |∇u₂|².
    #[inline]
    pub fn frobenius(&self) -> f64 {
        let m = &self.m;
        (m[0][0] * m[0][0] + m[0][1] * m[0][1] + m[1][0] * m[1][0] + m[1][1] * m[1][1]).sqrt()
    }

    #[inline]
    pub fn apply(&self, p: Point2) -> Point2 {
        Point2::new(
            self.m[0][0] * p.x + self.m[0][1] * p.y,
            self.m[1][0] * p.x + self.m[1][1] * p.y,
        )
    }

    pub fn column(&self, j: usize) -> Point2 {
        Point2::new(self.m[0][j], self.m[1][j])
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().flatten().all(|v| v.is_finite())
    }

    /// Largest singular value.
    pub fn operator_norm(&self) -> f64 {
        let [[a, b], [c, d]] = self.m;
        0.5 * ((a + d).hypot(c - b) + (a - d).hypot(c + b))
    }
}

impl From<[[f64; 2]; 2]> for Mat2 {
    fn from(m: [[f64; 2]; 2]) -> Self {
        Mat2 { m }
    }
}

impl From<Mat2> for [[f64; 2]; 2] {
    fn from(m: Mat2) -> Self {
        m.m
    }
}

/// Closed polygonal loop in the target plane. The last vertex connects to the
/// first; repeated traversals appear as repeated vertex runs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryLoop {
    vertices: Vec<Point2>,
}

impl BoundaryLoop {
    /// Builds a loop, collapsing zero-length edges (including the closing one).
    pub fn new(vertices: Vec<Point2>) -> Result<Self, GeometryError> {
        if vertices.is_empty() {
            return Err(GeometryError::Invalid("loop needs at least one vertex".into()));
        }
        if let Some(p) = vertices.iter().find(|p| !p.is_finite()) {
            return Err(GeometryError::Invalid(format!("non-finite loop vertex {p}")));
        }
        let mut out: Vec<Point2> = Vec::with_capacity(vertices.len());
        for p in vertices {
            if out.last() != Some(&p) {
                out.push(p);
            }
        }
        while out.len() > 1 && out.first() == out.last() {
            out.pop();
        }
        Ok(BoundaryLoop { vertices: out })
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// A single point (all input vertices coincided).
    pub fn is_point(&self) -> bool {
        self.vertices.len() == 1
    }

    /// Directed edges `(v_i, v_{i+1})`, closing edge included.
    pub fn edges(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        let n = self.vertices.len();
        let count = if n < 2 { 0 } else { n };
        (0..count).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn length(&self) -> f64 {
        self.edges().map(|(a, b)| a.dist(b)).sum()
    }

    /// Signed (shoelace) area, equal to the integral of the winding number.
    pub fn signed_area(&self) -> f64 {
        0.5 * self.edges().map(|(a, b)| a.cross(b)).sum::<f64>()
    }

    pub fn centroid_of_vertices(&self) -> Point2 {
        let n = self.vertices.len() as f64;
        let s = self
            .vertices
            .iter()
            .fold(Point2::ORIGIN, |acc, &p| acc + p);
        s * (1.0 / n)
    }

    pub fn bounding_box(&self) -> (Point2, Point2) {
        let mut lo = Point2::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in &self.vertices {
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
        }
        (lo, hi)
    }

    pub fn reversed(&self) -> BoundaryLoop {
        let mut v = self.vertices.clone();
        v.reverse();
        BoundaryLoop { vertices: v }
    }

    pub fn map(&self, f: impl Fn(Point2) -> Point2) -> BoundaryLoop {
        BoundaryLoop::new(self.vertices.iter().map(|&p| f(p)).collect())
            .expect("mapped loop is non-empty")
    }

    /// The loop traversed `times` times in a row.
    pub fn repeated(&self, times: usize) -> BoundaryLoop {
        let mut v = Vec::with_capacity(self.vertices.len() * times);
        for _ in 0..times {
            v.extend_from_slice(&self.vertices);
        }
        BoundaryLoop { vertices: v }
    }

    /// All vertices lie on one straight line (or the loop is a point).
    pub fn is_degenerate(&self) -> bool {
        let scale = self
            .vertices
            .iter()
            .map(|p| p.dist(self.vertices[0]))
            .fold(0.0, f64::max);
        if scale == 0.0 {
            return true;
        }
        let far = *self
            .vertices
            .iter()
            .max_by(|a, b| a.dist(self.vertices[0]).total_cmp(&b.dist(self.vertices[0])))
            .unwrap();
        let dir = (far - self.vertices[0]) * (1.0 / scale);
        self.vertices
            .iter()
            .all(|&p| dir.cross(p - self.vertices[0]).abs() <= 1e-12 * scale)
    }

    /// Point at arc-length fraction `s ∈ [0, 1)` of a constant-speed
    /// parametrization starting at the first vertex.
    pub fn point_at_fraction(&self, s: f64) -> Point2 {
        if self.vertices.len() == 1 {
            return self.vertices[0];
        }
        let total = self.length();
        let mut target = s.rem_euclid(1.0) * total;
        for (a, b) in self.edges() {
            let l = a.dist(b);
            if target <= l {
                return if l > 0.0 { a.lerp(b, target / l) } else { a };
            }
            target -= l;
        }
        self.vertices[0]
    }
}

/// A map from the unit circle to the plane given by samples `(θ, φ(θ))`,
/// linearly interpolated in angle (cyclically).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(f64, Point2)>", into = "Vec<(f64, Point2)>")]
pub struct SampledCircleMap {
    samples: Vec<(f64, Point2)>,
}

impl SampledCircleMap {
    pub const MIN_SAMPLES: usize = 8;

    pub fn new(samples: Vec<(f64, Point2)>) -> Result<Self, GeometryError> {
        if samples.len() < Self::MIN_SAMPLES {
            return Err(GeometryError::Invalid(format!(
                "circle map needs at least {} samples, got {}",
                Self::MIN_SAMPLES,
                samples.len()
            )));
        }
        for (i, &(a, p)) in samples.iter().enumerate() {
            if !(0.0..TAU).contains(&a) || !p.is_finite() {
                return Err(GeometryError::Invalid(format!(
                    "sample {i}: angle {a} outside [0, 2π) or non-finite value"
                )));
            }
            if i > 0 && a <= samples[i - 1].0 {
                return Err(GeometryError::Invalid(format!(
                    "sample angles must be strictly increasing (index {i})"
                )));
            }
        }
        Ok(SampledCircleMap { samples })
    }

    /// Samples `f` at `n` equally spaced angles `2πk/n`.
    pub fn from_fn(n: usize, f: impl Fn(f64) -> Point2) -> Result<Self, GeometryError> {
        Self::new(
            (0..n)
                .map(|k| {
                    let a = TAU * k as f64 / n as f64;
                    (a, f(a))
                })
                .collect(),
        )
    }

    /// Constant-speed parametrization of a loop with `n` samples.
    pub fn from_loop(lp: &BoundaryLoop, n: usize) -> Result<Self, GeometryError> {
        Self::from_fn(n, |a| lp.point_at_fraction(a / TAU))
    }

    pub fn samples(&self) -> &[(f64, Point2)] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn values(&self) -> impl Iterator<Item = Point2> + '_ {
        self.samples.iter().map(|s| s.1)
    }

    /// Linear interpolation in angle, wrapping around 2π.
    pub fn eval(&self, angle: f64) -> Point2 {
        let a = angle.rem_euclid(TAU);
        let n = self.samples.len();
        let idx = self.samples.partition_point(|s| s.0 <= a);
        let (i0, i1) = if idx == 0 || idx == n {
            (n - 1, 0)
        } else {
            (idx - 1, idx)
        };
        let (a0, p0) = self.samples[i0];
        let (mut a1, p1) = self.samples[i1];
        let mut aa = a;
        if a1 <= a0 {
            a1 += TAU;
            if aa < a0 {
                aa += TAU;
            }
        }
        let gap = a1 - a0;
        if gap <= 0.0 {
            return p0;
        }
        p0.lerp(p1, (aa - a0) / gap)
    }

    /// The polygon through the sample values.
    pub fn to_loop(&self) -> BoundaryLoop {
        BoundaryLoop::new(self.values().collect()).expect("non-empty")
    }

    /// Total variation of the interpolated closed curve.
    pub fn total_variation(&self) -> f64 {
        let mut pts: Vec<Point2> = self.values().collect();
        pts.push(pts[0]);
        curve_tv(&pts)
    }
}

impl TryFrom<Vec<(f64, Point2)>> for SampledCircleMap {
    type Error = GeometryError;
    fn try_from(v: Vec<(f64, Point2)>) -> Result<Self, Self::Error> {
        SampledCircleMap::new(v)
    }
}

impl From<SampledCircleMap> for Vec<(f64, Point2)> {
    fn from(m: SampledCircleMap) -> Self {
        m.samples
    }
}

/// Sum of consecutive distances. Closed curves must repeat the first sample
/// at the end.
pub fn curve_tv(samples: &[Point2]) -> f64 {
    samples.windows(2).map(|w| w[0].dist(w[1])).sum()
}

/// Area of the triangle `abc`, positive when counterclockwise.
#[inline]
pub fn signed_triangle_area(a: Point2, b: Point2, c: Point2) -> f64 {
    0.5 * (b - a).cross(c - a)
}

/// Distance from `p` to the segment `[a, b]`.
pub fn point_segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let d = b - a;
    let l2 = d.norm_sq();
    if l2 == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(d) / l2).clamp(0.0, 1.0);
    p.dist(a + d * t)
}

/// Proper or improper intersection of the closed segments `[a, b]`, `[c, d]`.
/// Returns the intersection parameters on both segments when they meet in a
/// single point; collinear overlaps return the overlap's first point.
pub fn segment_intersection(a: Point2, b: Point2, c: Point2, d: Point2) -> Option<(f64, f64)> {
    let r = b - a;
    let s = d - c;
    let denom = r.cross(s);
    let qp = c - a;
    let scale = r.norm().max(s.norm()).max(1e-300);
    if denom.abs() <= 1e-14 * scale * scale {
        // parallel
        if qp.cross(r).abs() > 1e-12 * scale * scale {
            return None;
        }
        let rr = r.norm_sq();
        if rr == 0.0 {
            return if point_segment_distance(a, c, d) <= 1e-12 * scale {
                Some((0.0, 0.0))
            } else {
                None
            };
        }
        let t0 = qp.dot(r) / rr;
        let t1 = t0 + s.dot(r) / rr;
        let (lo, hi) = (t0.min(t1), t0.max(t1));
        if hi < 0.0 || lo > 1.0 {
            return None;
        }
        let t = lo.max(0.0);
        let u = if s.norm_sq() > 0.0 {
            ((a + r * t) - c).dot(s) / s.norm_sq()
        } else {
            0.0
        };
        return Some((t, u));
    }
    let t = qp.cross(s) / denom;
    let u = qp.cross(r) / denom;
    let eps = 1e-12;
    if (-eps..=1.0 + eps).contains(&t) && (-eps..=1.0 + eps).contains(&u) {
        Some((t.clamp(0.0, 1.0), u.clamp(0.0, 1.0)))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn curve_tv_examples() {
        let open = [Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(1.0, 1.0)];
        assert_abs_diff_eq!(curve_tv(&open), 2.0, epsilon = 1e-15);
        let p = Point2::new(0.3, -2.0);
        assert_eq!(curve_tv(&[p; 5]), 0.0);
        let tri = [
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(0.0, 1.0),
            Point2::new(0.0, 0.0),
        ];
        // 1 + √2 + 1 by hand
        assert_abs_diff_eq!(curve_tv(&tri), 2.0 + 2f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn loop_collapses_repeated_vertices() {
        let a = Point2::new(0.0, 0.0);
        let b = Point2::new(1.0, 0.0);
        let c = Point2::new(0.0, 1.0);
        let lp = BoundaryLoop::new(vec![a, a, b, b, c, a]).unwrap();
        assert_eq!(lp.vertices(), &[a, b, c]);
        assert!(BoundaryLoop::new(vec![a; 4]).unwrap().is_point());
        assert!(BoundaryLoop::new(vec![]).is_err());
    }

    #[test]
    fn circle_map_interpolates_cyclically() {
        let m = SampledCircleMap::from_fn(8, |a| Point2::new(a, 0.0)).unwrap();
        let last = m.samples()[7].0;
        let mid = 0.5 * (last + TAU);
        let v = m.eval(mid);
        // halfway between value `last` and value 0
        assert_abs_diff_eq!(v.x, 0.5 * last, epsilon = 1e-12);
        assert!(SampledCircleMap::from_fn(4, |_| Point2::ORIGIN).is_err());
    }

    #[test]
    fn operator_norm_of_diagonal() {
        assert_abs_diff_eq!(Mat2::diag(2.0, -3.0).operator_norm(), 3.0, epsilon = 1e-12);
    }

    #[test]
    fn point_at_fraction_walks_perimeter() {
        let sq = BoundaryLoop::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
        ])
        .unwrap();
        let p = sq.point_at_fraction(0.375);
        assert_abs_diff_eq!(p.x, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p.y, 0.5, epsilon = 1e-12);
    }
}
