//! Piecewise Lipschitz maps: a domain partitioned into regions, one map per
//! region, the jump network between them and its junction points.

mod builders;
mod curve;
mod io;
mod junction;
mod tv;
mod validate;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{GeometryError, Mat2, Point2, RegionSpec, SampledCircleMap};

pub use builders::{
    infinite_triple_point_scene, n_uple_scene, straight_jump_scene, straight_jump_scene_with,
    InfiniteTripleLayout,
};
pub use curve::{JumpCurve, SourceCurve, Trace};
pub use io::SCHEMA;
pub use junction::{JunctionTrace, DEFAULT_TRACE_SAMPLES};
pub use tv::{circular_slice_tv, TvParts};
pub(crate) use tv::integrate_along_curve;
pub use validate::{ValidationReport, Violation};

#[derive(Debug, Error)]
pub enum SceneError {
    #[error("malformed scene file at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported scene schema {found:?}; expected {expected:?}")]
    UnknownSchema { found: String, expected: &'static str },
    #[error("invalid scene: {0}")]
    Invalid(String),
    #[error("ball of radius {rho} around junction {junction} meets non-incident curve {curve}")]
    BallTooLarge { junction: usize, rho: f64, curve: usize },
    #[error("no region contains the point {0}")]
    NoRegion(Point2),
    #[error("junction index {0} out of range")]
    NoJunction(usize),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Anything that can be evaluated pointwise as a map ℝ² ⊃ Ω → ℝ².
pub trait PlanarMap {
    fn eval(&self, p: Point2) -> Point2;

    /// Gradient (rows = component gradients); central differences by default.
    fn gradient(&self, p: Point2) -> Mat2 {
        central_gradient(|q| self.eval(q), p, FD_STEP)
    }
}

/// Step of the central differences used for callable maps.
pub const FD_STEP: f64 = 1e-6;

pub fn central_gradient(f: impl Fn(Point2) -> Point2, p: Point2, h: f64) -> Mat2 {
    let dx = (f(p + Point2::new(h, 0.0)) - f(p - Point2::new(h, 0.0))) * (0.5 / h);
    let dy = (f(p + Point2::new(0.0, h)) - f(p - Point2::new(0.0, h))) * (0.5 / h);
    Mat2::from_columns(dx, dy)
}

impl<F: Fn(Point2) -> Point2> PlanarMap for F {
    fn eval(&self, p: Point2) -> Point2 {
        self(p)
    }
}

/// A programmatic map; not representable in scene files.
#[derive(Clone)]
pub struct CallableMap {
    pub label: String,
    pub func: Arc<dyn Fn(Point2) -> Point2 + Send + Sync>,
}

impl CallableMap {
    pub fn new(label: impl Into<String>, f: impl Fn(Point2) -> Point2 + Send + Sync + 'static) -> Self {
        CallableMap {
            label: label.into(),
            func: Arc::new(f),
        }
    }
}

impl fmt::Debug for CallableMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CallableMap({})", self.label)
    }
}

impl PartialEq for CallableMap {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.func, &other.func)
    }
}

/// The map on one region.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RegionMapSpec {
    Constant {
        value: Point2,
    },
    /// `u(x) = A x + b`.
    Affine {
        matrix: Mat2,
        offset: Point2,
    },
    /// `u(x) = φ((x − center)/|x − center|)`.
    RadialAngular {
        #[serde(default)]
        center: Point2,
        values: SampledCircleMap,
    },
    #[serde(skip)]
    Callable(CallableMap),
}

impl RegionMapSpec {
    pub fn constant(value: Point2) -> Self {
        RegionMapSpec::Constant { value }
    }

    pub fn affine(matrix: Mat2, offset: Point2) -> Self {
        RegionMapSpec::Affine { matrix, offset }
    }

    pub fn callable(label: impl Into<String>, f: impl Fn(Point2) -> Point2 + Send + Sync + 'static) -> Self {
        RegionMapSpec::Callable(CallableMap::new(label, f))
    }

    /// True when traces and limits can be taken in closed form.
    pub fn is_closed_form(&self) -> bool {
        matches!(self, RegionMapSpec::Constant { .. } | RegionMapSpec::Affine { .. })
    }

    pub fn check(&self) -> Result<(), String> {
        match self {
            RegionMapSpec::Constant { value } if !value.is_finite() => Err("non-finite constant".into()),
            RegionMapSpec::Affine { matrix, offset } if !matrix.is_finite() || !offset.is_finite() => {
                Err("non-finite affine map".into())
            }
            _ => Ok(()),
        }
    }
}

impl PlanarMap for RegionMapSpec {
    fn eval(&self, p: Point2) -> Point2 {
        match self {
            RegionMapSpec::Constant { value } => *value,
            RegionMapSpec::Affine { matrix, offset } => matrix.apply(p) + *offset,
            RegionMapSpec::RadialAngular { center, values } => values.eval((p - *center).angle()),
            RegionMapSpec::Callable(c) => (c.func)(p),
        }
    }

    fn gradient(&self, p: Point2) -> Mat2 {
        match self {
            RegionMapSpec::Constant { .. } => Mat2::ZERO,
            RegionMapSpec::Affine { matrix, .. } => *matrix,
            RegionMapSpec::RadialAngular { center, values } => {
                let rel = p - *center;
                let r = rel.norm();
                if r == 0.0 {
                    return Mat2::ZERO;
                }
                let theta = rel.angle();
                let dphi = angular_slope(values, theta);
                let e = Point2::new(-theta.sin(), theta.cos()) * (1.0 / r);
                Mat2::new(dphi.x * e.x, dphi.x * e.y, dphi.y * e.x, dphi.y * e.y)
            }
            RegionMapSpec::Callable(c) => central_gradient(|q| (c.func)(q), p, FD_STEP),
        }
    }
}

/// dφ/dθ of the piecewise linear interpolation.
pub(crate) fn angular_slope(m: &SampledCircleMap, theta: f64) -> Point2 {
    use std::f64::consts::TAU;
    let s = m.samples();
    let n = s.len();
    let a = theta.rem_euclid(TAU);
    let idx = s.partition_point(|x| x.0 <= a);
    let (i0, i1) = if idx == 0 || idx == n { (n - 1, 0) } else { (idx - 1, idx) };
    let mut gap = s[i1].0 - s[i0].0;
    if gap <= 0.0 {
        gap += TAU;
    }
    (s[i1].1 - s[i0].1) * (1.0 / gap)
}

/// One cell Ω_k of the partition with the map on it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub shape: RegionSpec,
    pub map: RegionMapSpec,
}

impl Region {
    pub fn new(shape: RegionSpec, map: RegionMapSpec) -> Self {
        Region { shape, map }
    }
}

/// A junction point with the counterclockwise sector data around it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Junction {
    pub point: Point2,
    pub sector_values: Vec<Point2>,
    pub sector_angles: Vec<f64>,
    /// Direction where the first sector begins (default: angle 0).
    #[serde(default)]
    pub start_angle: f64,
}

/// A piecewise Lipschitz map on a disk or polygon.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseMapScene {
    pub schema: String,
    pub domain: RegionSpec,
    pub regions: Vec<Region>,
    #[serde(default)]
    pub jump_curves: Vec<JumpCurve>,
    #[serde(default)]
    pub junctions: Vec<Junction>,
}

/// Offset along the normal at which traces are sampled from the regions;
/// curves shorter than `1000·TRACE_OFFSET` use a thousandth of their length
/// so that small cells are probed inside their neighbours (but well clear
/// of the `1e-12` membership tolerance).
pub const TRACE_OFFSET: f64 = 1e-6;

/// Values and derivatives of both traces at one parameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceSample {
    pub plus: Point2,
    pub plus_dot: Point2,
    pub minus: Point2,
    pub minus_dot: Point2,
}

impl TraceSample {
    pub fn jump(&self) -> Point2 {
        self.plus - self.minus
    }
}

impl PiecewiseMapScene {
    pub fn new(domain: RegionSpec, regions: Vec<Region>) -> Self {
        PiecewiseMapScene {
            schema: SCHEMA.to_string(),
            domain,
            regions,
            jump_curves: Vec::new(),
            junctions: Vec::new(),
        }
    }

    /// Index of the first region containing `p`.
    pub fn region_at(&self, p: Point2) -> Option<usize> {
        self.regions.iter().position(|r| r.shape.contains(p))
    }

    pub fn try_eval(&self, p: Point2) -> Result<Point2, SceneError> {
        let k = self.region_at(p).ok_or(SceneError::NoRegion(p))?;
        Ok(self.regions[k].map.eval(p))
    }

    /// One trace of curve `l` at `t`: `side = +1` for the left, `−1` right.
    pub fn trace_from_regions(&self, l: usize, t: f64, side: f64) -> Result<(Point2, Point2), SceneError> {
        let c = &self.jump_curves[l];
        let (a, b) = c.interval();
        let p = c.point(t);
        let tan = c.tangent(t);
        let n = tan.perp();
        let off = TRACE_OFFSET.min(1e-3 * (b - a));
        let q = p + n * (side * off);
        let k = self.region_at(q).ok_or(SceneError::NoRegion(q))?;
        let map = &self.regions[k].map;
        match map {
            RegionMapSpec::Constant { value } => Ok((*value, Point2::ORIGIN)),
            RegionMapSpec::Affine { matrix, offset } => Ok((matrix.apply(p) + *offset, matrix.apply(tan))),
            _ => {
                let h = FD_STEP.min(0.25 * (b - a));
                let (t0, t1) = ((t - h).max(a), (t + h).min(b));
                let at = |s: f64| map.eval(c.point(s) + c.normal(s) * (side * off));
                let d = (at(t1) - at(t0)) * (1.0 / (t1 - t0));
                Ok((map.eval(q), d))
            }
        }
    }

    /// Both traces of curve `l` at `t`, explicit ones taking precedence.
    pub fn trace_sample(&self, l: usize, t: f64) -> Result<TraceSample, SceneError> {
        let c = &self.jump_curves[l];
        let (a, b) = c.interval();
        let (plus, plus_dot) = match &c.trace_plus {
            Some(tr) => tr.eval(t, a, b),
            None => self.trace_from_regions(l, t, 1.0)?,
        };
        let (minus, minus_dot) = match &c.trace_minus {
            Some(tr) => tr.eval(t, a, b),
            None => self.trace_from_regions(l, t, -1.0)?,
        };
        Ok(TraceSample {
            plus,
            plus_dot,
            minus,
            minus_dot,
        })
    }

    /// Total area of the listed regions.
    pub fn region_area(&self) -> f64 {
        self.regions.iter().map(|r| r.shape.area()).sum()
    }
}

impl PlanarMap for PiecewiseMapScene {
    /// Evaluates the region map; points outside every region map to NaN.
    fn eval(&self, p: Point2) -> Point2 {
        match self.region_at(p) {
            Some(k) => self.regions[k].map.eval(p),
            None => Point2::new(f64::NAN, f64::NAN),
        }
    }

    fn gradient(&self, p: Point2) -> Mat2 {
        match self.region_at(p) {
            Some(k) => self.regions[k].map.gradient(p),
            None => Mat2::ZERO,
        }
    }
}

/// Explicit traces of a stand-alone jump curve.
pub fn explicit_trace_sample(c: &JumpCurve, t: f64) -> Option<TraceSample> {
    let (a, b) = c.interval();
    let (plus, plus_dot) = c.trace_plus.as_ref()?.eval(t, a, b);
    let (minus, minus_dot) = c.trace_minus.as_ref()?.eval(t, a, b);
    Some(TraceSample {
        plus,
        plus_dot,
        minus,
        minus_dot,
    })
}
