//! Source curves, explicit traces and jump curves.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::geometry::{point_segment_distance, Point2};

/// A source-plane curve parametrized by arc length `s ∈ [0, length]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SourceCurve {
    Segment { start: Point2, end: Point2 },
    Polyline { points: Vec<Point2> },
    /// Circular arc; positive `sweep` runs counterclockwise.
    Arc {
        center: Point2,
        radius: f64,
        start_angle: f64,
        sweep: f64,
    },
}

impl SourceCurve {
    pub fn segment(start: Point2, end: Point2) -> Self {
        SourceCurve::Segment { start, end }
    }

    pub fn length(&self) -> f64 {
        match self {
            SourceCurve::Segment { start, end } => start.dist(*end),
            SourceCurve::Polyline { points } => points.windows(2).map(|w| w[0].dist(w[1])).sum(),
            SourceCurve::Arc { radius, sweep, .. } => radius * sweep.abs(),
        }
    }

    pub fn start_point(&self) -> Point2 {
        self.point(0.0)
    }

    pub fn end_point(&self) -> Point2 {
        self.point(self.length())
    }

    /// Point at arc length `s` (clamped to the curve).
    pub fn point(&self, s: f64) -> Point2 {
        match self {
            SourceCurve::Segment { start, end } => {
                let l = start.dist(*end);
                if l == 0.0 {
                    *start
                } else {
                    start.lerp(*end, (s / l).clamp(0.0, 1.0))
                }
            }
            SourceCurve::Polyline { points } => {
                let (i, local) = self.locate(s);
                let (a, b) = (points[i], points[i + 1]);
                let l = a.dist(b);
                if l == 0.0 {
                    a
                } else {
                    a.lerp(b, (local / l).clamp(0.0, 1.0))
                }
            }
            SourceCurve::Arc {
                center,
                radius,
                start_angle,
                sweep,
            } => {
                let s = s.clamp(0.0, radius * sweep.abs());
                *center + Point2::polar(*radius, start_angle + sweep.signum() * s / radius)
            }
        }
    }

    /// Unit tangent at arc length `s`; at polyline corners the outgoing one.
    pub fn tangent(&self, s: f64) -> Point2 {
        match self {
            SourceCurve::Segment { start, end } => {
                let d = *end - *start;
                d * (1.0 / d.norm())
            }
            SourceCurve::Polyline { points } => {
                let (i, _) = self.locate(s);
                let d = points[i + 1] - points[i];
                d * (1.0 / d.norm())
            }
            SourceCurve::Arc {
                radius,
                start_angle,
                sweep,
                ..
            } => {
                let sg = sweep.signum();
                let a = start_angle + sg * s / radius;
                Point2::new(-a.sin(), a.cos()) * sg
            }
        }
    }

    /// Tangent at the start, and the reversed tangent at the end: both point
    /// away from the respective endpoint into the curve.
    pub fn outgoing_directions(&self) -> (Point2, Point2) {
        match self {
            SourceCurve::Polyline { points } => {
                let n = points.len();
                let d0 = points[1] - points[0];
                let d1 = points[n - 2] - points[n - 1];
                (d0 * (1.0 / d0.norm()), d1 * (1.0 / d1.norm()))
            }
            _ => {
                let l = self.length();
                (self.tangent(0.0), -self.tangent(l))
            }
        }
    }

    /// Arc-length positions of corners strictly inside the curve.
    pub fn corners(&self) -> Vec<f64> {
        match self {
            SourceCurve::Polyline { points } => {
                let mut acc = 0.0;
                let mut out = Vec::new();
                for w in points.windows(2).take(points.len().saturating_sub(2)) {
                    acc += w[0].dist(w[1]);
                    out.push(acc);
                }
                out
            }
            _ => Vec::new(),
        }
    }

    /// Polygonal approximation with at most `arc_segments` pieces per arc.
    pub fn polyline(&self, arc_segments: usize) -> Vec<Point2> {
        match self {
            SourceCurve::Segment { start, end } => vec![*start, *end],
            SourceCurve::Polyline { points } => points.clone(),
            SourceCurve::Arc { sweep, .. } => {
                let n = ((arc_segments as f64) * sweep.abs() / TAU).ceil().max(2.0) as usize;
                let l = self.length();
                (0..=n).map(|k| self.point(l * k as f64 / n as f64)).collect()
            }
        }
    }

    /// Distance from `p` to the curve.
    pub fn distance(&self, p: Point2) -> f64 {
        match self {
            SourceCurve::Arc {
                center,
                radius,
                start_angle,
                sweep,
            } => {
                let rel = p - *center;
                let (lo, span) = if *sweep >= 0.0 {
                    (*start_angle, *sweep)
                } else {
                    (start_angle + sweep, -sweep)
                };
                let a = (rel.angle() - lo).rem_euclid(TAU);
                if a <= span && rel.norm() > 0.0 {
                    (rel.norm() - radius).abs()
                } else {
                    p.dist(self.start_point()).min(p.dist(self.end_point()))
                }
            }
            _ => {
                let pts = self.polyline(0);
                pts.windows(2)
                    .map(|w| point_segment_distance(p, w[0], w[1]))
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }

    pub fn is_valid(&self) -> Result<(), String> {
        match self {
            SourceCurve::Segment { start, end } => {
                if !(start.is_finite() && end.is_finite()) || start == end {
                    return Err("segment needs distinct finite endpoints".into());
                }
            }
            SourceCurve::Polyline { points } => {
                if points.len() < 2 || points.iter().any(|p| !p.is_finite()) {
                    return Err("polyline needs at least two finite points".into());
                }
                if points.windows(2).any(|w| w[0] == w[1]) {
                    return Err("polyline has a zero-length piece".into());
                }
            }
            SourceCurve::Arc { radius, sweep, .. } => {
                if !(*radius > 0.0) || *sweep == 0.0 || sweep.abs() >= TAU || !sweep.is_finite() {
                    return Err("arc needs radius > 0 and 0 < |sweep| < 2π".into());
                }
            }
        }
        Ok(())
    }

    fn locate(&self, s: f64) -> (usize, f64) {
        let SourceCurve::Polyline { points } = self else {
            return (0, s);
        };
        let mut rem = s.max(0.0);
        let last = points.len() - 2;
        for i in 0..=last {
            let l = points[i].dist(points[i + 1]);
            if rem < l || i == last {
                return (i, rem);
            }
            rem -= l;
        }
        (last, rem)
    }
}

/// A trace given explicitly as a function of the curve parameter.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Trace {
    Constant { value: Point2 },
    /// Affine in `t`, from `start` at `a` to `end` at `b`.
    Linear { start: Point2, end: Point2 },
    /// Piecewise linear through `(t, value)` samples (increasing `t`),
    /// constant beyond the ends.
    Sampled { samples: Vec<(f64, Point2)> },
}

impl Trace {
    /// Value and derivative at `t` for the parameter interval `[a, b]`.
    pub fn eval(&self, t: f64, a: f64, b: f64) -> (Point2, Point2) {
        match self {
            Trace::Constant { value } => (*value, Point2::ORIGIN),
            Trace::Linear { start, end } => {
                let l = b - a;
                let d = (*end - *start) * (1.0 / l);
                (*start + d * (t - a), d)
            }
            Trace::Sampled { samples } => {
                let n = samples.len();
                if t <= samples[0].0 {
                    return (samples[0].1, Point2::ORIGIN);
                }
                if t >= samples[n - 1].0 {
                    return (samples[n - 1].1, Point2::ORIGIN);
                }
                let i = samples.partition_point(|s| s.0 <= t) - 1;
                let (t0, v0) = samples[i];
                let (t1, v1) = samples[i + 1];
                let d = (v1 - v0) * (1.0 / (t1 - t0));
                (v0 + d * (t - t0), d)
            }
        }
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Trace::Sampled { samples } => samples.iter().map(|s| s.0).collect(),
            _ => Vec::new(),
        }
    }

    pub fn is_valid(&self) -> Result<(), String> {
        match self {
            Trace::Sampled { samples } => {
                if samples.len() < 2 {
                    return Err("sampled trace needs at least two samples".into());
                }
                if samples.windows(2).any(|w| w[1].0 <= w[0].0) {
                    return Err("sampled trace parameters must increase".into());
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

/// A jump curve α: [a, a+L] → Ω with its one-sided traces. The `+` side is
/// the left of the direction of travel. Missing traces are read off the
/// adjacent regions of the enclosing scene.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JumpCurve {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub curve: SourceCurve,
    #[serde(default)]
    pub param_start: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace_plus: Option<Trace>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace_minus: Option<Trace>,
}

impl JumpCurve {
    /// Curve whose traces come from the scene regions.
    pub fn new(curve: SourceCurve) -> Self {
        JumpCurve {
            name: None,
            curve,
            param_start: 0.0,
            trace_plus: None,
            trace_minus: None,
        }
    }

    pub fn with_traces(curve: SourceCurve, plus: Trace, minus: Trace) -> Self {
        JumpCurve {
            name: None,
            curve,
            param_start: 0.0,
            trace_plus: Some(plus),
            trace_minus: Some(minus),
        }
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.param_start, self.param_start + self.curve.length())
    }

    pub fn point(&self, t: f64) -> Point2 {
        self.curve.point(t - self.param_start)
    }

    pub fn tangent(&self, t: f64) -> Point2 {
        self.curve.tangent(t - self.param_start)
    }

    /// Left unit normal.
    pub fn normal(&self, t: f64) -> Point2 {
        self.tangent(t).perp()
    }

    pub fn has_explicit_traces(&self) -> bool {
        self.trace_plus.is_some() && self.trace_minus.is_some()
    }

    /// Parameters where traces or geometry may have kinks, including ends.
    pub fn breakpoints(&self) -> Vec<f64> {
        let (a, b) = self.interval();
        let mut v = vec![a, b];
        v.extend(self.curve.corners().into_iter().map(|s| a + s));
        for tr in [&self.trace_plus, &self.trace_minus].into_iter().flatten() {
            v.extend(tr.breakpoints().into_iter().filter(|t| *t > a && *t < b));
        }
        v.sort_by(f64::total_cmp);
        v.dedup_by(|x, y| (*x - *y).abs() <= 1e-14 * (1.0 + y.abs()));
        v
    }

    /// Splits the curve at an interior parameter (polyline curves are split
    /// geometrically; explicit traces are shared).
    pub fn split_at(&self, t: f64) -> Option<(JumpCurve, JumpCurve)> {
        let (a, b) = self.interval();
        if !(t > a && t < b) {
            return None;
        }
        let s = t - a;
        let mid = self.point(t);
        let (c1, c2) = match &self.curve {
            SourceCurve::Segment { start, end } => (
                SourceCurve::segment(*start, mid),
                SourceCurve::segment(mid, *end),
            ),
            SourceCurve::Polyline { points } => {
                let mut first = vec![points[0]];
                let mut second = vec![mid];
                let mut acc = 0.0;
                for w in points.windows(2) {
                    acc += w[0].dist(w[1]);
                    if acc < s {
                        first.push(w[1]);
                    } else if acc > s {
                        second.push(w[1]);
                    }
                }
                first.push(mid);
                (
                    SourceCurve::Polyline { points: first },
                    SourceCurve::Polyline { points: second },
                )
            }
            SourceCurve::Arc {
                center,
                radius,
                start_angle,
                sweep,
            } => {
                let sw1 = sweep.signum() * s / radius;
                (
                    SourceCurve::Arc {
                        center: *center,
                        radius: *radius,
                        start_angle: *start_angle,
                        sweep: sw1,
                    },
                    SourceCurve::Arc {
                        center: *center,
                        radius: *radius,
                        start_angle: start_angle + sw1,
                        sweep: sweep - sw1,
                    },
                )
            }
        };
        let mut j1 = self.clone();
        j1.curve = c1;
        let mut j2 = self.clone();
        j2.curve = c2;
        j2.param_start = t;
        // linear traces are tied to their interval; cut them at t
        for (tr, (t1, t2)) in [&self.trace_plus, &self.trace_minus]
            .into_iter()
            .zip([(&mut j1.trace_plus, &mut j2.trace_plus), (&mut j1.trace_minus, &mut j2.trace_minus)])
        {
            if let Some(Trace::Linear { start, end }) = tr {
                let m = tr.as_ref().unwrap().eval(t, a, b).0;
                *t1 = Some(Trace::Linear { start: *start, end: m });
                *t2 = Some(Trace::Linear { start: m, end: *end });
            }
        }
        Some((j1, j2))
    }
}
