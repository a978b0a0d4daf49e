//! Deterministic adaptive quadrature.
//!
//! Every supported region is covered by a few smooth parametric patches over
//! the unit square (polar for disks and sectors, collapsed squares for
//! triangles). Patches are refined globally, worst cell first, comparing a
//! tensor Gauss–Legendre rule on a cell with the same rule on its quadrants.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::{signed_triangle_area, GeometryError, Point2};

/// Integration domain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RegionSpec {
    Disk {
        center: Point2,
        radius: f64,
    },
    /// Annular sector `{c + ρ(cos θ, sin θ) : r_in ≤ ρ ≤ r_out, θ ∈ [start, start+sweep]}`.
    /// `inner_radius = 0` gives an ordinary disk sector.
    Sector {
        center: Point2,
        #[serde(default)]
        inner_radius: f64,
        outer_radius: f64,
        start_angle: f64,
        sweep: f64,
    },
    /// Simple polygon, either orientation.
    Polygon { vertices: Vec<Point2> },
    /// The part of a disk cut off by the chord joining the arc endpoints at
    /// `start_angle` and `start_angle + sweep` (`sweep ≤ π`).
    CircularSegment {
        center: Point2,
        radius: f64,
        start_angle: f64,
        sweep: f64,
    },
}

impl RegionSpec {
    pub fn disk(center: Point2, radius: f64) -> Self {
        RegionSpec::Disk { center, radius }
    }

    pub fn sector(center: Point2, radius: f64, start_angle: f64, sweep: f64) -> Self {
        RegionSpec::Sector {
            center,
            inner_radius: 0.0,
            outer_radius: radius,
            start_angle,
            sweep,
        }
    }

    pub fn annular_sector(center: Point2, r_in: f64, r_out: f64, start_angle: f64, sweep: f64) -> Self {
        RegionSpec::Sector {
            center,
            inner_radius: r_in,
            outer_radius: r_out,
            start_angle,
            sweep,
        }
    }

    pub fn polygon(vertices: Vec<Point2>) -> Self {
        RegionSpec::Polygon { vertices }
    }

    pub fn rectangle(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        RegionSpec::Polygon {
            vertices: vec![
                Point2::new(x0, y0),
                Point2::new(x1, y0),
                Point2::new(x1, y1),
                Point2::new(x0, y1),
            ],
        }
    }

    pub fn area(&self) -> f64 {
        match self {
            RegionSpec::Disk { radius, .. } => 0.5 * TAU * radius * radius,
            RegionSpec::Sector {
                inner_radius,
                outer_radius,
                sweep,
                ..
            } => 0.5 * sweep.abs() * (outer_radius * outer_radius - inner_radius * inner_radius),
            RegionSpec::Polygon { vertices } => polygon_signed_area(vertices).abs(),
            RegionSpec::CircularSegment { radius, sweep, .. } => {
                0.5 * radius * radius * (sweep - sweep.sin())
            }
        }
    }

    /// Point-membership test (closed region, small tolerance).
    pub fn contains(&self, p: Point2) -> bool {
        let eps = 1e-12;
        match self {
            RegionSpec::Disk { center, radius } => p.dist(*center) <= radius + eps,
            RegionSpec::Sector {
                center,
                inner_radius,
                outer_radius,
                start_angle,
                sweep,
            } => {
                let d = p.dist(*center);
                if d > outer_radius + eps || d < inner_radius - eps {
                    return false;
                }
                if d <= eps || *sweep >= TAU - 1e-15 {
                    return true;
                }
                let rel = ((p - *center).angle() - start_angle).rem_euclid(TAU);
                rel <= sweep + eps || rel >= TAU - eps
            }
            RegionSpec::Polygon { vertices } => point_in_polygon(vertices, p, eps),
            RegionSpec::CircularSegment {
                center,
                radius,
                start_angle,
                sweep,
            } => {
                if p.dist(*center) > radius + eps {
                    return false;
                }
                let a = *center + Point2::polar(*radius, *start_angle);
                let b = *center + Point2::polar(*radius, start_angle + sweep);
                // the arc lies to the right of the chord a → b
                (b - a).cross(p - a) <= eps
            }
        }
    }

    /// A polygon approximating the boundary (exact for polygons), CCW.
    pub fn boundary_polygon(&self, arc_segments: usize) -> Vec<Point2> {
        let n = arc_segments.max(8);
        match self {
            RegionSpec::Disk { center, radius } => (0..n)
                .map(|k| *center + Point2::polar(*radius, TAU * k as f64 / n as f64))
                .collect(),
            RegionSpec::Sector {
                center,
                inner_radius,
                outer_radius,
                start_angle,
                sweep,
            } => {
                let mut v: Vec<Point2> = (0..=n)
                    .map(|k| *center + Point2::polar(*outer_radius, start_angle + sweep * k as f64 / n as f64))
                    .collect();
                if *inner_radius > 0.0 {
                    v.extend((0..=n).rev().map(|k| {
                        *center + Point2::polar(*inner_radius, start_angle + sweep * k as f64 / n as f64)
                    }));
                } else {
                    v.push(*center);
                }
                v
            }
            RegionSpec::Polygon { vertices } => {
                let mut v = vertices.clone();
                if polygon_signed_area(&v) < 0.0 {
                    v.reverse();
                }
                v
            }
            RegionSpec::CircularSegment {
                center,
                radius,
                start_angle,
                sweep,
            } => (0..=n)
                .map(|k| *center + Point2::polar(*radius, start_angle + sweep * k as f64 / n as f64))
                .collect(),
        }
    }

    fn validate(&self) -> Result<(), GeometryError> {
        let bad = |m: &str| Err(GeometryError::Invalid(m.to_string()));
        match self {
            RegionSpec::Disk { radius, center } => {
                if !(*radius > 0.0 && radius.is_finite() && center.is_finite()) {
                    return bad("disk radius must be positive and finite");
                }
            }
            RegionSpec::Sector {
                inner_radius,
                outer_radius,
                sweep,
                ..
            } => {
                if !(*inner_radius >= 0.0 && outer_radius > inner_radius && *sweep > 0.0 && *sweep <= TAU + 1e-12) {
                    return bad("sector needs 0 ≤ r_in < r_out and 0 < sweep ≤ 2π");
                }
            }
            RegionSpec::Polygon { vertices } => {
                if vertices.len() < 3 || vertices.iter().any(|p| !p.is_finite()) {
                    return bad("polygon needs at least 3 finite vertices");
                }
            }
            RegionSpec::CircularSegment { radius, sweep, .. } => {
                if !(*radius > 0.0 && *sweep > 0.0 && *sweep <= std::f64::consts::PI + 1e-12) {
                    return bad("circular segment needs radius > 0 and 0 < sweep ≤ π");
                }
            }
        }
        Ok(())
    }

    fn patches(&self) -> Result<Vec<Patch>, GeometryError> {
        self.validate()?;
        Ok(match self {
            RegionSpec::Disk { center, radius } => vec![Patch::Polar {
                center: *center,
                r0: 0.0,
                r1: *radius,
                a0: 0.0,
                sweep: TAU,
            }],
            RegionSpec::Sector {
                center,
                inner_radius,
                outer_radius,
                start_angle,
                sweep,
            } => vec![Patch::Polar {
                center: *center,
                r0: *inner_radius,
                r1: *outer_radius,
                a0: *start_angle,
                sweep: *sweep,
            }],
            RegionSpec::Polygon { vertices } => triangulate(vertices)?
                .into_iter()
                .filter(|t| signed_triangle_area(t[0], t[1], t[2]).abs() > 0.0)
                .map(|t| Patch::Triangle(t[0], t[1], t[2]))
                .collect(),
            RegionSpec::CircularSegment {
                center,
                radius,
                start_angle,
                sweep,
            } => vec![Patch::Segment {
                center: *center,
                radius: *radius,
                a0: *start_angle,
                sweep: *sweep,
            }],
        })
    }
}

pub(crate) fn polygon_signed_area(v: &[Point2]) -> f64 {
    let n = v.len();
    0.5 * (0..n).map(|i| v[i].cross(v[(i + 1) % n])).sum::<f64>()
}

fn point_in_polygon(v: &[Point2], p: Point2, eps: f64) -> bool {
    let n = v.len();
    for i in 0..n {
        if super::point_segment_distance(p, v[i], v[(i + 1) % n]) <= eps {
            return true;
        }
    }
    let edges: Vec<_> = (0..n).map(|i| (v[i], v[(i + 1) % n])).collect();
    super::winding::winding_raw(&edges, p) != 0
}

/// Ear-clipping triangulation of a simple polygon; triangles are CCW.
pub(crate) fn triangulate(vertices: &[Point2]) -> Result<Vec<[Point2; 3]>, GeometryError> {
    let mut v: Vec<Point2> = Vec::with_capacity(vertices.len());
    for &p in vertices {
        if v.last() != Some(&p) {
            v.push(p);
        }
    }
    while v.len() > 1 && v.first() == v.last() {
        v.pop();
    }
    if polygon_signed_area(&v) < 0.0 {
        v.reverse();
    }
    let mut idx: Vec<usize> = (0..v.len()).collect();
    let mut out = Vec::with_capacity(v.len().saturating_sub(2));
    let mut guard = 0usize;
    while idx.len() > 3 {
        let m = idx.len();
        let mut clipped = false;
        for i in 0..m {
            let (ip, ic, inx) = (idx[(i + m - 1) % m], idx[i], idx[(i + 1) % m]);
            let (a, b, c) = (v[ip], v[ic], v[inx]);
            let area = signed_triangle_area(a, b, c);
            if area < 0.0 {
                continue;
            }
            if area == 0.0 {
                // collinear vertex: drop without emitting a triangle
                idx.remove(i);
                clipped = true;
                break;
            }
            let blocked = idx.iter().any(|&j| {
                if j == ip || j == ic || j == inx {
                    return false;
                }
                let p = v[j];
                signed_triangle_area(a, b, p) >= 0.0
                    && signed_triangle_area(b, c, p) >= 0.0
                    && signed_triangle_area(c, a, p) >= 0.0
                    && p != a
                    && p != b
                    && p != c
            });
            if !blocked {
                out.push([a, b, c]);
                idx.remove(i);
                clipped = true;
                break;
            }
        }
        guard += 1;
        if !clipped || guard > 10 * v.len() + 10 {
            return Err(GeometryError::Invalid(
                "polygon is not simple; ear clipping failed".into(),
            ));
        }
    }
    if idx.len() == 3 {
        out.push([v[idx[0]], v[idx[1]], v[idx[2]]]);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug)]
enum Patch {
    Polar {
        center: Point2,
        r0: f64,
        r1: f64,
        a0: f64,
        sweep: f64,
    },
    /// Collapsed square: apex `a`, opposite side `bc`.
    Triangle(Point2, Point2, Point2),
    Segment {
        center: Point2,
        radius: f64,
        a0: f64,
        sweep: f64,
    },
}

impl Patch {
    /// Point and Jacobian factor for `(u, v) ∈ [0,1]²`.
    #[inline]
    fn map(&self, u: f64, v: f64) -> (Point2, f64) {
        match *self {
            Patch::Polar {
                center,
                r0,
                r1,
                a0,
                sweep,
            } => {
                let r = r0 + (r1 - r0) * u;
                let a = a0 + sweep * v;
                (center + Point2::polar(r, a), (r1 - r0) * sweep * r)
            }
            Patch::Triangle(a, b, c) => {
                let p = a + (b - a) * u + (c - b) * (u * v);
                (p, 2.0 * signed_triangle_area(a, b, c).abs() * u)
            }
            Patch::Segment {
                center,
                radius,
                a0,
                sweep,
            } => {
                let half = 0.5 * sweep;
                let h = radius * half.cos();
                let a = a0 + sweep * v;
                let rmin = h / (a - a0 - half).cos();
                let r = rmin + (radius - rmin) * u;
                (center + Point2::polar(r, a), sweep * (radius - rmin) * r)
            }
        }
    }
}

const GL_X: [f64; 4] = [
    -0.861_136_311_594_052_6,
    -0.339_981_043_584_856_3,
    0.339_981_043_584_856_3,
    0.861_136_311_594_052_6,
];
const GL_W: [f64; 4] = [
    0.347_854_845_137_453_9,
    0.652_145_154_862_546_1,
    0.652_145_154_862_546_1,
    0.347_854_845_137_453_9,
];

#[derive(Clone, Copy, Debug)]
struct Rect {
    patch: usize,
    u0: f64,
    v0: f64,
    h: f64,
}

impl Rect {
    fn quadrants(&self) -> [Rect; 4] {
        let h = 0.5 * self.h;
        [
            Rect { h, ..*self },
            Rect {
                u0: self.u0 + h,
                h,
                ..*self
            },
            Rect {
                v0: self.v0 + h,
                h,
                ..*self
            },
            Rect {
                u0: self.u0 + h,
                v0: self.v0 + h,
                h,
                ..*self
            },
        ]
    }
}

struct Work {
    rect: Rect,
    quads: [f64; 4],
    value: f64,
    err: f64,
    id: u64,
}

impl PartialEq for Work {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Work {}
impl PartialOrd for Work {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Work {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.total_cmp(&o.err).then_with(|| o.id.cmp(&self.id))
    }
}

/// Diagnostics of a 2D quadrature.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureReport {
    pub value: f64,
    pub error_estimate: f64,
    pub cells: usize,
    pub evaluations: usize,
}

const MAX_CELLS: usize = 400_000;

/// ∫_region f with absolute error target `tol`.
pub fn quadrature_2d(region: &RegionSpec, f: impl Fn(Point2) -> f64, tol: f64) -> Result<f64, GeometryError> {
    quadrature_2d_detailed(region, f, tol).map(|r| r.value)
}

pub fn quadrature_2d_detailed(
    region: &RegionSpec,
    f: impl Fn(Point2) -> f64,
    tol: f64,
) -> Result<QuadratureReport, GeometryError> {
    let patches = region.patches()?;
    let tol = if tol > 0.0 { tol } else { 1e-10 };
    let mut evaluations = 0usize;
    let mut rule = |r: &Rect| -> Result<f64, GeometryError> {
        let p = &patches[r.patch];
        let half = 0.5 * r.h;
        let mut s = 0.0;
        for (i, xi) in GL_X.iter().enumerate() {
            let u = r.u0 + half * (1.0 + xi);
            let mut row = 0.0;
            for (j, xj) in GL_X.iter().enumerate() {
                let v = r.v0 + half * (1.0 + xj);
                let (pt, jac) = p.map(u, v);
                let val = f(pt);
                if !val.is_finite() {
                    return Err(GeometryError::NonFinite { x: pt.x, y: pt.y });
                }
                row += GL_W[j] * val * jac;
            }
            s += GL_W[i] * row;
        }
        evaluations += 16;
        Ok(s * half * half)
    };

    let mut heap = BinaryHeap::new();
    let mut next_id = 0u64;
    let mut total_err = 0.0;
    let make = |rect: Rect, coarse: f64, rule: &mut dyn FnMut(&Rect) -> Result<f64, GeometryError>, next_id: &mut u64| -> Result<Work, GeometryError> {
        let qs = rect.quadrants();
        let mut quads = [0.0; 4];
        for (k, q) in qs.iter().enumerate() {
            quads[k] = rule(q)?;
        }
        let value = quads[0] + quads[1] + quads[2] + quads[3];
        let id = *next_id;
        *next_id += 1;
        Ok(Work {
            rect,
            quads,
            value,
            err: (value - coarse).abs(),
            id,
        })
    };

    for patch in 0..patches.len() {
        let root = Rect {
            patch,
            u0: 0.0,
            v0: 0.0,
            h: 1.0,
        };
        for q in root.quadrants() {
            let coarse = rule(&q)?;
            let w = make(q, coarse, &mut rule, &mut next_id)?;
            total_err += w.err;
            heap.push(w);
        }
    }

    let mut cells = heap.len();
    while total_err > tol && cells < MAX_CELLS {
        let Some(w) = heap.pop() else { break };
        total_err -= w.err;
        for (k, q) in w.rect.quadrants().into_iter().enumerate() {
            let child = make(q, w.quads[k], &mut rule, &mut next_id)?;
            total_err += child.err;
            heap.push(child);
        }
        cells += 3;
        if total_err < 0.0 {
            total_err = heap.iter().map(|w| w.err).sum();
        }
    }

    let mut all = heap.into_vec();
    all.sort_by_key(|w| w.id);
    let value = pairwise_sum(&all.iter().map(|w| w.value).collect::<Vec<_>>());
    let error_estimate = all.iter().map(|w| w.err).sum();
    Ok(QuadratureReport {
        value,
        error_estimate,
        cells: all.len(),
        evaluations,
    })
}

fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 8 {
        return v.iter().sum();
    }
    let m = v.len() / 2;
    pairwise_sum(&v[..m]) + pairwise_sum(&v[m..])
}

const GK_X: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const GK_WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> Result<(f64, f64), GeometryError> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut k = 0.0;
    let mut g = 0.0;
    for i in 0..8 {
        let pts: &[f64] = if i == 7 { &[0.0] } else { &[-1.0, 1.0] };
        for s in pts {
            let x = c + s * h * GK_X[i];
            let y = f(x);
            if !y.is_finite() {
                return Err(GeometryError::NonFinite { x, y: 0.0 });
            }
            k += GK_WK[i] * y;
            if i % 2 == 1 {
                g += GK_WG[i / 2] * y;
            }
        }
    }
    Ok((k * h, ((k - g) * h).abs()))
}

/// ∫_a^b f by adaptive Gauss–Kronrod (7, 15) with absolute error target `tol`.
pub fn integrate_1d(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64, GeometryError> {
    if a == b {
        return Ok(0.0);
    }
    let tol = if tol > 0.0 { tol } else { 1e-12 };
    let mut segs: Vec<(f64, f64, f64, f64)> = Vec::new();
    let (v, e) = gk15(&f, a, b)?;
    segs.push((a, b, v, e));
    for _ in 0..20_000 {
        let total: f64 = segs.iter().map(|s| s.3).sum();
        if total <= tol {
            break;
        }
        let (i, _) = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .unwrap();
        let (lo, hi, _, _) = segs[i];
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&f, lo, mid)?;
        let (v2, e2) = gk15(&f, mid, hi)?;
        segs[i] = (lo, mid, v1, e1);
        segs.insert(i + 1, (mid, hi, v2, e2));
    }
    Ok(segs.iter().map(|s| s.2).sum())
}
