//! The relaxed area of a piecewise Lipschitz map as the sum of
//!
//! * the regular part `∫_{Ω∖Σ} √(1 + |∇u|² + |Ju|²)`,
//! * one ruled-surface area per jump curve, spanned by the affine
//!   interpolation `s u⁺ + (1 − s) u⁻` of the traces,
//! * one Plateau term `P̄(γ^i)` per junction point.
//!
//! Junction terms are certificates, so totals come as an interval.

mod infinite_triple;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{integrate_1d, quadrature_2d, GeometryError, PiecewiseConstantCircle, Point2};
use crate::plateau::{plateau_relaxed, PlateauCertificate, PlateauError, PlateauOptions};
use crate::scene::{explicit_trace_sample, integrate_along_curve, JumpCurve, PiecewiseMapScene, PlanarMap, RegionMapSpec, SceneError, TraceSample};

pub use infinite_triple::{infinite_triple_point_report, InfiniteTripleReport};

#[derive(Debug, Error)]
pub enum RelaxedAreaError {
    #[error("invalid scene: {0}")]
    InvalidScene(String),
    #[error(transparent)]
    Scene(#[from] SceneError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Plateau(#[from] PlateauError),
}

/// `∫_{Ω∖Σ} √(1 + |∇u|² + |Ju|²)`, region by region.
pub fn regular_term(scene: &PiecewiseMapScene, tol: f64) -> Result<f64, RelaxedAreaError> {
    let total_area = scene.region_area().max(f64::MIN_POSITIVE);
    let mut sum = 0.0;
    for r in &scene.regions {
        let area = r.shape.area();
        sum += match &r.map {
            RegionMapSpec::Constant { .. } => area,
            RegionMapSpec::Affine { matrix, .. } => {
                (1.0 + matrix.frobenius().powi(2) + matrix.det().powi(2)).sqrt() * area
            }
            map => quadrature_2d(&r.shape, |p| graph_density(&map.gradient(p)), tol * area / total_area)?,
        };
    }
    Ok(sum)
}

/// Area density of a graph with the given gradient.
pub fn graph_density(g: &crate::geometry::Mat2) -> f64 {
    (1.0 + g.frobenius().powi(2) + g.det().powi(2)).sqrt()
}

/// `√(|d|² + (m_s ∧ d)²)` with `d = u⁺ − u⁻` and `m_s = s u̇⁺ + (1 − s) u̇⁻`.
pub fn surface_integrand(sample: &TraceSample, s: f64) -> f64 {
    let d = sample.jump();
    let m = sample.plus_dot * s + sample.minus_dot * (1.0 - s);
    (d.norm_sq() + m.cross(d).powi(2)).sqrt()
}

/// The integrand at `(t, s)` for a curve with explicit traces.
pub fn jump_surface_integrand(curve: &JumpCurve, t: f64, s: f64) -> Option<f64> {
    explicit_trace_sample(curve, t).map(|x| surface_integrand(&x, s))
}

/// `∫₀¹ surface_integrand ds` in closed form: with `a = |d|` and
/// `m_s ∧ d = c₀ + c₁ s` the integral is `(F(c₀ + c₁) − F(c₀)) / c₁`,
/// `F(x) = (x √(a² + x²) + a² asinh(x / a)) / 2`.
pub fn surface_integrand_s_integral(sample: &TraceSample) -> f64 {
    let d = sample.jump();
    let a = d.norm();
    let c0 = sample.minus_dot.cross(d);
    let c1 = (sample.plus_dot - sample.minus_dot).cross(d);
    if c1.abs() <= 1e-4 * (a + c0.abs()) {
        // nearly constant integrand: Gauss–Legendre is exact to rounding
        return GL8
            .iter()
            .map(|&(x, w)| w * (a * a + (c0 + c1 * x).powi(2)).sqrt())
            .sum();
    }
    let f = |x: f64| {
        if a == 0.0 {
            0.5 * x * x.abs()
        } else {
            0.5 * (x * (a * a + x * x).sqrt() + a * a * (x / a).asinh())
        }
    };
    (f(c0 + c1) - f(c0)) / c1
}

/// 8-point Gauss–Legendre nodes and weights on [0, 1].
const GL8: [(f64, f64); 8] = [
    (0.019_855_071_751_231_856, 0.050_614_268_145_188_13),
    (0.101_666_761_293_186_63, 0.111_190_517_226_687_24),
    (0.237_233_795_041_835_5, 0.156_853_322_938_943_64),
    (0.408_282_678_752_175_1, 0.181_341_891_689_180_98),
    (0.591_717_321_247_825, 0.181_341_891_689_180_98),
    (0.762_766_204_958_164_5, 0.156_853_322_938_943_64),
    (0.898_333_238_706_813_4, 0.111_190_517_226_687_24),
    (0.980_144_928_248_768_1, 0.050_614_268_145_188_13),
];

/// Area of the ruled surface over curve `l` of the scene, in arc length.
pub fn jump_term(scene: &PiecewiseMapScene, l: usize, tol: f64) -> Result<f64, RelaxedAreaError> {
    Ok(integrate_along_curve(scene, l, tol, surface_integrand_s_integral)?)
}

/// [`jump_term`] for a stand-alone curve with explicit traces.
pub fn jump_term_explicit(curve: &JumpCurve, tol: f64) -> Result<f64, RelaxedAreaError> {
    if !curve.has_explicit_traces() {
        return Err(RelaxedAreaError::InvalidScene("curve needs both traces".into()));
    }
    let bps = curve.breakpoints();
    let pieces = (bps.len() - 1).max(1) as f64;
    let mut sum = 0.0;
    for w in bps.windows(2) {
        sum += integrate_1d(
            |t| surface_integrand_s_integral(&explicit_trace_sample(curve, t).expect("explicit traces")),
            w[0],
            w[1],
            tol / pieces,
        )?;
    }
    Ok(sum)
}

/// Regular, jump and junction terms with the resulting bounds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AreaBreakdown {
    pub regular: f64,
    pub jump_terms: Vec<(String, f64)>,
    pub junction_terms: Vec<(String, PlateauCertificate)>,
    pub total_lower: f64,
    pub total_upper: f64,
}

impl AreaBreakdown {
    pub fn new(regular: f64, jump_terms: Vec<(String, f64)>, junction_terms: Vec<(String, PlateauCertificate)>) -> Self {
        let jump: f64 = jump_terms.iter().map(|j| j.1).sum();
        let lower: f64 = junction_terms.iter().map(|j| j.1.lower).sum();
        let upper: f64 = junction_terms.iter().map(|j| j.1.upper).sum();
        AreaBreakdown {
            regular,
            jump_terms,
            junction_terms,
            total_lower: regular + jump + lower,
            total_upper: regular + jump + upper,
        }
    }

    pub fn jump_total(&self) -> f64 {
        self.jump_terms.iter().map(|j| j.1).sum()
    }

    pub fn junction_lower(&self) -> f64 {
        self.junction_terms.iter().map(|j| j.1.lower).sum()
    }

    pub fn junction_upper(&self) -> f64 {
        self.junction_terms.iter().map(|j| j.1.upper).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("breakdown serializes")
    }

    /// Header and values of the flat CSV row: one column per term.
    pub fn csv_record(&self) -> (Vec<String>, Vec<String>) {
        let mut h = vec!["regular".to_string()];
        let mut v = vec![self.regular.to_string()];
        for (id, x) in &self.jump_terms {
            h.push(format!("jump:{id}"));
            v.push(x.to_string());
        }
        for (id, c) in &self.junction_terms {
            h.extend([format!("junction:{id}:lower"), format!("junction:{id}:upper"), format!("junction:{id}:method")]);
            v.extend([c.lower.to_string(), c.upper.to_string(), c.upper_method.to_string()]);
        }
        h.extend(["total_lower".to_string(), "total_upper".to_string()]);
        v.extend([self.total_lower.to_string(), self.total_upper.to_string()]);
        (h, v)
    }

    /// Human-readable summary.
    pub fn summary(&self) -> String {
        let mut s = format!("regular area      {:.9}\n", self.regular);
        for (id, x) in &self.jump_terms {
            s += &format!("jump   {id:<10} {x:.9}\n");
        }
        for (id, c) in &self.junction_terms {
            s += &format!(
                "junction {id:<8} [{:.9}, {:.9}] ({})\n",
                c.lower, c.upper, c.upper_method
            );
        }
        s += &format!("total             [{:.9}, {:.9}]\n", self.total_lower, self.total_upper);
        s
    }
}

fn curve_id(scene: &PiecewiseMapScene, l: usize) -> String {
    scene.jump_curves[l].name.clone().unwrap_or_else(|| format!("curve{l}"))
}

/// The full relaxed area of a validated scene.
pub fn relaxed_area_bv(scene: &PiecewiseMapScene, tol: f64, opts: &PlateauOptions) -> Result<AreaBreakdown, RelaxedAreaError> {
    scene.check_structure()?;
    let report = scene.validate_network();
    if !report.passed() {
        return Err(RelaxedAreaError::InvalidScene(report.summary()));
    }
    let parts = 1 + scene.jump_curves.len();
    let share = tol / parts as f64;
    let regular = regular_term(scene, share)?;
    let mut jumps = Vec::with_capacity(scene.jump_curves.len());
    for l in 0..scene.jump_curves.len() {
        jumps.push((curve_id(scene, l), jump_term(scene, l, share)?));
    }
    let mut junctions = Vec::with_capacity(scene.junctions.len());
    for i in 0..scene.junctions.len() {
        let rho = scene.junction_radius(i);
        let gamma = scene.junction_limit(i, rho)?;
        junctions.push((format!("junction{i}"), plateau_relaxed(&gamma, opts)?));
    }
    Ok(AreaBreakdown::new(regular, jumps, junctions))
}

/// `πr² + r L(γ) + P̄(γ)` for the homogeneous map `γ(x/|x|)` on `B_r`.
pub fn n_uple_point_area(gamma: &PiecewiseConstantCircle, r: f64, opts: &PlateauOptions) -> Result<AreaBreakdown, RelaxedAreaError> {
    if !(r > 0.0) {
        return Err(RelaxedAreaError::InvalidScene(format!("radius must be positive, got {r}")));
    }
    let g = gamma.merged();
    let n = g.len();
    let regular = std::f64::consts::PI * r * r;
    let jumps = match n {
        1 => Vec::new(),
        2 => vec![("diameter".to_string(), r * g.jump_length())],
        _ => (0..n)
            .map(|k| {
                // radius k separates sector k−1 from sector k
                let prev = g.values[(k + n - 1) % n];
                (format!("radius{k}"), r * prev.dist(g.values[k]))
            })
            .collect(),
    };
    let junctions = if n >= 3 {
        vec![("junction0".to_string(), plateau_relaxed(&g, opts)?)]
    } else {
        Vec::new()
    };
    Ok(AreaBreakdown::new(regular, jumps, junctions))
}

/// Relaxed Jacobian total variation of the n-uple point map: `P̄(γ)`, for
/// any radius.
pub fn relaxed_tvj(gamma: &PiecewiseConstantCircle, r: f64, opts: &PlateauOptions) -> Result<PlateauCertificate, RelaxedAreaError> {
    if !(r > 0.0) {
        return Err(RelaxedAreaError::InvalidScene(format!("radius must be positive, got {r}")));
    }
    Ok(plateau_relaxed(gamma, opts)?)
}

/// Triangle area `|T_{abc}|`.
pub fn triangle_area(a: Point2, b: Point2, c: Point2) -> f64 {
    crate::geometry::signed_triangle_area(a, b, c).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Mat2, RegionSpec};
    use crate::scene::{n_uple_scene, straight_jump_scene, Region, SourceCurve, Trace};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn square(map: RegionMapSpec) -> PiecewiseMapScene {
        let sq = RegionSpec::rectangle(0.0, 0.0, 1.0, 1.0);
        PiecewiseMapScene::new(sq.clone(), vec![Region::new(sq, map)])
    }

    #[test]
    fn regular_term_examples() {
        assert_eq!(regular_term(&square(RegionMapSpec::constant(Point2::new(1.0, 1.0))), 1e-10).unwrap(), 1.0);
        assert_abs_diff_eq!(regular_term(&square(RegionMapSpec::affine(Mat2::IDENTITY, Point2::ORIGIN)), 1e-10).unwrap(), 2.0, epsilon = 1e-15);
        let a = regular_term(&square(RegionMapSpec::affine(Mat2::diag(2.0, 3.0), Point2::ORIGIN)), 1e-10).unwrap();
        assert_abs_diff_eq!(a, 50f64.sqrt(), epsilon = 1e-14);
        // the same maps through quadrature
        let id = regular_term(&square(RegionMapSpec::callable("id", |p| p)), 1e-8).unwrap();
        assert_abs_diff_eq!(id, 2.0, epsilon = 1e-6);
    }

    fn sample(plus: Point2, plus_dot: Point2, minus: Point2, minus_dot: Point2) -> TraceSample {
        TraceSample { plus, plus_dot, minus, minus_dot }
    }

    #[test]
    fn inner_integral_matches_quadrature() {
        let cases = [
            sample(Point2::new(1.0, 0.0), Point2::ORIGIN, Point2::ORIGIN, Point2::ORIGIN),
            sample(Point2::new(0.3, -1.0), Point2::new(2.0, 1.0), Point2::new(0.1, 0.2), Point2::new(-1.0, 0.5)),
            sample(Point2::new(0.0, 1e-3), Point2::new(5.0, 0.0), Point2::ORIGIN, Point2::new(-5.0, 0.0)),
            sample(Point2::new(1.0, 1.0), Point2::ORIGIN, Point2::new(1.0, 1.0), Point2::new(3.0, 1.0)),
            sample(Point2::new(2.0, 0.0), Point2::new(0.0, 1.0 + 1e-7), Point2::ORIGIN, Point2::new(0.0, 1.0)),
        ];
        for (k, c) in cases.iter().enumerate() {
            let q = integrate_1d(|s| surface_integrand(c, s), 0.0, 1.0, 1e-14).unwrap();
            let cf = surface_integrand_s_integral(c);
            assert!((q - cf).abs() < 1e-12, "case {k}: {q} vs {cf}");
        }
    }

    #[test]
    fn integrand_examples() {
        let t = 0.7;
        let c = JumpCurve::with_traces(
            SourceCurve::segment(Point2::ORIGIN, Point2::new(1.0, 0.0)),
            Trace::Linear { start: Point2::ORIGIN, end: Point2::new(1.0, 0.0) },
            Trace::Constant { value: Point2::ORIGIN },
        );
        for s in [0.0, 0.4, 1.0] {
            assert_abs_diff_eq!(jump_surface_integrand(&c, t, s).unwrap(), t, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(jump_term_explicit(&c, 1e-12).unwrap(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn wall_area_of_constant_jump() {
        let s = straight_jump_scene(-0.5, 2.0, Point2::new(1.0, 2.0), Point2::new(-2.0, -2.0));
        assert_abs_diff_eq!(jump_term(&s, 0, 1e-12).unwrap(), 2.5 * 5.0, epsilon = 1e-12);
        let b = relaxed_area_bv(&s, 1e-10, &PlateauOptions::default()).unwrap();
        assert!(b.junction_terms.is_empty());
        assert_abs_diff_eq!(b.total_lower, 5.0 + 12.5, epsilon = 1e-10);
        assert_eq!(b.total_lower, b.total_upper);
    }

    #[test]
    fn triple_point_matches_homogeneous_formula() {
        let g = PiecewiseConstantCircle::uniform(vec![Point2::ORIGIN, Point2::new(1.0, 0.0), Point2::new(0.0, 1.0)]).unwrap();
        let opts = PlateauOptions { n_rings: 8, n_angular: 48, ..Default::default() };
        let b = relaxed_area_bv(&n_uple_scene(&g, Point2::ORIGIN, 1.0), 1e-9, &opts).unwrap();
        let f = n_uple_point_area(&g, 1.0, &opts).unwrap();
        let expect = PI + 2.0 + 2f64.sqrt() + 0.5;
        assert_abs_diff_eq!(b.total_upper, expect, epsilon = 1e-8);
        assert_abs_diff_eq!(f.total_upper, expect, epsilon = 1e-12);
        assert_eq!(b.jump_terms.len(), f.jump_terms.len());
        for (x, y) in b.jump_terms.iter().zip(&f.jump_terms) {
            assert_eq!(x.0, y.0);
            assert_abs_diff_eq!(x.1, y.1, epsilon = 1e-9);
        }
        let (h, v) = b.csv_record();
        assert_eq!(h.len(), v.len());
        assert_eq!(h.first().unwrap(), "regular");
        assert_eq!(h.last().unwrap(), "total_upper");
    }

    #[test]
    fn tvj_needs_positive_radius() {
        let g = PiecewiseConstantCircle::constant(Point2::ORIGIN);
        assert!(relaxed_tvj(&g, 0.0, &PlateauOptions::default()).is_err());
        assert_eq!(relaxed_tvj(&g, 2.0, &PlateauOptions::default()).unwrap().upper, 0.0);
    }

    #[test]
    fn invalid_scene_is_rejected() {
        let mut s = straight_jump_scene(0.0, 1.0, Point2::ORIGIN, Point2::new(1.0, 0.0));
        s.jump_curves.push(JumpCurve::new(SourceCurve::segment(Point2::new(0.5, -0.5), Point2::new(0.5, 0.5))));
        assert!(matches!(relaxed_area_bv(&s, 1e-8, &PlateauOptions::default()), Err(RelaxedAreaError::InvalidScene(_))));
    }
}
