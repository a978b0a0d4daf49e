//! The planar Plateau functional
//! `P(φ) = inf { ∫_{B₁} |Jv| : v Lipschitz, v = φ on ∂B₁ }`
//! and its relaxation `P̄(γ) = P(γ̃)` on piecewise constant circle data.
//!
//! Every value comes as a certificate: a lower bound from the winding-number
//! integral and an upper bound from the best of a closed form, an explicit
//! construction and a discrete optimizer.

mod closed_form;
mod constructive;
mod mesh;
mod optimizer;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{winding_area_integral_detailed, BoundaryLoop, PiecewiseConstantCircle};

pub use closed_form::{is_simple, plateau_closed_form, ClosedForm, ClosedFormClass, SNAP_TOL};
pub use constructive::bouquet_competitor;
pub use mesh::{
    cone_extension, discrete_jacobian_mass, loop_boundary, sampled_boundary, DiscreteMap, DiskMesh, MeshStats,
    MIN_TRIANGLE_AREA,
};
pub use optimizer::{plateau_upper, BoundaryData, PlateauUpper};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlateauError {
    #[error("source triangle {triangle} has area {area:e}, below 1e-14")]
    DegenerateTriangle { triangle: usize, area: f64 },
    #[error("optimizer still decreasing after {iterations} iterations (best value {best})")]
    NonConvergence { best: f64, iterations: usize },
    #[error("invalid plateau options: {0}")]
    Options(String),
}

/// Optimizer and mesh settings (flat key-value config).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct PlateauOptions {
    /// Iteration cap per smoothing stage.
    pub max_iters: usize,
    pub seed: u64,
    pub n_rings: usize,
    pub n_angular: usize,
    /// Smoothing schedule, relative to `(length / 2π)²`.
    pub smoothing: Vec<f64>,
    pub jitter_starts: usize,
    /// Try the explicit bouquet competitor.
    pub constructive: bool,
    /// Absolute tolerance of the lower bound.
    pub tol: f64,
}

impl Default for PlateauOptions {
    fn default() -> Self {
        PlateauOptions {
            max_iters: 400,
            seed: 0,
            n_rings: 24,
            n_angular: 96,
            smoothing: vec![1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6],
            jitter_starts: 2,
            constructive: true,
            tol: 1e-9,
        }
    }
}

impl PlateauOptions {
    pub fn check(&self) -> Result<(), PlateauError> {
        let bad = |m: &str| Err(PlateauError::Options(m.to_string()));
        if self.n_rings < 1 {
            return bad("nRings must be at least 1");
        }
        if self.n_angular < 3 {
            return bad("nAngular must be at least 3");
        }
        if !(self.tol > 0.0) {
            return bad("tol must be positive");
        }
        if self.smoothing.iter().any(|e| !(*e > 0.0)) {
            return bad("smoothing values must be positive");
        }
        Ok(())
    }
}

/// Which competitor produced the upper bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum UpperMethod {
    ClosedForm,
    Constructive,
    MeshOptimizer,
    ConeExtension,
}

impl UpperMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            UpperMethod::ClosedForm => "closedForm",
            UpperMethod::Constructive => "constructive",
            UpperMethod::MeshOptimizer => "meshOptimizer",
            UpperMethod::ConeExtension => "coneExtension",
        }
    }
}

impl std::fmt::Display for UpperMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PlateauCertificate {
    pub lower: f64,
    /// Bound on the quadrature error of `lower`.
    pub lower_error: f64,
    pub upper: f64,
    pub upper_method: UpperMethod,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<ClosedFormClass>,
    pub mesh_stats: MeshStats,
    pub iterations: usize,
    pub converged: bool,
}

impl PlateauCertificate {
    /// `upper − lower`, never reported below the achieved tolerance.
    pub fn gap(&self) -> f64 {
        (self.upper - self.lower).max(self.lower_error)
    }

    /// Gap relative to the upper bound (0 when both vanish).
    pub fn relative_gap(&self) -> f64 {
        if self.upper > 0.0 {
            (self.upper - self.lower).max(0.0) / self.upper
        } else {
            0.0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

/// `γ ↦ γ̃`: the closed polygon through the values of γ.
pub fn tilde_gamma(gamma: &PiecewiseConstantCircle) -> BoundaryLoop {
    gamma.tilde_gamma()
}

/// ∫|winding number| of the loop, a lower bound for its Plateau value.
pub fn plateau_lower(lp: &BoundaryLoop, tol: f64) -> f64 {
    winding_area_integral_detailed(lp, tol).value
}

/// Lower and upper bounds for `P(loop)`.
pub fn plateau_certify(lp: &BoundaryLoop, opts: &PlateauOptions) -> Result<PlateauCertificate, PlateauError> {
    opts.check()?;
    let lower = winding_area_integral_detailed(lp, opts.tol);
    let closed = plateau_closed_form(lp);
    // (value, method), in tie-break order
    let mut candidates: Vec<(f64, UpperMethod)> = Vec::new();
    if let Some(cf) = closed {
        candidates.push((cf.value, UpperMethod::ClosedForm));
    }
    // the optimizer also tries the constructive competitor
    let up = plateau_upper(lp.clone(), opts)?;
    candidates.push((up.mass, up.method));
    let best = candidates.iter().map(|c| c.0).fold(f64::INFINITY, f64::min);
    let slack = 1e-9 * best.abs().max(1e-300);
    let (upper, upper_method) = *candidates
        .iter()
        .filter(|c| c.0 <= best + slack)
        .min_by_key(|c| c.1)
        .expect("at least one candidate");
    Ok(PlateauCertificate {
        lower: lower.value,
        lower_error: lower.error_bound,
        upper,
        upper_method,
        closed_form: closed.map(|c| c.class),
        mesh_stats: up.map.mesh.stats(),
        iterations: up.iterations,
        converged: up.converged,
    })
}

/// `P̄(γ) = P(γ̃)`.
pub fn plateau_relaxed(gamma: &PiecewiseConstantCircle, opts: &PlateauOptions) -> Result<PlateauCertificate, PlateauError> {
    plateau_certify(&tilde_gamma(gamma), opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point2;

    fn tri() -> BoundaryLoop {
        BoundaryLoop::new(vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(0.0, 1.0)]).unwrap()
    }

    #[test]
    fn triangle_certificate() {
        let c = plateau_certify(&tri(), &PlateauOptions::default()).unwrap();
        assert!((c.lower - 0.5).abs() < 1e-9);
        assert_eq!(c.upper, 0.5);
        assert_eq!(c.upper_method, UpperMethod::ClosedForm);
        assert!(c.gap() >= 0.0 && c.gap() < 1e-9);
    }

    #[test]
    fn optimizer_reaches_triangle_area() {
        let up = plateau_upper(tri(), &PlateauOptions::default()).unwrap();
        assert!((up.mass - 0.5).abs() < 0.005, "{}", up.mass);
    }

    #[test]
    fn constant_gamma() {
        let g = PiecewiseConstantCircle::constant(Point2::new(1.0, 2.0));
        let c = plateau_relaxed(&g, &PlateauOptions::default()).unwrap();
        assert_eq!((c.lower, c.upper), (0.0, 0.0));
    }

    #[test]
    fn options_json() {
        let o: PlateauOptions = serde_json::from_str(r#"{"nRings": 8, "seed": 3, "maxIters": 10}"#).unwrap();
        assert_eq!((o.n_rings, o.seed, o.max_iters, o.n_angular), (8, 3, 10, 96));
        assert!(PlateauOptions { tol: 0.0, ..o }.check().is_err());
    }

    #[test]
    fn certificate_json_names() {
        let c = plateau_certify(&tri(), &PlateauOptions { n_rings: 4, n_angular: 24, ..Default::default() }).unwrap();
        let s = c.to_json();
        assert!(s.contains("\"upperMethod\": \"closedForm\""), "{s}");
        assert!(s.contains("\"meshStats\""));
        let back: PlateauCertificate = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }
}
