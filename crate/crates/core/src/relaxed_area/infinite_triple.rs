//! The infinite triple point: a map with finite total variation whose
//! BV-relaxed area is infinite.

use serde::{Deserialize, Serialize};

use crate::geometry::Point2;
use crate::plateau::{plateau_closed_form, plateau_lower};
use crate::scene::infinite_triple_point_scene;

use super::{triangle_area, RelaxedAreaError};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct InfiniteTripleReport {
    pub levels: usize,
    /// `|Du|(B₁)` of the level-N truncation.
    pub tv_partial: f64,
    /// `7/3|β−α| + 2/3|α−γ| + |β−γ|`.
    pub tv_limit: f64,
    /// `Σ_{i ≤ N} P̄` at the junctions `A_i`, equal to `N·|T_{αβγ}|`.
    pub tvj_lower: f64,
    pub triangle_area: f64,
    /// `π + 23/6|β−α| + 13/6|α−γ|`, the finite L¹-relaxed area bound.
    pub l1_upper: f64,
}

impl InfiniteTripleReport {
    pub fn tv_gap(&self) -> f64 {
        (self.tv_partial - self.tv_limit).abs()
    }
}

pub fn infinite_triple_point_report(
    alpha: Point2,
    beta: Point2,
    gamma: Point2,
    levels: usize,
    tol: f64,
) -> Result<InfiniteTripleReport, RelaxedAreaError> {
    let t = triangle_area(alpha, beta, gamma);
    if !(t > 0.0) {
        return Err(RelaxedAreaError::InvalidScene("α, β, γ must not be collinear".into()));
    }
    if levels == 0 {
        return Err(RelaxedAreaError::InvalidScene("at least one level is needed".into()));
    }
    let (scene, _) = infinite_triple_point_scene(alpha, beta, gamma, levels);
    let tv_partial = scene.total_variation(tol)?;
    // junctions alternate A_i, B_i; the bound uses the A_i
    let mut tvj_lower = 0.0;
    for i in (0..scene.junctions.len()).step_by(2) {
        let g = scene.junction_limit(i, scene.junction_radius(i))?;
        let lp = g.tilde_gamma();
        tvj_lower += match plateau_closed_form(&lp) {
            Some(cf) => cf.value,
            None => plateau_lower(&lp, tol),
        };
    }
    Ok(InfiniteTripleReport {
        levels,
        tv_partial,
        tv_limit: 7.0 / 3.0 * beta.dist(alpha) + 2.0 / 3.0 * alpha.dist(gamma) + beta.dist(gamma),
        tvj_lower,
        triangle_area: t,
        l1_upper: std::f64::consts::PI + 23.0 / 6.0 * beta.dist(alpha) + 13.0 / 6.0 * alpha.dist(gamma),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_levels() {
        let (a, b, g) = (Point2::ORIGIN, Point2::new(1.0, 0.0), Point2::new(0.0, 1.0));
        let r = infinite_triple_point_report(a, b, g, 4, 1e-12).unwrap();
        assert_eq!(r.tvj_lower, 2.0);
        assert_eq!(r.l1_upper, std::f64::consts::PI + 6.0);
        // missing cuts beyond level 4: Σ_{i>4} 2^{-i}|β−γ|
        assert!((r.tv_limit - r.tv_partial - 2f64.sqrt() / 16.0).abs() < 1e-10, "{:?}", r);
        assert!(infinite_triple_point_report(a, b, b * 2.0, 4, 1e-12).is_err());
    }
}
