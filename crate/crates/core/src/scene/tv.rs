//! Total variation of piecewise maps and of their circular slices.

use std::cell::RefCell;

use crate::geometry::{curve_tv, integrate_1d, quadrature_2d, Point2};

use super::{PiecewiseMapScene, PlanarMap, RegionMapSpec, SceneError, TraceSample};

/// The two parts of |Du|(Ω).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TvParts {
    pub absolutely_continuous: f64,
    pub jump: f64,
}

impl TvParts {
    pub fn total(&self) -> f64 {
        self.absolutely_continuous + self.jump
    }
}

/// Integrates `g(trace sample)` over curve `l`, piece by piece between
/// breakpoints.
pub(crate) fn integrate_along_curve(
    scene: &PiecewiseMapScene,
    l: usize,
    tol: f64,
    g: impl Fn(&TraceSample) -> f64,
) -> Result<f64, SceneError> {
    let bps = scene.jump_curves[l].breakpoints();
    let pieces = (bps.len() - 1).max(1);
    let err: RefCell<Option<SceneError>> = RefCell::new(None);
    let mut sum = 0.0;
    for w in bps.windows(2) {
        let v = integrate_1d(
            |t| match scene.trace_sample(l, t) {
                Ok(s) => g(&s),
                Err(e) => {
                    err.borrow_mut().get_or_insert(e);
                    0.0
                }
            },
            w[0],
            w[1],
            tol / pieces as f64,
        )?;
        sum += v;
    }
    match err.into_inner() {
        Some(e) => Err(e),
        None => Ok(sum),
    }
}

impl PiecewiseMapScene {
    /// ∫_{Ω∖Σ}|∇u| and Σ_l ∫|u_l⁺ − u_l⁻| dt.
    pub fn total_variation_parts(&self, tol: f64) -> Result<TvParts, SceneError> {
        let nr = self.regions.len().max(1) as f64;
        let mut ac = 0.0;
        for r in &self.regions {
            ac += match &r.map {
                RegionMapSpec::Constant { .. } => 0.0,
                RegionMapSpec::Affine { matrix, .. } => matrix.frobenius() * r.shape.area(),
                map => quadrature_2d(&r.shape, |p| map.gradient(p).frobenius(), tol / (2.0 * nr))?,
            };
        }
        let nc = self.jump_curves.len().max(1) as f64;
        let mut jump = 0.0;
        for l in 0..self.jump_curves.len() {
            jump += integrate_along_curve(self, l, tol / (2.0 * nc), |s| s.jump().norm())?;
        }
        Ok(TvParts {
            absolutely_continuous: ac,
            jump,
        })
    }

    /// |Du|(Ω) to tolerance `tol`.
    pub fn total_variation(&self, tol: f64) -> Result<f64, SceneError> {
        self.total_variation_parts(tol).map(|p| p.total())
    }
}

/// Total variation of `map` restricted to `∂B_r(center)`, from `n_samples`
/// equally spaced samples (at least 16).
pub fn circular_slice_tv(map: &dyn PlanarMap, center: Point2, r: f64, n_samples: usize) -> f64 {
    let n = n_samples.max(16);
    let mut pts: Vec<Point2> = (0..n)
        .map(|k| map.eval(center + Point2::polar(r, std::f64::consts::TAU * k as f64 / n as f64)))
        .collect();
    pts.push(pts[0]);
    curve_tv(&pts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Mat2, PiecewiseConstantCircle, RegionSpec};
    use crate::scene::{n_uple_scene, straight_jump_scene, Region};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::TAU;

    fn tri() -> PiecewiseConstantCircle {
        PiecewiseConstantCircle::uniform(vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(0.0, 1.0),
        ])
        .unwrap()
    }

    #[test]
    fn triple_point_tv() {
        let s = n_uple_scene(&tri(), Point2::ORIGIN, 1.0);
        assert_abs_diff_eq!(s.total_variation(1e-10).unwrap(), 2.0 + 2f64.sqrt(), epsilon = 1e-10);
    }

    #[test]
    fn constant_map_has_no_variation() {
        let d = RegionSpec::disk(Point2::ORIGIN, 1.0);
        let s = PiecewiseMapScene::new(d.clone(), vec![Region::new(d, RegionMapSpec::constant(Point2::new(3.0, 1.0)))]);
        assert_eq!(s.total_variation(1e-8).unwrap(), 0.0);
        let c = Point2::new(3.0, 1.0);
        assert_eq!(circular_slice_tv(&move |_p: Point2| c, Point2::ORIGIN, 0.5, 64), 0.0);
    }

    #[test]
    fn additive_over_split_rectangle() {
        let up = Point2::new(1.0, 2.0);
        let down = Point2::new(-1.0, 0.5);
        let whole = straight_jump_scene(0.0, 3.0, up, down).total_variation(1e-10).unwrap();
        let left = straight_jump_scene(0.0, 1.2, up, down).total_variation(1e-10).unwrap();
        let right = straight_jump_scene(1.2, 3.0, up, down).total_variation(1e-10).unwrap();
        assert_abs_diff_eq!(whole, left + right, epsilon = 2e-10);
    }

    #[test]
    fn slices() {
        let s = n_uple_scene(&tri(), Point2::ORIGIN, 1.0);
        let expect = 2.0 + 2f64.sqrt();
        for r in [0.25, 0.5, 0.9] {
            assert_abs_diff_eq!(circular_slice_tv(&s, Point2::ORIGIN, r, 3000), expect, epsilon = 1e-12);
        }
        let id = |p: Point2| p;
        // inscribed polygon of the unit circle: 2n sin(π/n)
        let n = 4096.0;
        assert_abs_diff_eq!(circular_slice_tv(&id, Point2::ORIGIN, 1.0, 4096), 2.0 * n * (TAU / (2.0 * n)).sin(), epsilon = 1e-12);
    }

    #[test]
    fn affine_tv() {
        let sq = RegionSpec::rectangle(0.0, 0.0, 1.0, 1.0);
        let s = PiecewiseMapScene::new(sq.clone(), vec![Region::new(sq, RegionMapSpec::affine(Mat2::diag(2.0, 3.0), Point2::ORIGIN))]);
        assert_abs_diff_eq!(s.total_variation(1e-10).unwrap(), 13f64.sqrt(), epsilon = 1e-14);
    }
}
