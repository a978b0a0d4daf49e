//! Strip interpolation across a straight jump.

use crate::geometry::{Mat2, Point2, RegionSpec};
use crate::scene::{PiecewiseMapScene, PlanarMap, SourceCurve};

use super::{RecoveryError, RecoveryMap};

/// `v_ε`: equal to `u` for `|σ| ≥ ε` and
/// `(ε+σ)/(2ε) u(t,ε) + (ε−σ)/(2ε) u(t,−ε)` inside the strip.
#[derive(Clone, Debug)]
pub struct StraightJumpRecovery {
    pub scene: PiecewiseMapScene,
    pub a: f64,
    pub b: f64,
    pub eps: f64,
}

/// Builds `v_ε` for a scene on `[a, b] × [−1, 1]` whose only jump is
/// `[a, b] × {0}`.
pub fn straight_jump_recovery(scene: &PiecewiseMapScene, eps: f64) -> Result<StraightJumpRecovery, RecoveryError> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(RecoveryError::InvalidScene(format!("ε = {eps} must lie in (0, 1)")));
    }
    let (a, b) = straight_jump_extent(scene)?;
    Ok(StraightJumpRecovery {
        scene: scene.clone(),
        a,
        b,
        eps,
    })
}

fn straight_jump_extent(scene: &PiecewiseMapScene) -> Result<(f64, f64), RecoveryError> {
    let bad = |m: &str| Err(RecoveryError::InvalidScene(m.to_string()));
    let [curve] = scene.jump_curves.as_slice() else {
        return bad("expected exactly one jump curve");
    };
    let &SourceCurve::Segment { start, end } = &curve.curve else {
        return bad("the jump curve must be a segment");
    };
    if start.y != 0.0 || end.y != 0.0 || start.x == end.x {
        return bad("the jump must lie on the axis σ = 0");
    }
    let (a, b) = (start.x.min(end.x), start.x.max(end.x));
    let RegionSpec::Polygon { vertices } = &scene.domain else {
        return bad("the domain must be the rectangle [a, b] × [−1, 1]");
    };
    let corners = [(a, -1.0), (b, -1.0), (b, 1.0), (a, 1.0)];
    let is_rect = vertices.len() == 4
        && corners
            .iter()
            .all(|&(x, y)| vertices.iter().any(|v| v.dist(Point2::new(x, y)) <= 1e-12));
    if !is_rect {
        return bad("the domain must be the rectangle [a, b] × [−1, 1]");
    }
    Ok((a, b))
}

impl StraightJumpRecovery {
    fn in_strip(&self, p: Point2) -> bool {
        p.y.abs() < self.eps
    }

    fn weight(&self, sigma: f64) -> f64 {
        (self.eps + sigma) / (2.0 * self.eps)
    }
}

impl PlanarMap for StraightJumpRecovery {
    fn eval(&self, p: Point2) -> Point2 {
        if !self.in_strip(p) {
            return self.scene.eval(p);
        }
        let w = self.weight(p.y);
        let up = self.scene.eval(Point2::new(p.x, self.eps));
        let down = self.scene.eval(Point2::new(p.x, -self.eps));
        up * w + down * (1.0 - w)
    }

    fn gradient(&self, p: Point2) -> Mat2 {
        if !self.in_strip(p) {
            return self.scene.gradient(p);
        }
        let w = self.weight(p.y);
        let (pu, pd) = (Point2::new(p.x, self.eps), Point2::new(p.x, -self.eps));
        let dt = self.scene.gradient(pu).column(0) * w + self.scene.gradient(pd).column(0) * (1.0 - w);
        let ds = (self.scene.eval(pu) - self.scene.eval(pd)) * (0.5 / self.eps);
        Mat2::from_columns(dt, ds)
    }
}

impl RecoveryMap for StraightJumpRecovery {
    fn cells(&self) -> Vec<RegionSpec> {
        let (a, b, e) = (self.a, self.b, self.eps);
        vec![
            RegionSpec::rectangle(a, e, b, 1.0),
            RegionSpec::rectangle(a, 0.0, b, e),
            RegionSpec::rectangle(a, -e, b, 0.0),
            RegionSpec::rectangle(a, -1.0, b, -e),
        ]
    }
}
