//! Recovery sequence at an n-uple point: the mollified angular map `γ_k`
//! on `B_r ∖ B_ρ` and a rescaled Plateau competitor on `B_ρ`.

use std::f64::consts::TAU;

use crate::geometry::{Mat2, PiecewiseConstantCircle, Point2, RegionSpec, SampledCircleMap};
use crate::plateau::{plateau_upper, DiscreteMap, PlateauOptions};
use crate::scene::{angular_slope, central_gradient, PlanarMap};

use super::{Jet, RecoveryError, RecoveryMap};

/// Largest boundary mismatch accepted between competitor and `γ_k`.
pub const BOUNDARY_TOL: f64 = 1e-9;

/// Piecewise affine mollification of γ: windows of width `δ_k = 2/k`
/// centred at the jumps, constant elsewhere.
pub fn gamma_k(gamma: &PiecewiseConstantCircle, k: usize) -> Result<SampledCircleMap, RecoveryError> {
    let g = gamma.merged();
    let n = g.len();
    if n == 1 {
        let v = g.values[0];
        return Ok(SampledCircleMap::from_fn(SampledCircleMap::MIN_SAMPLES, |_| v)?);
    }
    if k == 0 {
        return Err(RecoveryError::WindowOverlap {
            delta: f64::INFINITY,
            min_arc: g.arcs.iter().cloned().fold(f64::INFINITY, f64::min),
        });
    }
    let delta = 2.0 / k as f64;
    let min_arc = g.arcs.iter().cloned().fold(f64::INFINITY, f64::min);
    if delta >= min_arc {
        return Err(RecoveryError::WindowOverlap { delta, min_arc });
    }
    let wrap = |a: f64| {
        let a = a.rem_euclid(TAU);
        if a >= TAU {
            0.0
        } else {
            a
        }
    };
    let jumps = g.jump_angles();
    let mut samples = Vec::with_capacity(4 * n);
    for j in 0..n {
        let before = g.values[(j + n - 1) % n];
        let after = g.values[j];
        let t = jumps[j];
        samples.push((wrap(t - 0.5 * delta), before));
        samples.push((wrap(t), before.lerp(after, 0.5)));
        samples.push((wrap(t + 0.5 * delta), after));
        samples.push((wrap(t + 0.5 * g.arcs[j]), after));
    }
    samples.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(SampledCircleMap::new(samples)?)
}

/// `u_k`, centred at `center`.
#[derive(Clone, Debug)]
pub struct NUpleRecovery {
    pub center: Point2,
    pub r: f64,
    pub k: usize,
    pub gamma_k: SampledCircleMap,
    pub competitor: DiscreteMap,
    /// Measured Lipschitz constant of the competitor.
    pub c_k: f64,
    pub rho: f64,
}

/// Assembles `u_k` from a competitor on the unit disk whose boundary
/// values are `γ_k`.
pub fn n_uple_recovery(
    gamma: &PiecewiseConstantCircle,
    center: Point2,
    r: f64,
    k: usize,
    competitor: DiscreteMap,
) -> Result<NUpleRecovery, RecoveryError> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(RecoveryError::InvalidScene(format!("radius {r} must be positive")));
    }
    let gk = gamma_k(gamma, k)?;
    let mesh = &competitor.mesh;
    let mismatch = mesh
        .boundary
        .iter()
        .map(|&b| {
            let (_, slot) = mesh.ring_slot(b);
            competitor.values[b].dist(gk.eval(mesh.angles()[slot]))
        })
        .fold(0.0, f64::max);
    if !(mismatch <= BOUNDARY_TOL) {
        return Err(RecoveryError::BoundaryMismatch { max: mismatch });
    }
    let c_k = competitor.lipschitz_constant();
    let rho = (0.5 * r).min(1.0 / (k.max(1) as f64 * c_k.max(1.0)));
    Ok(NUpleRecovery {
        center,
        r,
        k,
        gamma_k: gk,
        competitor,
        c_k,
        rho,
    })
}

/// The competitor is the best Plateau upper map for `γ_k` as boundary data.
pub fn n_uple_recovery_with_plateau(
    gamma: &PiecewiseConstantCircle,
    center: Point2,
    r: f64,
    k: usize,
    opts: &PlateauOptions,
) -> Result<NUpleRecovery, RecoveryError> {
    let gk = gamma_k(gamma, k)?;
    let up = plateau_upper(gk, opts)?;
    n_uple_recovery(gamma, center, r, k, up.map)
}

impl NUpleRecovery {
    /// Bracketing boundary angles `(a_k, a_{k+1})` of the mesh polygon edge
    /// seen from the origin at `theta` (the second may exceed 2π).
    fn edge_angles(&self, theta: f64) -> (f64, f64) {
        let angles = self.competitor.mesh.angles();
        let m = angles.len();
        let t = theta.rem_euclid(TAU);
        let pos = angles.partition_point(|a| *a <= t);
        if pos == 0 || pos == m {
            let a0 = angles[m - 1];
            let a1 = angles[0] + TAU;
            if pos == 0 {
                (a0 - TAU, a1 - TAU)
            } else {
                (a0, a1)
            }
        } else {
            (angles[pos - 1], angles[pos])
        }
    }

    /// Value of the inner map at `y` in the unit disk: the competitor on its
    /// polygon, radial interpolation to `γ_k` on the thin circular segments
    /// outside it.
    fn inner(&self, y: Point2) -> Point2 {
        let theta = y.angle();
        let chord = self.chord_radius(theta);
        let rr = y.norm();
        if rr <= chord {
            return self.competitor.eval(y);
        }
        let q = Point2::polar(chord, theta);
        let t = ((rr - chord) / (1.0 - chord)).clamp(0.0, 1.0);
        self.competitor.eval(q).lerp(self.gamma_k.eval(theta), t)
    }

    /// Distance from the origin to the mesh polygon along the ray at `theta`.
    fn chord_radius(&self, theta: f64) -> f64 {
        let (a0, a1) = self.edge_angles(theta);
        let half = 0.5 * (a1 - a0);
        let off = theta.rem_euclid(TAU) - (a0 + half).rem_euclid(TAU);
        (half.cos() / off.cos()).min(1.0)
    }

    fn polar(&self, p: Point2) -> (f64, f64) {
        let d = p - self.center;
        (d.norm(), d.angle())
    }

    /// Integration cells of the annulus `B_r ∖ B_ρ`, split at the sample
    /// angles of `γ_k`.
    pub fn annulus_cells(&self) -> Vec<RegionSpec> {
        let s = self.gamma_k.samples();
        (0..s.len())
            .map(|i| {
                let a0 = s[i].0;
                let a1 = if i + 1 < s.len() { s[i + 1].0 } else { s[0].0 + TAU };
                RegionSpec::annular_sector(self.center, self.rho, self.r, a0, a1 - a0)
            })
            .collect()
    }

    /// Cells of `B_ρ`: the scaled mesh triangles and the circular segments
    /// between the mesh polygon and the circle.
    pub fn ball_cells(&self) -> Vec<RegionSpec> {
        let mesh = &self.competitor.mesh;
        let scale = |v: usize| self.center + mesh.vertices[v] * self.rho;
        let mut out: Vec<RegionSpec> = mesh
            .triangles
            .iter()
            .map(|t| RegionSpec::polygon(vec![scale(t[0]), scale(t[1]), scale(t[2])]))
            .collect();
        let angles = mesh.angles();
        let m = angles.len();
        for i in 0..m {
            let a1 = if i + 1 < m { angles[i + 1] } else { angles[0] + TAU };
            out.push(RegionSpec::CircularSegment {
                center: self.center,
                radius: self.rho,
                start_angle: angles[i],
                sweep: a1 - angles[i],
            });
        }
        out
    }

    /// `(area, max |J|)` over the annulus, with `J` and `|∇u|` taken from
    /// the polar form `∂_ρ u = 0`, `∂_θ u = γ_k'`.
    pub fn annulus_area(&self, tol: f64) -> Result<(f64, f64), RecoveryError> {
        let cells = self.annulus_cells();
        let per = tol / cells.len() as f64;
        let max_j = std::cell::Cell::new(0.0f64);
        let mut total = 0.0;
        for c in &cells {
            total += crate::geometry::quadrature_2d(
                c,
                |p| {
                    let jet = self.jet(p);
                    max_j.set(max_j.get().max(jet.jacobian.abs()));
                    jet.area_density()
                },
                per,
            )?;
        }
        Ok((total, max_j.get()))
    }
}

impl PlanarMap for NUpleRecovery {
    fn eval(&self, p: Point2) -> Point2 {
        let (rr, theta) = self.polar(p);
        if rr >= self.rho {
            self.gamma_k.eval(theta)
        } else {
            self.inner((p - self.center) * (1.0 / self.rho))
        }
    }

    fn gradient(&self, p: Point2) -> Mat2 {
        let (rr, theta) = self.polar(p);
        if rr >= self.rho {
            let slope = angular_slope(&self.gamma_k, theta);
            let (s, c) = theta.sin_cos();
            return Mat2::from_columns(slope * (-s / rr), slope * (c / rr));
        }
        let y = (p - self.center) * (1.0 / self.rho);
        if y.norm() <= self.chord_radius(y.angle()) {
            let g = self.competitor.gradient_at(y).m;
            let s = 1.0 / self.rho;
            Mat2::new(g[0][0] * s, g[0][1] * s, g[1][0] * s, g[1][1] * s)
        } else {
            central_gradient(|q| self.eval(q), p, 1e-9 * self.rho)
        }
    }
}

impl RecoveryMap for NUpleRecovery {
    fn cells(&self) -> Vec<RegionSpec> {
        let mut c = self.annulus_cells();
        c.extend(self.ball_cells());
        c
    }

    fn jet(&self, p: Point2) -> Jet {
        let (rr, theta) = self.polar(p);
        if rr >= self.rho {
            // homogeneous of degree 0: the radial derivative vanishes, so
            // the Jacobian is exactly zero
            let slope = angular_slope(&self.gamma_k, theta);
            Jet {
                grad_sq: slope.norm_sq() / (rr * rr),
                jacobian: 0.0,
            }
        } else {
            Jet::from_gradient(&self.gradient(p))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn tri() -> PiecewiseConstantCircle {
        PiecewiseConstantCircle::uniform(vec![Point2::ORIGIN, Point2::new(1.0, 0.0), Point2::new(0.0, 1.0)]).unwrap()
    }

    #[test]
    fn gamma_k_preserves_variation() {
        let g = gamma_k(&tri(), 100).unwrap();
        assert_abs_diff_eq!(g.total_variation(), 2.0 + 2f64.sqrt(), epsilon = 1e-12);
        // equal to γ away from the windows
        for a in [0.5, 2.5, 4.5] {
            assert_eq!(g.eval(a), tri().value_at(a));
        }
        assert!(gamma_k(&tri(), 1).is_ok());
        assert!(gamma_k(&PiecewiseConstantCircle::uniform(vec![Point2::ORIGIN; 1]).unwrap(), 1).is_ok());
        let four = PiecewiseConstantCircle::uniform(vec![
            Point2::ORIGIN,
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
        ])
        .unwrap();
        assert!(matches!(gamma_k(&four, 1), Err(RecoveryError::WindowOverlap { .. })));
    }

    #[test]
    fn constant_gamma_k() {
        let v = Point2::new(2.0, -1.0);
        let g = gamma_k(&PiecewiseConstantCircle::constant(v), 7).unwrap();
        assert!(g.values().all(|p| p == v));
    }

    #[test]
    fn recovery_pieces() {
        let opts = PlateauOptions {
            n_rings: 8,
            n_angular: 48,
            ..Default::default()
        };
        let u = n_uple_recovery_with_plateau(&tri(), Point2::ORIGIN, 1.0, 10, &opts).unwrap();
        assert!(u.rho > 0.0 && u.rho <= 0.5 && u.c_k * u.rho <= 0.1 + 1e-12);
        for a in [0.1, 1.0, 2.0, 4.0] {
            assert!(u.eval(Point2::polar(1.0, a)).dist(u.gamma_k.eval(a)) < 1e-12);
        }
        // continuity across |x| = ρ
        for a in [0.3, 2.1, 3.3, 5.9] {
            let out = u.eval(Point2::polar(u.rho * (1.0 + 1e-9), a));
            let inn = u.eval(Point2::polar(u.rho * (1.0 - 1e-9), a));
            assert!(out.dist(inn) < 1e-6, "{a}: {out:?} {inn:?}");
        }
        // the annulus Jacobian vanishes
        let (_, jmax) = u.annulus_area(1e-6).unwrap();
        assert_eq!(jmax, 0.0);

        let mut bad = u.competitor.clone();
        bad.values[bad.mesh.boundary[0]] += Point2::new(1e-6, 0.0);
        assert!(matches!(
            n_uple_recovery(&tri(), Point2::ORIGIN, 1.0, 10, bad),
            Err(RecoveryError::BoundaryMismatch { .. })
        ));
    }
}
