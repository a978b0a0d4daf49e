//! Smoothed L¹-Jacobian minimization over interior vertex values.

use std::f64::consts::TAU;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::{signed_triangle_area, BoundaryLoop, Point2, SampledCircleMap};

use super::constructive::bouquet_competitor;
use super::mesh::{cone_from, discrete_jacobian_mass, loop_boundary, sampled_boundary, DiscreteMap, DiskMesh};
use super::{PlateauError, PlateauOptions, UpperMethod};

/// Boundary data for the disk problem: a loop (parametrized with constant
/// speed) or an explicitly parametrized circle map.
#[derive(Clone, Debug, PartialEq)]
pub enum BoundaryData {
    Loop(BoundaryLoop),
    Sampled(SampledCircleMap),
}

impl From<BoundaryLoop> for BoundaryData {
    fn from(lp: BoundaryLoop) -> Self {
        BoundaryData::Loop(lp)
    }
}

impl From<SampledCircleMap> for BoundaryData {
    fn from(m: SampledCircleMap) -> Self {
        BoundaryData::Sampled(m)
    }
}

impl BoundaryData {
    fn length(&self) -> f64 {
        match self {
            BoundaryData::Loop(lp) => lp.length(),
            BoundaryData::Sampled(m) => m.total_variation(),
        }
    }

    /// Mesh plus boundary angles/values on it.
    fn discretize(&self, opts: &PlateauOptions) -> (Arc<DiskMesh>, Vec<Point2>) {
        let (angles, values) = match self {
            BoundaryData::Loop(lp) => loop_boundary(lp, opts.n_angular),
            BoundaryData::Sampled(m) => sampled_boundary(m, opts.n_angular),
        };
        (Arc::new(DiskMesh::polar(opts.n_rings, angles)), values)
    }

    fn centroid(&self) -> Point2 {
        match self {
            BoundaryData::Loop(lp) => lp.centroid_of_vertices(),
            BoundaryData::Sampled(m) => m.to_loop().centroid_of_vertices(),
        }
    }
}

/// Result of [`plateau_upper`].
#[derive(Clone, Debug)]
pub struct PlateauUpper {
    pub mass: f64,
    pub map: DiscreteMap,
    pub method: UpperMethod,
    pub iterations: usize,
    /// False when the last smoothing stage hit the iteration cap while the
    /// objective was still dropping by more than 1e-6 (relative) per step.
    pub converged: bool,
}

impl PlateauUpper {
    /// Turns a non-converged run into an error carrying the best value.
    pub fn require_converged(self) -> Result<Self, PlateauError> {
        if self.converged {
            Ok(self)
        } else {
            Err(PlateauError::NonConvergence {
                best: self.mass,
                iterations: self.iterations,
            })
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct Run {
    iterations: usize,
}

/// Discrete upper bound for the Plateau problem with the given boundary data.
pub fn plateau_upper(boundary: impl Into<BoundaryData>, opts: &PlateauOptions) -> Result<PlateauUpper, PlateauError> {
    let boundary = boundary.into();
    let (mesh, bvals) = boundary.discretize(opts);
    let phi_at_slot = |k: usize| bvals[k];
    let length = boundary.length();
    let scale = (length / TAU).powi(2);

    let cone = cone_from(Point2::ORIGIN, phi_at_slot, mesh.clone());
    let mut best = (discrete_jacobian_mass(&cone)?, cone.clone(), UpperMethod::ConeExtension);
    if length == 0.0 || best.0 == 0.0 {
        return Ok(PlateauUpper {
            mass: best.0,
            map: best.1,
            method: UpperMethod::ConeExtension,
            iterations: 0,
            converged: true,
        });
    }

    let centroid = boundary.centroid();
    let collapse = cone_from(centroid, phi_at_slot, mesh.clone());
    let apex = best_cone_apex(&bvals, &[Point2::ORIGIN, centroid], length / TAU);
    let apex_cone = cone_from(apex, phi_at_slot, mesh.clone());
    for start in [&collapse, &apex_cone] {
        let mass = discrete_jacobian_mass(start)?;
        if mass < best.0 {
            best = (mass, start.clone(), UpperMethod::ConeExtension);
        }
    }
    if opts.constructive {
        if let BoundaryData::Loop(lp) = &boundary {
            if let Some(map) = bouquet_competitor(lp, opts.n_rings, opts.n_angular) {
                let mass = discrete_jacobian_mass(&map)?;
                if mass < best.0 {
                    best = (mass, map, UpperMethod::Constructive);
                }
            }
        }
    }
    let mut starts = vec![cone, collapse, apex_cone.clone()];
    let amp = 0.1 * length / TAU;
    for k in 0..opts.jitter_starts {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(k as u64));
        let mut v = apex_cone.clone();
        for (i, x) in v.values.iter_mut().enumerate() {
            if !mesh.is_boundary(i) {
                *x += Point2::new(rng.gen_range(-amp..amp), rng.gen_range(-amp..amp));
            }
        }
        starts.push(v);
    }

    let mut iterations = 0;
    // convergence of the start that produced the best value
    let mut converged = true;

    // coarse to fine: every 2^l-th boundary angle with n_rings / 2^l rings,
    // each solution interpolated into the next mesh as its start
    let factors = coarse_factors(opts.n_rings, mesh.angles().len());
    if !factors.is_empty() {
        let mut prev: Option<DiscreteMap> = None;
        for &f in factors.iter().chain(std::iter::once(&1)) {
            let (level_mesh, level_bvals) = if f == 1 {
                (mesh.clone(), bvals.clone())
            } else {
                let angles = mesh.angles().iter().step_by(f).copied().collect();
                let vals = bvals.iter().step_by(f).copied().collect();
                (Arc::new(DiskMesh::polar(opts.n_rings / f, angles)), vals)
            };
            let start = match &prev {
                None => cone_from(apex, |k| level_bvals[k], level_mesh.clone()),
                Some(coarse) => prolong(coarse, &level_mesh, &level_bvals),
            };
            let problem = Problem::new(&level_mesh);
            let mut v = start.values;
            // finer levels only refine: skip the widest smoothing stages
            let schedule = if prev.is_none() { &opts.smoothing[..] } else { tail(&opts.smoothing, 3) };
            let mut stage_converged = true;
            for &eps in schedule {
                let stage = problem.minimize(&mut v, eps * scale, opts.max_iters);
                iterations += stage.iterations;
                stage_converged = stage.converged;
            }
            let level = DiscreteMap::new(level_mesh, v);
            if f == 1 {
                let mass = discrete_jacobian_mass(&level)?;
                if mass < best.0 {
                    best = (mass, level, UpperMethod::MeshOptimizer);
                    converged = stage_converged;
                }
            } else {
                prev = Some(level);
            }
        }
    }

    let problem = Problem::new(&mesh);
    for start in starts {
        let mut v = start.values;
        let mut run = Run::default();
        for &eps in &opts.smoothing {
            let stage = problem.minimize(&mut v, eps * scale, opts.max_iters);
            run.iterations += stage.iterations;
            let candidate = DiscreteMap::new(mesh.clone(), v.clone());
            let mass = discrete_jacobian_mass(&candidate)?;
            if mass < best.0 {
                best = (mass, candidate, UpperMethod::MeshOptimizer);
                converged = stage.converged;
            }
        }
        iterations += run.iterations;
    }
    Ok(PlateauUpper {
        mass: best.0,
        map: best.1,
        method: best.2,
        iterations,
        converged,
    })
}

/// Coarsening factors `2^l`, largest first, for which the coarse mesh keeps
/// at least 2 rings and 16 boundary angles.
fn coarse_factors(n_rings: usize, n_angles: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut f = 2;
    while n_rings / f >= 2 && n_angles / f >= 16 {
        out.push(f);
        f *= 2;
    }
    out.reverse();
    out
}

fn tail(s: &[f64], n: usize) -> &[f64] {
    &s[s.len().saturating_sub(n)..]
}

/// Interpolates `coarse` at the interior vertices of `fine` (same boundary
/// angles), keeping the boundary values.
fn prolong(coarse: &DiscreteMap, fine: &Arc<DiskMesh>, bvals: &[Point2]) -> DiscreteMap {
    let values = (0..fine.vertices.len())
        .map(|v| {
            if fine.is_boundary(v) {
                bvals[fine.ring_slot(v).1]
            } else {
                coarse.eval(fine.vertices[v])
            }
        })
        .collect();
    DiscreteMap::new(fine.clone(), values)
}

/// Discrete mass of the cone from `c` over the boundary polygon:
/// Σ_k |area(c, φ_k, φ_{k+1})|, convex in `c`.
fn cone_mass(bvals: &[Point2], c: Point2) -> f64 {
    let n = bvals.len();
    (0..n)
        .map(|k| signed_triangle_area(c, bvals[k], bvals[(k + 1) % n]).abs())
        .sum()
}

/// Apex minimizing the cone mass: best of a few candidates (the given points
/// and up to 64 boundary points), refined by compass search.
fn best_cone_apex(bvals: &[Point2], extra: &[Point2], scale: f64) -> Point2 {
    let stride = (bvals.len() / 64).max(1);
    let mut best = extra[0];
    let mut f = cone_mass(bvals, best);
    for &c in extra.iter().chain(bvals.iter().step_by(stride)) {
        let fc = cone_mass(bvals, c);
        if fc < f {
            best = c;
            f = fc;
        }
    }
    let mut step = 0.25 * scale;
    let dirs = [Point2::new(1.0, 0.0), Point2::new(0.0, 1.0), Point2::new(-1.0, 0.0), Point2::new(0.0, -1.0)];
    while step > 1e-10 * scale {
        let mut moved = false;
        for d in dirs {
            let c = best + d * step;
            let fc = cone_mass(bvals, c);
            if fc < f {
                best = c;
                f = fc;
                moved = true;
                break;
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    best
}

struct Problem<'a> {
    mesh: &'a DiskMesh,
    src_area: Vec<f64>,
    free: Vec<bool>,
}

struct Stage {
    iterations: usize,
    converged: bool,
}

const ARMIJO: f64 = 1e-4;
const STALL: f64 = 1e-9;
const CONVERGED: f64 = 1e-6;

impl<'a> Problem<'a> {
    fn new(mesh: &'a DiskMesh) -> Self {
        let src_area = mesh
            .triangles
            .iter()
            .map(|t| signed_triangle_area(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]))
            .collect();
        let free = (0..mesh.vertices.len()).map(|v| !mesh.is_boundary(v)).collect();
        Problem { mesh, src_area, free }
    }

    /// Σ_T √(s_T² + ε²A_T²) − εA_T with `s_T` the signed image area, i.e.
    /// Σ_T A_T(√(J_T² + ε²) − ε).
    fn objective(&self, v: &[Point2], eps: f64, mut grad: Option<&mut [Point2]>) -> f64 {
        if let Some(g) = grad.as_deref_mut() {
            g.iter_mut().for_each(|x| *x = Point2::ORIGIN);
        }
        let mut f = 0.0;
        for (t, tri) in self.mesh.triangles.iter().enumerate() {
            let (a, b, c) = (v[tri[0]], v[tri[1]], v[tri[2]]);
            let s = signed_triangle_area(a, b, c);
            let e = eps * self.src_area[t];
            let r = (s * s + e * e).sqrt();
            f += r - e;
            if let Some(g) = grad.as_deref_mut() {
                if r > 0.0 {
                    let w = 0.5 * s / r;
                    g[tri[0]] += Point2::new(b.y - c.y, c.x - b.x) * w;
                    g[tri[1]] += Point2::new(c.y - a.y, a.x - c.x) * w;
                    g[tri[2]] += Point2::new(a.y - b.y, b.x - a.x) * w;
                }
            }
        }
        if let Some(g) = grad {
            for (x, &free) in g.iter_mut().zip(&self.free) {
                if !free {
                    *x = Point2::ORIGIN;
                }
            }
        }
        f
    }

    /// Gradient descent with Barzilai–Borwein trial steps and Armijo
    /// backtracking.
    fn minimize(&self, v: &mut [Point2], eps: f64, max_iters: usize) -> Stage {
        let n = v.len();
        let mut g = vec![Point2::ORIGIN; n];
        let mut g_new = vec![Point2::ORIGIN; n];
        let mut trial = vec![Point2::ORIGIN; n];
        let mut f = self.objective(v, eps, Some(&mut g));
        let floor = 1e-300_f64.max(f.abs() * 1e-15);
        let mut step: Option<f64> = None;
        let mut last_rel = f64::INFINITY;
        let mut stalls = 0;
        for it in 0..max_iters {
            let g2: f64 = g.iter().map(|x| x.norm_sq()).sum();
            if g2 == 0.0 {
                return Stage {
                    iterations: it,
                    converged: true,
                };
            }
            // first step moves the steepest vertex by ~1e-2 of the objective's
            // natural length scale
            let mut alpha = step.unwrap_or_else(|| {
                let gmax = g.iter().map(|x| x.norm()).fold(0.0, f64::max);
                1e-2 * f.max(floor).sqrt() / gmax
            });
            let mut accepted = None;
            for _ in 0..60 {
                for i in 0..n {
                    trial[i] = v[i] - g[i] * alpha;
                }
                let ft = self.objective(&trial, eps, None);
                if ft <= f - ARMIJO * alpha * g2 {
                    accepted = Some(ft);
                    break;
                }
                alpha *= 0.5;
            }
            let Some(ft) = accepted else {
                return Stage {
                    iterations: it,
                    converged: true,
                };
            };
            self.objective(&trial, eps, Some(&mut g_new));
            // BB1 step from the accepted move
            let (mut ss, mut sy) = (0.0, 0.0);
            for i in 0..n {
                let s = trial[i] - v[i];
                let y = g_new[i] - g[i];
                ss += s.norm_sq();
                sy += s.dot(y);
            }
            step = Some(if sy > 0.0 { ss / sy } else { 2.0 * alpha });
            v.copy_from_slice(&trial);
            std::mem::swap(&mut g, &mut g_new);
            last_rel = (f - ft) / f.max(floor);
            f = ft;
            if last_rel < STALL {
                stalls += 1;
                if stalls >= 5 {
                    return Stage {
                        iterations: it + 1,
                        converged: true,
                    };
                }
            } else {
                stalls = 0;
            }
        }
        Stage {
            iterations: max_iters,
            converged: last_rel <= CONVERGED,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gradient_matches_finite_differences() {
        let mesh = DiskMesh::uniform(3, 12);
        let p = Problem::new(&mesh);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let v: Vec<Point2> = (0..mesh.vertices.len())
            .map(|_| Point2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let eps = 0.05;
        let mut g = vec![Point2::ORIGIN; v.len()];
        p.objective(&v, eps, Some(&mut g));
        let h = 1e-6;
        for i in [0, 5, 17] {
            for axis in 0..2 {
                let mut vp = v.clone();
                let mut vm = v.clone();
                if axis == 0 {
                    vp[i].x += h;
                    vm[i].x -= h;
                } else {
                    vp[i].y += h;
                    vm[i].y -= h;
                }
                let fd = (p.objective(&vp, eps, None) - p.objective(&vm, eps, None)) / (2.0 * h);
                let an = if axis == 0 { g[i].x } else { g[i].y };
                assert!((fd - an).abs() < 1e-6, "vertex {i} axis {axis}: {fd} vs {an}");
            }
        }
    }

    #[test]
    fn circle_cone_is_kept() {
        let opts = PlateauOptions {
            n_rings: 6,
            n_angular: 48,
            ..PlateauOptions::default()
        };
        let map = SampledCircleMap::from_fn(48, |t| Point2::polar(1.0, t)).unwrap();
        let up = plateau_upper(map, &opts).unwrap();
        let polygon = 0.5 * 48.0 * (TAU / 48.0).sin();
        assert!((up.mass - polygon).abs() < 1e-9, "{}", up.mass);
    }
}
