//! Recovery sequences realizing the relaxation upper bound, and numerical
//! witnesses of strict BV convergence and of convergence of areas.

mod nuple;
mod straight;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{quadrature_2d, GeometryError, Mat2, Point2, RegionSpec};
use crate::plateau::PlateauError;
use crate::scene::{circular_slice_tv, PiecewiseMapScene, PlanarMap, SceneError};

pub use nuple::{gamma_k, n_uple_recovery, n_uple_recovery_with_plateau, NUpleRecovery, BOUNDARY_TOL};
pub use straight::{straight_jump_recovery, StraightJumpRecovery};

#[derive(Debug, Error)]
pub enum RecoveryError {
    #[error("invalid recovery input: {0}")]
    InvalidScene(String),
    #[error("window width {delta} is not below the shortest arc {min_arc}")]
    WindowOverlap { delta: f64, min_arc: f64 },
    #[error("competitor boundary differs from γ_k by {max:e}")]
    BoundaryMismatch { max: f64 },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Scene(#[from] SceneError),
    #[error(transparent)]
    Plateau(#[from] PlateauError),
}

/// Samples per circular slice.
pub const SLICE_SAMPLES: usize = 4096;

/// First-order data entering `|∇v|` and the area integrand.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub grad_sq: f64,
    pub jacobian: f64,
}

impl Jet {
    pub fn from_gradient(g: &Mat2) -> Jet {
        let f = g.frobenius();
        Jet {
            grad_sq: f * f,
            jacobian: g.det(),
        }
    }

    /// `√(1 + |∇v|² + J²)`.
    pub fn area_density(&self) -> f64 {
        (1.0 + self.grad_sq + self.jacobian * self.jacobian).sqrt()
    }
}

/// An element of a recovery sequence: a map together with a splitting of
/// its domain into cells on which it is smooth.
pub trait RecoveryMap: PlanarMap {
    fn cells(&self) -> Vec<RegionSpec>;

    fn jet(&self, p: Point2) -> Jet {
        Jet::from_gradient(&self.gradient(p))
    }

    /// `|Dv|(Ω)`; for Lipschitz maps the integral of `|∇v|` over the cells.
    fn total_variation(&self, tol: f64) -> Result<f64, RecoveryError> {
        integrate_cells(&self.cells(), |p| self.jet(p).grad_sq.sqrt(), tol)
    }

    /// `𝒜(v) = ∫ √(1 + |∇v|² + J²)`.
    fn area(&self, tol: f64) -> Result<f64, RecoveryError> {
        integrate_cells(&self.cells(), |p| self.jet(p).area_density(), tol)
    }
}

/// A scene as a (constant) sequence element: the total variation includes
/// the jump part.
impl RecoveryMap for PiecewiseMapScene {
    fn cells(&self) -> Vec<RegionSpec> {
        self.regions.iter().map(|r| r.shape.clone()).collect()
    }

    fn total_variation(&self, tol: f64) -> Result<f64, RecoveryError> {
        Ok(PiecewiseMapScene::total_variation(self, tol)?)
    }
}

/// Sum of the integrals over the cells, the tolerance split evenly.
fn integrate_cells(cells: &[RegionSpec], f: impl Fn(Point2) -> f64, tol: f64) -> Result<f64, RecoveryError> {
    let per = tol / cells.len().max(1) as f64;
    let mut total = 0.0;
    for c in cells {
        total += quadrature_2d(c, &f, per)?;
    }
    Ok(total)
}

/// `∫|v − u|` over the cells of `v`.
pub fn l1_distance(v: &dyn RecoveryMap, u: &dyn PlanarMap, tol: f64) -> Result<f64, RecoveryError> {
    integrate_cells(&v.cells(), |p| (v.eval(p) - u.eval(p)).norm(), tol)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ConvergenceRow {
    pub parameter: f64,
    pub l1_gap: f64,
    pub tv_gap: f64,
    /// `|TV(v|∂B) − TV(u|∂B)|` per slice.
    pub slice_gaps: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StrictConvergenceReport {
    pub target_tv: f64,
    pub rows: Vec<ConvergenceRow>,
    /// L¹ and TV gaps never increase (up to the tolerance) along the rows.
    pub monotone: bool,
    pub final_l1_gap: f64,
    pub final_tv_gap: f64,
}

/// Witnesses `v → u` strictly: L¹ distance, total variation gap and
/// circular slice gaps for each element, in the given order.
pub fn strict_convergence_check(
    sequence: &[(f64, &dyn RecoveryMap)],
    target: &PiecewiseMapScene,
    slices: &[(Point2, f64)],
    tol: f64,
) -> Result<StrictConvergenceReport, RecoveryError> {
    let target_tv = PiecewiseMapScene::total_variation(target, tol)?;
    let target_slices: Vec<f64> = slices
        .iter()
        .map(|&(c, r)| circular_slice_tv(target, c, r, SLICE_SAMPLES))
        .collect();
    let mut rows = Vec::with_capacity(sequence.len());
    for &(parameter, v) in sequence {
        let slice_gaps = slices
            .iter()
            .zip(&target_slices)
            .map(|(&(c, r), t)| (circular_slice_tv(v, c, r, SLICE_SAMPLES) - t).abs())
            .collect();
        rows.push(ConvergenceRow {
            parameter,
            l1_gap: l1_distance(v, target, tol)?,
            tv_gap: (v.total_variation(tol)? - target_tv).abs(),
            slice_gaps,
        });
    }
    let monotone = rows
        .windows(2)
        .all(|w| w[1].l1_gap <= w[0].l1_gap + tol && w[1].tv_gap <= w[0].tv_gap + tol);
    let last = rows.last();
    Ok(StrictConvergenceReport {
        target_tv,
        monotone,
        final_l1_gap: last.map_or(0.0, |r| r.l1_gap),
        final_tv_gap: last.map_or(0.0, |r| r.tv_gap),
        rows,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AreaRow {
    pub parameter: f64,
    pub area: f64,
    /// `|𝒜(v) − formula|`.
    pub gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AreaConvergenceReport {
    pub formula: f64,
    pub rows: Vec<AreaRow>,
    /// Least-squares slope of `log gap` against `log parameter`, when at
    /// least two gaps are positive.
    pub rate: Option<f64>,
}

impl AreaConvergenceReport {
    pub fn final_gap(&self) -> f64 {
        self.rows.last().map_or(0.0, |r| r.gap)
    }
}

pub fn area_convergence_check(
    sequence: &[(f64, &dyn RecoveryMap)],
    formula: f64,
    tol: f64,
) -> Result<AreaConvergenceReport, RecoveryError> {
    let mut rows = Vec::with_capacity(sequence.len());
    for &(parameter, v) in sequence {
        let area = v.area(tol)?;
        rows.push(AreaRow {
            parameter,
            area,
            gap: (area - formula).abs(),
        });
    }
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.gap > 0.0 && r.parameter > 0.0)
        .map(|r| (r.parameter.ln(), r.gap.ln()))
        .collect();
    Ok(AreaConvergenceReport {
        formula,
        rate: fit_slope(&pts),
        rows,
    })
}

fn fit_slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// One line of the plotting table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RecoveryRow {
    pub parameter: f64,
    pub l1_gap: f64,
    pub tv_gap: f64,
    pub area_gap: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RecoveryReport {
    pub rows: Vec<RecoveryRow>,
}

impl RecoveryReport {
    /// Joins the two checks row by row (they must share the parameters).
    pub fn combine(strict: &StrictConvergenceReport, area: &AreaConvergenceReport) -> RecoveryReport {
        let rows = strict
            .rows
            .iter()
            .zip(&area.rows)
            .map(|(s, a)| RecoveryRow {
                parameter: s.parameter,
                l1_gap: s.l1_gap,
                tv_gap: s.tv_gap,
                area_gap: a.gap,
            })
            .collect();
        RecoveryReport { rows }
    }

    pub const CSV_HEADER: [&'static str; 4] = ["parameter", "l1_gap", "tv_gap", "area_gap"];

    pub fn to_csv(&self) -> String {
        let mut out = Self::CSV_HEADER.join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!("{:e},{:e},{:e},{:e}\n", r.parameter, r.l1_gap, r.tv_gap, r.area_gap));
        }
        out
    }
}
