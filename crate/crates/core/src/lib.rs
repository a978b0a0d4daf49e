//! Relaxed area of piecewise Lipschitz planar maps.
//!
//! The relaxed area (with respect to strict BV convergence) of a piecewise
//! Lipschitz map `u : Ω ⊂ ℝ² → ℝ²` splits into three terms:
//!
//! * the regular graph area `∫_Ω √(1 + |∇u|² + |Ju|²)`,
//! * for every jump curve, the area of the ruled surface joining the traces
//!   `u⁻` and `u⁺`,
//! * for every junction, the relaxed Plateau value `P̄(γ)` of the
//!   piecewise constant loop of sector values around it.
//!
//! [`relaxed_area::relaxed_area_bv`] assembles the three terms;
//! [`plateau`] certifies the junction terms with lower and upper bounds;
//! [`recovery`] builds explicit sequences realizing the upper bound.
//!
//! ```
//! use bv_relax::geometry::{PiecewiseConstantCircle, Point2};
//! use bv_relax::plateau::PlateauOptions;
//! use bv_relax::relaxed_area::n_uple_point_area;
//!
//! let gamma = PiecewiseConstantCircle::uniform(vec![
//!     Point2::new(0.0, 0.0),
//!     Point2::new(1.0, 0.0),
//!     Point2::new(0.0, 1.0),
//! ])?;
//! let area = n_uple_point_area(&gamma, 1.0, &PlateauOptions::default())?;
//! let exact = std::f64::consts::PI + 2.0 + 2f64.sqrt() + 0.5;
//! assert!((area.total_upper - exact).abs() < 1e-6);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod geometry;
pub mod scene;
pub mod plateau;
pub mod relaxed_area;
pub mod recovery;

pub use geometry::{BoundaryLoop, GeometryError, Mat2, PiecewiseConstantCircle, Point2, RegionSpec, SampledCircleMap};
pub use plateau::{plateau_certify, PlateauCertificate, PlateauError, PlateauOptions, UpperMethod};
pub use recovery::RecoveryError;
pub use relaxed_area::{relaxed_area_bv, AreaBreakdown, RelaxedAreaError};
pub use scene::{PiecewiseMapScene, PlanarMap, SceneError};

/// Any error raised by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Scene(#[from] SceneError),
    #[error(transparent)]
    Plateau(#[from] PlateauError),
    #[error(transparent)]
    RelaxedArea(#[from] RelaxedAreaError),
    #[error(transparent)]
    Recovery(#[from] RecoveryError),
}
