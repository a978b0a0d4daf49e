//! Failure classes and their exit codes.

use bv_relax::geometry::GeometryError;
use bv_relax::plateau::PlateauError;
use bv_relax::recovery::RecoveryError;
use bv_relax::relaxed_area::RelaxedAreaError;
use bv_relax::scene::SceneError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Invalid(String),
    #[error("numerical failure: {0}")]
    Numeric(String),
    #[error("unknown example {0:?}; expected one of triple, nuple, butterfly, infinite-triple")]
    UnknownExample(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Invalid(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::UnknownExample(_) => 4,
        }
    }

    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<SceneError> for CliError {
    fn from(e: SceneError) -> Self {
        match e {
            SceneError::Geometry(g) => g.into(),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        match e {
            GeometryError::Invalid(m) => CliError::Invalid(m),
            other => CliError::Numeric(other.to_string()),
        }
    }
}

impl From<PlateauError> for CliError {
    fn from(e: PlateauError) -> Self {
        match e {
            PlateauError::Options(m) => CliError::Invalid(m),
            other => CliError::Numeric(other.to_string()),
        }
    }
}

impl From<RelaxedAreaError> for CliError {
    fn from(e: RelaxedAreaError) -> Self {
        match e {
            RelaxedAreaError::InvalidScene(m) => CliError::Invalid(m),
            RelaxedAreaError::Scene(s) => s.into(),
            RelaxedAreaError::Geometry(g) => g.into(),
            RelaxedAreaError::Plateau(p) => p.into(),
        }
    }
}

impl From<RecoveryError> for CliError {
    fn from(e: RecoveryError) -> Self {
        match e {
            RecoveryError::InvalidScene(_) | RecoveryError::WindowOverlap { .. } => CliError::Invalid(e.to_string()),
            RecoveryError::BoundaryMismatch { .. } => CliError::Numeric(e.to_string()),
            RecoveryError::Geometry(g) => g.into(),
            RecoveryError::Scene(s) => s.into(),
            RecoveryError::Plateau(p) => p.into(),
        }
    }
}
