//! Scene and loop files.
//!
//! A loop file is a JSON object with either a closed polygon
//!
//! ```json
//! {"vertices": [[0, 0], [1, 0], [0, 1]]}
//! ```
//!
//! or piecewise constant circle data (equal arcs when `arcs` is omitted)
//!
//! ```json
//! {"values": [[0, 0], [1, 0], [0, 1]], "arcs": [2.0, 2.0, 2.2831853071795862], "startAngle": 0}
//! ```

use std::path::Path;

use bv_relax::geometry::{BoundaryLoop, PiecewiseConstantCircle, Point2};
use bv_relax::scene::PiecewiseMapScene;
use serde::Deserialize;

use crate::error::CliError;

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path.display().to_string(), e))
}

pub fn load_scene(path: &Path) -> Result<PiecewiseMapScene, CliError> {
    let text = read(path)?;
    PiecewiseMapScene::from_json_str(&text).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
struct LoopFile {
    #[serde(default)]
    vertices: Option<Vec<Point2>>,
    #[serde(default)]
    values: Option<Vec<Point2>>,
    #[serde(default)]
    arcs: Option<Vec<f64>>,
    #[serde(default)]
    start_angle: f64,
}

/// Contents of a loop file.
#[derive(Clone, Debug, PartialEq)]
pub enum LoopInput {
    Polygon(BoundaryLoop),
    Circle(PiecewiseConstantCircle),
}

impl LoopInput {
    /// The polygon whose Plateau value is asked for (`γ̃` for circle data).
    pub fn polygon(&self) -> BoundaryLoop {
        match self {
            LoopInput::Polygon(lp) => lp.clone(),
            LoopInput::Circle(g) => g.tilde_gamma(),
        }
    }

    /// Circle data; a polygon is read as equal arcs through its vertices.
    pub fn circle(&self) -> Result<PiecewiseConstantCircle, CliError> {
        match self {
            LoopInput::Circle(g) => Ok(g.clone()),
            LoopInput::Polygon(lp) => Ok(PiecewiseConstantCircle::uniform(lp.vertices().to_vec())?),
        }
    }
}

pub fn parse_loop(text: &str) -> Result<LoopInput, String> {
    let f: LoopFile = serde_json::from_str(text)
        .map_err(|e| format!("malformed loop file at line {}, column {}: {e}", e.line(), e.column()))?;
    match (f.vertices, f.values) {
        (Some(v), None) => {
            if f.arcs.is_some() {
                return Err("`arcs` only applies to `values`".into());
            }
            BoundaryLoop::new(v).map(LoopInput::Polygon).map_err(|e| e.to_string())
        }
        (None, Some(values)) => {
            let g = match f.arcs {
                Some(arcs) => PiecewiseConstantCircle::new(f.start_angle, arcs, values),
                None => PiecewiseConstantCircle::uniform(values).map(|g| PiecewiseConstantCircle {
                    start_angle: f.start_angle,
                    ..g
                }),
            };
            g.map(LoopInput::Circle).map_err(|e| e.to_string())
        }
        _ => Err("a loop file needs exactly one of `vertices` or `values`".into()),
    }
}

pub fn load_loop(path: &Path) -> Result<LoopInput, CliError> {
    let text = read(path)?;
    parse_loop(&text).map_err(|m| CliError::Invalid(format!("{}: {m}", path.display())))
}
