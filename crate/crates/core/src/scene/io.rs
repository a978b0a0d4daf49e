//! JSON encoding of scenes.
//!
//! ```json
//! {
//!   "schema": "bv-relax/1",
//!   "domain": {"kind": "disk", "center": [0, 0], "radius": 1},
//!   "regions": [{"shape": {...}, "map": {"kind": "constant", "value": [0, 0]}}],
//!   "jump_curves": [{"curve": {"kind": "segment", "start": [0, 0], "end": [1, 0]}}],
//!   "junctions": [{"point": [0, 0], "sector_values": [...], "sector_angles": [...]}]
//! }
//! ```

use super::{PiecewiseMapScene, SceneError};

pub const SCHEMA: &str = "bv-relax/1";

impl PiecewiseMapScene {
    /// Parses and structurally checks a scene document.
    pub fn from_json_str(text: &str) -> Result<Self, SceneError> {
        // Check the schema tag first so version mismatches are reported as such.
        let raw: serde_json::Value = serde_json::from_str(text).map_err(parse_error)?;
        let found = raw.get("schema").and_then(|v| v.as_str()).unwrap_or("");
        if found != SCHEMA {
            return Err(SceneError::UnknownSchema {
                found: found.to_string(),
                expected: SCHEMA,
            });
        }
        let scene: PiecewiseMapScene = serde_json::from_str(text).map_err(parse_error)?;
        scene.check_structure()?;
        Ok(scene)
    }

    pub fn to_json_string(&self) -> Result<String, SceneError> {
        serde_json::to_string_pretty(self).map_err(|e| SceneError::Invalid(e.to_string()))
    }

    /// Field-level sanity checks that do not involve the network topology.
    pub fn check_structure(&self) -> Result<(), SceneError> {
        if self.regions.is_empty() {
            return Err(SceneError::Invalid("scene has no regions".into()));
        }
        for (k, r) in self.regions.iter().enumerate() {
            r.map
                .check()
                .map_err(|m| SceneError::Invalid(format!("region {k}: {m}")))?;
            if r.shape.area() <= 0.0 || !r.shape.area().is_finite() {
                return Err(SceneError::Invalid(format!("region {k} has no area")));
            }
        }
        for (l, c) in self.jump_curves.iter().enumerate() {
            c.curve
                .is_valid()
                .map_err(|m| SceneError::Invalid(format!("jump curve {l}: {m}")))?;
            for tr in [&c.trace_plus, &c.trace_minus].into_iter().flatten() {
                tr.is_valid()
                    .map_err(|m| SceneError::Invalid(format!("jump curve {l}: {m}")))?;
            }
        }
        for (i, j) in self.junctions.iter().enumerate() {
            if j.sector_values.len() != j.sector_angles.len() {
                return Err(SceneError::Invalid(format!(
                    "junction {i}: {} values but {} angles",
                    j.sector_values.len(),
                    j.sector_angles.len()
                )));
            }
        }
        Ok(())
    }
}

fn parse_error(e: serde_json::Error) -> SceneError {
    SceneError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{PiecewiseConstantCircle, Point2};
    use crate::scene::n_uple_scene;

    #[test]
    fn round_trip() {
        let g = PiecewiseConstantCircle::uniform(vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(0.0, 1.0),
        ])
        .unwrap();
        let s = n_uple_scene(&g, Point2::ORIGIN, 1.0);
        let text = s.to_json_string().unwrap();
        let back = PiecewiseMapScene::from_json_str(&text).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn rejects_other_schema_and_reports_position() {
        let err = PiecewiseMapScene::from_json_str(r#"{"schema": "bv-relax/2"}"#).unwrap_err();
        assert!(matches!(err, SceneError::UnknownSchema { .. }));
        let err = PiecewiseMapScene::from_json_str("{\n  \"schema\": \"bv-relax/1\",\n  \"domain\": 3\n}").unwrap_err();
        match err {
            SceneError::Parse { line, .. } => assert!(line >= 1),
            other => panic!("unexpected {other:?}"),
        }
        let err = PiecewiseMapScene::from_json_str("{\n  \"schema\": ").unwrap_err();
        assert!(matches!(err, SceneError::Parse { line: 2, .. }));
    }
}
