//! Piecewise constant maps on the unit circle.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::{BoundaryLoop, GeometryError, Point2};

/// A map 𝕊¹ → ℝ² taking `values[k]` on the arc of length `arcs[k]`; arcs are
/// laid out counterclockwise starting at `start_angle`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseConstantCircle {
    #[serde(default)]
    pub start_angle: f64,
    pub arcs: Vec<f64>,
    pub values: Vec<Point2>,
}

impl PiecewiseConstantCircle {
    pub fn new(start_angle: f64, arcs: Vec<f64>, values: Vec<Point2>) -> Result<Self, GeometryError> {
        let c = PiecewiseConstantCircle {
            start_angle,
            arcs,
            values,
        };
        c.check()?;
        Ok(c)
    }

    /// Equal arcs starting at angle 0.
    pub fn uniform(values: Vec<Point2>) -> Result<Self, GeometryError> {
        let n = values.len().max(1);
        Self::new(0.0, vec![TAU / n as f64; n], values)
    }

    pub fn constant(value: Point2) -> Self {
        PiecewiseConstantCircle {
            start_angle: 0.0,
            arcs: vec![TAU],
            values: vec![value],
        }
    }

    pub fn check(&self) -> Result<(), GeometryError> {
        if self.values.is_empty() || self.values.len() != self.arcs.len() {
            return Err(GeometryError::Invalid(format!(
                "piecewise constant circle needs matching non-empty arcs/values ({} vs {})",
                self.arcs.len(),
                self.values.len()
            )));
        }
        if self.arcs.iter().any(|a| !(*a > 0.0) || !a.is_finite()) {
            return Err(GeometryError::Invalid("arc lengths must be positive".into()));
        }
        let sum: f64 = self.arcs.iter().sum();
        if (sum - TAU).abs() > 1e-9 {
            return Err(GeometryError::Invalid(format!("arcs sum to {sum}, expected 2π")));
        }
        if self.values.iter().any(|v| !v.is_finite()) || !self.start_angle.is_finite() {
            return Err(GeometryError::Invalid("non-finite circle data".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Angles at which arc `k` begins (arc `k` is preceded by a jump there).
    pub fn jump_angles(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.arcs.len());
        let mut a = self.start_angle;
        for arc in &self.arcs {
            out.push(a);
            a += arc;
        }
        out
    }

    /// Index of the arc containing `angle`.
    pub fn arc_index(&self, angle: f64) -> usize {
        let rel = (angle - self.start_angle).rem_euclid(TAU);
        let mut acc = 0.0;
        for (k, arc) in self.arcs.iter().enumerate() {
            acc += arc;
            if rel < acc {
                return k;
            }
        }
        self.arcs.len() - 1
    }

    pub fn value_at(&self, angle: f64) -> Point2 {
        self.values[self.arc_index(angle)]
    }

    /// L(γ) = Σ |β_{k+1} − β_k| cyclically: the total variation of γ.
    pub fn jump_length(&self) -> f64 {
        let n = self.values.len();
        (0..n)
            .map(|k| self.values[k].dist(self.values[(k + 1) % n]))
            .sum()
    }

    /// Merges consecutive (cyclically) equal values into single arcs.
    pub fn merged(&self) -> PiecewiseConstantCircle {
        let n = self.values.len();
        if n == 1 {
            return self.clone();
        }
        // rotate so that index 0 starts a new run
        let Some(first) = (0..n).find(|&k| self.values[k] != self.values[(k + n - 1) % n]) else {
            return PiecewiseConstantCircle {
                start_angle: self.start_angle,
                arcs: vec![TAU],
                values: vec![self.values[0]],
            };
        };
        let angles = self.jump_angles();
        let mut arcs = Vec::new();
        let mut values = Vec::new();
        for j in 0..n {
            let k = (first + j) % n;
            if j > 0 && self.values[k] == *values.last().unwrap() {
                *arcs.last_mut().unwrap() += self.arcs[k];
            } else {
                arcs.push(self.arcs[k]);
                values.push(self.values[k]);
            }
        }
        PiecewiseConstantCircle {
            start_angle: angles[first],
            arcs,
            values,
        }
    }

    /// Closed polygon through the values in order, with consecutive repeats
    /// collapsed.
    pub fn tilde_gamma(&self) -> BoundaryLoop {
        BoundaryLoop::new(self.values.clone()).expect("non-empty values")
    }

    pub fn map_values(&self, f: impl Fn(Point2) -> Point2) -> PiecewiseConstantCircle {
        PiecewiseConstantCircle {
            start_angle: self.start_angle,
            arcs: self.arcs.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn arcs_and_values() {
        let g = PiecewiseConstantCircle::uniform(vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(0.0, 1.0),
        ])
        .unwrap();
        assert_eq!(g.value_at(0.1), Point2::new(0.0, 0.0));
        assert_eq!(g.value_at(TAU / 3.0 + 0.1), Point2::new(1.0, 0.0));
        assert_eq!(g.value_at(-0.1), Point2::new(0.0, 1.0));
        assert_abs_diff_eq!(g.jump_length(), 2.0 + 2f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn merge_wraps_around() {
        let a = Point2::new(0.0, 0.0);
        let b = Point2::new(1.0, 0.0);
        let g = PiecewiseConstantCircle::uniform(vec![a, b, b, a]).unwrap();
        let m = g.merged();
        assert_eq!(m.values, vec![b, a]);
        assert_abs_diff_eq!(m.arcs[0], std::f64::consts::PI, epsilon = 1e-15);
        assert_abs_diff_eq!(m.start_angle, TAU / 4.0, epsilon = 1e-15);
        assert!(PiecewiseConstantCircle::new(0.0, vec![1.0], vec![a]).is_err());
    }
}
