//! Tail specifications and the normalized problem the samplers work on.

use std::fmt;
use std::str::FromStr;

use crate::error::{Result, TailError};
use crate::model::JointModel;
use crate::target::{negate_target, Monotone, Target, TargetRef};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailSide {
    Left,
    Right,
}

impl TailSide {
    pub fn flip(self) -> Self {
        match self {
            TailSide::Left => TailSide::Right,
            TailSide::Right => TailSide::Left,
        }
    }
}

impl fmt::Display for TailSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TailSide::Left => "left",
            TailSide::Right => "right",
        })
    }
}

impl FromStr for TailSide {
    type Err = TailError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(TailSide::Left),
            "right" => Ok(TailSide::Right),
            other => Err(TailError::Config(format!("unknown tail side '{other}'"))),
        }
    }
}

/// Which tail to simulate, and how deep.
///
/// The left tail is `(z_min, z_min + ε]`, the right tail `(z_max − ε, z_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailSpec {
    side: TailSide,
    epsilon: f64,
    z_min: f64,
    z_max: f64,
}

impl TailSpec {
    /// `epsilon` may equal the full range, in which case the tail is the
    /// whole support.
    pub fn new(side: TailSide, epsilon: f64, z_min: f64, z_max: f64) -> Result<Self> {
        if !(z_min.is_finite() && z_max.is_finite() && z_min < z_max) {
            return Err(TailError::Config(format!(
                "target range [{z_min}, {z_max}] is empty or not finite"
            )));
        }
        if !(epsilon > 0.0 && epsilon <= z_max - z_min) {
            return Err(TailError::Config(format!(
                "epsilon must lie in (0, {}], got {epsilon}",
                z_max - z_min
            )));
        }
        Ok(Self {
            side,
            epsilon,
            z_min,
            z_max,
        })
    }

    /// Reads `z_min = h(lower corner)` and `z_max = h(upper corner)` off the
    /// model's box using the target's monotone directions.
    pub fn for_target(f: &dyn Target, model: &JointModel, side: TailSide, epsilon: f64) -> Result<Self> {
        let (lo, hi) = extreme_corners(f, model);
        Self::new(side, epsilon, f.evaluate(&lo), f.evaluate(&hi))
    }

    pub fn side(&self) -> TailSide {
        self.side
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn z_min(&self) -> f64 {
        self.z_min
    }

    pub fn z_max(&self) -> f64 {
        self.z_max
    }

    /// Boundary of the tail on the interior side.
    pub fn threshold(&self) -> f64 {
        match self.side {
            TailSide::Left => self.z_min + self.epsilon,
            TailSide::Right => self.z_max - self.epsilon,
        }
    }

    pub fn contains(&self, z: f64) -> bool {
        match self.side {
            TailSide::Left => z <= self.threshold(),
            TailSide::Right => z > self.threshold(),
        }
    }

    /// The same tail seen through `−h`.
    pub fn negated(&self) -> Self {
        Self {
            side: self.side.flip(),
            epsilon: self.epsilon,
            z_min: -self.z_max,
            z_max: -self.z_min,
        }
    }
}

/// Corners of the model box where the target is smallest and largest.
pub fn extreme_corners(f: &dyn Target, model: &JointModel) -> (Vec<f64>, Vec<f64>) {
    let mut lo = Vec::with_capacity(model.dim());
    let mut hi = Vec::with_capacity(model.dim());
    for (i, v) in model.variables().iter().enumerate() {
        match f.monotone(i) {
            Monotone::Increasing => {
                lo.push(v.lower());
                hi.push(v.upper());
            }
            Monotone::Decreasing => {
                lo.push(v.upper());
                hi.push(v.lower());
            }
        }
    }
    (lo, hi)
}

/// A target, model and tail with decreasing targets rewritten as `−h`.
///
/// Samplers draw against `target()`/`spec()` and report `z` back in the
/// caller's orientation through [`TailProblem::original_z`].
#[derive(Debug, Clone)]
pub struct TailProblem {
    target: TargetRef,
    model: JointModel,
    spec: TailSpec,
    original: TailSpec,
    negated: bool,
}

impl TailProblem {
    pub fn new(target: TargetRef, model: JointModel, spec: TailSpec) -> Result<Self> {
        if target.dim() != model.dim() {
            return Err(TailError::Config(format!(
                "target has {} coordinates but the model has {} variables",
                target.dim(),
                model.dim()
            )));
        }
        let all_decreasing = (0..target.dim()).all(|i| target.monotone(i) == Monotone::Decreasing);
        if all_decreasing {
            Ok(Self {
                target: negate_target(target),
                model,
                spec: spec.negated(),
                original: spec,
                negated: true,
            })
        } else {
            Ok(Self {
                target,
                model,
                spec,
                original: spec,
                negated: false,
            })
        }
    }

    /// Normalized target.
    pub fn target(&self) -> &dyn Target {
        self.target.as_ref()
    }

    pub fn target_ref(&self) -> &TargetRef {
        &self.target
    }

    pub fn model(&self) -> &JointModel {
        &self.model
    }

    /// Tail in the normalized orientation.
    pub fn spec(&self) -> &TailSpec {
        &self.spec
    }

    /// Tail in the caller's orientation.
    pub fn original_spec(&self) -> &TailSpec {
        &self.original
    }

    pub fn is_negated(&self) -> bool {
        self.negated
    }

    pub fn dim(&self) -> usize {
        self.model.dim()
    }

    pub fn original_z(&self, z: f64) -> f64 {
        if self.negated {
            -z
        } else {
            z
        }
    }

    /// Original-orientation `z` and tail membership of a basic-variable point.
    pub fn classify(&self, x: &[f64]) -> (f64, bool) {
        let z = self.original_z(self.target.evaluate(x));
        (z, self.original.contains(z))
    }

    /// The corner the tail collapses onto as `ε → 0`, in normalized form.
    pub fn extremal_corner(&self) -> Vec<f64> {
        let (lo, hi) = extreme_corners(self.target.as_ref(), &self.model);
        match self.spec.side {
            TailSide::Left => lo,
            TailSide::Right => hi,
        }
    }

    pub fn domain(&self) -> Vec<(f64, f64)> {
        self.model
            .variables()
            .iter()
            .map(|v| (v.lower(), v.upper()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::target::{ReliabilityTarget, SumTarget};
    use std::sync::Arc;

    #[test]
    fn spec_bounds() {
        let model = JointModel::iid_uniform(4, 0.0, 1.0).unwrap();
        let spec = TailSpec::for_target(&SumTarget { n: 4 }, &model, TailSide::Right, 0.12).unwrap();
        assert_eq!((spec.z_min(), spec.z_max()), (0.0, 4.0));
        assert!((spec.threshold() - 3.88).abs() < 1e-15);
        assert!(spec.contains(3.9) && !spec.contains(3.88));
        assert!(TailSpec::new(TailSide::Left, 0.0, 0.0, 1.0).is_err());
        assert!(TailSpec::new(TailSide::Left, 1.5, 0.0, 1.0).is_err());
        assert!(TailSpec::new(TailSide::Left, 1.0, 0.0, 1.0).is_ok());
    }

    #[test]
    fn decreasing_targets_are_negated() {
        let rel = ReliabilityTarget::new(0.999, 0.9999).unwrap();
        let model = rel.model().unwrap();
        let spec = TailSpec::for_target(&rel, &model, TailSide::Right, 5e-5).unwrap();
        assert!((spec.z_min() - 0.001).abs() < 1e-15);
        let p = TailProblem::new(Arc::new(rel), model, spec).unwrap();
        assert!(p.is_negated());
        assert_eq!(p.spec().side(), TailSide::Left);
        assert_eq!(p.extremal_corner(), vec![0.9999; 3]);
        let (z, inside) = p.classify(&[0.9999, 0.9999, 0.9999]);
        assert!(inside);
        assert!((z - spec.z_max()).abs() < 1e-18);
        let (_, inside) = p.classify(&[1.0, 1.0, 1.0]);
        assert!(!inside);
    }
}
