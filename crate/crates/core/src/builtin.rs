//! The three built-in targets, addressable by name, with their oracles.

use std::sync::Arc;

use crate::error::{Result, TailError};
use crate::model::JointModel;
use crate::oracles::{Oracle, Reliability};
use crate::tail::{TailProblem, TailSide, TailSpec};
use crate::target::{ProductTarget, ReliabilityTarget, SumTarget, TargetRef};

pub const TARGET_NAMES: [&str; 3] = ["sum-uniform", "product-uniform", "reliability"];

/// Parameters selecting a built-in target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BuiltinTarget {
    /// `Σ x_i`, `x_i ~ U(0, 1)`.
    SumUniform { n: usize },
    /// `Π x_i`, `x_i ~ U(0, 1)`.
    ProductUniform { n: usize },
    /// `1 − α x_1 x_2 x_3`, `x_i ~ U(β, 1)`.
    Reliability { alpha: f64, beta: f64 },
}

impl BuiltinTarget {
    /// `n` is ignored for the reliability target, which is always 3-dimensional.
    pub fn from_name(name: &str, n: usize, alpha: f64, beta: f64) -> Result<Self> {
        let needs_n = |n: usize| {
            if n == 0 {
                Err(TailError::Config("--n must be at least 1".into()))
            } else {
                Ok(n)
            }
        };
        match name {
            "sum-uniform" => Ok(Self::SumUniform { n: needs_n(n)? }),
            "product-uniform" => Ok(Self::ProductUniform { n: needs_n(n)? }),
            "reliability" => Ok(Self::Reliability { alpha, beta }),
            other => Err(TailError::Config(format!(
                "unknown target '{other}' (expected one of {})",
                TARGET_NAMES.join(", ")
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::SumUniform { .. } => "sum-uniform",
            Self::ProductUniform { .. } => "product-uniform",
            Self::Reliability { .. } => "reliability",
        }
    }

    pub fn target_and_model(&self) -> Result<(TargetRef, JointModel)> {
        Ok(match *self {
            Self::SumUniform { n } => (Arc::new(SumTarget { n }), JointModel::iid_uniform(n, 0.0, 1.0)?),
            Self::ProductUniform { n } => (Arc::new(ProductTarget { n }), JointModel::iid_uniform(n, 0.0, 1.0)?),
            Self::Reliability { alpha, beta } => {
                let t = ReliabilityTarget::new(alpha, beta)?;
                let model = t.model()?;
                (Arc::new(t), model)
            }
        })
    }

    /// Normalized tail problem for `side` and `epsilon`.
    pub fn problem(&self, side: TailSide, epsilon: f64) -> Result<TailProblem> {
        let (target, model) = self.target_and_model()?;
        let spec = TailSpec::for_target(target.as_ref(), &model, side, epsilon)?;
        TailProblem::new(target, model, spec)
    }

    pub fn oracle(&self) -> Result<Oracle> {
        Ok(match *self {
            Self::SumUniform { n } => Oracle::Sum { n },
            Self::ProductUniform { n } => Oracle::Product { n },
            Self::Reliability { alpha, beta } => Oracle::Reliability(Reliability::new(alpha, beta)?),
        })
    }
}
