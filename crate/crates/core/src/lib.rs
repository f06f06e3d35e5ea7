//! Tail simulation for monotone functions of bounded random variables.
//!
//! Given basic variables `X = (X_1, ..., X_n)` with bounded support and a
//! target `Z = h(X)` that is monotone in every coordinate, this crate draws
//! samples that land in (or very near) an extreme tail of `Z`, scores each
//! draw by the probability of the region it was drawn from, and turns the
//! scored draws into tail CDFs, extreme percentiles and one-sided bounds.
//!
//! Samplers:
//!
//! - [`no_rejection`]: sequential truncation; every draw is in the tail.
//! - [`equal_scores`]: the same region with stage densities chosen so that
//!   every draw carries the same score.
//! - [`reduced`]: sample an easy superset (tangent or secant hyperplane cut,
//!   or a min-corner region) and reject the few points outside the tail.
//! - [`baseline`]: plain Monte Carlo over the whole box.
//!
//! [`oracles`] holds exact CDFs for the built-in targets and a brute-force
//! reference sampler; [`estimator`] assembles weighted tail CDFs.

pub mod baseline;
pub mod builtin;
pub mod cli;
pub mod equal_scores;
pub mod error;
pub mod estimator;
pub mod model;
pub mod no_rejection;
pub mod oracles;
pub mod quadrature;
pub mod reduced;
pub mod rng;
pub mod runner;
pub mod sample;
pub mod tail;
pub mod target;

pub use error::{Result, TailError};
pub use estimator::TailCdf;
pub use model::{BoundedVariable, Conditional, JointModel, Uniform};
pub use sample::{RejectionStats, SimulationRun, WeightedPoint};
pub use tail::{TailProblem, TailSide, TailSpec};
pub use target::{
    negate_target, Monotone, ProductTarget, ReliabilityTarget, SumTarget, Target, TargetRef,
};
