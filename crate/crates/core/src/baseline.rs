//! Plain Monte Carlo over the whole box, kept as a reference point.
//!
//! Every draw comes from the unconstrained model and only tail hits are
//! kept, each with score `1`. The tail estimate is therefore
//! `hits / m` and the effective tail sample size is about `m·P(tail)`.

use rand::Rng;

use crate::error::{Result, TailError};
use crate::sample::{RejectionStats, SimulationRun, WeightedPoint};
use crate::tail::TailProblem;

pub fn run_standard_mc<R: Rng + ?Sized>(problem: &TailProblem, m: usize, rng: &mut R) -> Result<SimulationRun> {
    if m == 0 {
        return Err(TailError::Config("sample size must be at least 1".into()));
    }
    let mut points = Vec::new();
    for _ in 0..m {
        let x = problem.model().sample(rng);
        let (z, inside) = problem.classify(&x);
        if inside {
            points.push(WeightedPoint { z, score: 1.0, x });
        }
    }
    let hits = points.len();
    Ok(SimulationRun {
        points,
        stats: RejectionStats::from_sums(m, hits, m as f64, hits as f64),
    })
}
