//! Sequential truncated simulation that lands every draw in the tail.
//!
//! Variables are drawn in model order. Before drawing `X_i` the sampler
//! computes the widest interval `(L_i, U_i]` such that, with the unsimulated
//! variables still free, the point can end in the tail. Because the target
//! is monotone in every coordinate the "still free" part is decided by a
//! single corner of the remaining box: the one that pushes the target
//! furthest towards the tail. `X_i` is then drawn from its conditional law
//! truncated to the interval and the draw's score multiplies the truncation
//! masses, so `Σ score / m` is an unbiased estimate of the tail probability.

use rand::Rng;

use crate::error::{Result, TailError};
use crate::rng::open_unit;
use crate::sample::{RejectionStats, SimulationRun, WeightedPoint};
use crate::tail::{TailProblem, TailSide};
use crate::target::Monotone;

/// Re-draws of the last coordinate allowed when round-off at the tail
/// boundary puts the evaluated `z` a few ulps outside.
const BOUNDARY_RETRIES: usize = 32;

/// `(L_i, U_i]` for variable `i` (0-based) given the simulated `prefix`.
///
/// `problem` is already normalized. Variables after `i` are pinned at the
/// corner that makes the target smallest (left tail) or largest (right
/// tail); the interval is the set of `x_i` for which that corner still
/// reaches the tail, intersected with the variable's support. For an
/// increasing target this gives `L_i = a_i` on the left tail and
/// `U_i = b_i` on the right tail.
pub fn sequential_bounds(problem: &TailProblem, i: usize, prefix: &[f64]) -> Result<(f64, f64)> {
    let f = problem.target();
    let model = problem.model();
    let spec = problem.spec();
    let n = model.dim();
    debug_assert_eq!(prefix.len(), i);

    let mut x = Vec::with_capacity(n);
    x.extend_from_slice(prefix);
    x.push(0.0);
    for k in (i + 1)..n {
        let v = model.variable(k);
        let towards_max = match spec.side() {
            TailSide::Left => f.monotone(k) == Monotone::Decreasing,
            TailSide::Right => f.monotone(k) == Monotone::Increasing,
        };
        x.push(if towards_max { v.upper() } else { v.lower() });
    }

    let level = spec.threshold();
    let accept = |z: f64| match spec.side() {
        TailSide::Left => z <= level,
        TailSide::Right => z > level,
    };
    let (a, b) = (model.variable(i).lower(), model.variable(i).upper());
    x[i] = a;
    let ok_a = accept(f.evaluate(&x));
    x[i] = b;
    let ok_b = accept(f.evaluate(&x));

    let (lower, upper) = match (ok_a, ok_b) {
        (true, true) => (a, b),
        (false, false) => {
            return Err(TailError::InfeasiblePrefix {
                stage: i,
                lower: b,
                upper: a,
            })
        }
        (false, true) => (f.coordinate_inverse(i, &x, level)?.clamp(a, b), b),
        (true, false) => (a, f.coordinate_inverse(i, &x, level)?.clamp(a, b)),
    };
    if lower >= upper {
        return Err(TailError::InfeasiblePrefix { stage: i, lower, upper });
    }
    Ok((lower, upper))
}

/// One sequentially truncated draw and its score.
pub fn draw_sample<R: Rng + ?Sized>(problem: &TailProblem, rng: &mut R) -> Result<WeightedPoint> {
    let n = problem.dim();
    let mut x: Vec<f64> = Vec::with_capacity(n);
    let mut score = 1.0;
    for i in 0..n {
        let (lo, hi) = sequential_bounds(problem, i, &x)?;
        let var = problem.model().variable(i);
        let mass = var.mass(&x, lo, hi);
        if mass <= 0.0 {
            return Err(TailError::InfeasiblePrefix { stage: i, lower: lo, upper: hi });
        }
        score *= mass;
        let xi = var.truncated_quantile(&x, lo, hi, open_unit(rng));
        x.push(xi);
    }

    let (mut z, mut inside) = problem.classify(&x);
    let mut retries = 0;
    while !inside {
        if retries == BOUNDARY_RETRIES {
            let (lower, upper) = sequential_bounds(problem, n - 1, &x[..n - 1])?;
            return Err(TailError::InfeasiblePrefix { stage: n - 1, lower, upper });
        }
        retries += 1;
        let (lo, hi) = sequential_bounds(problem, n - 1, &x[..n - 1])?;
        x[n - 1] = problem
            .model()
            .variable(n - 1)
            .truncated_quantile(&x[..n - 1], lo, hi, open_unit(rng));
        (z, inside) = problem.classify(&x);
    }
    Ok(WeightedPoint { z, score, x })
}

/// `m` draws; none are rejected.
pub fn run_tail_simulation<R: Rng + ?Sized>(problem: &TailProblem, m: usize, rng: &mut R) -> Result<SimulationRun> {
    if m == 0 {
        return Err(TailError::Config("sample size must be at least 1".into()));
    }
    let points = (0..m)
        .map(|_| draw_sample(problem, rng))
        .collect::<Result<Vec<_>>>()?;
    let total: f64 = points.iter().map(|p| p.score).sum();
    Ok(SimulationRun {
        points,
        stats: RejectionStats::from_sums(m, m, total, total),
    })
}
