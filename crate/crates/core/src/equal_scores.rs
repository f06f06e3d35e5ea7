//! Equal-score sampling over the no-rejection region.
//!
//! The no-rejection sampler draws each `X_i` from its conditional law
//! truncated to `(L_i, U_i]`, which gives draws very different scores once
//! `n` grows. Here `X_i` is instead drawn with density proportional to
//!
//! ```text
//! g_i(t) = f(t | x_1..x_{i-1}) · M_{i+1}(x_1..x_{i-1}, t)
//! ```
//!
//! where `M_{i+1}` is the probability that the remaining variables complete
//! a tail point. `M_n` is a plain truncation mass, earlier stages integrate
//! the next one by composite Simpson. With these densities every draw has
//! the same score `M_1 = G_1(U_1) − G_1(L_1)`, the tail probability itself.
//!
//! The stage-1 table depends only on the tail and is built once; later
//! stages depend on the prefix and are tabulated lazily during each draw.

use rand::Rng;

use crate::error::{Result, TailError};
use crate::no_rejection::sequential_bounds;
use crate::quadrature::MonotoneTable;
use crate::rng::open_unit;
use crate::sample::{RejectionStats, SimulationRun, WeightedPoint};
use crate::tail::TailProblem;

pub const MIN_RESOLUTION: usize = 8;
pub const MAX_DIMENSION: usize = 4;
pub const DEFAULT_RESOLUTION: usize = 64;

const DRAW_RETRIES: usize = 32;

/// Stage-1 table and the constant score it implies.
#[derive(Debug, Clone)]
pub struct GTables {
    problem: TailProblem,
    resolution: usize,
    first_bounds: (f64, f64),
    first_stage: Option<MonotoneTable>,
    score: f64,
}

impl GTables {
    /// Score carried by every draw.
    pub fn score(&self) -> f64 {
        self.score
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn problem(&self) -> &TailProblem {
        &self.problem
    }

    /// Stage-1 cumulative `G_1`, absent when `n = 1`.
    pub fn first_stage(&self) -> Option<&MonotoneTable> {
        self.first_stage.as_ref()
    }
}

pub fn build_sampling_tables(problem: &TailProblem, resolution: usize) -> Result<GTables> {
    if resolution < MIN_RESOLUTION {
        return Err(TailError::Config(format!(
            "resolution must be at least {MIN_RESOLUTION}, got {resolution}"
        )));
    }
    if problem.dim() > MAX_DIMENSION {
        return Err(TailError::Config(format!(
            "equal-score tables support at most {MAX_DIMENSION} variables, got {}",
            problem.dim()
        )));
    }
    if !problem.model().is_independent() {
        return Err(TailError::Config(
            "equal-score tables require independent variables".into(),
        ));
    }
    let resolution = resolution + resolution % 2;
    let first_bounds = sequential_bounds(problem, 0, &[])?;
    let (first_stage, score) = if problem.dim() == 1 {
        let mass = problem
            .model()
            .variable(0)
            .mass(&[], first_bounds.0, first_bounds.1);
        (None, mass)
    } else {
        let table = stage_table(problem, &[], first_bounds, resolution)?;
        let total = table.total();
        (Some(table), total)
    };
    if !(score.is_finite() && score > 0.0) {
        return Err(TailError::QuadratureFailure(format!("stage-1 mass is {score}")));
    }
    Ok(GTables {
        problem: problem.clone(),
        resolution,
        first_bounds,
        first_stage,
        score,
    })
}

/// Probability that variables `prefix.len()..n` complete a tail point.
fn slice_mass(problem: &TailProblem, prefix: &[f64], resolution: usize) -> Result<f64> {
    let i = prefix.len();
    let bounds = match sequential_bounds(problem, i, prefix) {
        Ok(b) => b,
        Err(TailError::InfeasiblePrefix { .. }) => return Ok(0.0),
        Err(e) => return Err(e),
    };
    if i + 1 == problem.dim() {
        return Ok(problem.model().variable(i).mass(prefix, bounds.0, bounds.1));
    }
    let (nodes, density) = stage_density(problem, prefix, bounds, resolution)?;
    let h = nodes[1] - nodes[0];
    let mut acc = density[0] + density[density.len() - 1];
    for (k, d) in density.iter().enumerate().take(density.len() - 1).skip(1) {
        acc += if k % 2 == 1 { 4.0 } else { 2.0 } * d;
    }
    Ok(acc * h / 3.0)
}

/// `g_i` at the Simpson nodes of `(L_i, U_i]`.
fn stage_density(
    problem: &TailProblem,
    prefix: &[f64],
    (lo, hi): (f64, f64),
    resolution: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let var = problem.model().variable(prefix.len());
    let h = (hi - lo) / resolution as f64;
    let mut next = prefix.to_vec();
    next.push(0.0);
    let mut nodes = Vec::with_capacity(resolution + 1);
    let mut density = Vec::with_capacity(resolution + 1);
    for k in 0..=resolution {
        let t = if k == resolution { hi } else { lo + k as f64 * h };
        *next.last_mut().unwrap() = t;
        let g = var.density(prefix, t) * slice_mass(problem, &next, resolution)?;
        if !g.is_finite() {
            return Err(TailError::QuadratureFailure(format!(
                "non-finite stage density at x_{} = {t}",
                prefix.len() + 1
            )));
        }
        nodes.push(t);
        density.push(g);
    }
    Ok((nodes, density))
}

fn stage_table(problem: &TailProblem, prefix: &[f64], bounds: (f64, f64), resolution: usize) -> Result<MonotoneTable> {
    let (nodes, density) = stage_density(problem, prefix, bounds, resolution)?;
    MonotoneTable::from_density(&nodes, &density)
}

fn try_draw<R: Rng + ?Sized>(tables: &GTables, rng: &mut R) -> Result<Vec<f64>> {
    let problem = &tables.problem;
    let n = problem.dim();
    let mut x = Vec::with_capacity(n);
    for i in 0..n {
        let bounds = if i == 0 {
            tables.first_bounds
        } else {
            sequential_bounds(problem, i, &x)?
        };
        let var = problem.model().variable(i);
        let xi = if i + 1 == n {
            var.truncated_quantile(&x, bounds.0, bounds.1, open_unit(rng))
        } else {
            let owned;
            let table = match (i, tables.first_stage.as_ref()) {
                (0, Some(t)) => t,
                _ => {
                    owned = stage_table(problem, &x, bounds, tables.resolution)?;
                    &owned
                }
            };
            if table.total() <= 0.0 {
                return Err(TailError::InfeasiblePrefix {
                    stage: i,
                    lower: bounds.0,
                    upper: bounds.1,
                });
            }
            table.invert(open_unit(rng) * table.total())
        };
        x.push(xi);
    }
    Ok(x)
}

/// One draw; its score is always [`GTables::score`].
pub fn draw_equal_score_sample<R: Rng + ?Sized>(tables: &GTables, rng: &mut R) -> Result<WeightedPoint> {
    let mut last_err = None;
    for _ in 0..DRAW_RETRIES {
        match try_draw(tables, rng) {
            Ok(x) => {
                let (z, inside) = tables.problem.classify(&x);
                if inside {
                    return Ok(WeightedPoint {
                        z,
                        score: tables.score,
                        x,
                    });
                }
            }
            // Interpolated stage draws can land on a node where the next
            // slice has zero mass; redraw.
            Err(e @ TailError::InfeasiblePrefix { .. }) => last_err = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last_err.unwrap_or(TailError::InfeasiblePrefix {
        stage: tables.problem.dim() - 1,
        lower: f64::NAN,
        upper: f64::NAN,
    }))
}

pub fn run_equal_scores<R: Rng + ?Sized>(tables: &GTables, m: usize, rng: &mut R) -> Result<SimulationRun> {
    if m == 0 {
        return Err(TailError::Config("sample size must be at least 1".into()));
    }
    let points = (0..m)
        .map(|_| draw_equal_score_sample(tables, rng))
        .collect::<Result<Vec<_>>>()?;
    let total = tables.score * m as f64;
    Ok(SimulationRun {
        points,
        stats: RejectionStats::from_sums(m, m, total, total),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::JointModel;
    use crate::rng::stream_rng;
    use crate::tail::{TailSide, TailSpec};
    use crate::target::{SumTarget, TargetRef};
    use std::sync::Arc;

    fn sum_problem(n: usize, eps: f64) -> TailProblem {
        let target: TargetRef = Arc::new(SumTarget { n });
        let model = JointModel::iid_uniform(n, 0.0, 1.0).unwrap();
        let spec = TailSpec::for_target(target.as_ref(), &model, TailSide::Right, eps).unwrap();
        TailProblem::new(target, model, spec).unwrap()
    }

    #[test]
    fn single_stage_is_truncated_base_law() {
        let t = build_sampling_tables(&sum_problem(1, 0.1), 16).unwrap();
        assert!(t.first_stage().is_none());
        assert!((t.score() - 0.1).abs() < 1e-15);
        let mut rng = stream_rng(1, 0);
        for _ in 0..100 {
            let w = draw_equal_score_sample(&t, &mut rng).unwrap();
            assert_eq!(w.score, t.score());
            assert!(w.z > 0.9);
        }
    }

    #[test]
    fn resolution_guard() {
        assert!(matches!(
            build_sampling_tables(&sum_problem(3, 0.1), 4),
            Err(TailError::Config(_))
        ));
        assert!(matches!(
            build_sampling_tables(&sum_problem(5, 0.1), 64),
            Err(TailError::Config(_))
        ));
    }

    #[test]
    fn score_matches_corner_simplex_mass() {
        // Exact right-tail mass of a sum of three uniforms: ε³/3!.
        let t = build_sampling_tables(&sum_problem(3, 0.1), DEFAULT_RESOLUTION).unwrap();
        let exact = 0.1f64.powi(3) / 6.0;
        assert!((t.score() / exact - 1.0).abs() < 1e-3, "{} vs {exact}", t.score());
        let g1 = t.first_stage().unwrap();
        assert_eq!(g1.total(), t.score());
    }

    #[test]
    fn scores_are_constant_and_draws_in_tail() {
        let t = build_sampling_tables(&sum_problem(3, 0.1), 32).unwrap();
        let mut rng = stream_rng(2, 0);
        let run = run_equal_scores(&t, 500, &mut rng).unwrap();
        let first = run.points[0].score;
        assert!(run.points.iter().all(|w| w.score == first && w.z > 2.9));
    }
}
