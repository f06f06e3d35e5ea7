//! Method selection and seed-split execution shared by the CLI and examples.

use std::fmt;
use std::str::FromStr;

use crate::baseline::run_standard_mc;
use crate::equal_scores::{build_sampling_tables, run_equal_scores};
use crate::error::{Result, TailError};
use crate::no_rejection::run_tail_simulation;
use crate::reduced::{build_region, run_reduced_rejection, RegionKind};
use crate::rng::run_chunked;
use crate::sample::SimulationRun;
use crate::tail::TailProblem;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    NoRejection,
    EqualScores,
    Reduced,
    Mc,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::NoRejection, Method::EqualScores, Method::Reduced, Method::Mc];
}

impl FromStr for Method {
    type Err = TailError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "no-rejection" => Ok(Method::NoRejection),
            "equal-scores" => Ok(Method::EqualScores),
            "reduced" => Ok(Method::Reduced),
            "mc" => Ok(Method::Mc),
            other => Err(TailError::Config(format!(
                "unknown method '{other}' (expected no-rejection, equal-scores, reduced or mc)"
            ))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::NoRejection => "no-rejection",
            Method::EqualScores => "equal-scores",
            Method::Reduced => "reduced",
            Method::Mc => "mc",
        })
    }
}

/// Everything besides the problem that fixes a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSettings {
    pub method: Method,
    pub region: RegionKind,
    pub resolution: usize,
    pub samples: usize,
    pub seed: u64,
    pub jobs: usize,
}

/// Runs `settings.samples` draws in seed-split chunks. The result depends on
/// `(problem, method, region, resolution, samples, seed)` only.
pub fn simulate(problem: &TailProblem, settings: &RunSettings) -> Result<SimulationRun> {
    let RunSettings { samples, seed, jobs, .. } = *settings;
    match settings.method {
        Method::NoRejection => run_chunked(samples, seed, jobs, |rng, count| run_tail_simulation(problem, count, rng)),
        Method::EqualScores => {
            let tables = build_sampling_tables(problem, settings.resolution)?;
            run_chunked(samples, seed, jobs, |rng, count| run_equal_scores(&tables, count, rng))
        }
        Method::Reduced => {
            let region = build_region(problem, settings.region)?;
            run_chunked(samples, seed, jobs, |rng, count| {
                run_reduced_rejection(problem, &region, count, rng)
            })
        }
        Method::Mc => run_chunked(samples, seed, jobs, |rng, count| run_standard_mc(problem, count, rng)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::BuiltinTarget;
    use crate::tail::TailSide;

    #[test]
    fn method_names() {
        for m in Method::ALL {
            assert_eq!(m.to_string().parse::<Method>().unwrap(), m);
        }
        assert!("bogus".parse::<Method>().is_err());
    }

    #[test]
    fn job_count_does_not_change_output() {
        let p = BuiltinTarget::ProductUniform { n: 3 }.problem(TailSide::Left, 0.001).unwrap();
        for method in Method::ALL {
            let mut s = RunSettings {
                method,
                region: RegionKind::MinCorner,
                resolution: 16,
                samples: 2500,
                seed: 7,
                jobs: 1,
            };
            let a = simulate(&p, &s).unwrap();
            s.jobs = 3;
            let b = simulate(&p, &s).unwrap();
            assert_eq!(a, b, "{method}");
        }
    }
}
