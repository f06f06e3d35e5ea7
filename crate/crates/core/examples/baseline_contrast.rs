//! Plain Monte Carlo against the no-rejection sampler on a tail of
//! probability about 8.6e-6.

use tailsim::builtin::BuiltinTarget;
use tailsim::reduced::RegionKind;
use tailsim::runner::{simulate, Method, RunSettings};
use tailsim::TailSide;

fn main() -> tailsim::Result<()> {
    let target = BuiltinTarget::SumUniform { n: 4 };
    let problem = target.problem(TailSide::Right, 0.12)?;
    let exact = target.oracle()?.tail_probability(problem.original_spec())?;
    println!("exact tail probability {exact:.4e}");
    for seed in 1..=5 {
        let mut line = format!("seed {seed}:");
        for method in [Method::Mc, Method::NoRejection] {
            let settings = RunSettings {
                method,
                region: RegionKind::Tangent,
                resolution: 64,
                samples: 10_000,
                seed,
                jobs: 1,
            };
            let run = simulate(&problem, &settings)?;
            line += &format!("  {method}: {} hits, mass {:.3e}", run.stats.m_accepted, run.stats.tail_mass());
        }
        println!("{line}");
    }
    Ok(())
}
