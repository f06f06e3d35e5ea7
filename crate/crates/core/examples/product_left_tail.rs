//! Lower tail of a product of three uniforms: the absolute CDF near zero.

use tailsim::builtin::BuiltinTarget;
use tailsim::estimator::assemble_tail_cdf;
use tailsim::runner::{simulate, Method, RunSettings};
use tailsim::reduced::RegionKind;
use tailsim::TailSide;

fn main() -> tailsim::Result<()> {
    let target = BuiltinTarget::ProductUniform { n: 3 };
    let problem = target.problem(TailSide::Left, 0.001)?;
    let oracle = target.oracle()?;
    let settings = RunSettings {
        method: Method::NoRejection,
        region: RegionKind::Tangent,
        resolution: 64,
        samples: 2000,
        seed: 7,
        jobs: 4,
    };
    let run = simulate(&problem, &settings)?;
    let cdf = assemble_tail_cdf(&run.points, run.stats.m_total, TailSide::Left)?;
    println!("P(Z <= 0.001): simulated {:.6}, exact {:.6}", cdf.tail_mass(), oracle.cdf(0.001)?);
    for z in [1e-5, 1e-4, 5e-4] {
        let k = cdf.z().partition_point(|&v| v <= z);
        let sim = if k == 0 { 0.0 } else { cdf.cdf()[k - 1] };
        println!("F({z:e}): simulated {sim:.3e}, exact {:.3e}", oracle.cdf(z)?);
    }
    println!("sup distance: {:.2e}", cdf.sup_distance(|z| oracle.cdf(z).unwrap()));
    Ok(())
}
