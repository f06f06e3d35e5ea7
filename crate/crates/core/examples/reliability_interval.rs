//! One-sided upper bound on a system failure probability from the upper
//! tail of `1 − x₁x₂x₃x₄` with `x₁ ~ U(α, 1)` and `x₂..x₄ ~ U(β, 1)`.

use tailsim::builtin::BuiltinTarget;
use tailsim::estimator::assemble_tail_cdf;
use tailsim::oracles::Oracle;
use tailsim::reduced::{build_region, run_reduced_rejection, RegionKind};
use tailsim::runner::{simulate, Method, RunSettings};
use tailsim::rng::stream_rng;
use tailsim::TailSide;

fn main() -> tailsim::Result<()> {
    let target = BuiltinTarget::Reliability { alpha: 0.999, beta: 0.9999 };
    let problem = target.problem(TailSide::Right, 5e-5)?;
    let settings = RunSettings {
        method: Method::NoRejection,
        region: RegionKind::Secant,
        resolution: 64,
        samples: 1000,
        seed: 42,
        jobs: 1,
    };
    let run = simulate(&problem, &settings)?;
    let cdf = assemble_tail_cdf(&run.points, run.stats.m_total, TailSide::Right)?;
    let (_, bound) = cdf.one_sided_interval(0.98)?;
    let Oracle::Reliability(exact) = target.oracle()? else {
        unreachable!()
    };
    println!("tail mass {:.5}, covered CDF range {:?}", cdf.tail_mass(), cdf.covered_range());
    println!("98% upper bound: {bound:.6e} (exact quantile {:.6e})", exact.quantile(0.98)?);

    let secant = build_region(&problem, RegionKind::Secant)?;
    let reduced = run_reduced_rejection(&problem, &secant, 1000, &mut stream_rng(42, 0))?;
    println!("secant region count rejection: {:.4}", reduced.stats.count_rejection);
    match build_region(&problem, RegionKind::Tangent) {
        Ok(_) => println!("tangent region certified"),
        Err(e) => println!("tangent region refused: {e}"),
    }
    Ok(())
}
