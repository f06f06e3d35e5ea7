//! Right tail of a sum of four uniforms with the no-rejection sampler,
//! checked against the exact Irwin–Hall CDF.

use tailsim::builtin::BuiltinTarget;
use tailsim::estimator::assemble_tail_cdf;
use tailsim::no_rejection::run_tail_simulation;
use tailsim::rng::stream_rng;
use tailsim::TailSide;

fn main() -> tailsim::Result<()> {
    let target = BuiltinTarget::SumUniform { n: 4 };
    let problem = target.problem(TailSide::Right, 0.12)?;
    let oracle = target.oracle()?;
    let run = run_tail_simulation(&problem, 1000, &mut stream_rng(42, 0))?;
    let cdf = assemble_tail_cdf(&run.points, run.stats.m_total, TailSide::Right)?;
    let exact = oracle.tail_probability(problem.original_spec())?;
    println!("draws in tail: {} of {}", run.stats.m_accepted, run.stats.m_total);
    println!("tail mass: {:.4e} (exact {exact:.4e})", cdf.tail_mass());
    let spec = problem.original_spec();
    let sup = cdf.conditional_sup_distance(|z| oracle.conditional_cdf(spec, z).unwrap());
    println!("conditional sup distance: {sup:.4}");
    for p in [0.5, 0.9, 0.99] {
        let level = 1.0 - cdf.tail_mass() * (1.0 - p);
        println!("P(Z <= z | tail) = {p}: z = {:.5}", cdf.quantile(level)?);
    }
    Ok(())
}
