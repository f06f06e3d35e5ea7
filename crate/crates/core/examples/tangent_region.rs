//! Reduced rejection through the tangent hyperplane at the tail boundary
//! of `x₁x₂x₃ > 1 − ε`.

use tailsim::builtin::BuiltinTarget;
use tailsim::oracles::product_region_volumes;
use tailsim::reduced::{build_region, run_reduced_rejection, RegionKind, ReducedRegion};
use tailsim::rng::stream_rng;
use tailsim::TailSide;

fn main() -> tailsim::Result<()> {
    let eps = 0.1;
    let problem = BuiltinTarget::ProductUniform { n: 3 }.problem(TailSide::Right, eps)?;
    let region = build_region(&problem, RegionKind::Tangent)?;
    if let ReducedRegion::Hyperplane(h) = &region {
        println!("tangency point {:?}", h.tangency_point);
        println!("normal {:?}, offset {:.6}", h.normal, h.offset);
    }
    let run = run_reduced_rejection(&problem, &region, 10_000, &mut stream_rng(42, 0))?;
    let (tail, cut) = product_region_volumes(eps, TailSide::Right)?;
    println!("count rejection: {:.4}", run.stats.count_rejection);
    println!(
        "volume rejection: simulated {:.5}, exact {:.5}",
        run.stats.volume_rejection.unwrap_or(f64::NAN),
        1.0 - tail / cut
    );
    println!("tail mass: {:.5e} (exact {tail:.5e})", run.stats.tail_mass());
    Ok(())
}
