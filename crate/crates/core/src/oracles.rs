//! Exact distributions for the built-in targets and a brute-force reference.
//!
//! Closed forms:
//!
//! - sum of `n` unit uniforms (Irwin–Hall),
//! - product of `n` unit uniforms, `F(x) = x Σ_{i<n} (−ln x)^i / i!`,
//! - product of three `U(β, 1)` variables on its lowest piece `[β³, β²)`,
//!   and the reliability target `Z = 1 − α X_1 X_2 X_3` built on it.
//!
//! Tail probabilities are evaluated from the near side of each support
//! endpoint so that masses of order `1e-6` keep their relative accuracy.

use rand::Rng;

use crate::error::{Result, TailError};
use crate::estimator::{assemble_tail_cdf, TailCdf};
use crate::rng::{run_chunked, SimRng};
use crate::sample::{RejectionStats, SimulationRun, WeightedPoint};
use crate::tail::{TailProblem, TailSide, TailSpec};

/// Fewest tail hits the brute-force oracle will accept.
pub const MIN_ORACLE_HITS: usize = 100;

fn ln_factorial(k: usize) -> f64 {
    (1..=k).map(|j| (j as f64).ln()).sum()
}

fn binomial(n: usize, r: usize) -> f64 {
    (ln_factorial(n) - ln_factorial(r) - ln_factorial(n - r)).exp().round()
}

/// `P(U_1 + ... + U_n ≤ x)` summed from the near endpoint.
fn irwin_hall_lower(n: usize, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let top = x.floor() as usize;
    let mut acc = 0.0;
    for r in 0..=top.min(n) {
        let term = binomial(n, r) * (x - r as f64).powi(n as i32);
        acc += if r % 2 == 0 { term } else { -term };
    }
    (acc / ln_factorial(n).exp()).clamp(0.0, 1.0)
}

/// CDF of the sum of `n` independent `U(0, 1)`; clamps outside `[0, n]`.
pub fn irwin_hall_cdf(n: usize, x: f64) -> f64 {
    let nf = n as f64;
    if x <= 0.0 {
        0.0
    } else if x >= nf {
        1.0
    } else if x <= 0.5 * nf {
        irwin_hall_lower(n, x)
    } else {
        1.0 - irwin_hall_lower(n, nf - x)
    }
}

/// `P(U_1 + ... + U_n > x)`.
pub fn irwin_hall_sf(n: usize, x: f64) -> f64 {
    let nf = n as f64;
    if x >= nf {
        0.0
    } else if x <= 0.0 {
        1.0
    } else if x >= 0.5 * nf {
        irwin_hall_lower(n, nf - x)
    } else {
        1.0 - irwin_hall_lower(n, x)
    }
}

/// CDF of the product of `n` independent `U(0, 1)`.
pub fn product_uniform_cdf(n: usize, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let l = -x.ln();
    let mut term = 1.0;
    let mut acc = 0.0;
    for i in 0..n {
        if i > 0 {
            term *= l / i as f64;
        }
        acc += term;
    }
    (x * acc).clamp(0.0, 1.0)
}

/// `P(U_1 ⋯ U_n > x)`, via `x Σ_{i≥n} (−ln x)^i / i!` near `x = 1`.
pub fn product_uniform_sf(n: usize, x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x >= 1.0 {
        return 0.0;
    }
    let l = -x.ln();
    if l > 1.0 {
        return 1.0 - product_uniform_cdf(n, x);
    }
    let mut term = (1..n).fold(1.0, |t, i| t * l / i as f64);
    let mut acc = 0.0;
    for i in n.max(1).. {
        term *= l / i as f64;
        acc += term;
        if term < 1e-18 * acc {
            break;
        }
    }
    (x * acc).clamp(0.0, 1.0)
}

/// `(u/β³ − 1)`-free form of the lowest-piece CDF in terms of
/// `r = ln(u / β³) ∈ [0, −ln β)`:
///
/// ```text
/// F_U = β³ (e^r (r²/2 − r + 1) − 1) / (1 − β)³ = β³ Σ_{j≥0} r^{j+3} / (2 j! (j+3)) / (1 − β)³
/// ```
///
/// The series has no cancellation, which matters once `1 − β ≈ 1e-4`.
fn product_beta_piece(r: f64, beta: f64) -> f64 {
    let b3 = beta * beta * beta;
    let mut term = r * r * r / 2.0;
    let mut acc = term / 3.0;
    for j in 1..60 {
        term *= r / j as f64;
        let next = term / (j + 3) as f64;
        acc += next;
        if next.abs() < 1e-18 * acc.abs() {
            break;
        }
    }
    let one_minus = 1.0 - beta;
    b3 * acc / (one_minus * one_minus * one_minus)
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta < 1.0 {
        Ok(())
    } else {
        Err(TailError::Config(format!("beta must lie in (0, 1), got {beta}")))
    }
}

/// CDF of `U = X_1 X_2 X_3`, `X_i ~ U(β, 1)`, on the piece `β³ ≤ u < β²`.
pub fn product_beta_uniform_cdf(u: f64, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    let (lo, hi) = (beta.powi(3), beta.powi(2));
    if !(u >= lo && u < hi) {
        return Err(TailError::OutsideSupportedPiece { value: u, lower: lo, upper: hi });
    }
    let r = ((u.ln() - 3.0 * beta.ln()).max(0.0)).min(-beta.ln());
    Ok(product_beta_piece(r, beta).clamp(0.0, 1.0))
}

/// Reliability target `Z = 1 − α X_1 X_2 X_3` with `X_i ~ U(β, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reliability {
    pub alpha: f64,
    pub beta: f64,
}

impl Reliability {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        check_beta(beta)?;
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(TailError::Config(format!("alpha must lie in (0, 1], got {alpha}")));
        }
        Ok(Self { alpha, beta })
    }

    pub fn z_min(&self) -> f64 {
        1.0 - self.alpha
    }

    pub fn z_max(&self) -> f64 {
        -(self.alpha.ln() + 3.0 * self.beta.ln()).exp_m1()
    }

    /// `r = ln(u/β³)` with `u = (1 − z)/α`, kept accurate near `z_max`.
    fn log_ratio(&self, z: f64) -> f64 {
        (-z).ln_1p() - self.alpha.ln() - 3.0 * self.beta.ln()
    }

    fn check(&self, z: f64) -> Result<f64> {
        let r = self.log_ratio(z);
        let r_hi = -self.beta.ln();
        if r > -1e-15 && r < r_hi * (1.0 - 1e-12) {
            Ok(r.clamp(0.0, r_hi))
        } else {
            let lower = 1.0 - self.alpha * self.beta * self.beta;
            Err(TailError::OutsideSupportedPiece {
                value: z,
                lower,
                upper: self.z_max(),
            })
        }
    }

    /// `P(Z > z) = F_U((1 − z)/α)`.
    pub fn sf(&self, z: f64) -> Result<f64> {
        if z >= self.z_max() {
            return Ok(0.0);
        }
        let r = self.check(z)?;
        Ok(product_beta_piece(r, self.beta).clamp(0.0, 1.0))
    }

    /// `P(Z ≤ z) = 1 − F_U((1 − z)/α)`.
    pub fn cdf(&self, z: f64) -> Result<f64> {
        Ok(1.0 - self.sf(z)?)
    }

    /// Smallest `z` with `cdf(z) ≥ p`, by bisection within the piece.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        let mut lo = 1.0 - self.alpha * self.beta * self.beta;
        let mut hi = self.z_max();
        let p_lo = 1.0 - product_beta_piece(-self.beta.ln(), self.beta);
        if !(p >= p_lo && p <= 1.0) {
            return Err(TailError::QuantileOutsideTail { level: p, lower: p_lo, upper: 1.0 });
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.cdf(mid)? < p {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(hi)
    }
}

/// `P(Z ≤ z)` for the reliability target.
pub fn reliability_cdf(z: f64, alpha: f64, beta: f64) -> Result<f64> {
    Reliability::new(alpha, beta)?.cdf(z)
}

/// Probability volumes of the product tail and of the simulated region
/// for three unit uniforms.
///
/// Right tail (`Πx > 1 − ε`, tangent-plane region `Σx ≥ 3∛(1−ε)`):
/// `vol_region = 27 (1 − ∛(1−ε))³ / 6`.
/// Left tail (`Πx ≤ ε`, min-corner region with `τ = ∛ε`):
/// `vol_region = 1 − (1−τ)² + (1−τ)² τ`.
pub fn product_region_volumes(epsilon: f64, side: TailSide) -> Result<(f64, f64)> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(TailError::Config(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    Ok(match side {
        TailSide::Right => {
            let g = 1.0 - (1.0 - epsilon).cbrt();
            (product_uniform_sf(3, 1.0 - epsilon), 4.5 * g * g * g)
        }
        TailSide::Left => {
            let tau = epsilon.cbrt();
            let keep = (1.0 - tau) * (1.0 - tau);
            (product_uniform_cdf(3, epsilon), 1.0 - keep + keep * tau)
        }
    })
}

/// Small-`ε` expansion of the tangent-region volume rejection,
/// `ε/4 + 4ε²/45`, usable for `ε ≤ 0.2`.
pub fn asymptotic_rejection(epsilon: f64) -> f64 {
    epsilon / 4.0 + 4.0 * epsilon * epsilon / 45.0
}

/// Exact distribution of a built-in target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Oracle {
    Sum { n: usize },
    Product { n: usize },
    Reliability(Reliability),
}

impl Oracle {
    pub fn cdf(&self, z: f64) -> Result<f64> {
        match self {
            Oracle::Sum { n } => Ok(irwin_hall_cdf(*n, z)),
            Oracle::Product { n } => Ok(product_uniform_cdf(*n, z)),
            Oracle::Reliability(r) => r.cdf(z),
        }
    }

    pub fn sf(&self, z: f64) -> Result<f64> {
        match self {
            Oracle::Sum { n } => Ok(irwin_hall_sf(*n, z)),
            Oracle::Product { n } => Ok(product_uniform_sf(*n, z)),
            Oracle::Reliability(r) => r.sf(z),
        }
    }

    /// Probability of the tail described by `spec`.
    pub fn tail_probability(&self, spec: &TailSpec) -> Result<f64> {
        match spec.side() {
            TailSide::Left => self.cdf(spec.threshold()),
            TailSide::Right => self.sf(spec.threshold()),
        }
    }

    /// `P(Z ≤ z | Z in the tail)`.
    pub fn conditional_cdf(&self, spec: &TailSpec, z: f64) -> Result<f64> {
        let mass = self.tail_probability(spec)?;
        if mass <= 0.0 {
            return Err(TailError::NoOracle(format!("tail probability is {mass}")));
        }
        let v = match spec.side() {
            TailSide::Left => self.cdf(z.min(spec.threshold()))? / mass,
            TailSide::Right => {
                let zc = z.max(spec.threshold());
                (mass - self.sf(zc)?) / mass
            }
        };
        Ok(v.clamp(0.0, 1.0))
    }
}

/// Plain Monte Carlo reference for a tail.
#[derive(Debug, Clone)]
pub struct BruteForceTail {
    /// Unit-score CDF of the hits over all `M` draws.
    pub cdf: TailCdf,
    pub hits: usize,
    pub draws: usize,
    /// `hits / M`.
    pub tail_mass: f64,
    /// Binomial standard error of `tail_mass`.
    pub std_error: f64,
}

impl BruteForceTail {
    /// Empirical CDF of the hits, conditional on the tail.
    pub fn conditional_cdf(&self, z: f64) -> f64 {
        let (zs, cdf) = (self.cdf.z(), self.cdf.cdf());
        let k = zs.partition_point(|&v| v <= z);
        let m = self.draws as f64;
        let mass = self.tail_mass * m;
        match self.cdf.side() {
            TailSide::Left => {
                if k == 0 {
                    0.0
                } else {
                    cdf[k - 1] * m / mass
                }
            }
            TailSide::Right => {
                if k == 0 {
                    0.0
                } else {
                    1.0 - (1.0 - cdf[k - 1]) * m / mass
                }
            }
        }
    }
}

fn brute_force_chunk(problem: &TailProblem, rng: &mut SimRng, count: usize) -> Result<SimulationRun> {
    let mut points = Vec::new();
    for _ in 0..count {
        let x = problem.model().sample(rng);
        let (z, inside) = problem.classify(&x);
        if inside {
            points.push(WeightedPoint { z, score: 1.0, x: Vec::new() });
        }
    }
    let hits = points.len();
    Ok(SimulationRun {
        points,
        stats: RejectionStats::from_sums(count, hits, count as f64, hits as f64),
    })
}

/// `draws` unconstrained model draws split into seeded chunks; the hits
/// form the reference CDF.
pub fn brute_force_tail_cdf(problem: &TailProblem, draws: usize, seed: u64, jobs: usize) -> Result<BruteForceTail> {
    let run = run_chunked(draws, seed, jobs, |rng, count| brute_force_chunk(problem, rng, count))?;
    let hits = run.points.len();
    if hits < MIN_ORACLE_HITS {
        return Err(TailError::OracleUnderpowered { hits, required: MIN_ORACLE_HITS });
    }
    let p = hits as f64 / draws as f64;
    let cdf = assemble_tail_cdf(&run.points, draws, problem.original_spec().side())?;
    Ok(BruteForceTail {
        cdf,
        hits,
        draws,
        tail_mass: p,
        std_error: (p * (1.0 - p) / draws as f64).sqrt(),
    })
}

/// Smallest axis-aligned box containing the tail, in normalized
/// coordinates. Along each axis the extent is found by bisection on the
/// target with the other coordinates at the extremal corner.
pub fn tail_bounding_box(problem: &TailProblem) -> Vec<(f64, f64)> {
    let f = problem.target();
    let spec = problem.spec();
    let corner = problem.extremal_corner();
    let inside = |x: &[f64]| spec.contains(f.evaluate(x));
    problem
        .domain()
        .iter()
        .enumerate()
        .map(|(i, &(a, b))| {
            let c = corner[i];
            let far = if c == a { b } else { a };
            let mut x = corner.clone();
            x[i] = far;
            if inside(&x) {
                return (a, b);
            }
            let (mut near, mut out) = (c, far);
            for _ in 0..200 {
                let mid = 0.5 * (near + out);
                if mid == near || mid == out {
                    break;
                }
                x[i] = mid;
                if inside(&x) {
                    near = mid;
                } else {
                    out = mid;
                }
            }
            if c == a {
                (a, out)
            } else {
                (out, b)
            }
        })
        .collect()
}

/// Up to `count` tail points drawn uniformly from the tail's bounding box,
/// with at most `max_tries` proposals.
pub fn uniform_tail_points<R: Rng + ?Sized>(
    problem: &TailProblem,
    count: usize,
    max_tries: usize,
    rng: &mut R,
) -> Vec<Vec<f64>> {
    let bbox = tail_bounding_box(problem);
    let mut out = Vec::with_capacity(count);
    for _ in 0..max_tries {
        if out.len() == count {
            break;
        }
        let x: Vec<f64> = bbox.iter().map(|&(a, b)| a + rng.random::<f64>() * (b - a)).collect();
        if problem.spec().contains(problem.target().evaluate(&x)) {
            out.push(x);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::adaptive_simpson;

    #[test]
    fn irwin_hall_examples() {
        assert!((irwin_hall_cdf(1, 0.5) - 0.5).abs() < 1e-15);
        assert_eq!(irwin_hall_cdf(4, 4.0), 1.0);
        assert!((irwin_hall_cdf(4, 3.88) - 0.99999136).abs() < 1e-12);
        assert!((irwin_hall_sf(4, 3.88) / 8.64e-6 - 1.0).abs() < 1e-12);
        assert_eq!(irwin_hall_cdf(3, -1.0), 0.0);
        assert_eq!(irwin_hall_cdf(3, 7.0), 1.0);
    }

    #[test]
    fn product_examples() {
        assert_eq!(product_uniform_cdf(3, 1.0), 1.0);
        assert!((product_uniform_cdf(3, 0.001) - 0.0317663).abs() < 5e-8);
        assert!((product_uniform_cdf(3, 0.9) - 0.999820).abs() < 5e-7);
        assert_eq!(product_uniform_cdf(3, 0.0), 0.0);
        for k in 1..100 {
            let x = k as f64 / 100.0;
            let s = product_uniform_sf(3, x) + product_uniform_cdf(3, x);
            assert!((s - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn convolution_quadrature_agrees() {
        // Sum: F_n(x) = ∫_0^1 F_{n−1}(x − t) dt. Product: F_n(x) = ∫_0^1 F_{n−1}(x/t) dt.
        for k in 0..50 {
            let x2 = 2.0 * (k as f64 + 0.5) / 50.0;
            let q2 = adaptive_simpson(&|t: f64| (x2 - t).clamp(0.0, 1.0), 0.0, 1.0, 1e-13);
            assert!((q2 - irwin_hall_cdf(2, x2)).abs() < 1e-8);
            let x3 = 3.0 * (k as f64 + 0.5) / 50.0;
            let q3 = adaptive_simpson(&|t: f64| irwin_hall_cdf(2, x3 - t), 0.0, 1.0, 1e-13);
            assert!((q3 - irwin_hall_cdf(3, x3)).abs() < 1e-8, "{x3}");
            let p = (k as f64 + 0.5) / 50.0;
            let qp = adaptive_simpson(&|t: f64| if t <= p { 1.0 } else { product_uniform_cdf(2, p / t) }, 0.0, 1.0, 1e-13);
            assert!((qp - product_uniform_cdf(3, p)).abs() < 1e-8, "{p}");
        }
    }

    #[test]
    fn beta_piece_matches_literal_form_where_stable() {
        for &beta in &[0.5, 0.7, 0.9] {
            let b3 = beta * beta * beta;
            for k in 0..20 {
                let u = b3 + (beta * beta - b3) * k as f64 / 20.0;
                let r = (u / b3).ln();
                let literal = (u * (r * r / 2.0 - r + 1.0) - b3) / (1.0 - beta).powi(3);
                let v = product_beta_uniform_cdf(u, beta).unwrap();
                assert!((v - literal).abs() < 1e-10, "{beta} {u}: {v} vs {literal}");
            }
        }
    }

    #[test]
    fn beta_piece_against_convolution() {
        // Density of a product of two U(β,1) scaled, integrated against the third.
        let beta = 0.8;
        let w = 1.0 - beta;
        let f2 = |v: f64| -> f64 {
            // P(X_1 X_2 ≤ v) on v ∈ [β², β].
            if v <= beta * beta {
                return 0.0;
            }
            let g = |t: f64| ((v / t - beta) / w).clamp(0.0, 1.0);
            adaptive_simpson(&g, beta, 1.0, 1e-13) / w
        };
        for k in 1..10 {
            let u = beta.powi(3) + (beta.powi(2) - beta.powi(3)) * k as f64 / 10.0;
            let q = adaptive_simpson(&|t: f64| f2(u / t), beta, 1.0, 1e-12) / w;
            assert!((q - product_beta_uniform_cdf(u, beta).unwrap()).abs() < 1e-8);
        }
    }

    #[test]
    fn beta_piece_edges() {
        let beta: f64 = 0.9999;
        assert_eq!(product_beta_uniform_cdf(beta.powi(3), beta).unwrap(), 0.0);
        assert!(matches!(
            product_beta_uniform_cdf(beta.powi(2), beta),
            Err(TailError::OutsideSupportedPiece { .. })
        ));
        let b3 = beta.powi(3);
        let mut prev = 0.0;
        for k in 0..100 {
            let u = b3 + (beta * beta - b3) * k as f64 / 100.0;
            let v = product_beta_uniform_cdf(u, beta).unwrap();
            assert!(v >= prev && v <= 1.0);
            prev = v;
        }
    }

    #[test]
    fn reliability_values() {
        let r = Reliability::new(0.999, 0.9999).unwrap();
        assert_eq!(r.cdf(r.z_max()).unwrap(), 1.0);
        assert!((r.z_max() - 0.00129967).abs() < 5e-9);
        let edge = 1.0 - 0.999 * 0.9999 * 0.9999;
        assert!(r.cdf(edge - 1e-9).is_err());
        assert!(r.cdf(edge).is_err());
        assert!(r.cdf(edge + 1e-9).is_ok());
        assert!((r.sf(r.z_max() - 5e-5).unwrap() - 0.0209077).abs() < 5e-7);
        let q = r.quantile(0.98).unwrap();
        assert!((0.00120..=0.00130).contains(&q));
        assert!((q - 0.00125040).abs() < 5e-8, "{q}");
    }

    #[test]
    fn volumes() {
        let (t, v) = product_region_volumes(0.1, TailSide::Right).unwrap();
        // 40-digit reference values.
        assert!((v / 1.849_569_371_266_797e-4 - 1.0).abs() < 1e-12, "{v}");
        assert!((t / 1.801_586_910_989_514e-4 - 1.0).abs() < 1e-10, "{t}");
        assert!((1.0 - t / v - 0.025_942_503_710_7).abs() < 1e-10);
        let (t, v) = product_region_volumes(0.01, TailSide::Left).unwrap();
        assert!((t / 0.162_089_664_069_448_87 - 1.0).abs() < 1e-12);
        assert!((v / 0.517_082_742_001_181_75 - 1.0).abs() < 1e-12);
        assert!((1.0 - t / v - 0.6865).abs() < 1e-4);
        for k in 1..=50 {
            let e = k as f64 / 100.0;
            let (t, v) = product_region_volumes(e, TailSide::Right).unwrap();
            assert!(t <= v);
        }
        let (t, v) = product_region_volumes(1e-12, TailSide::Right).unwrap();
        assert!(t < 1e-30 && v < 1e-30);
    }

    #[test]
    fn asymptotic_expansion() {
        assert!((asymptotic_rejection(0.1) - 0.025889).abs() < 5e-7);
        assert!((asymptotic_rejection(0.01) - 0.002509).abs() < 5e-7);
        assert_eq!(asymptotic_rejection(0.0), 0.0);
        for &e in &[0.001, 0.01, 0.05] {
            let (t, v) = product_region_volumes(e, TailSide::Right).unwrap();
            let exact = 1.0 - t / v;
            assert!((exact - asymptotic_rejection(e)).abs() < 2.0 * e * e * e, "{e}");
        }
    }
}
