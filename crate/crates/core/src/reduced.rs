//! Reduced-rejection sampling through an easy superset of the tail.
//!
//! Instead of the exact tail, the sampler draws from a region whose
//! sequential bounds are trivial to compute and which contains the tail:
//!
//! - a half-space cut by the hyperplane tangent to the tail boundary, at the
//!   point where its normal is parallel to the gradient at the extremal
//!   corner. It contains the tail when the boundary bends away from the
//!   plane, which [`check_curvature`] certifies;
//! - a half-space cut by the secant hyperplane through the points where the
//!   tail boundary crosses the box edges leaving the corner;
//! - for the left tail of a product of unit uniforms, the min-corner region
//!   `{some x_i < τ} ∪ {x_n < τ}` with `τ = ε^{1/n}`.
//!
//! Draws outside the tail are rejected but still count towards `m`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;

use crate::error::{Result, TailError};
use crate::rng::open_unit;
use crate::sample::{RejectionStats, SimulationRun, WeightedPoint};
use crate::tail::{TailProblem, TailSide};
use crate::target::{derivatives, Monotone, Target};

pub const MAX_NEWTON_ITERATIONS: usize = 100;
pub const TANGENCY_TOLERANCE: f64 = 1e-10;
/// Looser tolerance for the parallelism rows when only finite-difference
/// derivatives are available.
pub const NUMERIC_TANGENCY_TOLERANCE: f64 = 1e-7;
pub const EXACT_CURVATURE_TOLERANCE: f64 = 1e-10;
pub const NUMERIC_CURVATURE_TOLERANCE: f64 = 1e-6;

/// Half-space `{normal·x ≥ offset}` (right tail) or `{normal·x ≤ offset}`
/// (left tail), in the problem's normalized coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperplaneRegion {
    /// Point on the plane: the tangency point for tangent regions, the
    /// centroid of the edge intersections for secant regions.
    pub tangency_point: Vec<f64>,
    pub normal: Vec<f64>,
    pub offset: f64,
    pub side: TailSide,
}

impl HyperplaneRegion {
    pub fn new(point: Vec<f64>, normal: Vec<f64>, side: TailSide) -> Self {
        let offset = dot(&normal, &point);
        Self {
            tangency_point: point,
            normal,
            offset,
            side,
        }
    }

    fn sign(&self) -> f64 {
        match self.side {
            TailSide::Left => -1.0,
            TailSide::Right => 1.0,
        }
    }

    /// Membership with a relative slack of `1e-12` for points on the plane.
    pub fn contains(&self, x: &[f64]) -> bool {
        let s = self.sign();
        let slack = 1e-12 * (1.0 + self.offset.abs() + l1(&self.normal));
        s * dot(&self.normal, x) >= s * self.offset - slack
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| u * v).sum()
}

fn l1(a: &[f64]) -> f64 {
    a.iter().map(|v| v.abs()).sum()
}

/// Level the tail boundary sits at, `h(corner) ± ε`.
fn boundary_level(f: &dyn Target, corner: &[f64], epsilon: f64, side: TailSide) -> f64 {
    match side {
        TailSide::Left => f.evaluate(corner) + epsilon,
        TailSide::Right => f.evaluate(corner) - epsilon,
    }
}

/// Point `x₀` on the level set `h = h(corner) ± ε` where `∇h(x₀)` is
/// parallel to `∇h(corner)`.
///
/// The system is `h(x) − level = 0` together with
/// `c_j ∂_k h(x) − c_k ∂_j h(x) = 0` for `k ≠ j`, where `c = ∇h(corner)` and
/// `j` indexes its largest component. It is solved by damped Newton from
/// the corner using a least-squares (SVD) step, which also covers the
/// singular Jacobian of a linear target.
pub fn tangency_point(
    f: &dyn Target,
    corner: &[f64],
    epsilon: f64,
    side: TailSide,
    domain: Option<&[(f64, f64)]>,
) -> Result<Vec<f64>> {
    let n = corner.len();
    let level = boundary_level(f, corner, epsilon, side);
    let base = derivatives(f, corner, domain)?;
    let c = base.gradient.clone();
    let c_norm2: f64 = c.iter().map(|v| v * v).sum();
    if c_norm2 == 0.0 {
        return Err(TailError::TangencyFailure("gradient vanishes at the corner".into()));
    }
    let j = (0..n)
        .max_by(|&a, &b| c[a].abs().total_cmp(&c[b].abs()))
        .unwrap_or(0);
    let par_tol = if base.exact {
        TANGENCY_TOLERANCE
    } else {
        NUMERIC_TANGENCY_TOLERANCE
    };

    let residual = |x: &[f64]| -> Result<(DVector<f64>, DMatrix<f64>, bool)> {
        let d = derivatives(f, x, None)?;
        let mut r = DVector::zeros(n);
        let mut jac = DMatrix::zeros(n, n);
        let hx = f.evaluate(x);
        if !hx.is_finite() {
            return Err(TailError::EvaluationFailure { point: x.to_vec() });
        }
        r[0] = hx - level;
        for k in 0..n {
            jac[(0, k)] = d.gradient[k];
        }
        let mut row = 1;
        let mut par_ok = true;
        for k in (0..n).filter(|&k| k != j) {
            let v = (c[j] * d.gradient[k] - c[k] * d.gradient[j]) / c_norm2;
            par_ok &= v.abs() <= par_tol;
            r[row] = v;
            for q in 0..n {
                jac[(row, q)] = (c[j] * d.hessian[(k, q)] - c[k] * d.hessian[(j, q)]) / c_norm2;
            }
            row += 1;
        }
        let converged = r[0].abs() <= TANGENCY_TOLERANCE && par_ok;
        Ok((r, jac, converged))
    };

    let mut x = corner.to_vec();
    let (mut r, mut jac, mut done) = residual(&x)?;
    for _ in 0..MAX_NEWTON_ITERATIONS {
        if done {
            return Ok(x);
        }
        let svd = jac.clone().svd(true, true);
        let step = svd
            .solve(&(-&r), 1e-14 * svd.singular_values.max().max(1e-300))
            .map_err(|e| TailError::TangencyFailure(e.to_string()))?;
        let norm0 = r.norm();
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(xi, si)| xi + lambda * si).collect();
            if let Ok((rt, jt, dt)) = residual(&trial) {
                if rt.norm() < norm0 || dt {
                    x = trial;
                    r = rt;
                    jac = jt;
                    done = dt;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    if done {
        return Ok(x);
    }
    Err(TailError::TangencyFailure(format!(
        "Newton iteration stalled with residual {:.3e}",
        r.norm()
    )))
}

/// Tangent hyperplane region at `tangency_point`, with normal `∇h(corner)`.
pub fn tangent_hyperplane(
    f: &dyn Target,
    corner: &[f64],
    epsilon: f64,
    side: TailSide,
    domain: Option<&[(f64, f64)]>,
) -> Result<HyperplaneRegion> {
    let x0 = tangency_point(f, corner, epsilon, side, domain)?;
    let normal = derivatives(f, corner, domain)?.gradient;
    Ok(HyperplaneRegion::new(x0, normal, side))
}

/// Sign pattern of the second-order form that decides containment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Curvature {
    /// The tail lies on the region side of the plane near the corner.
    NegativeDefinite,
    Indefinite,
    PositiveDefinite,
    /// Every eigenvalue is zero within tolerance (for example a linear target).
    Degenerate,
}

/// Classifies the Hessian of `h` at `point` restricted to the plane
/// orthogonal to the gradient, oriented so that
/// [`Curvature::NegativeDefinite`] means the tail bends away from the plane:
/// the Hessian itself for a right tail, its negative for a left tail.
pub fn check_curvature(
    f: &dyn Target,
    point: &[f64],
    side: TailSide,
    domain: Option<&[(f64, f64)]>,
) -> Result<Curvature> {
    let d = derivatives(f, point, domain)?;
    let n = point.len();
    let g = DVector::from_vec(d.gradient.clone());
    let h = match side {
        TailSide::Right => d.hessian.clone(),
        TailSide::Left => -d.hessian.clone(),
    };
    let form = if g.norm() > 0.0 && n > 1 {
        let gn = &g / g.norm();
        let proj = DMatrix::identity(n, n) - &gn * gn.transpose();
        let svd = proj.svd(true, false);
        let u = svd.u.expect("left singular vectors requested");
        let cols: Vec<DVector<f64>> = (0..n)
            .filter(|&k| svd.singular_values[k] > 0.5)
            .map(|k| u.column(k).into_owned())
            .collect();
        let basis = DMatrix::from_columns(&cols);
        basis.transpose() * h * basis
    } else if n == 1 {
        DMatrix::zeros(0, 0)
    } else {
        h
    };
    let tol = if d.exact {
        EXACT_CURVATURE_TOLERANCE
    } else {
        NUMERIC_CURVATURE_TOLERANCE * (1.0 + d.hessian.abs().max())
    };
    if form.nrows() == 0 {
        return Ok(Curvature::Degenerate);
    }
    let eig = SymmetricEigen::new(form).eigenvalues;
    let neg = eig.iter().all(|&l| l < -tol);
    let pos = eig.iter().all(|&l| l > tol);
    let zero = eig.iter().all(|&l| l.abs() <= tol);
    Ok(if zero {
        Curvature::Degenerate
    } else if neg {
        Curvature::NegativeDefinite
    } else if pos {
        Curvature::PositiveDefinite
    } else {
        Curvature::Indefinite
    })
}

/// `(L_i, U_i]` for variable `i` inside the half-space, with later
/// variables pinned at the box corner that favours the region.
///
/// An empty interval is reported as [`TailError::InfeasiblePrefix`]; the
/// sampler counts such a draw as rejected.
pub fn hyperplane_bounds(
    region: &HyperplaneRegion,
    i: usize,
    prefix: &[f64],
    lower: &[f64],
    upper: &[f64],
) -> Result<(f64, f64)> {
    let s = region.sign();
    let kappa = s * region.offset;
    let mut rest: f64 = prefix.iter().zip(&region.normal).map(|(x, c)| s * c * x).sum();
    for k in (i + 1)..region.normal.len() {
        let c = s * region.normal[k];
        rest += (c * lower[k]).max(c * upper[k]);
    }
    let ci = s * region.normal[i];
    let (a, b) = (lower[i], upper[i]);
    let (lo, hi) = if ci > 0.0 {
        (((kappa - rest) / ci).max(a), b)
    } else if ci < 0.0 {
        (a, ((kappa - rest) / ci).min(b))
    } else if rest >= kappa {
        (a, b)
    } else {
        (b, a)
    };
    if lo >= hi {
        return Err(TailError::InfeasiblePrefix { stage: i, lower: lo, upper: hi });
    }
    Ok((lo, hi))
}

/// Hyperplane through the points where the level set `h = h(corner) ± ε`
/// meets the box edges leaving `corner`.
///
/// With edge crossings `t_k` the plane is `Σ_k (x_k − c_k)/(t_k − c_k) = 1`.
/// At `ε = 0` it degenerates to the plane through the corner with normal
/// `∇h(corner)`.
pub fn secant_hyperplane(
    f: &dyn Target,
    corner: &[f64],
    epsilon: f64,
    side: TailSide,
    domain: &[(f64, f64)],
) -> Result<HyperplaneRegion> {
    if epsilon == 0.0 {
        let normal = derivatives(f, corner, Some(domain))?.gradient;
        return Ok(HyperplaneRegion::new(corner.to_vec(), normal, side));
    }
    let n = corner.len();
    let level = boundary_level(f, corner, epsilon, side);
    let mut normal = Vec::with_capacity(n);
    let mut centroid = vec![0.0; n];
    for k in 0..n {
        let (a, b) = domain[k];
        let t = f
            .coordinate_inverse(k, corner, level)
            .map_err(|e| TailError::SecantFailure(format!("edge {}: {e}", k + 1)))?;
        let inside = t.is_finite() && t >= a.min(b) && t <= a.max(b) && t != corner[k];
        if !inside {
            return Err(TailError::SecantFailure(format!(
                "level set does not cross edge {} inside [{a}, {b}] (crossing at {t})",
                k + 1
            )));
        }
        let dir = match f.monotone(k) {
            Monotone::Increasing => 1.0,
            Monotone::Decreasing => -1.0,
        };
        normal.push(dir / (t - corner[k]).abs());
        for (q, c) in centroid.iter_mut().enumerate() {
            *c += if q == k { t } else { corner[q] } / n as f64;
        }
    }
    Ok(HyperplaneRegion::new(centroid, normal, side))
}

/// One draw from the min-corner region for `n` unit uniforms.
///
/// `X_1..X_{n−1}` are uniform on `[0, 1]`; `X_n` is uniform on `[0, 1]` when
/// some earlier coordinate is below `τ = ε^{1/n}` and on `[0, τ]`
/// otherwise. The score is the length of the `X_n` interval.
pub fn min_corner_region_draw<R: Rng + ?Sized>(n: usize, epsilon: f64, rng: &mut R) -> (Vec<f64>, f64) {
    let tau = min_corner_threshold(n, epsilon);
    let mut x: Vec<f64> = (0..n - 1).map(|_| open_unit(rng)).collect();
    let score = if x.iter().any(|&v| v < tau) { 1.0 } else { tau };
    x.push(score * open_unit(rng));
    (x, score)
}

/// `ε^{1/n}`.
pub fn min_corner_threshold(n: usize, epsilon: f64) -> f64 {
    epsilon.powf(1.0 / n as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionKind {
    Tangent,
    Secant,
    MinCorner,
}

impl std::str::FromStr for RegionKind {
    type Err = TailError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tangent" => Ok(RegionKind::Tangent),
            "secant" => Ok(RegionKind::Secant),
            "min-corner" => Ok(RegionKind::MinCorner),
            other => Err(TailError::Config(format!("unknown region '{other}'"))),
        }
    }
}

impl std::fmt::Display for RegionKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RegionKind::Tangent => "tangent",
            RegionKind::Secant => "secant",
            RegionKind::MinCorner => "min-corner",
        })
    }
}

/// A constructed simulation region.
#[derive(Debug, Clone, PartialEq)]
pub enum ReducedRegion {
    Hyperplane(HyperplaneRegion),
    MinCorner { n: usize, epsilon: f64 },
}

impl ReducedRegion {
    /// Whether a normalized-coordinate point lies in the region.
    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            ReducedRegion::Hyperplane(h) => h.contains(x),
            ReducedRegion::MinCorner { n, epsilon } => {
                let tau = min_corner_threshold(*n, *epsilon);
                x[..n - 1].iter().any(|&v| v < tau) || x[n - 1] <= tau
            }
        }
    }
}

/// Builds the region of `kind` for a normalized problem.
///
/// A tangent region must pass [`check_curvature`] at the tangency point. A
/// degenerate form is accepted only when the Hessian also vanishes at the
/// corner, i.e. the target is flat to second order and the plane is the
/// level set itself.
pub fn build_region(problem: &TailProblem, kind: RegionKind) -> Result<ReducedRegion> {
    let f = problem.target();
    let spec = problem.spec();
    let corner = problem.extremal_corner();
    let domain = problem.domain();
    match kind {
        RegionKind::Tangent => {
            let region = tangent_hyperplane(f, &corner, spec.epsilon(), spec.side(), Some(&domain))?;
            match check_curvature(f, &region.tangency_point, spec.side(), None)? {
                Curvature::NegativeDefinite => Ok(ReducedRegion::Hyperplane(region)),
                Curvature::Degenerate
                    if check_curvature(f, &corner, spec.side(), Some(&domain))? == Curvature::Degenerate =>
                {
                    Ok(ReducedRegion::Hyperplane(region))
                }
                other => Err(TailError::RegionNotCertified(format!(
                    "tangent plane curvature is {other:?}; use the secant or min-corner region"
                ))),
            }
        }
        RegionKind::Secant => Ok(ReducedRegion::Hyperplane(secant_hyperplane(
            f,
            &corner,
            spec.epsilon(),
            spec.side(),
            &domain,
        )?)),
        RegionKind::MinCorner => {
            if !(problem.model().is_unit_uniform()
                && spec.side() == TailSide::Left
                && spec.z_min() == 0.0
                && f.name() == "product-uniform"
                && !problem.is_negated())
            {
                return Err(TailError::RegionNotCertified(
                    "the min-corner region needs the left tail of a product of unit uniforms".into(),
                ));
            }
            Ok(ReducedRegion::MinCorner {
                n: problem.dim(),
                epsilon: spec.epsilon(),
            })
        }
    }
}

fn draw_in_hyperplane<R: Rng + ?Sized>(
    problem: &TailProblem,
    region: &HyperplaneRegion,
    lower: &[f64],
    upper: &[f64],
    rng: &mut R,
) -> Result<Option<(Vec<f64>, f64)>> {
    let n = problem.dim();
    let mut x = Vec::with_capacity(n);
    let mut score = 1.0;
    for i in 0..n {
        let (lo, hi) = match hyperplane_bounds(region, i, &x, lower, upper) {
            Ok(b) => b,
            Err(TailError::InfeasiblePrefix { .. }) => return Ok(None),
            Err(e) => return Err(e),
        };
        let var = problem.model().variable(i);
        score *= var.mass(&x, lo, hi);
        let xi = var.truncated_quantile(&x, lo, hi, open_unit(rng));
        x.push(xi);
    }
    Ok(Some((x, score)))
}

/// `m` draws from `region`; points outside the tail are rejected.
pub fn run_reduced_rejection<R: Rng + ?Sized>(
    problem: &TailProblem,
    region: &ReducedRegion,
    m: usize,
    rng: &mut R,
) -> Result<SimulationRun> {
    if m == 0 {
        return Err(TailError::Config("sample size must be at least 1".into()));
    }
    let lower = problem.model().lower();
    let upper = problem.model().upper();
    let mut points = Vec::new();
    let (mut sum_all, mut sum_acc) = (0.0, 0.0);
    for _ in 0..m {
        let draw = match region {
            ReducedRegion::Hyperplane(h) => draw_in_hyperplane(problem, h, &lower, &upper, rng)?,
            ReducedRegion::MinCorner { n, epsilon } => Some(min_corner_region_draw(*n, *epsilon, rng)),
        };
        let Some((x, score)) = draw else { continue };
        sum_all += score;
        let (z, inside) = problem.classify(&x);
        if inside {
            sum_acc += score;
            points.push(WeightedPoint { z, score, x });
        }
    }
    let accepted = points.len();
    Ok(SimulationRun {
        points,
        stats: RejectionStats::from_sums(m, accepted, sum_all, sum_acc),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::JointModel;
    use crate::rng::stream_rng;
    use crate::tail::TailSpec;
    use crate::target::{ProductTarget, ReliabilityTarget, SumTarget, TargetRef};
    use std::sync::Arc;

    fn problem(target: TargetRef, model: JointModel, side: TailSide, eps: f64) -> TailProblem {
        let spec = TailSpec::for_target(target.as_ref(), &model, side, eps).unwrap();
        TailProblem::new(target, model, spec).unwrap()
    }

    fn unit(n: usize) -> JointModel {
        JointModel::iid_uniform(n, 0.0, 1.0).unwrap()
    }

    #[test]
    fn product_tangency_is_cube_root() {
        let f = ProductTarget { n: 3 };
        let x0 = tangency_point(&f, &[1.0; 3], 0.1, TailSide::Right, None).unwrap();
        for v in &x0 {
            assert!((v - 0.9f64.cbrt()).abs() < 1e-10);
            assert!((v - 0.965489).abs() < 5e-7);
        }
        assert!((f.evaluate(&x0) - 0.9).abs() < 1e-10);
    }

    #[test]
    fn linear_tangency_is_on_level_plane() {
        let f = SumTarget { n: 3 };
        let x0 = tangency_point(&f, &[1.0; 3], 0.2, TailSide::Right, None).unwrap();
        assert!((f.evaluate(&x0) - 2.8).abs() < 1e-12);
        let p = problem(Arc::new(f), unit(3), TailSide::Right, 0.2);
        let region = build_region(&p, RegionKind::Tangent).unwrap();
        let mut rng = stream_rng(3, 0);
        let run = run_reduced_rejection(&p, &region, 2000, &mut rng).unwrap();
        assert_eq!(run.stats.m_accepted, 2000);
    }

    #[test]
    fn curvature_classes() {
        let prod = ProductTarget { n: 3 };
        assert_eq!(
            check_curvature(&prod, &[1.0; 3], TailSide::Right, None).unwrap(),
            Curvature::NegativeDefinite
        );
        assert_eq!(
            check_curvature(&SumTarget { n: 3 }, &[1.0; 3], TailSide::Right, None).unwrap(),
            Curvature::Degenerate
        );
        // Small-product tail near the origin: the sublevel set {x₁x₂ ≤ ε} is
        // not convex, so the plane cuts through it.
        let p2 = ProductTarget { n: 2 };
        assert_ne!(
            check_curvature(&p2, &[0.1, 0.1], TailSide::Left, None).unwrap(),
            Curvature::NegativeDefinite
        );
        let rel = ReliabilityTarget::new(0.999, 0.9999).unwrap();
        assert_ne!(
            check_curvature(&rel, &[0.9999; 3], TailSide::Right, None).unwrap(),
            Curvature::NegativeDefinite
        );
    }

    #[test]
    fn product_hyperplane_bounds() {
        let f = ProductTarget { n: 3 };
        let region = tangent_hyperplane(&f, &[1.0; 3], 0.1, TailSide::Right, None).unwrap();
        let delta = 1.0 - 0.9f64.cbrt();
        let (lo, hi) = (vec![0.0; 3], vec![1.0; 3]);
        let (l1, u1) = hyperplane_bounds(&region, 0, &[], &lo, &hi).unwrap();
        assert!((l1 - (1.0 - 3.0 * delta)).abs() < 1e-9 && (l1 - 0.896468).abs() < 5e-7);
        assert_eq!(u1, 1.0);
        let (l2, _) = hyperplane_bounds(&region, 1, &[0.95], &lo, &hi).unwrap();
        assert!((l2 - (2.0 - 3.0 * delta - 0.95)).abs() < 1e-9 && (l2 - 0.946468).abs() < 5e-7);
    }

    #[test]
    fn reliability_secant_plane() {
        let rel = ReliabilityTarget::new(0.999, 0.9999).unwrap();
        let p = problem(Arc::new(rel), rel.model().unwrap(), TailSide::Right, 5e-5);
        let ReducedRegion::Hyperplane(h) = build_region(&p, RegionKind::Secant).unwrap() else {
            panic!("expected a hyperplane")
        };
        let delta = 5e-5 / (0.999 * 0.9999 * 0.9999);
        // Scale so that the normal is (1, 1, 1).
        let scale = h.normal[0];
        for c in &h.normal {
            assert!((c / scale - 1.0).abs() < 1e-9);
        }
        let offset = h.offset / scale;
        assert!((offset - (3.0 * 0.9999 + delta)).abs() < 1e-9, "{offset}");
        assert!((delta - 5.006e-5).abs() < 5e-9);
        let (lo, hi) = (p.model().lower(), p.model().upper());
        let (l1, u1) = hyperplane_bounds(&h, 0, &[], &lo, &hi).unwrap();
        assert_eq!(l1, 0.9999);
        assert!((u1 - (0.9999 + delta)).abs() < 1e-9);
    }

    #[test]
    fn product_secant_differs_from_tangent() {
        let f = ProductTarget { n: 3 };
        let dom = [(0.0, 1.0); 3];
        let s = secant_hyperplane(&f, &[1.0; 3], 0.1, TailSide::Right, &dom).unwrap();
        let t = tangent_hyperplane(&f, &[1.0; 3], 0.1, TailSide::Right, None).unwrap();
        assert!((s.offset / s.normal[0] - 2.9).abs() < 1e-9);
        assert!((t.offset / t.normal[0] - 3.0 * 0.9f64.cbrt()).abs() < 1e-9);
        let z = secant_hyperplane(&f, &[1.0; 3], 0.0, TailSide::Right, &dom).unwrap();
        assert!((z.offset - 3.0).abs() < 1e-12);
    }

    #[test]
    fn min_corner_draws() {
        assert!((min_corner_threshold(3, 0.01) - 0.215443).abs() < 5e-7);
        let mut rng = stream_rng(4, 0);
        for _ in 0..1000 {
            let (x, w) = min_corner_region_draw(3, 0.01, &mut rng);
            if x[..2].iter().any(|&v| v < 0.215443469) {
                assert_eq!(w, 1.0);
            } else {
                assert!(w < 1.0 && x[2] <= w);
            }
        }
    }

    #[test]
    fn min_corner_guard() {
        let p = problem(Arc::new(SumTarget { n: 3 }), unit(3), TailSide::Left, 0.1);
        assert!(build_region(&p, RegionKind::MinCorner).is_err());
    }

    #[test]
    fn accepted_points_are_in_tail() {
        let p = problem(Arc::new(ProductTarget { n: 3 }), unit(3), TailSide::Right, 0.1);
        let region = build_region(&p, RegionKind::Tangent).unwrap();
        let mut rng = stream_rng(5, 0);
        let run = run_reduced_rejection(&p, &region, 4000, &mut rng).unwrap();
        assert!(run.points.iter().all(|w| w.z > 0.9));
        assert!(run.stats.m_accepted < 4000);
    }
}
