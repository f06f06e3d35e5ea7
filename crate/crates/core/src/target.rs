//! Componentwise-monotone target functions `Z = h(X)`.
//!
//! Every sampler in this crate needs three things from a target: its value,
//! the direction in which it moves with each coordinate, and the inverse in a
//! single coordinate with the others held fixed. The tangent-region sampler
//! additionally needs first and second derivatives at a box corner; targets
//! may supply them in closed form, otherwise [`derivatives`] falls back to
//! finite differences.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{Result, TailError};

/// Direction in which a target moves with one coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotone {
    Increasing,
    Decreasing,
}

impl Monotone {
    pub fn flip(self) -> Self {
        match self {
            Monotone::Increasing => Monotone::Decreasing,
            Monotone::Decreasing => Monotone::Increasing,
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            Monotone::Increasing => 1.0,
            Monotone::Decreasing => -1.0,
        }
    }
}

pub trait Target: Send + Sync + fmt::Debug {
    fn name(&self) -> &str {
        "custom"
    }

    fn dim(&self) -> usize;

    fn evaluate(&self, x: &[f64]) -> f64;

    fn monotone(&self, i: usize) -> Monotone;

    /// Solves `h(x with x_i := t) = z` for `t`; `x[i]` is ignored.
    ///
    /// The default assumes `h` is affine in `x_i` (true of every polynomial
    /// probability that is first degree in each parameter).
    fn coordinate_inverse(&self, i: usize, x: &[f64], z: f64) -> Result<f64> {
        multilinear_coordinate_inverse(self, i, x, z)
    }

    /// Closed-form gradient, when available.
    fn gradient(&self, _p: &[f64]) -> Option<Vec<f64>> {
        None
    }

    /// Closed-form Hessian, when available.
    fn hessian(&self, _p: &[f64]) -> Option<DMatrix<f64>> {
        None
    }
}

/// Shared handle to a target.
pub type TargetRef = Arc<dyn Target>;

pub fn monotone_signs(f: &dyn Target) -> Vec<Monotone> {
    (0..f.dim()).map(|i| f.monotone(i)).collect()
}

/// Inverts an affine-in-`x_i` target from two evaluations.
pub fn multilinear_coordinate_inverse<T: Target + ?Sized>(
    f: &T,
    i: usize,
    x: &[f64],
    z: f64,
) -> Result<f64> {
    let mut probe = x.to_vec();
    probe[i] = 0.0;
    let c0 = f.evaluate(&probe);
    probe[i] = 1.0;
    let c1 = f.evaluate(&probe) - c0;
    if !c0.is_finite() || !c1.is_finite() {
        return Err(TailError::EvaluationFailure { point: probe });
    }
    if c1.abs() < 1e-14 {
        return Err(TailError::CoordinateInactive { index: i });
    }
    Ok((z - c0) / c1)
}

/// `Σ x_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SumTarget {
    pub n: usize,
}

impl Target for SumTarget {
    fn name(&self) -> &str {
        "sum-uniform"
    }

    fn dim(&self) -> usize {
        self.n
    }

    fn evaluate(&self, x: &[f64]) -> f64 {
        x.iter().sum()
    }

    fn monotone(&self, _i: usize) -> Monotone {
        Monotone::Increasing
    }

    fn coordinate_inverse(&self, i: usize, x: &[f64], z: f64) -> Result<f64> {
        let rest: f64 = x.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, v)| v).sum();
        Ok(z - rest)
    }

    fn gradient(&self, _p: &[f64]) -> Option<Vec<f64>> {
        Some(vec![1.0; self.n])
    }

    fn hessian(&self, _p: &[f64]) -> Option<DMatrix<f64>> {
        Some(DMatrix::zeros(self.n, self.n))
    }
}

/// `Π x_i` over non-negative coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProductTarget {
    pub n: usize,
}

fn product_except(x: &[f64], skip: &[usize]) -> f64 {
    x.iter()
        .enumerate()
        .filter(|(k, _)| !skip.contains(k))
        .map(|(_, v)| v)
        .product()
}

fn product_hessian(p: &[f64], scale: f64) -> DMatrix<f64> {
    let n = p.len();
    DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            0.0
        } else {
            scale * product_except(p, &[i, j])
        }
    })
}

impl Target for ProductTarget {
    fn name(&self) -> &str {
        "product-uniform"
    }

    fn dim(&self) -> usize {
        self.n
    }

    fn evaluate(&self, x: &[f64]) -> f64 {
        x.iter().product()
    }

    fn monotone(&self, _i: usize) -> Monotone {
        Monotone::Increasing
    }

    fn coordinate_inverse(&self, i: usize, x: &[f64], z: f64) -> Result<f64> {
        let rest = product_except(x, &[i]);
        if rest == 0.0 {
            return Err(TailError::CoordinateInactive { index: i });
        }
        Ok(z / rest)
    }

    fn gradient(&self, p: &[f64]) -> Option<Vec<f64>> {
        Some((0..self.n).map(|i| product_except(p, &[i])).collect())
    }

    fn hessian(&self, p: &[f64]) -> Option<DMatrix<f64>> {
        Some(product_hessian(p, 1.0))
    }
}

/// System unavailability `1 − α·x₁x₂x₃` with `x_i ~ U(β, 1)`.
///
/// The whole range is `[1 − α, 1 − αβ³]`, about `1.3e-3` wide for the
/// standard case, so evaluation goes through `log1p`/`expm1` to keep the
/// relative error of `z` at the ulp level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReliabilityTarget {
    alpha: f64,
    beta: f64,
}

impl ReliabilityTarget {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(TailError::Config(format!("alpha must lie in (0, 1], got {alpha}")));
        }
        if !(beta > 0.0 && beta < 1.0) {
            return Err(TailError::Config(format!("beta must lie in (0, 1), got {beta}")));
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Three independent `U(β, 1)` variables.
    pub fn model(&self) -> Result<crate::model::JointModel> {
        crate::model::JointModel::iid_uniform(3, self.beta, 1.0)
    }

    /// `(1 − α, 1 − αβ³)`.
    pub fn range(&self) -> (f64, f64) {
        (
            self.evaluate(&[1.0, 1.0, 1.0]),
            self.evaluate(&[self.beta, self.beta, self.beta]),
        )
    }
}

impl Target for ReliabilityTarget {
    fn name(&self) -> &str {
        "reliability"
    }

    fn dim(&self) -> usize {
        3
    }

    fn evaluate(&self, x: &[f64]) -> f64 {
        let log_prod: f64 = self.alpha.ln() + x.iter().map(|&v| (v - 1.0).ln_1p()).sum::<f64>();
        -log_prod.exp_m1()
    }

    fn monotone(&self, _i: usize) -> Monotone {
        Monotone::Decreasing
    }

    fn coordinate_inverse(&self, i: usize, x: &[f64], z: f64) -> Result<f64> {
        let rest = product_except(x, &[i]);
        if rest == 0.0 {
            return Err(TailError::CoordinateInactive { index: i });
        }
        Ok((1.0 - z) / (self.alpha * rest))
    }

    fn gradient(&self, p: &[f64]) -> Option<Vec<f64>> {
        Some((0..3).map(|i| -self.alpha * product_except(p, &[i])).collect())
    }

    fn hessian(&self, p: &[f64]) -> Option<DMatrix<f64>> {
        Some(product_hessian(p, -self.alpha))
    }
}

/// `−h`, with flipped monotone directions.
#[derive(Debug, Clone)]
pub struct Negated {
    inner: TargetRef,
}

impl Negated {
    pub fn inner(&self) -> &TargetRef {
        &self.inner
    }
}

impl Target for Negated {
    fn name(&self) -> &str {
        self.inner.name()
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn evaluate(&self, x: &[f64]) -> f64 {
        -self.inner.evaluate(x)
    }

    fn monotone(&self, i: usize) -> Monotone {
        self.inner.monotone(i).flip()
    }

    fn coordinate_inverse(&self, i: usize, x: &[f64], z: f64) -> Result<f64> {
        self.inner.coordinate_inverse(i, x, -z)
    }

    fn gradient(&self, p: &[f64]) -> Option<Vec<f64>> {
        self.inner.gradient(p).map(|g| g.into_iter().map(|v| -v).collect())
    }

    fn hessian(&self, p: &[f64]) -> Option<DMatrix<f64>> {
        self.inner.hessian(p).map(|h| -h)
    }
}

/// Returns `g = −f`. A right tail of `f` is the left tail of `g`.
pub fn negate_target(f: TargetRef) -> TargetRef {
    Arc::new(Negated { inner: f })
}

/// Gradient and Hessian at a point, with a flag telling whether they came
/// from closed forms.
#[derive(Debug, Clone)]
pub struct Derivatives {
    pub gradient: Vec<f64>,
    pub hessian: DMatrix<f64>,
    pub exact: bool,
}

/// Closed-form derivatives when the target registers them, central finite
/// differences otherwise.
pub fn derivatives(f: &dyn Target, p: &[f64], domain: Option<&[(f64, f64)]>) -> Result<Derivatives> {
    match (f.gradient(p), f.hessian(p)) {
        (Some(gradient), Some(hessian)) => Ok(Derivatives {
            gradient,
            hessian,
            exact: true,
        }),
        _ => {
            let (gradient, hessian) = numeric_derivatives(f, p, domain)?;
            Ok(Derivatives {
                gradient,
                hessian,
                exact: false,
            })
        }
    }
}

/// Central-difference gradient and Hessian.
///
/// Near a face of `domain` the stencil is shifted inward along the
/// differenced coordinate only, which is exact for targets affine in that
/// coordinate. The Hessian uses a wider step than the gradient because the
/// second difference divides round-off by `h²`.
pub fn numeric_derivatives(
    f: &dyn Target,
    p: &[f64],
    domain: Option<&[(f64, f64)]>,
) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let n = p.len();
    let eval = |x: &[f64]| -> Result<f64> {
        let v = f.evaluate(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(TailError::EvaluationFailure { point: x.to_vec() })
        }
    };
    // Offset of the stencil centre so that centre ± h stays in the box.
    let shift = |k: usize, h: f64| -> f64 {
        match domain {
            Some(d) => {
                let (lo, hi) = d[k];
                if p[k] + h > hi {
                    hi - h - p[k]
                } else if p[k] - h < lo {
                    lo + h - p[k]
                } else {
                    0.0
                }
            }
            None => 0.0,
        }
    };
    let grad_step = |k: usize| (1e-6 * p[k].abs()).max(1e-6);
    let hess_step = |k: usize| (1e-4 * p[k].abs()).max(1e-4);

    let mut gradient = vec![0.0; n];
    let mut x = p.to_vec();
    for k in 0..n {
        let h = grad_step(k);
        let s = shift(k, h);
        x[k] = p[k] + s + h;
        let fp = eval(&x)?;
        x[k] = p[k] + s - h;
        let fm = eval(&x)?;
        x[k] = p[k];
        gradient[k] = (fp - fm) / (2.0 * h);
    }

    let mut hessian = DMatrix::zeros(n, n);
    for i in 0..n {
        let hi = hess_step(i);
        let si = shift(i, hi);
        x[i] = p[i] + si;
        let f0 = eval(&x)?;
        x[i] = p[i] + si + hi;
        let fp = eval(&x)?;
        x[i] = p[i] + si - hi;
        let fm = eval(&x)?;
        x[i] = p[i];
        hessian[(i, i)] = (fp - 2.0 * f0 + fm) / (hi * hi);
        for j in (i + 1)..n {
            let hj = hess_step(j);
            let sj = shift(j, hj);
            let mut corner = |di: f64, dj: f64| -> Result<f64> {
                x[i] = p[i] + si + di;
                x[j] = p[j] + sj + dj;
                let v = eval(&x);
                x[i] = p[i];
                x[j] = p[j];
                v
            };
            let v = (corner(hi, hj)? - corner(hi, -hj)? - corner(-hi, hj)? + corner(-hi, -hj)?)
                / (4.0 * hi * hj);
            hessian[(i, j)] = v;
            hessian[(j, i)] = v;
        }
    }
    // Symmetric by construction; averaging guards against asymmetric round-off.
    let hessian = (&hessian + hessian.transpose()) * 0.5;
    Ok((gradient, hessian))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Debug)]
    struct Bilinear;

    impl Target for Bilinear {
        fn dim(&self) -> usize {
            2
        }
        fn evaluate(&self, x: &[f64]) -> f64 {
            x[0] * x[1]
        }
        fn monotone(&self, _i: usize) -> Monotone {
            Monotone::Increasing
        }
    }

    #[test]
    fn negation_of_sum() {
        let g = negate_target(Arc::new(SumTarget { n: 2 }));
        assert_eq!(g.evaluate(&[0.3, 0.4]), -(0.3f64 + 0.4));
        assert_eq!(monotone_signs(g.as_ref()), vec![Monotone::Decreasing; 2]);
    }

    #[test]
    fn negated_inverse_matches_original() {
        let f: TargetRef = Arc::new(SumTarget { n: 2 });
        let g = negate_target(f.clone());
        let x = [0.0, 0.4];
        let a = g.coordinate_inverse(0, &x, -1.2).unwrap();
        let b = f.coordinate_inverse(0, &x, 1.2).unwrap();
        assert_eq!(a, b);
        let mut y = x;
        y[0] = a;
        assert!((g.evaluate(&y) + 1.2).abs() < 1e-12);
    }

    #[test]
    fn multilinear_inverse_examples() {
        let prod = ProductTarget { n: 3 };
        let t = multilinear_coordinate_inverse(&prod, 2, &[0.5, 0.1, 0.7], 0.001).unwrap();
        assert!((t - 0.02).abs() < 1e-15);

        let sum = SumTarget { n: 2 };
        let t = multilinear_coordinate_inverse(&sum, 0, &[0.3, 0.4], 0.9).unwrap();
        assert!((t - 0.5).abs() < 1e-15);

        let rel = ReliabilityTarget::new(0.999, 0.9999).unwrap();
        let t = multilinear_coordinate_inverse(&rel, 0, &[0.2, 1.0, 1.0], 1.0 - 0.999).unwrap();
        assert!((t - 1.0).abs() < 1e-12);
    }

    #[test]
    fn multilinear_inverse_flags_inactive_coordinate() {
        let prod = ProductTarget { n: 3 };
        let err = multilinear_coordinate_inverse(&prod, 0, &[0.5, 0.0, 0.3], 0.1).unwrap_err();
        assert_eq!(err, TailError::CoordinateInactive { index: 0 });
    }

    #[test]
    fn reliability_range_endpoints() {
        let rel = ReliabilityTarget::new(0.999, 0.9999).unwrap();
        let b = 0.9999f64;
        assert!((rel.evaluate(&[1.0, 1.0, 1.0]) - (1.0 - 0.999)).abs() < 1e-18);
        let top = rel.evaluate(&[b, b, b]);
        // 1 − αβ³ to 40 digits.
        let exact = 0.001_299_670_030_998_967_887_316_126_510_021_9;
        assert!((top - exact).abs() < 4e-18, "{top:e}");
        assert!(((1.0 - 0.999 * b * b * b) - exact).abs() > 5e-17);
        assert!(ReliabilityTarget::new(0.0, 0.5).is_err());
        assert!(ReliabilityTarget::new(0.5, 1.0).is_err());
    }

    #[test]
    fn numeric_gradient_of_product_at_corner() {
        #[derive(Debug)]
        struct Triple;
        impl Target for Triple {
            fn dim(&self) -> usize {
                3
            }
            fn evaluate(&self, x: &[f64]) -> f64 {
                x[0] * x[1] * x[2]
            }
            fn monotone(&self, _i: usize) -> Monotone {
                Monotone::Increasing
            }
        }
        let dom = [(0.0, 1.0); 3];
        let (g, h) = numeric_derivatives(&Triple, &[1.0, 1.0, 1.0], Some(&dom)).unwrap();
        for v in g {
            assert!((v - 1.0).abs() < 1e-8, "{v}");
        }
        assert!((h[(0, 1)] - 1.0).abs() < 1e-6);
        assert!(h[(0, 0)].abs() < 1e-6);
    }

    #[test]
    fn numeric_hessian_of_linear_is_zero() {
        let (_, h) = numeric_derivatives(&SumTarget { n: 3 }, &[0.2, 0.5, 0.9], None).unwrap();
        assert!(h.iter().all(|v| v.abs() < 1e-6));
    }

    #[test]
    fn numeric_cross_derivative_of_bilinear() {
        let dom = [(0.0, 1.0); 2];
        let (g, h) = numeric_derivatives(&Bilinear, &[1.0, 1.0], Some(&dom)).unwrap();
        assert!((g[0] - 1.0).abs() < 1e-8 && (g[1] - 1.0).abs() < 1e-8);
        assert!((h[(0, 1)] - 1.0).abs() < 1e-6);
        assert_eq!(h[(0, 1)], h[(1, 0)]);
    }

    #[test]
    fn closed_forms_agree_with_numeric() {
        let rel = ReliabilityTarget::new(0.999, 0.5).unwrap();
        let p = [0.7, 0.8, 0.9];
        let d = derivatives(&rel, &p, None).unwrap();
        assert!(d.exact);
        let (g, h) = numeric_derivatives(&rel, &p, None).unwrap();
        for k in 0..3 {
            assert!((g[k] - d.gradient[k]).abs() < 1e-7);
        }
        assert!((&h - &d.hessian).amax() < 1e-5);
    }

    #[test]
    fn non_finite_probe_is_reported() {
        #[derive(Debug)]
        struct Log;
        impl Target for Log {
            fn dim(&self) -> usize {
                1
            }
            fn evaluate(&self, x: &[f64]) -> f64 {
                x[0].ln()
            }
            fn monotone(&self, _i: usize) -> Monotone {
                Monotone::Increasing
            }
        }
        let err = numeric_derivatives(&Log, &[0.0], None).unwrap_err();
        assert!(matches!(err, TailError::EvaluationFailure { .. }));
    }
}
