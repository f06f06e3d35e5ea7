//! Bounded basic variables and their sequential joint model.
//!
//! A [`JointModel`] is an ordered list of [`BoundedVariable`]s. Variable `i`
//! carries a conditional law `F(x_i | x_1, ..., x_{i-1})` which may read the
//! already simulated prefix, so the model factors the joint density in the
//! order the samplers draw it.

use std::fmt;
use std::sync::Arc;

use crate::error::{Result, TailError};

/// Conditional law of one basic variable given the simulated prefix.
///
/// `cdf` must be `0` at the variable's lower bound and `1` at its upper
/// bound, and `quantile` must invert `cdf` on that interval.
pub trait Conditional: Send + Sync + fmt::Debug {
    fn cdf(&self, prefix: &[f64], x: f64) -> f64;

    fn quantile(&self, prefix: &[f64], p: f64) -> f64;

    fn density(&self, prefix: &[f64], x: f64) -> f64;

    /// True when the law ignores the prefix.
    fn is_independent(&self) -> bool {
        false
    }

    /// Inverse-CDF draw restricted to `(lo, hi]`, with `u` in `(0, 1]`.
    fn truncated_quantile(&self, prefix: &[f64], lo: f64, hi: f64, u: f64) -> f64 {
        let f_lo = self.cdf(prefix, lo);
        let f_hi = self.cdf(prefix, hi);
        self.quantile(prefix, f_lo + u * (f_hi - f_lo)).clamp(lo, hi)
    }
}

/// Uniform law on `[lower, upper]`, independent of the prefix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Uniform {
    pub lower: f64,
    pub upper: f64,
}

impl Conditional for Uniform {
    fn cdf(&self, _prefix: &[f64], x: f64) -> f64 {
        ((x - self.lower) / (self.upper - self.lower)).clamp(0.0, 1.0)
    }

    fn quantile(&self, _prefix: &[f64], p: f64) -> f64 {
        let p = p.clamp(0.0, 1.0);
        (self.lower + p * (self.upper - self.lower)).clamp(self.lower, self.upper)
    }

    fn density(&self, _prefix: &[f64], x: f64) -> f64 {
        if x < self.lower || x > self.upper {
            0.0
        } else {
            1.0 / (self.upper - self.lower)
        }
    }

    fn is_independent(&self) -> bool {
        true
    }

    // Interpolating directly keeps narrow intervals exact to the ulp.
    fn truncated_quantile(&self, _prefix: &[f64], lo: f64, hi: f64, u: f64) -> f64 {
        (lo + u * (hi - lo)).clamp(lo, hi)
    }
}

/// A basic variable with finite support `[lower, upper]`.
#[derive(Debug, Clone)]
pub struct BoundedVariable {
    lower: f64,
    upper: f64,
    law: Arc<dyn Conditional>,
}

impl BoundedVariable {
    pub fn new(lower: f64, upper: f64, law: Arc<dyn Conditional>) -> Result<Self> {
        if !lower.is_finite() || !upper.is_finite() {
            return Err(TailError::Config(format!(
                "variable bounds must be finite, got [{lower}, {upper}]"
            )));
        }
        if lower >= upper {
            return Err(TailError::Config(format!(
                "variable lower bound {lower} must be below upper bound {upper}"
            )));
        }
        Ok(Self { lower, upper, law })
    }

    pub fn uniform(lower: f64, upper: f64) -> Result<Self> {
        Self::new(lower, upper, Arc::new(Uniform { lower, upper }))
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn law(&self) -> &dyn Conditional {
        self.law.as_ref()
    }

    pub fn cdf(&self, prefix: &[f64], x: f64) -> f64 {
        if x <= self.lower {
            0.0
        } else if x >= self.upper {
            1.0
        } else {
            self.law.cdf(prefix, x)
        }
    }

    pub fn quantile(&self, prefix: &[f64], p: f64) -> f64 {
        self.law.quantile(prefix, p).clamp(self.lower, self.upper)
    }

    pub fn density(&self, prefix: &[f64], x: f64) -> f64 {
        self.law.density(prefix, x)
    }

    /// Probability mass of `(lo, hi]` given the prefix.
    pub fn mass(&self, prefix: &[f64], lo: f64, hi: f64) -> f64 {
        (self.cdf(prefix, hi) - self.cdf(prefix, lo)).max(0.0)
    }

    pub fn truncated_quantile(&self, prefix: &[f64], lo: f64, hi: f64, u: f64) -> f64 {
        self.law.truncated_quantile(prefix, lo, hi, u)
    }
}

/// Ordered basic variables; variable `i` may only condition on `0..i`.
#[derive(Debug, Clone)]
pub struct JointModel {
    variables: Vec<BoundedVariable>,
}

impl JointModel {
    pub fn new(variables: Vec<BoundedVariable>) -> Result<Self> {
        if variables.is_empty() {
            return Err(TailError::Config("a model needs at least one variable".into()));
        }
        Ok(Self { variables })
    }

    /// `n` independent uniforms on `[lower, upper]`.
    pub fn iid_uniform(n: usize, lower: f64, upper: f64) -> Result<Self> {
        let variables = (0..n)
            .map(|_| BoundedVariable::uniform(lower, upper))
            .collect::<Result<Vec<_>>>()?;
        Self::new(variables)
    }

    pub fn dim(&self) -> usize {
        self.variables.len()
    }

    pub fn variables(&self) -> &[BoundedVariable] {
        &self.variables
    }

    pub fn variable(&self, i: usize) -> &BoundedVariable {
        &self.variables[i]
    }

    pub fn lower(&self) -> Vec<f64> {
        self.variables.iter().map(BoundedVariable::lower).collect()
    }

    pub fn upper(&self) -> Vec<f64> {
        self.variables.iter().map(BoundedVariable::upper).collect()
    }

    pub fn is_independent(&self) -> bool {
        self.variables.iter().all(|v| v.law().is_independent())
    }

    /// One unconstrained draw of the whole vector, in model order.
    pub fn sample<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let mut x = Vec::with_capacity(self.dim());
        for v in &self.variables {
            let u = crate::rng::open_unit(rng);
            let xi = v.truncated_quantile(&x, v.lower(), v.upper(), u);
            x.push(xi);
        }
        x
    }

    /// True when every variable is uniform on `[0, 1]`.
    pub fn is_unit_uniform(&self) -> bool {
        self.is_independent()
            && self.variables.iter().all(|v| {
                v.lower() == 0.0 && v.upper() == 1.0 && (v.cdf(&[], 0.25) - 0.25).abs() < 1e-15
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Debug)]
    struct ShiftedUniform;

    // X_2 | x_1 ~ U(0, 1) shifted to put half its mass below x_1; exercises
    // the prefix-dependent path of the trait.
    impl Conditional for ShiftedUniform {
        fn cdf(&self, prefix: &[f64], x: f64) -> f64 {
            let c = prefix.first().copied().unwrap_or(0.5);
            let v = if x <= c { 0.5 * x / c } else { 0.5 + 0.5 * (x - c) / (1.0 - c) };
            v.clamp(0.0, 1.0)
        }
        fn quantile(&self, prefix: &[f64], p: f64) -> f64 {
            let c = prefix.first().copied().unwrap_or(0.5);
            if p <= 0.5 {
                2.0 * p * c
            } else {
                c + (2.0 * p - 1.0) * (1.0 - c)
            }
        }
        fn density(&self, prefix: &[f64], x: f64) -> f64 {
            let c = prefix.first().copied().unwrap_or(0.5);
            if x <= c {
                0.5 / c
            } else {
                0.5 / (1.0 - c)
            }
        }
    }

    #[test]
    fn uniform_cdf_hits_bounds() {
        let v = BoundedVariable::uniform(0.9999, 1.0).unwrap();
        assert_eq!(v.cdf(&[], 0.9999), 0.0);
        assert_eq!(v.cdf(&[], 1.0), 1.0);
        let x = v.quantile(&[], 0.3);
        assert!((v.cdf(&[], x) - 0.3).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_bounds() {
        assert!(BoundedVariable::uniform(1.0, 1.0).is_err());
        assert!(BoundedVariable::uniform(f64::NEG_INFINITY, 1.0).is_err());
        assert!(JointModel::new(vec![]).is_err());
    }

    #[test]
    fn prefix_dependent_law_round_trips() {
        let v = BoundedVariable::new(0.0, 1.0, Arc::new(ShiftedUniform)).unwrap();
        for &c in &[0.2, 0.5, 0.8] {
            for k in 1..20 {
                let p = k as f64 / 20.0;
                let x = v.quantile(&[c], p);
                assert!((v.cdf(&[c], x) - p).abs() < 1e-12);
            }
        }
        let x = v.truncated_quantile(&[0.2], 0.1, 0.6, 0.5);
        assert!(x > 0.1 && x <= 0.6);
        let model = JointModel::new(vec![
            BoundedVariable::uniform(0.0, 1.0).unwrap(),
            v,
        ])
        .unwrap();
        assert!(!model.is_independent());
    }

    #[test]
    fn truncated_uniform_stays_in_interval() {
        let v = BoundedVariable::uniform(0.0, 1.0).unwrap();
        for &u in &[1e-300, 0.5, 1.0] {
            let x = v.truncated_quantile(&[], 0.88, 1.0, u);
            assert!(x >= 0.88 && x <= 1.0);
        }
        assert!((v.mass(&[], 0.88, 1.0) - 0.12).abs() < 1e-15);
    }
}
