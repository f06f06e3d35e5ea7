//! Simpson quadrature and monotone cumulative tables.

use crate::error::{Result, TailError};

/// Composite Simpson rule on `[a, b]` with `intervals` (even) subintervals.
pub fn composite_simpson<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, intervals: usize) -> f64 {
    let r = intervals + intervals % 2;
    let h = (b - a) / r as f64;
    let mut acc = f(a) + f(b);
    for k in 1..r {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + k as f64 * h);
    }
    acc * h / 3.0
}

/// Adaptive Simpson with Richardson correction.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    adaptive_step(f, a, b, fa, fm, fb, whole, tol, 48)
}

#[allow(clippy::too_many_arguments)]
fn adaptive_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Cumulative integral of a non-negative density, tabulated by Simpson
/// pairs and interpolated by a monotone (Fritsch–Carlson) cubic Hermite.
#[derive(Debug, Clone)]
pub struct MonotoneTable {
    knots: Vec<f64>,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl MonotoneTable {
    /// `nodes` are equally spaced with an even number of intervals and
    /// `density` holds the integrand at each node.
    pub fn from_density(nodes: &[f64], density: &[f64]) -> Result<Self> {
        if nodes.len() < 3 || nodes.len() % 2 == 0 || nodes.len() != density.len() {
            return Err(TailError::QuadratureFailure(format!(
                "need an odd number (>= 3) of nodes with matching densities, got {} and {}",
                nodes.len(),
                density.len()
            )));
        }
        if let Some(bad) = density.iter().find(|d| !d.is_finite() || **d < 0.0) {
            return Err(TailError::QuadratureFailure(format!("non-finite or negative integrand {bad}")));
        }
        let mut knots = vec![nodes[0]];
        let mut values = vec![0.0];
        let mut slopes = vec![density[0]];
        for k in (0..nodes.len() - 1).step_by(2) {
            let h = nodes[k + 2] - nodes[k];
            let inc = h / 6.0 * (density[k] + 4.0 * density[k + 1] + density[k + 2]);
            knots.push(nodes[k + 2]);
            values.push(values.last().unwrap() + inc);
            slopes.push(density[k + 2]);
        }
        for k in 0..knots.len() - 1 {
            let h = knots[k + 1] - knots[k];
            let secant = (values[k + 1] - values[k]) / h;
            if secant <= 0.0 {
                slopes[k] = 0.0;
                slopes[k + 1] = 0.0;
                continue;
            }
            let a = slopes[k] / secant;
            let b = slopes[k + 1] / secant;
            let r = a * a + b * b;
            if r > 9.0 {
                let tau = 3.0 / r.sqrt();
                slopes[k] = tau * a * secant;
                slopes[k + 1] = tau * b * secant;
            }
        }
        Ok(Self { knots, values, slopes })
    }

    pub fn total(&self) -> f64 {
        *self.values.last().unwrap()
    }

    pub fn lower(&self) -> f64 {
        self.knots[0]
    }

    pub fn upper(&self) -> f64 {
        *self.knots.last().unwrap()
    }

    fn segment(&self, x: f64) -> usize {
        let k = self.knots.partition_point(|&v| v <= x);
        k.saturating_sub(1).min(self.knots.len() - 2)
    }

    fn hermite(&self, k: usize, x: f64) -> f64 {
        let h = self.knots[k + 1] - self.knots[k];
        let t = ((x - self.knots[k]) / h).clamp(0.0, 1.0);
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * self.values[k]
            + (t3 - 2.0 * t2 + t) * h * self.slopes[k]
            + (-2.0 * t3 + 3.0 * t2) * self.values[k + 1]
            + (t3 - t2) * h * self.slopes[k + 1]
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x <= self.lower() {
            return 0.0;
        }
        if x >= self.upper() {
            return self.total();
        }
        self.hermite(self.segment(x), x)
    }

    /// Smallest `x` with `eval(x) >= target`.
    pub fn invert(&self, target: f64) -> f64 {
        let target = target.clamp(0.0, self.total());
        let k = self
            .values
            .partition_point(|&v| v < target)
            .saturating_sub(1)
            .min(self.knots.len() - 2);
        let (mut lo, mut hi) = (self.knots[k], self.knots[k + 1]);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.hermite(k, mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    }
}
