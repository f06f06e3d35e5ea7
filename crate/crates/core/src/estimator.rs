//! Weighted tail CDFs assembled from scored draws.
//!
//! Accepted draws are sorted by `z` and their scores accumulated over the
//! total number of draws `m`, including rejected ones. In the left tail the
//! estimate at `z_j` is `Σ_{k≤j} w_k/m`. In the right tail it is
//! `1 − Σ_{k>j} w_k/m`, which sits at `1 − tail_mass + w_1/m` for the smallest
//! simulated `z` and reaches `1` at the largest.

use crate::error::{Result, TailError};
use crate::sample::WeightedPoint;
use crate::tail::TailSide;

/// Simulated CDF of `Z` over the part of the tail covered by the draws.
#[derive(Debug, Clone, PartialEq)]
pub struct TailCdf {
    side: TailSide,
    m_total: usize,
    tail_mass: f64,
    z: Vec<f64>,
    cdf: Vec<f64>,
    weights: Vec<f64>,
}

/// Sorts the accepted draws, merges ties and accumulates scores.
pub fn assemble_tail_cdf(points: &[WeightedPoint], m_total: usize, side: TailSide) -> Result<TailCdf> {
    if points.is_empty() {
        return Err(TailError::NoTailHits);
    }
    if m_total < points.len() {
        return Err(TailError::Config(format!(
            "m_total = {m_total} is smaller than the {} accepted points",
            points.len()
        )));
    }
    let mut pairs: Vec<(f64, f64)> = points.iter().map(|p| (p.z, p.score)).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut z: Vec<f64> = Vec::with_capacity(pairs.len());
    let mut weights: Vec<f64> = Vec::with_capacity(pairs.len());
    for (zi, wi) in pairs {
        if z.last() == Some(&zi) {
            *weights.last_mut().unwrap() += wi;
        } else {
            z.push(zi);
            weights.push(wi);
        }
    }
    let m = m_total as f64;
    let total: f64 = weights.iter().sum();
    let cdf = match side {
        TailSide::Left => weights
            .iter()
            .scan(0.0, |acc, w| {
                *acc += w;
                Some((*acc / m).min(1.0))
            })
            .collect(),
        TailSide::Right => {
            let mut out = vec![0.0; weights.len()];
            let mut above = 0.0;
            for j in (0..weights.len()).rev() {
                out[j] = (1.0 - above / m).max(0.0);
                above += weights[j];
            }
            out
        }
    };
    Ok(TailCdf {
        side,
        m_total,
        tail_mass: total / m,
        z,
        cdf,
        weights,
    })
}

impl TailCdf {
    pub fn side(&self) -> TailSide {
        self.side
    }

    pub fn m_total(&self) -> usize {
        self.m_total
    }

    /// `Σ scores / m`, the estimated probability of the tail.
    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn z(&self) -> &[f64] {
        &self.z
    }

    pub fn cdf(&self) -> &[f64] {
        &self.cdf
    }

    /// Merged score at each distinct `z`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.z.iter().copied().zip(self.cdf.iter().copied())
    }

    /// `[first cdf, last cdf]`.
    pub fn covered_range(&self) -> (f64, f64) {
        (self.cdf[0], self.cdf[self.cdf.len() - 1])
    }

    /// Conditional CDF of `Z` given the tail, self-normalized by the
    /// simulated tail mass: `P(Z ≤ z | left tail)` or `P(Z ≤ z | right tail)`.
    pub fn conditional(&self) -> Vec<(f64, f64)> {
        let m = self.m_total as f64;
        let scale = self.tail_mass * m;
        match self.side {
            TailSide::Left => self.points().map(|(z, c)| (z, c * m / scale)).collect(),
            TailSide::Right => self
                .points()
                .map(|(z, c)| (z, 1.0 - (1.0 - c) * m / scale))
                .collect(),
        }
    }

    /// Smallest `z` on the piecewise-linear CDF with value `≥ p`.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        let (lo, hi) = self.covered_range();
        if !(p >= lo && p <= hi) {
            return Err(TailError::QuantileOutsideTail {
                level: p,
                lower: lo,
                upper: hi,
            });
        }
        let j = self.cdf.partition_point(|&c| c < p);
        if j == 0 || self.cdf[j] == p {
            return Ok(self.z[j]);
        }
        let (c0, c1) = (self.cdf[j - 1], self.cdf[j]);
        let (z0, z1) = (self.z[j - 1], self.z[j]);
        Ok(z0 + (p - c0) / (c1 - c0) * (z1 - z0))
    }

    /// `(0, z*)` with `z* = quantile(level)`, so that `P(Z ≤ z*) ≈ level`.
    pub fn one_sided_interval(&self, level: f64) -> Result<(f64, f64)> {
        if self.side != TailSide::Right {
            return Err(TailError::Config(
                "one-sided upper bounds need a right-tail CDF".into(),
            ));
        }
        Ok((0.0, self.quantile(level)?))
    }

    /// `max_j |cdf_j − oracle(z_j)|`.
    pub fn sup_distance<F: Fn(f64) -> f64>(&self, oracle: F) -> f64 {
        self.points()
            .map(|(z, c)| (c - oracle(z)).abs())
            .fold(0.0, f64::max)
    }

    /// `max_j |conditional_j − oracle(z_j)|` against a conditional oracle.
    pub fn conditional_sup_distance<F: Fn(f64) -> f64>(&self, oracle: F) -> f64 {
        self.conditional()
            .into_iter()
            .map(|(z, c)| (c - oracle(z)).abs())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn wp(z: f64, score: f64) -> WeightedPoint {
        WeightedPoint { z, score, x: vec![] }
    }

    #[test]
    fn left_single_point() {
        let c = assemble_tail_cdf(&[wp(0.5, 0.2)], 2, TailSide::Left).unwrap();
        assert!((c.cdf()[0] - 0.1).abs() < 1e-15);
        assert!((c.tail_mass() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn right_two_points() {
        let c = assemble_tail_cdf(&[wp(2.0, 0.1), wp(1.0, 0.1)], 2, TailSide::Right).unwrap();
        assert_eq!(c.z(), &[1.0, 2.0]);
        assert!((c.cdf()[0] - 0.95).abs() < 1e-15);
        assert_eq!(c.cdf()[1], 1.0);
    }

    #[test]
    fn empty_is_no_hits() {
        assert!(matches!(assemble_tail_cdf(&[], 5, TailSide::Left), Err(TailError::NoTailHits)));
    }

    #[test]
    fn ties_merge() {
        let c = assemble_tail_cdf(&[wp(1.0, 0.1), wp(1.0, 0.2), wp(0.5, 0.1)], 4, TailSide::Left).unwrap();
        assert_eq!(c.len(), 2);
        assert!((c.weights()[1] - 0.3).abs() < 1e-15);
    }

    #[test]
    fn quantiles() {
        let c = assemble_tail_cdf(&[wp(0.5, 0.98)], 1, TailSide::Left).unwrap();
        assert_eq!(c.quantile(0.98).unwrap(), 0.5);
        let r = assemble_tail_cdf(&[wp(1.0, 0.0002), wp(2.0, 0.0002)], 2, TailSide::Right).unwrap();
        assert!((r.cdf()[0] - 0.9999).abs() < 1e-15);
        assert!(matches!(r.quantile(0.5), Err(TailError::QuantileOutsideTail { .. })));
        assert!((r.quantile(0.99995).unwrap() - 1.5).abs() < 1e-9);
        assert_eq!(r.one_sided_interval(r.cdf()[0]).unwrap(), (0.0, 1.0));
        assert!(r.one_sided_interval(0.99989).is_err());
        assert!(c.one_sided_interval(0.98).is_err());
    }

    #[test]
    fn sup_distance_examples() {
        let c = assemble_tail_cdf(&[wp(0.1, 0.1), wp(0.2, 0.3)], 2, TailSide::Left).unwrap();
        let copy = c.clone();
        assert_eq!(c.sup_distance(|z| copy.value_at(z)), 0.0);
        assert!((c.sup_distance(|_| 0.0) - 0.2).abs() < 1e-15);
    }

    impl TailCdf {
        fn value_at(&self, z: f64) -> f64 {
            self.points().find(|p| p.0 == z).unwrap().1
        }
    }

    #[test]
    fn conditional_ends_at_one() {
        let c = assemble_tail_cdf(&[wp(0.1, 0.1), wp(0.2, 0.3)], 5, TailSide::Left).unwrap();
        let cond = c.conditional();
        assert!((cond[0].1 - 0.25).abs() < 1e-15 && (cond[1].1 - 1.0).abs() < 1e-15);
        let r = assemble_tail_cdf(&[wp(0.1, 0.1), wp(0.2, 0.3)], 5, TailSide::Right).unwrap();
        let cond = r.conditional();
        assert!((cond[0].1 - 0.25).abs() < 1e-15 && (cond[1].1 - 1.0).abs() < 1e-15);
    }

    fn arb_points() -> impl Strategy<Value = Vec<(f64, f64)>> {
        prop::collection::vec((0.0f64..1.0, 0.001f64..0.1), 1..40)
    }

    proptest! {
        #[test]
        fn order_invariant(pts in arb_points(), left in any::<bool>()) {
            let side = if left { TailSide::Left } else { TailSide::Right };
            let a: Vec<_> = pts.iter().map(|&(z, w)| wp(z, w)).collect();
            let mut b = a.clone();
            b.reverse();
            let ca = assemble_tail_cdf(&a, 100, side).unwrap();
            let cb = assemble_tail_cdf(&b, 100, side).unwrap();
            prop_assert_eq!(ca.z(), cb.z());
            for (x, y) in ca.cdf().iter().zip(cb.cdf()) {
                prop_assert!((x - y).abs() < 1e-12);
            }
            prop_assert!(ca.cdf().windows(2).all(|w| w[0] <= w[1] + 1e-15));
            prop_assert!(ca.z().windows(2).all(|w| w[0] < w[1]));
            match side {
                TailSide::Left => prop_assert!((ca.cdf()[ca.len() - 1] - ca.tail_mass()).abs() < 1e-12),
                TailSide::Right => prop_assert!(
                    (ca.cdf()[0] - (1.0 - ca.tail_mass() + ca.weights()[0] / 100.0)).abs() < 1e-12
                ),
            }
        }

        #[test]
        fn halves_merge(pts in arb_points(), split in 0usize..40) {
            let all: Vec<_> = pts.iter().map(|&(z, w)| wp(z, w)).collect();
            let k = split.min(all.len() - 1);
            let full = assemble_tail_cdf(&all, 80, TailSide::Left).unwrap();
            let mut parts = Vec::new();
            for half in [&all[..k], &all[k..]] {
                if !half.is_empty() {
                    parts.push(assemble_tail_cdf(half, 40, TailSide::Left).unwrap());
                }
            }
            let pooled: f64 = parts.iter().map(|c| c.tail_mass() * 40.0).sum::<f64>() / 80.0;
            prop_assert!((full.tail_mass() - pooled).abs() < 1e-12);
            for (z, c) in full.points() {
                let step: f64 = parts
                    .iter()
                    .map(|p| p.points().filter(|q| q.0 <= z).map(|q| q.1).last().unwrap_or(0.0) * 40.0)
                    .sum::<f64>() / 80.0;
                prop_assert!((c - step).abs() < 1e-12);
            }
        }
    }
}
