//! Scored draws and rejection bookkeeping shared by every sampler.

/// One simulated point: target value, importance score and the basic
/// variables that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedPoint {
    pub z: f64,
    pub score: f64,
    pub x: Vec<f64>,
}

/// Draw counts and rejection proportions of one run.
///
/// `count_rejection` is `(m − m*)/m`. `volume_rejection` is the share of the
/// simulated region's probability that falls outside the tail, estimated as
/// `1 − Σ(accepted scores)/Σ(all scores)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RejectionStats {
    pub m_total: usize,
    pub m_accepted: usize,
    pub count_rejection: f64,
    pub volume_rejection: Option<f64>,
    /// Σ of scores over every draw, accepted or not.
    pub score_sum_all: f64,
    /// Σ of scores over accepted draws.
    pub score_sum_accepted: f64,
}

impl RejectionStats {
    pub fn from_sums(m_total: usize, m_accepted: usize, score_sum_all: f64, score_sum_accepted: f64) -> Self {
        let count_rejection = if m_total == 0 {
            0.0
        } else {
            (m_total - m_accepted) as f64 / m_total as f64
        };
        let volume_rejection = if score_sum_all > 0.0 {
            Some((1.0 - score_sum_accepted / score_sum_all).max(0.0))
        } else {
            None
        };
        Self {
            m_total,
            m_accepted,
            count_rejection,
            volume_rejection,
            score_sum_all,
            score_sum_accepted,
        }
    }

    /// Counts and score sums add across seed-split chunks.
    pub fn merge(&self, other: &Self) -> Self {
        Self::from_sums(
            self.m_total + other.m_total,
            self.m_accepted + other.m_accepted,
            self.score_sum_all + other.score_sum_all,
            self.score_sum_accepted + other.score_sum_accepted,
        )
    }

    /// `Σ(accepted scores)/m`: the estimated tail probability.
    pub fn tail_mass(&self) -> f64 {
        if self.m_total == 0 {
            0.0
        } else {
            self.score_sum_accepted / self.m_total as f64
        }
    }
}

/// Accepted points of a run plus its statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationRun {
    pub points: Vec<WeightedPoint>,
    pub stats: RejectionStats,
}

impl SimulationRun {
    pub fn empty() -> Self {
        Self {
            points: Vec::new(),
            stats: RejectionStats::from_sums(0, 0, 0.0, 0.0),
        }
    }

    pub fn append(&mut self, other: SimulationRun) {
        self.points.extend(other.points);
        self.stats = self.stats.merge(&other.stats);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejection_proportions() {
        let s = RejectionStats::from_sums(10, 8, 2.0, 1.5);
        assert!((s.count_rejection - 0.2).abs() < 1e-15);
        assert!((s.volume_rejection.unwrap() - 0.25).abs() < 1e-15);
        assert!((s.tail_mass() - 0.15).abs() < 1e-15);
        let t = s.merge(&RejectionStats::from_sums(10, 10, 2.0, 2.0));
        assert_eq!((t.m_total, t.m_accepted), (20, 18));
        assert!((t.count_rejection - 0.1).abs() < 1e-15);
    }
}
