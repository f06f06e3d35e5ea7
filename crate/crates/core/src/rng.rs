//! Reproducible random streams.
//!
//! Every stream is a ChaCha8 generator keyed by the user seed, with the
//! 64-bit ChaCha stream id selecting an independent substream. Runs are cut
//! into fixed chunks of [`CHUNK_SIZE`] draws and chunk `c` always uses stream
//! `c`, so the output of a run depends only on `(seed, m)` and never on the
//! number of worker threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Result, TailError};
use crate::sample::SimulationRun;

pub type SimRng = ChaCha8Rng;

pub const CHUNK_SIZE: usize = 1024;

/// Substream `stream` of `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform on `(0, 1]`, so inverse-CDF draws land in half-open `(L, U]`.
pub fn open_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    1.0 - rng.random::<f64>()
}

/// Runs `m` draws as seed-split chunks on `jobs` threads and concatenates the
/// chunk results in stream order.
pub fn run_chunked<F>(m: usize, seed: u64, jobs: usize, draw_chunk: F) -> Result<SimulationRun>
where
    F: Fn(&mut SimRng, usize) -> Result<SimulationRun> + Sync,
{
    if m == 0 {
        return Err(TailError::Config("sample size must be at least 1".into()));
    }
    let chunks: Vec<(u64, usize)> = (0..m.div_ceil(CHUNK_SIZE))
        .map(|c| (c as u64, CHUNK_SIZE.min(m - c * CHUNK_SIZE)))
        .collect();
    let work = |&(stream, count): &(u64, usize)| {
        let mut rng = stream_rng(seed, stream);
        draw_chunk(&mut rng, count)
    };
    let parts: Vec<Result<SimulationRun>> = if jobs <= 1 {
        chunks.iter().map(work).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| TailError::Config(format!("cannot start {jobs} workers: {e}")))?;
        pool.install(|| chunks.par_iter().map(work).collect())
    };
    let mut run = SimulationRun::empty();
    for part in parts {
        run.append(part?);
    }
    Ok(run)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::{RejectionStats, WeightedPoint};

    fn fake(rng: &mut SimRng, count: usize) -> Result<SimulationRun> {
        let points = (0..count)
            .map(|_| WeightedPoint {
                z: open_unit(rng),
                score: 1.0,
                x: vec![],
            })
            .collect();
        Ok(SimulationRun {
            points,
            stats: RejectionStats::from_sums(count, count, count as f64, count as f64),
        })
    }

    #[test]
    fn chunked_runs_ignore_job_count() {
        let a = run_chunked(5000, 9, 1, fake).unwrap();
        let b = run_chunked(5000, 9, 4, fake).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.points.len(), 5000);
        assert_eq!(a.stats.m_total, 5000);
        assert!(run_chunked(0, 9, 1, fake).is_err());
    }

    #[test]
    fn streams_differ() {
        let mut a = stream_rng(1, 0);
        let mut b = stream_rng(1, 1);
        assert_ne!(a.random::<u64>(), b.random::<u64>());
    }
}
