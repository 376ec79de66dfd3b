//! Monte Carlo trajectories with one independent stream per trajectory.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::chains::TransitionMatrix;
use crate::error::{Error, Result};

/// Empirical distribution of X_l.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleResult {
    pub counts: Vec<u64>,
    pub distribution: Vec<f64>,
}

fn cdf(weights: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    let mut out: Vec<f64> = weights
        .iter()
        .map(|w| {
            acc += w;
            acc
        })
        .collect();
    if let Some(last) = out.last_mut() {
        // absorbs the deficiency of truncated columns into the last state
        *last = f64::INFINITY;
    }
    out
}

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn draw(cdf: &[f64], u: f64) -> usize {
    cdf.partition_point(|c| *c <= u)
}

/// Runs `count` trajectories of length `l`. Trajectory `i` uses the ChaCha stream `i`
/// of `seed` and consumes one word per draw, so results do not depend on scheduling.
pub fn sample_paths(k: &TransitionMatrix<f64>, p0: &[f64], l: usize, count: usize, seed: u64) -> Result<SampleResult> {
    if count == 0 {
        return Err(Error::Domain("at least one trajectory is needed".into()));
    }
    if p0.len() != k.dim() || p0.iter().any(|v| *v < 0.0) {
        return Err(Error::Domain("initial distribution does not match the lattice".into()));
    }
    let start = cdf(p0);
    let columns: Vec<Vec<f64>> = (0..k.dim()).map(|y| cdf(k.column(y))).collect();
    let finals: Vec<usize> = (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let mut x = draw(&start, uniform(&mut rng));
            for _ in 0..l {
                x = draw(&columns[x], uniform(&mut rng));
            }
            x
        })
        .collect();
    let mut counts = vec![0u64; k.dim()];
    for x in finals {
        counts[x] += 1;
    }
    let distribution = counts.iter().map(|c| *c as f64 / count as f64).collect();
    Ok(SampleResult { counts, distribution })
}

/// ½ Σ |p - q|.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}
