use rayon::prelude::*;

use crate::channel::{snr_with, Scheme, SystemParams};
use crate::mobility::{PoseDistribution, PoseStream};

use super::OutageResult;

/// Poses per work unit. Chunk boundaries depend only on the sample index,
/// so counts do not depend on the number of worker threads.
const CHUNK: u64 = 1 << 16;

/// Outage counts per scheme over a common pose sample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct McCounts {
    pub outages: Vec<u64>,
    pub samples: u64,
}

fn count_chunk(schemes: &[Scheme], gamma_th: f64, params: &SystemParams, seed: u64, start: u64, len: u64) -> Vec<u64> {
    let budget = params.budget();
    let mut stream = PoseStream::new(PoseDistribution::from_params(params), seed, start);
    let mut counts = vec![0u64; schemes.len()];
    for _ in 0..len {
        let pose = stream.next_pose();
        for (c, &s) in counts.iter_mut().zip(schemes) {
            if snr_with(&budget, &pose, s, params) < gamma_th {
                *c += 1;
            }
        }
    }
    counts
}

/// Count outages for several schemes on the same poses (common random numbers).
pub fn monte_carlo_counts(schemes: &[Scheme], gamma_th: f64, params: &SystemParams, n: u64, seed: u64) -> McCounts {
    let chunks = n.div_ceil(CHUNK);
    let outages = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK;
            count_chunk(schemes, gamma_th, params, seed, start, CHUNK.min(n - start))
        })
        .reduce(
            || vec![0u64; schemes.len()],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    McCounts { outages, samples: n }
}

/// Monte Carlo outage for each scheme in `schemes`, all on one pose sample.
pub fn outage_monte_carlo_schemes(
    schemes: &[Scheme],
    gamma_th: f64,
    params: &SystemParams,
    n: u64,
    seed: u64,
) -> Vec<OutageResult> {
    let n = n.max(1);
    let counts = monte_carlo_counts(schemes, gamma_th, params, n, seed);
    counts.outages.iter().map(|&k| OutageResult::sampled(k, n)).collect()
}

/// Fraction of `n` sampled poses with SNR below `gamma_th`.
pub fn outage_monte_carlo(scheme: Scheme, gamma_th: f64, params: &SystemParams, n: u64, seed: u64) -> OutageResult {
    outage_monte_carlo_schemes(&[scheme], gamma_th, params, n, seed).remove(0)
}
