//! Seeded Monte Carlo estimates of `|S|`.
//!
//! Trials are split into fixed chunks; chunk `k` draws from the ChaCha8
//! stream `k` of the seed, so results do not depend on the thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::Setting;
use crate::dist::Family;
use crate::num::Scalar;

/// Two-sided 99% normal quantile.
pub const Z_99: f64 = 2.575_829_303_548_901;

const CHUNK: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Estimate {
    pub trials: u64,
    pub hits: u64,
    /// Hits among outcomes that are not excepted.
    pub trimmed_hits: u64,
    pub estimate: f64,
    /// Distance from the estimate to the upper end of the interval.
    pub half_width: f64,
    pub low: f64,
    pub high: f64,
}

impl Estimate {
    fn new(trials: u64, hits: u64, trimmed_hits: u64) -> Self {
        let (low, high) = wilson_interval(hits, trials, Z_99);
        let estimate = if trials == 0 { 0.0 } else { hits as f64 / trials as f64 };
        Estimate {
            trials,
            hits,
            trimmed_hits,
            estimate,
            half_width: high - estimate,
            low,
            high,
        }
    }

    pub fn covers(&self, value: f64) -> bool {
        self.low <= value && value <= self.high
    }

    /// The same statistics for the trimmed hits.
    pub fn trimmed(&self) -> Estimate {
        Estimate::new(self.trials, self.trimmed_hits, self.trimmed_hits)
    }
}

/// Wilson score interval for `hits` successes in `trials`.
pub fn wilson_interval(hits: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let phat = hits as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (phat + z2 / (2.0 * n)) / denom;
    let spread = z * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - spread).max(0.0), (center + spread).min(1.0))
}

fn chunk_rng(seed: u64, k: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k);
    rng
}

/// `count` outcomes drawn with the same stream layout as the estimator.
pub fn draw_samples<T: Scalar, F: Family<T>>(family: &F, count: u64, seed: u64) -> Vec<F::Outcome> {
    (0..count.div_ceil(CHUNK))
        .into_par_iter()
        .flat_map_iter(|k| {
            let mut rng = chunk_rng(seed, k);
            let len = CHUNK.min(count - k * CHUNK);
            (0..len).map(move |_| family.sample(&mut rng))
        })
        .collect()
}

/// Frequency of `S` over `trials` samples.
pub fn monte_carlo_failure<T: Scalar, S: Setting<T>>(setting: &S, s: usize, trials: u64, seed: u64) -> Estimate {
    let chunks = trials.div_ceil(CHUNK);
    let (hits, trimmed) = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = chunk_rng(seed, k);
            let len = CHUNK.min(trials - k * CHUNK);
            let mut hits = 0u64;
            let mut trimmed = 0u64;
            for _ in 0..len {
                let o = setting.family().sample(&mut rng);
                if setting.fails(&o, s) {
                    hits += 1;
                    if !setting.excepted(&o) {
                        trimmed += 1;
                    }
                }
            }
            (hits, trimmed)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    Estimate::new(trials, hits, trimmed)
}
