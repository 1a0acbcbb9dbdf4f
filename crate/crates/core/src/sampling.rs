//! Reproducible chunked sampling.
//!
//! Work of `n` samples is split into fixed-size chunks. Chunk `k` of stream
//! domain `d` draws from a ChaCha8 generator keyed by the seed with stream id
//! `(d << 40) | k`, and chunk results are merged in chunk order. The output is
//! therefore identical whatever the number of worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const CHUNK: u64 = 1 << 15;

pub type StreamRng = ChaCha8Rng;

pub fn stream_rng(seed: u64, domain: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((domain << 40) | chunk);
    rng
}

/// Runs `work(rng, len)` over each chunk and returns the results in chunk order.
pub fn chunked<T, F>(n: u64, seed: u64, domain: u64, work: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng, u64) -> T + Sync,
{
    let chunks = n.div_ceil(CHUNK);
    let run = |k: u64| {
        let len = CHUNK.min(n - k * CHUNK);
        let mut rng = stream_rng(seed, domain, k);
        work(&mut rng, len)
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..chunks).into_par_iter().map(run).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..chunks).map(run).collect()
    }
}

/// Running mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    pub count: u64,
    pub mean: f64,
    m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(&mut self, other: &Moments) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n = (self.count + other.count) as f64;
        let delta = other.mean - self.mean;
        self.mean += delta * other.count as f64 / n;
        self.m2 += other.m2 + delta * delta * self.count as f64 * other.count as f64 / n;
        self.count += other.count;
    }

    /// Unbiased sample variance; zero with fewer than two samples.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.m2 / (self.count - 1) as f64).max(0.0)
        }
    }

    pub fn std_error(&self) -> f64 {
        if self.count == 0 {
            return 0.0;
        }
        (self.variance() / self.count as f64).sqrt()
    }
}
