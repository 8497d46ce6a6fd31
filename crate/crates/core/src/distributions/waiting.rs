use rand::distr::{Bernoulli, Distribution};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::params::NegBinomialParams;
use super::pmf::neg_binomial_pmf;
use crate::error::{invalid, Result};
use crate::exec::{pairwise_reduce, Execution};

/// Replicates per RNG stream.
pub const CHUNK_TRIALS: u64 = 65_536;

/// Bumped whenever the sampled sequence for a given seed changes.
///
/// Version 1: chunk `c` draws from `ChaCha8Rng::seed_from_u64(seed)` with
/// stream `c`; each trial is one `Bernoulli(η²)` draw (`true` = failure)
/// from rand 0.9.
pub const RNG_ALGORITHM_VERSION: u32 = 1;

/// Failure counts before the M-th success, aggregated over replicates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WaitingTimeHistogram {
    pub counts: Vec<u64>,
    pub trials: u64,
}

/// One row of an empirical-vs-exact table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McRow {
    pub n: u64,
    pub p: f64,
    pub p_hat: f64,
    pub stderr: f64,
}

impl WaitingTimeHistogram {
    pub fn p_hat(&self, n: u64) -> f64 {
        let c = self.counts.get(n as usize).copied().unwrap_or(0);
        c as f64 / self.trials as f64
    }

    /// Binomial standard error of `p_hat(n)`.
    pub fn stderr(&self, n: u64) -> f64 {
        let p = self.p_hat(n);
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }

    /// Rows `0..=n_max` against the negative binomial pmf.
    pub fn table(&self, p: &NegBinomialParams, n_max: u64) -> Vec<McRow> {
        (0..=n_max)
            .map(|n| McRow {
                n,
                p: neg_binomial_pmf(p, n),
                p_hat: self.p_hat(n),
                stderr: self.stderr(n),
            })
            .collect()
    }

    /// Largest `|p̂ − p|` over `n ≤ n_max`, in units of the larger of the
    /// empirical and model standard errors.
    pub fn max_deviation_sigmas(&self, p: &NegBinomialParams, n_max: u64) -> f64 {
        let t = self.trials as f64;
        self.table(p, n_max)
            .iter()
            .map(|row| {
                let model = (row.p * (1.0 - row.p) / t).sqrt();
                let scale = row.stderr.max(model);
                let dev = (row.p_hat - row.p).abs();
                if dev == 0.0 {
                    0.0
                } else {
                    dev / scale
                }
            })
            .fold(0.0, f64::max)
    }
}

fn merge(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    if b.len() > a.len() {
        a.resize(b.len(), 0);
    }
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

fn run_chunk(seed: u64, chunk: u64, trials: u64, m: u32, trial: &Bernoulli) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    let mut counts = Vec::new();
    for _ in 0..trials {
        let mut failures = 0usize;
        let mut successes = 0u32;
        while successes < m {
            if trial.sample(&mut rng) {
                failures += 1;
            } else {
                successes += 1;
            }
        }
        if failures >= counts.len() {
            counts.resize(failures + 1, 0);
        }
        counts[failures] += 1;
    }
    counts
}

/// Run Bernoulli trials with failure probability `η²` until the M-th
/// success, `trials` times, and histogram the failure counts.
///
/// The result depends only on `(p, trials, seed)` and
/// [`RNG_ALGORITHM_VERSION`], not on the execution policy.
pub fn waiting_time_simulate(
    p: &NegBinomialParams,
    trials: u64,
    seed: u64,
    exec: Execution,
) -> Result<WaitingTimeHistogram> {
    if trials == 0 {
        return Err(invalid("trials must be positive"));
    }
    let m = p.integer_m().filter(|&m| m >= 1).ok_or_else(|| {
        invalid(format!(
            "waiting-time M must be a positive integer, got {}",
            p.m()
        ))
    })?;
    let trial = Bernoulli::new(p.eta2()).map_err(|e| invalid(e.to_string()))?;
    let chunks = trials.div_ceil(CHUNK_TRIALS);
    let parts = exec.map_range(chunks as usize, |c| {
        let c = c as u64;
        let n = CHUNK_TRIALS.min(trials - c * CHUNK_TRIALS);
        run_chunk(seed, c, n, m, &trial)
    });
    let counts = pairwise_reduce(parts, merge).unwrap_or_default();
    Ok(WaitingTimeHistogram { counts, trials })
}
