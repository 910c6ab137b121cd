//! Seeded Monte Carlo estimates of the cluster-count distribution.
//!
//! Trial `t` draws its velocities from `ChaCha8Rng::seed_from_u64(seed)` with
//! the stream set to `t` (`set_stream(t)`), consuming one `random_bool(0.5)`
//! per particle, left to right. A trial therefore depends only on
//! `(seed, t)`, and a run is the same integer histogram however the trials
//! are split across workers.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::diagram::predict_clusters;
use crate::error::{Error, Result};
use crate::system::ParticleSystem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VelocityModel {
    /// Unit masses, velocities ±1 with probability 1/2 each.
    UnitPlusMinusOne,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct McConfig {
    pub n: u32,
    pub trials: u64,
    pub seed: u64,
    pub model: VelocityModel,
}

impl McConfig {
    pub fn new(n: u32, trials: u64, seed: u64) -> Result<Self> {
        if n < 1 {
            return Err(Error::Validation("n must be at least 1".into()));
        }
        if trials < 1 {
            return Err(Error::Validation("trials must be at least 1".into()));
        }
        Ok(McConfig {
            n,
            trials,
            seed,
            model: VelocityModel::UnitPlusMinusOne,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub k: usize,
    pub count: u64,
    pub p: f64,
    pub std_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McResult {
    pub config: McConfig,
    pub trials: u64,
    /// Cluster count -> number of trials.
    pub histogram: BTreeMap<usize, u64>,
    pub estimates: Vec<Estimate>,
}

impl McResult {
    pub fn estimate(&self, k: usize) -> Estimate {
        binomial_estimate(k, self.histogram.get(&k).copied().unwrap_or(0), self.trials)
    }
}

fn binomial_estimate(k: usize, count: u64, trials: u64) -> Estimate {
    let p = count as f64 / trials as f64;
    Estimate {
        k,
        count,
        p,
        std_error: (p * (1.0 - p) / trials as f64).sqrt(),
    }
}

/// Velocities of trial `trial`: `true` means `+1`.
pub fn trial_velocities(seed: u64, trial: u64, n: u32) -> Vec<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    (0..n).map(|_| rng.random_bool(0.5)).collect()
}

fn run_trials(config: &McConfig, range: std::ops::Range<u64>) -> BTreeMap<usize, u64> {
    let mut hist = BTreeMap::new();
    for t in range {
        let up = trial_velocities(config.seed, t, config.n);
        let system = ParticleSystem::unit_pm_one(up).expect("unit positions are increasing");
        *hist.entry(predict_clusters(&system).len()).or_insert(0) += 1;
    }
    hist
}

fn merge(mut a: BTreeMap<usize, u64>, b: BTreeMap<usize, u64>) -> BTreeMap<usize, u64> {
    for (k, v) in b {
        *a.entry(k).or_insert(0) += v;
    }
    a
}

/// Runs every trial on `workers` threads (at least one), each owning a
/// contiguous block of trial indices.
pub fn sample_cluster_counts_with_workers(config: &McConfig, workers: usize) -> Result<McResult> {
    let workers = workers.max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Validation(format!("cannot start {workers} workers: {e}")))?;
    let blocks = (workers as u64 * 4).min(config.trials);
    let per_block = config.trials.div_ceil(blocks);
    let histogram = pool.install(|| {
        (0..blocks)
            .into_par_iter()
            .map(|b| run_trials(config, b * per_block..((b + 1) * per_block).min(config.trials)))
            .reduce(BTreeMap::new, merge)
    });
    debug_assert_eq!(histogram.values().sum::<u64>(), config.trials);
    let estimates = histogram
        .iter()
        .map(|(&k, &count)| binomial_estimate(k, count, config.trials))
        .collect();
    Ok(McResult {
        config: config.clone(),
        trials: config.trials,
        histogram,
        estimates,
    })
}

/// Single-threaded reference run.
pub fn sample_cluster_counts(config: &McConfig) -> McResult {
    let histogram = run_trials(config, 0..config.trials);
    let estimates = histogram
        .iter()
        .map(|(&k, &count)| binomial_estimate(k, count, config.trials))
        .collect();
    McResult {
        config: config.clone(),
        trials: config.trials,
        histogram,
        estimates,
    }
}

/// Fraction of trials ending as one cluster, with its binomial standard error.
pub fn estimate_one_cluster_probability(config: &McConfig) -> Estimate {
    sample_cluster_counts(config).estimate(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(McConfig::new(3, 0, 1).is_err());
        assert!(McConfig::new(0, 10, 1).is_err());
    }

    #[test]
    fn single_trial() {
        let cfg = McConfig::new(5, 1, 9).unwrap();
        let r = sample_cluster_counts(&cfg);
        assert_eq!(r.histogram.values().sum::<u64>(), 1);
        assert_eq!(r.histogram.len(), 1);
        let e = estimate_one_cluster_probability(&cfg);
        assert!(e.p == 0.0 || e.p == 1.0);
    }

    #[test]
    fn streams_depend_only_on_seed_and_trial() {
        assert_eq!(trial_velocities(3, 17, 40), trial_velocities(3, 17, 40));
        assert_ne!(trial_velocities(3, 17, 64), trial_velocities(3, 18, 64));
        assert_ne!(trial_velocities(3, 17, 64), trial_velocities(4, 17, 64));
    }

    #[test]
    fn worker_count_does_not_matter() {
        let cfg = McConfig::new(9, 5_003, 11).unwrap();
        let reference = sample_cluster_counts(&cfg);
        for w in [1, 2, 3, 8] {
            assert_eq!(sample_cluster_counts_with_workers(&cfg, w).unwrap(), reference);
        }
    }

    #[test]
    fn two_particles_support() {
        let r = sample_cluster_counts(&McConfig::new(2, 20_000, 42).unwrap());
        assert!(r.histogram.keys().all(|k| *k == 1 || *k == 2));
        let e = r.estimate(1);
        assert!((e.p - 0.25).abs() < 5.0 * e.std_error);
    }
}
