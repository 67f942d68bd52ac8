//! Seeded ensembles of trajectories.
//!
//! Trajectory `k` draws from ChaCha8 keyed by the master seed on stream `k`,
//! so its increments do not depend on which worker runs it or when. Results
//! are collected in index order and reduced sequentially, which keeps the
//! summary statistics bit-identical for any thread count.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytics::{EntropyCurve, Provenance};
use crate::bloch::BlochState;
use crate::error::{Error, Result};
use crate::feedback::Strategy;
use crate::sde::{recorded_steps, simulate_trajectory, SdeConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    pub n_trajectories: usize,
    pub master_seed: u64,
    pub sde: SdeConfig,
    pub strategy: Strategy,
    pub record_every: usize,
    pub initial: BlochState,
}

impl EnsembleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_trajectories == 0 {
            return Err(Error::invalid("trajectories", "need at least one trajectory"));
        }
        if self.record_every == 0 {
            return Err(Error::invalid("record-every", "must be at least 1"));
        }
        self.sde.validate()?;
        self.strategy.validate()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleStats {
    /// Mean entropy, with the standard error attached.
    pub mean_curve: EntropyCurve,
    pub per_trajectory_final: Vec<f64>,
    pub clamp_events: u64,
    pub total_steps: u64,
}

impl EnsembleStats {
    pub fn stderr_curve(&self) -> &[f64] {
        self.mean_curve.stderr().unwrap_or(&[])
    }

    /// Sample standard deviation of the final entropies.
    pub fn final_std(&self) -> f64 {
        sample_std(&self.per_trajectory_final)
    }
}

/// Generator for trajectory `index` under `master_seed`.
pub fn derive_stream(master_seed: u64, trajectory_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trajectory_index);
    rng
}

fn sample_std(xs: &[f64]) -> f64 {
    let n = xs.len();
    if n < 2 {
        return 0.0;
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    let ss: f64 = xs.iter().map(|x| (x - mean).powi(2)).sum();
    (ss / (n - 1) as f64).sqrt()
}

struct Sampled {
    values: Vec<f64>,
    clamp_events: u64,
}

fn run_one(cfg: &EnsembleConfig, index: usize) -> Result<Sampled> {
    let mut rng = derive_stream(cfg.master_seed, index as u64);
    let tr = simulate_trajectory(&cfg.initial, &cfg.sde, &cfg.strategy, &mut rng, cfg.record_every)?;
    Ok(Sampled {
        values: tr.curve.values().to_vec(),
        clamp_events: tr.clamp_events,
    })
}

/// Runs the ensemble on the global rayon pool.
pub fn run_ensemble(cfg: &EnsembleConfig) -> Result<EnsembleStats> {
    cfg.validate()?;
    let samples = (0..cfg.n_trajectories)
        .into_par_iter()
        .map(|k| run_one(cfg, k))
        .collect::<Result<Vec<_>>>()?;
    summarize(cfg, samples)
}

/// Runs the ensemble on a dedicated pool with `workers` threads.
pub fn run_ensemble_with_workers(cfg: &EnsembleConfig, workers: usize) -> Result<EnsembleStats> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::invalid("workers", e.to_string()))?;
    pool.install(|| run_ensemble(cfg))
}

fn summarize(cfg: &EnsembleConfig, samples: Vec<Sampled>) -> Result<EnsembleStats> {
    let n_steps = cfg.sde.n_steps();
    let times: Vec<f64> = recorded_steps(n_steps, cfg.record_every)
        .into_iter()
        .map(|k| k as f64 * cfg.sde.dt)
        .collect();
    let points = times.len();
    let n = samples.len() as f64;

    let mut sum = vec![0.0; points];
    let mut clamp_events = 0u64;
    for s in &samples {
        for (acc, v) in sum.iter_mut().zip(&s.values) {
            *acc += v;
        }
        clamp_events += s.clamp_events;
    }
    let mean: Vec<f64> = sum.iter().map(|s| s / n).collect();

    let mut sq = vec![0.0; points];
    for s in &samples {
        for ((acc, v), m) in sq.iter_mut().zip(&s.values).zip(&mean) {
            *acc += (v - m).powi(2);
        }
    }
    let stderr: Vec<f64> = if samples.len() > 1 {
        sq.iter().map(|s| (s / (n - 1.0)).sqrt() / n.sqrt()).collect()
    } else {
        vec![0.0; points]
    };

    let per_trajectory_final = samples
        .iter()
        .map(|s| s.values.last().copied().unwrap_or(f64::NAN))
        .collect();
    let mean_curve = EntropyCurve::new(times, mean, Provenance::MonteCarlo)?.with_stderr(stderr)?;
    Ok(EnsembleStats {
        mean_curve,
        per_trajectory_final,
        clamp_events,
        total_steps: (n_steps * samples.len()) as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand_distr::StandardNormal;

    fn normals(seed: u64, index: u64, n: usize) -> Vec<f64> {
        let mut rng = derive_stream(seed, index);
        (0..n).map(|_| rng.sample(StandardNormal)).collect()
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        assert_eq!(normals(42, 3, 100), normals(42, 3, 100));
        assert_ne!(normals(42, 3, 100), normals(43, 3, 100));
        assert_ne!(normals(42, 3, 100), normals(42, 4, 100));
    }

    #[test]
    fn neighbouring_streams_are_uncorrelated() {
        let n = 10_000;
        let a = normals(9, 0, n);
        let b = normals(9, 1, n);
        let mean = |x: &[f64]| x.iter().sum::<f64>() / n as f64;
        let (ma, mb) = (mean(&a), mean(&b));
        let cov: f64 = a.iter().zip(&b).map(|(x, y)| (x - ma) * (y - mb)).sum();
        let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
        let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum();
        let r = cov / (va * vb).sqrt();
        assert!(r.abs() < 0.05, "r = {r}");
    }

    fn config(strategy: Strategy, n: usize) -> EnsembleConfig {
        EnsembleConfig {
            n_trajectories: n,
            master_seed: 2024,
            sde: SdeConfig::new(1.0, 1e-3, 0.2).unwrap(),
            strategy,
            record_every: 20,
            initial: BlochState::mixed(),
        }
    }

    #[test]
    fn single_trajectory_is_reproducible() {
        let cfg = config(Strategy::None, 1);
        let a = run_ensemble(&cfg).unwrap();
        let b = run_ensemble(&cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.stderr_curve().iter().all(|&s| s == 0.0));
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let cfg = config(Strategy::None, 64);
        let one = run_ensemble_with_workers(&cfg, 1).unwrap();
        let many = run_ensemble_with_workers(&cfg, 7).unwrap();
        assert_eq!(one, many);
    }

    #[test]
    fn optimal_feedback_gives_identical_finals() {
        let stats = run_ensemble(&config(Strategy::Optimal, 50)).unwrap();
        assert!(stats.final_std() < 10.0 * 1e-3);
        assert_eq!(stats.mean_curve.len(), 11);
    }

    #[test]
    fn rejects_empty_ensemble() {
        assert!(run_ensemble(&config(Strategy::None, 0)).is_err());
        let mut cfg = config(Strategy::None, 2);
        cfg.record_every = 0;
        assert!(run_ensemble(&cfg).is_err());
    }
}
