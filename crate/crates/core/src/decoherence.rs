//! Random-phase dephasing of the walk, averaged over Monte Carlo trajectories.
//!
//! After every coherent step each reachable `(position, chirality)` mode picks
//! up an independent phase `e^{i phi}` with `phi ~ Uniform[-pi*gamma, pi*gamma]`.
//! At `gamma = 0` this is the coherent walk; at `gamma = 1` the phases cover the
//! full circle, path interference averages out and the ensemble mean converges
//! to the classical binomial walk computed by [`classical_walk`].
//!
//! # Random streams
//!
//! Trajectory `i` of a run with seed `s` draws from ChaCha8 keyed by
//! `ChaCha8Rng::seed_from_u64(s)` on stream `i`, see [`trajectory_rng`]. Each
//! trajectory owns its stream, so results do not depend on scheduling or on
//! the number of worker threads. Phases are drawn in ascending position order,
//! `H` before `V`, after each step.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::walk::{CoinOperator, InitialSpec, WalkState};
use crate::{Complex, Distribution, Error, Result};

/// Trajectories folded sequentially inside one unit of parallel work. Fixed so
/// the reduction tree, and therefore every output bit, is independent of the
/// thread count.
const BLOCK_TRAJECTORIES: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DephasingConfig {
    /// Dephasing strength in `[0, 1]`.
    pub gamma: f64,
    pub trajectories: usize,
    pub seed: u64,
}

impl DephasingConfig {
    pub fn new(gamma: f64, trajectories: usize, seed: u64) -> Result<Self> {
        let config = DephasingConfig {
            gamma,
            trajectories,
            seed,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        check_gamma(self.gamma)?;
        if self.trajectories == 0 {
            return Err(Error::InvalidArgument(
                "trajectories must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::InvalidArgument(format!(
            "gamma must lie in [0, 1], got {gamma}"
        )));
    }
    Ok(())
}

/// The generator for trajectory `trajectory_index` of a run seeded with `seed`.
pub fn trajectory_rng(seed: u64, trajectory_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trajectory_index);
    rng
}

/// A coherent step followed by an independent random phase on every reachable
/// `(position, chirality)` mode.
pub fn dephased_step<R: Rng + ?Sized>(
    state: &mut WalkState,
    coin: &CoinOperator,
    gamma: f64,
    rng: &mut R,
) -> Result<()> {
    check_gamma(gamma)?;
    state.step(coin)?;
    if gamma == 0.0 {
        return Ok(());
    }
    let half_width = PI * gamma;
    state.for_each_occupied_mut(|_, amp| {
        let h = rng.random_range(-half_width..=half_width);
        let v = rng.random_range(-half_width..=half_width);
        amp.h *= Complex::from_polar(1.0, h);
        amp.v *= Complex::from_polar(1.0, v);
    });
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryResult {
    pub distribution: Distribution,
    pub trajectory_index: u64,
}

/// Runs a single trajectory of the ensemble described by `config`.
pub fn run_trajectory(
    initial: &InitialSpec,
    coin: &CoinOperator,
    n_steps: usize,
    gamma: f64,
    seed: u64,
    trajectory_index: u64,
) -> Result<TrajectoryResult> {
    let mut rng = trajectory_rng(seed, trajectory_index);
    let mut state = WalkState::new(initial, n_steps);
    for _ in 0..n_steps {
        dephased_step(&mut state, coin, gamma, &mut rng)?;
    }
    Ok(TrajectoryResult {
        distribution: state.distribution(),
        trajectory_index,
    })
}

/// Mean distribution of an ensemble with its per-position standard error.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleResult {
    pub mean: Distribution,
    /// Standard error of the mean, aligned with `mean.probabilities()`. All
    /// zero for a single trajectory.
    pub std_error: Vec<f64>,
    pub trajectories: usize,
}

impl EnsembleResult {
    pub fn std_error_at(&self, position: i64) -> f64 {
        let i = position - self.mean.min_position();
        if i < 0 {
            return 0.0;
        }
        self.std_error.get(i as usize).copied().unwrap_or(0.0)
    }
}

/// Running mean and sum of squared deviations per position.
#[derive(Debug, Clone)]
struct Moments {
    count: u64,
    mean: Vec<f64>,
    m2: Vec<f64>,
}

impl Moments {
    fn new(len: usize) -> Self {
        Moments {
            count: 0,
            mean: vec![0.0; len],
            m2: vec![0.0; len],
        }
    }

    fn push(&mut self, sample: &[f64]) {
        self.count += 1;
        let n = self.count as f64;
        for ((mean, m2), &x) in self.mean.iter_mut().zip(&mut self.m2).zip(sample) {
            let delta = x - *mean;
            *mean += delta / n;
            *m2 += delta * (x - *mean);
        }
    }

    fn merge(a: Moments, b: Moments) -> Moments {
        if a.count == 0 {
            return b;
        }
        if b.count == 0 {
            return a;
        }
        let count = a.count + b.count;
        let (na, nb, n) = (a.count as f64, b.count as f64, count as f64);
        let mut out = Moments::new(a.mean.len());
        out.count = count;
        for i in 0..a.mean.len() {
            let delta = b.mean[i] - a.mean[i];
            out.mean[i] = a.mean[i] + delta * (nb / n);
            out.m2[i] = a.m2[i] + b.m2[i] + delta * delta * (na * nb / n);
        }
        out
    }

    /// Deterministic balanced merge of consecutive blocks.
    fn merge_all(mut blocks: Vec<Moments>) -> Moments {
        while blocks.len() > 1 {
            let mut next = Vec::with_capacity(blocks.len().div_ceil(2));
            let mut iter = blocks.into_iter();
            while let Some(a) = iter.next() {
                next.push(match iter.next() {
                    Some(b) => Moments::merge(a, b),
                    None => a,
                });
            }
            blocks = next;
        }
        blocks.pop().expect("at least one block")
    }
}

/// Averages `config.trajectories` dephased trajectories of `n_steps` steps.
///
/// Work is split into fixed blocks of trajectories that run on the rayon pool;
/// the output is bit-identical for a given `(initial, coin, n_steps, config)`
/// whatever the pool size.
pub fn run_ensemble(
    initial: &InitialSpec,
    coin: &CoinOperator,
    n_steps: usize,
    config: &DephasingConfig,
) -> Result<EnsembleResult> {
    config.validate()?;
    let m = config.trajectories;
    let len = 2 * n_steps + 1;
    let blocks = m.div_ceil(BLOCK_TRAJECTORIES);

    let partials = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let lo = b * BLOCK_TRAJECTORIES;
            let hi = (lo + BLOCK_TRAJECTORIES).min(m);
            let mut moments = Moments::new(len);
            for index in lo..hi {
                let t = run_trajectory(
                    initial,
                    coin,
                    n_steps,
                    config.gamma,
                    config.seed,
                    index as u64,
                )?;
                moments.push(t.distribution.probabilities());
            }
            Ok(moments)
        })
        .collect::<Result<Vec<_>>>()?;

    let total = Moments::merge_all(partials);
    let std_error = if m > 1 {
        let mf = m as f64;
        total
            .m2
            .iter()
            .map(|&m2| (m2.max(0.0) / (mf - 1.0) / mf).sqrt())
            .collect()
    } else {
        vec![0.0; len]
    };
    let mean = Distribution::from_dense(
        initial.start_position,
        initial.start_position - n_steps as i64,
        total.mean,
        n_steps,
    );
    Ok(EnsembleResult {
        mean,
        std_error,
        trajectories: m,
    })
}

/// Exact unbiased classical walk, by iterating
/// `P'(x) = P(x - 1)/2 + P(x + 1)/2`.
pub fn classical_walk(n_steps: usize, start_position: i64) -> Distribution {
    let len = 2 * n_steps + 1;
    let mut p = vec![0.0; len];
    let mut next = vec![0.0; len];
    p[n_steps] = 1.0;
    for _ in 0..n_steps {
        for i in 0..len {
            let left = if i > 0 { p[i - 1] } else { 0.0 };
            let right = if i + 1 < len { p[i + 1] } else { 0.0 };
            next[i] = 0.5 * left + 0.5 * right;
        }
        std::mem::swap(&mut p, &mut next);
    }
    Distribution::from_dense(start_position, start_position - n_steps as i64, p, n_steps)
}
