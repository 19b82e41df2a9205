//! Seeded random walks g_1·g_2·…·g_n with steps drawn i.i.d. from ν.
//!
//! Generator: ChaCha20 as implemented by `rand_chacha::ChaCha20Rng`. The
//! 256-bit key is the seed as 8 little-endian bytes followed by 24 zero
//! bytes; trial `t` uses stream number `t` with the block counter starting
//! at 0. Each step consumes one `next_u64` (the low word of the keystream
//! first) and keeps its top 53 bits U ∈ [0, 2^53).
//!
//! Sampling: with exact cumulative sums c_i of the weights, the threshold
//! t_i = ⌈c_i·2^53⌉ is computed in integer arithmetic and the step is the
//! first i with U < t_i. Draws are multiplied left to right.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measure::ProbMeasure;
use crate::scalar::{Rational, Scalar};

/// Default cap on trials × steps.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

const DRAW_BITS: u32 = 53;

#[derive(Debug, Clone)]
pub struct WalkConfig<S> {
    pub measure: ProbMeasure<S>,
    pub steps: usize,
    pub trials: usize,
    pub seed: u64,
}

impl<S: Scalar> WalkConfig<S> {
    pub fn new(measure: ProbMeasure<S>, steps: usize, trials: usize, seed: u64) -> Result<Self> {
        Self::with_budget(measure, steps, trials, seed, DEFAULT_BUDGET)
    }

    pub fn with_budget(measure: ProbMeasure<S>, steps: usize, trials: usize, seed: u64, budget: u64) -> Result<Self> {
        if steps == 0 || trials == 0 {
            return Err(Error::InvalidParameter("steps and trials must be at least 1".into()));
        }
        let requested = (steps as u64).saturating_mul(trials as u64);
        if requested > budget {
            return Err(Error::BudgetExceeded { requested, budget });
        }
        Ok(WalkConfig { measure, steps, trials, seed })
    }
}

/// Inverse-CDF table over the weight vector.
#[derive(Debug, Clone)]
pub struct CdfTable {
    thresholds: Vec<u64>,
}

impl CdfTable {
    pub fn new<S: Scalar>(m: &ProbMeasure<S>) -> Self {
        let scale = Rational::from_integer(BigInt::from(1u64 << DRAW_BITS));
        let mut acc = Rational::zero();
        let mut thresholds: Vec<u64> = m
            .weights()
            .iter()
            .map(|w| {
                acc += w.to_exact();
                let t = (&acc * &scale).ceil().to_integer();
                t.to_u64().unwrap_or(u64::MAX).min(1 << DRAW_BITS)
            })
            .collect();
        // a float measure may fall short of 1 by rounding
        if let Some(last) = m.weights().iter().rposition(|w| !w.is_zero()) {
            for t in &mut thresholds[last..] {
                *t = 1 << DRAW_BITS;
            }
        }
        CdfTable { thresholds }
    }

    pub fn thresholds(&self) -> &[u64] {
        &self.thresholds
    }

    /// Element index for a 53-bit draw.
    pub fn pick(&self, u: u64) -> usize {
        self.thresholds.partition_point(|&t| t <= u)
    }
}

/// The generator for one trial.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha20Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    let mut rng = ChaCha20Rng::from_seed(key);
    rng.set_stream(trial);
    rng
}

pub fn draw(rng: &mut ChaCha20Rng) -> u64 {
    rng.next_u64() >> (64 - DRAW_BITS)
}

fn walk<S: Scalar>(m: &ProbMeasure<S>, table: &CdfTable, steps: usize, rng: &mut ChaCha20Rng) -> usize {
    let g = m.group();
    (0..steps).fold(g.identity(), |acc, _| g.mul(acc, table.pick(draw(rng))))
}

/// One walk of length `cfg.steps`, using the stream of trial 0.
pub fn sample_walk<S: Scalar>(cfg: &WalkConfig<S>) -> usize {
    let table = CdfTable::new(&cfg.measure);
    walk(&cfg.measure, &table, cfg.steps, &mut trial_rng(cfg.seed, 0))
}

/// Endpoint counts of `cfg.trials` independent walks.
pub fn endpoint_counts<S: Scalar>(cfg: &WalkConfig<S>) -> Vec<u64> {
    let table = CdfTable::new(&cfg.measure);
    let n = cfg.measure.group().order();
    (0..cfg.trials as u64)
        .into_par_iter()
        .fold(
            || vec![0u64; n],
            |mut counts, t| {
                let end = walk(&cfg.measure, &table, cfg.steps, &mut trial_rng(cfg.seed, t));
                counts[end] += 1;
                counts
            },
        )
        .reduce(
            || vec![0u64; n],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        )
}

pub fn empirical_distribution<S: Scalar>(cfg: &WalkConfig<S>) -> Result<ProbMeasure<f64>> {
    let counts = endpoint_counts(cfg);
    let trials = cfg.trials as f64;
    ProbMeasure::new(cfg.measure.group().clone(), counts.iter().map(|&c| c as f64 / trials).collect())
}

/// Empirical frequencies and their total-variation distance (half the ℓ1
/// distance) to the exact law ν^n.
#[derive(Debug, Clone)]
pub struct SampleReport {
    pub frequencies: ProbMeasure<f64>,
    pub tv_distance_to_exact: f64,
}

pub fn sample_and_compare<S: Scalar>(cfg: &WalkConfig<S>) -> Result<SampleReport> {
    let frequencies = empirical_distribution(cfg)?;
    let exact = exact_power(&cfg.measure, cfg.steps)?;
    let tv_distance_to_exact = frequencies.l1_distance(&exact.to_f64())? / 2.0;
    Ok(SampleReport { frequencies, tv_distance_to_exact })
}

/// ν^n by repeated squaring of convolution.
pub fn exact_power<S: Scalar>(m: &ProbMeasure<S>, n: usize) -> Result<ProbMeasure<S>> {
    let mut result = ProbMeasure::dirac(m.group(), m.group().identity())?;
    let mut base = m.clone();
    let mut k = n;
    while k > 0 {
        if k & 1 == 1 {
            result = result.convolve(&base)?;
        }
        k >>= 1;
        if k > 0 {
            base = base.convolve(&base)?;
        }
    }
    Ok(result)
}

/// The 3σ bound 3·sqrt(|G| / trials).
pub fn consistency_bound(order: usize, trials: usize) -> f64 {
    3.0 * (order as f64 / trials as f64).sqrt()
}
