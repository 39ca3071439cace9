//! Shared operands for the benchmarks.

use fuzzint_core::harness::random::{random_monotone, random_piecewise, random_smooth_positive, trial_rng};
use fuzzint_core::PiecewiseFn;

pub const SEED: u64 = 2024;

pub fn piecewise(n: usize) -> Vec<PiecewiseFn> {
    (0..n as u64).map(|i| random_piecewise(&mut trial_rng(SEED, i))).collect()
}

pub fn monotone_pairs(n: usize) -> Vec<(PiecewiseFn, PiecewiseFn)> {
    (0..n as u64)
        .map(|i| {
            let mut rng = trial_rng(SEED + 1, i);
            (random_monotone(&mut rng, true, false), random_monotone(&mut rng, true, false))
        })
        .collect()
}

pub fn smooth(n: usize) -> Vec<PiecewiseFn> {
    (0..n as u64).map(|i| random_smooth_positive(&mut trial_rng(SEED + 2, i))).collect()
}
