//! Seeded random instances.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use regret_median_core::{PathNetwork, WeightInterval};

pub const DEFAULT_SEED: u64 = 20_140_901;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn log_uniform(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo.ln()..hi.ln()).exp()
}

/// Edge lengths, lower weights, capacity and tau log-uniform over two
/// decades; upper weights up to ten times the lower ones, and one interval
/// in five degenerate.
pub fn log_uniform_instance(rng: &mut impl Rng, n: usize) -> PathNetwork {
    let mut x = rng.random_range(-50.0..50.0);
    let mut positions = Vec::with_capacity(n);
    let mut intervals = Vec::with_capacity(n);
    for _ in 0..n {
        positions.push(x);
        x += log_uniform(rng, 0.1, 10.0);
        let lo = log_uniform(rng, 0.1, 10.0);
        let hi = if rng.random_bool(0.2) { lo } else { lo * log_uniform(rng, 1.0, 10.0) };
        intervals.push(WeightInterval::new(lo, hi));
    }
    let c = log_uniform(rng, 0.1, 10.0);
    let tau = log_uniform(rng, 0.1, 10.0);
    PathNetwork::new(positions, intervals, c, tau).expect("generated instance is valid")
}

/// Instances whose critical sets keep growing linearly with `n`: near-unit
/// edges and wide intervals, so raising one supply swallows several clusters
/// in a row.
pub fn dense_instance(rng: &mut impl Rng, n: usize) -> PathNetwork {
    let mut x = 0.0;
    let mut positions = Vec::with_capacity(n);
    let mut intervals = Vec::with_capacity(n);
    for _ in 0..n {
        positions.push(x);
        x += rng.random_range(0.8..1.25);
        let lo = rng.random_range(0.05..0.5);
        intervals.push(WeightInterval::new(lo, lo + rng.random_range(1.0..4.0)));
    }
    PathNetwork::new(positions, intervals, 1.0, 1.0).expect("generated instance is valid")
}
