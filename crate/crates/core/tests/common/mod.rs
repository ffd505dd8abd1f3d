#![allow(dead_code)]

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use regret_median_core::network::Location;
use regret_median_core::{PathNetwork, PointOnPath, Scenario, WeightInterval};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn log_uniform(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    (rng.random_range(lo.ln()..hi.ln())).exp()
}

/// Log-uniform gaps, weights, capacity and tau; about one interval in five
/// is degenerate.
pub fn random_network(rng: &mut impl Rng, n: usize) -> PathNetwork {
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
    PathNetwork::new(positions, intervals, c, tau).unwrap()
}

/// Small integer data with unit capacity and tau, so ties in the head
/// criterion occur exactly.
pub fn tie_network(rng: &mut impl Rng, n: usize) -> PathNetwork {
    let mut x = 0.0;
    let mut positions = Vec::with_capacity(n);
    let mut intervals = Vec::with_capacity(n);
    for _ in 0..n {
        positions.push(x);
        x += rng.random_range(1..=3) as f64;
        let lo = rng.random_range(1..=3) as f64;
        intervals.push(WeightInterval::new(lo, lo + rng.random_range(0..=3) as f64));
    }
    PathNetwork::new(positions, intervals, 1.0, 1.0).unwrap()
}

pub fn random_scenario(rng: &mut impl Rng, net: &PathNetwork) -> Scenario {
    let w = net
        .intervals()
        .iter()
        .map(|iv| if iv.is_degenerate() { iv.min } else { rng.random_range(iv.min..=iv.max) })
        .collect();
    net.scenario(w).unwrap()
}

/// Integer weights inside a `tie_network` interval.
pub fn integer_scenario(rng: &mut impl Rng, net: &PathNetwork) -> Scenario {
    let w = net.intervals().iter().map(|iv| rng.random_range(iv.min as u32..=iv.max as u32) as f64).collect();
    net.scenario(w).unwrap()
}

/// A vertex with probability 1/4, otherwise a uniform point.
pub fn random_point(rng: &mut impl Rng, net: &PathNetwork) -> PointOnPath {
    if net.len() == 1 || rng.random_bool(0.25) {
        return net.vertex_point(rng.random_range(0..net.len()));
    }
    let x = rng.random_range(0.0..net.length());
    net.locate(x).unwrap()
}

pub fn random_interior(rng: &mut impl Rng, net: &PathNetwork) -> PointOnPath {
    let e = rng.random_range(0..net.edge_count());
    let (lo, hi) = (net.position(e), net.position(e + 1));
    let t: f64 = rng.random_range(0.01..0.99);
    PointOnPath { coordinate: lo + t * (hi - lo), location: Location::Edge(e) }
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}
