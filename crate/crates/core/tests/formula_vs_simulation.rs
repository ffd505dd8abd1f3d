mod common;

use common::*;
use rand::Rng;
use regret_median_core::evacuation::{cost_left, left_clusters, right_clusters};
use regret_median_core::network::Location;
use regret_median_core::oracle::{concentrate, simulate, simulate_cost, EventKind};
use regret_median_core::{cost, PathNetwork, PointOnPath, WeightInterval};

#[test]
fn cost_matches_simulation_on_random_instances() {
    let mut rng = rng(11);
    for _ in 0..300 {
        let n = rng.random_range(1..=8);
        let net = random_network(&mut rng, n);
        for _ in 0..6 {
            let s = random_scenario(&mut rng, &net);
            let x = random_point(&mut rng, &net);
            let (a, b) = (cost(&net, &s, &x), simulate_cost(&net, &s, &x));
            assert!(rel_close(a, b, 1e-9), "cost {a} vs simulation {b} at {x:?}");
        }
    }
}

#[test]
fn merged_stream_closed_form() {
    // two vertices one apart; the first cluster catches up with the second
    let net = PathNetwork::new(vec![0.0, 1.0, 4.0], vec![WeightInterval::new(0.5, 10.0); 3], 1.0, 1.0).unwrap();
    let s = net.scenario(vec![5.0, 1.0, 1.0]).unwrap();
    for x in [1.5, 2.0, 3.75] {
        let p = net.locate(x).unwrap();
        let left = simulate(&net, &s, &p).left_cost;
        assert!((left - (6.0 * (x - 1.0) + 18.0)).abs() < 1e-12);
        assert!((cost_left(&net, &s, &p) - left).abs() < 1e-12);
    }
}

#[test]
fn vertex_sink_matches_fixture() {
    let net = regret_median_core::network::fixtures::fixture_a();
    let s = net.max_scenario();
    assert!((simulate_cost(&net, &s, &net.vertex_point(1)) - 5.0).abs() < 1e-12);
}

#[test]
fn events_are_ordered_and_conserve_supply() {
    let mut rng = rng(12);
    for _ in 0..100 {
        let n = rng.random_range(2..=7);
        let net = random_network(&mut rng, n);
        let s = random_scenario(&mut rng, &net);
        let x = random_point(&mut rng, &net);
        let sim = simulate(&net, &s, &x);
        assert!(sim.events.windows(2).all(|w| w[0].time <= w[1].time));
        let mut arrived = 0.0;
        let mut open: Vec<(f64, f64)> = Vec::new();
        for e in &sim.events {
            match e.kind {
                EventKind::ArrivalStart => open.push((e.time, e.rate)),
                EventKind::ArrivalEnd => {
                    let k = open.iter().position(|&(_, r)| r == e.rate).unwrap();
                    let (t0, r) = open.remove(k);
                    arrived += r * (e.time - t0);
                }
                _ => {}
            }
        }
        let own = match x.location {
            Location::Vertex(v) => s.weight(v),
            Location::Edge(_) => 0.0,
        };
        assert!(rel_close(arrived + own, s.total(), 1e-9));
    }
}

#[test]
fn concentrating_clusters_on_heads_keeps_cost() {
    let mut rng = rng(13);
    for _ in 0..200 {
        let n = rng.random_range(2..=8);
        let net = random_network(&mut rng, n);
        let s = random_scenario(&mut rng, &net);
        let x = random_point(&mut rng, &net);
        let (l, r) = (left_clusters(&net, &s, &x), right_clusters(&net, &s, &x));
        let moved = concentrate(&net, &s, &[&l, &r]);
        let before = simulate(&net, &s, &x);
        let after = simulate(&net, &moved, &x);
        assert!(rel_close(before.left_cost, after.left_cost, 1e-9));
        assert!(rel_close(before.right_cost, after.right_cost, 1e-9));
    }
}

#[test]
fn single_vertex_costs_nothing_at_itself() {
    let net = PathNetwork::new(vec![2.0], vec![WeightInterval::new(1.0, 3.0)], 1.0, 1.0).unwrap();
    let s = net.scenario(vec![2.0]).unwrap();
    let p = PointOnPath { coordinate: 0.0, location: Location::Vertex(0) };
    assert_eq!(cost(&net, &s, &p), 0.0);
    assert_eq!(simulate_cost(&net, &s, &p), 0.0);
}
