mod common;

use common::*;
use rand::Rng;
use regret_median_core::envelope::{envelope_min_max, evaluate, Line};
use regret_median_core::network::fixtures::{fixture_a, fixture_b};
use regret_median_core::network::Location;
use regret_median_core::oracle::{direct_regret, exhaustive_solve, pseudo_bipartite_grid, sampled_max_regret};
use regret_median_core::regret::{
    gap, max_regret, max_regret_at_vertices, min_max_regret_on_edge, regret, Strategy,
};
use regret_median_core::{solve, solve_with, universe, PointOnPath, SolveOptions};

#[test]
fn regret_is_the_largest_gap_to_a_vertex() {
    let mut rng = rng(41);
    for _ in 0..300 {
        let n = rng.random_range(1..=8);
        let net = random_network(&mut rng, n);
        let s = random_scenario(&mut rng, &net);
        let x = random_point(&mut rng, &net);
        let r = regret(&net, &s, &x);
        assert!(r >= 0.0);
        let g = (0..n).map(|v| gap(&net, &s, &x, &net.vertex_point(v))).fold(f64::NEG_INFINITY, f64::max);
        assert!((r - g).abs() <= 1e-12 * r.abs().max(1.0));
        assert_eq!(gap(&net, &s, &x, &x), 0.0);
        let y = random_point(&mut rng, &net);
        assert_eq!(gap(&net, &s, &x, &y), -gap(&net, &s, &y, &x));
    }
}

#[test]
fn envelope_minimum_agrees_with_dense_grid() {
    let mut rng = rng(42);
    for _ in 0..300 {
        let m = rng.random_range(1..=40);
        let lines: Vec<Line> =
            (0..m).map(|_| Line::new(rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0))).collect();
        let lo = rng.random_range(-5.0..5.0);
        let hi = lo + rng.random_range(0.0..5.0);
        let best = envelope_min_max(&lines, lo, hi).unwrap();
        assert!(best.x >= lo && best.x <= hi);
        assert_eq!(evaluate(&lines, best.x), (best.active, best.value));
        let steps = 10_000;
        let grid_min = (0..=steps)
            .map(|k| evaluate(&lines, lo + (hi - lo) * (k as f64 / steps as f64)).1)
            .fold(f64::INFINITY, f64::min);
        let resolution = 10.0 * (hi - lo) / steps as f64;
        assert!(best.value <= grid_min + 1e-12, "{} > {grid_min}", best.value);
        assert!(best.value >= grid_min - resolution - 1e-12);
    }
}

#[test]
fn fixture_a_has_zero_regret_at_the_middle_vertex() {
    let sol = solve(&fixture_a());
    assert_eq!(sol.x_star.location, Location::Vertex(1));
    assert_eq!((sol.x_star.coordinate, sol.value), (3.0, 0.0));
    let values: Vec<f64> = sol.vertices.iter().map(|v| v.value).collect();
    assert_eq!(values, vec![3.0, 0.0, 1.0]);
}

#[test]
fn fixture_b_vertex_report_matches_grid_oracle() {
    let net = fixture_b();
    let u = universe(&net);
    for v in max_regret_at_vertices(&net, &u) {
        let sampled = sampled_max_regret(&net, &u, &net.vertex_point(v.vertex), 200);
        assert!((v.value - sampled).abs() <= 1e-7, "vertex {}: {} vs {sampled}", v.vertex, v.value);
    }
}

#[test]
fn fixture_b_matches_exhaustive_search() {
    let net = fixture_b();
    let sol = solve(&net);
    let oracle = exhaustive_solve(&net, &universe(&net), 1e-3, 200).unwrap();
    assert!((sol.value - oracle.value).abs() <= 1e-5, "{} vs {}", sol.value, oracle.value);
}

#[test]
fn edge_minima_are_bracketed_by_the_oracle() {
    let mut rng = rng(43);
    for _ in 0..25 {
        let n = rng.random_range(2..=6);
        let net = random_network(&mut rng, n);
        let u = universe(&net);
        let grid: Vec<_> = pseudo_bipartite_grid(&net, 50).iter().map(|s| s.realize(&net)).collect();
        for e in 0..net.edge_count() {
            let best = min_max_regret_on_edge(&net, &u, e);
            // the edge value is the open-edge limit, so evaluate on the edge
            let at = PointOnPath { coordinate: best.x, location: Location::Edge(e) };
            let sampled = grid.iter().map(|s| direct_regret(&net, s, &at)).fold(0.0, f64::max);
            assert!(best.value >= sampled - 1e-7 * sampled.max(1.0));
            let steps = 400;
            let dense = (1..steps)
                .map(|k| {
                    let x = net.position(e) + net.edge_length(e) * (k as f64 / steps as f64);
                    max_regret(&net, &u, &PointOnPath { coordinate: x, location: Location::Edge(e) }).0
                })
                .fold(f64::INFINITY, f64::min);
            assert!(best.value <= dense + 1e-7 * dense.max(1.0));
        }
    }
}

#[test]
fn table_and_streaming_agree() {
    let mut rng = rng(44);
    for n in [2, 7, 30, 60] {
        let net = random_network(&mut rng, n);
        let u = universe(&net);
        let table = solve_with(&net, &u, SolveOptions { strategy: Strategy::Table });
        let stream = solve_with(&net, &u, SolveOptions { strategy: Strategy::Streaming });
        assert_eq!(table.x_star, stream.x_star);
        assert_eq!(table.value, stream.value);
        assert_eq!(table.vertices, stream.vertices);
        for (a, b) in table.edges.iter().zip(&stream.edges) {
            assert_eq!((a.x, a.value), (b.x, b.value));
        }
    }
}

#[test]
fn solution_is_consistent_with_its_reports_and_witness() {
    let mut rng = rng(45);
    for _ in 0..100 {
        let n = rng.random_range(1..=12);
        let net = random_network(&mut rng, n);
        let sol = solve(&net);
        assert!(sol.value >= 0.0);
        let best = sol.vertices.iter().map(|v| v.value).chain(sol.edges.iter().map(|e| e.value)).fold(f64::INFINITY, f64::min);
        assert_eq!(sol.value, best);
        if n == 1 {
            assert!(sol.witness.is_none());
            assert_eq!(sol.value, 0.0);
            continue;
        }
        let w = sol.witness.as_ref().unwrap();
        let r = regret(&net, &w.scenario, &sol.x_star);
        assert!((r - sol.value).abs() <= 1e-9 * sol.value.abs().max(1.0), "{r} vs {}", sol.value);
    }
}

#[test]
fn solver_value_matches_exhaustive_search_on_small_instances() {
    let mut rng = rng(46);
    for _ in 0..10 {
        let n = rng.random_range(2..=4);
        let net = random_network(&mut rng, n);
        let u = universe(&net);
        let sol = solve_with(&net, &u, SolveOptions::default());
        let step = 1e-3 * net.length();
        let oracle = exhaustive_solve(&net, &u, step, 100).unwrap();
        assert!((sol.value - oracle.value).abs() <= 1e-5 * oracle.value.max(1.0), "{} vs {}", sol.value, oracle.value);
    }
}
