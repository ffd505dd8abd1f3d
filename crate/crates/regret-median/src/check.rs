//! Cross-checks of one instance against the reference engines.

use regret_median_core::evacuation::{left_clusters, right_clusters, ClusterSequence};
use regret_median_core::network::Location;
use regret_median_core::oracle::{
    brute_clusters, brute_critical_weights, exhaustive_solve, sampled_max_regret, simulate_cost,
    EXHAUSTIVE_MAX_VERTICES,
};
use regret_median_core::regret::max_regret_at_vertices;
use regret_median_core::scenarios::critical_set_for_vertex;
use regret_median_core::{cost, solve_with, Direction, PathNetwork, PointOnPath, Scenario, SolveOptions};
use serde::Serialize;

use crate::report::Num;

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// Largest observed discrepancy, where one applies.
    pub max_error: Option<Num>,
    pub tolerance: Option<Num>,
    pub cases: usize,
}

#[derive(Debug, Serialize)]
pub struct CheckReport {
    pub passed: bool,
    pub checks: Vec<Check>,
}

fn probe_points(net: &PathNetwork) -> Vec<PointOnPath> {
    let mut out: Vec<PointOnPath> = (0..net.len()).map(|v| net.vertex_point(v)).collect();
    for e in 0..net.edge_count() {
        for t in [0.25, 0.5, 0.75] {
            let x = net.position(e) + t * net.edge_length(e);
            out.push(PointOnPath { coordinate: x, location: Location::Edge(e) });
        }
    }
    out
}

fn same_clusters(a: &ClusterSequence, b: &ClusterSequence) -> bool {
    a.covered == b.covered
        && a.clusters.len() == b.clusters.len()
        && a.clusters.iter().zip(&b.clusters).all(|(p, q)| p.head == q.head && p.weight.to_bits() == q.weight.to_bits())
}

/// Runs every check. `grid` is the number of intermediate weights sampled
/// per vertex for the regret oracles.
pub fn oracle_check(net: &PathNetwork, grid: usize) -> CheckReport {
    let universe = regret_median_core::universe(net);
    let mut scenarios: Vec<Scenario> = vec![net.min_scenario(), net.max_scenario()];
    scenarios.extend(universe.scenarios(net).take(64));
    let points = probe_points(net);
    let mut checks = Vec::new();

    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for s in &scenarios {
        for x in &points {
            let (a, b) = (cost(net, s, x), simulate_cost(net, s, x));
            worst = worst.max((a - b).abs() / a.abs().max(b.abs()).max(1e-300));
            cases += 1;
        }
    }
    checks.push(Check {
        name: "cost_matches_simulation",
        passed: worst <= 1e-9,
        max_error: Some(Num(worst)),
        tolerance: Some(Num(1e-9)),
        cases,
    });

    let mut ok = true;
    let mut cases = 0;
    for s in &scenarios {
        for x in &points {
            ok &= same_clusters(&left_clusters(net, s, x), &brute_clusters(net, s, x, Direction::Left));
            ok &= same_clusters(&right_clusters(net, s, x), &brute_clusters(net, s, x, Direction::Right));
            cases += 2;
        }
    }
    checks.push(Check { name: "clusters_match_brute_force", passed: ok, max_error: None, tolerance: None, cases });

    let mut ok = true;
    let mut worst: f64 = 0.0;
    for y in 0..net.len() {
        let set = critical_set_for_vertex(net, y);
        let brute = brute_critical_weights(net, y);
        ok &= set.len() == brute.len();
        for (m, &(side, i, w)) in set.members.iter().zip(&brute) {
            ok &= m.spec.side == side && m.spec.intermediate == i;
            worst = worst.max((m.spec.weight - w).abs() / w.abs().max(1.0));
        }
    }
    checks.push(Check {
        name: "critical_weights_match_brute_force",
        passed: ok && worst <= 1e-9,
        max_error: Some(Num(worst)),
        tolerance: Some(Num(1e-9)),
        cases: net.len(),
    });

    let mut worst: f64 = 0.0;
    for v in max_regret_at_vertices(net, &universe) {
        let sampled = sampled_max_regret(net, &universe, &net.vertex_point(v.vertex), grid);
        worst = worst.max(sampled - v.value);
    }
    checks.push(Check {
        name: "vertex_regret_not_below_sampled",
        passed: worst <= 1e-7,
        max_error: Some(Num(worst.max(0.0))),
        tolerance: Some(Num(1e-7)),
        cases: net.len(),
    });

    if net.len() <= EXHAUSTIVE_MAX_VERTICES {
        let sol = solve_with(net, &universe, SolveOptions::default());
        let step = 1e-3 * net.length().max(f64::MIN_POSITIVE);
        let oracle = exhaustive_solve(net, &universe, step, grid).expect("size and step checked");
        let err = (sol.value - oracle.value).abs();
        checks.push(Check {
            name: "solve_matches_exhaustive_search",
            passed: err <= 1e-5,
            max_error: Some(Num(err)),
            tolerance: Some(Num(1e-5)),
            cases: oracle.scenarios,
        });
    }

    let passed = checks.iter().all(|c| c.passed);
    CheckReport { passed, checks }
}
