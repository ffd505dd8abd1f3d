//! Independent reference computations.
//!
//! * [`simulate`] pushes the fluid supplies through the path vertex by
//!   vertex with exact piecewise-constant rates and integrates arrival
//!   times at the sink in closed form. It never looks at clusters.
//! * [`brute_clusters`] evaluates the head criterion by direct quadratic
//!   scans instead of the monotone stack.
//! * [`brute_critical_weights`] re-clusters from scratch at every candidate
//!   critical weight.
//! * [`sampled_max_regret`] and [`exhaustive_solve`] search pseudo-bipartite
//!   scenario grids and sink positions without the envelope LP.
//!
//! Everything here favours clarity over speed.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::evacuation::{Cluster, ClusterSequence, Direction};
use crate::network::{Location, PathNetwork, PointOnPath, Scenario};
use crate::scenarios::{PseudoBipartiteSpec, ScenarioUniverse, Side};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    /// A vertex starts sending flow downstream at `rate`.
    OutflowStart,
    OutflowEnd,
    /// The waiting queue at a vertex becomes empty.
    QueueDrained,
    /// Flow starts reaching the sink at `rate`.
    ArrivalStart,
    ArrivalEnd,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowEvent {
    pub time: f64,
    /// Vertex index; for arrival events, the last vertex before the sink.
    pub vertex: usize,
    pub kind: EventKind,
    pub rate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Piece {
    start: f64,
    end: f64,
    rate: f64,
}

fn push_piece(out: &mut Vec<Piece>, start: f64, end: f64, rate: f64) {
    if !(end > start) || rate <= 0.0 {
        return;
    }
    if let Some(last) = out.last_mut() {
        if last.end == start && last.rate == rate {
            last.end = end;
            return;
        }
    }
    out.push(Piece { start, end, rate });
}

/// FCFS vertex with `supply` waiting at time 0 and the given inflow; the
/// vertex sends at rate `c` while its queue is non-empty and passes the
/// inflow through otherwise.
fn vertex_outflow(supply: f64, inflow: &[Piece], c: f64, vertex: usize, events: &mut Vec<FlowEvent>) -> Vec<Piece> {
    let mut out = Vec::new();
    let mut queue = supply;
    let mut t = 0.0;
    let mut segments: Vec<Piece> = Vec::with_capacity(2 * inflow.len() + 1);
    for p in inflow {
        if p.start > t {
            segments.push(Piece { start: t, end: p.start, rate: 0.0 });
        }
        segments.push(*p);
        t = p.end;
    }
    segments.push(Piece { start: t, end: f64::INFINITY, rate: 0.0 });

    for seg in segments {
        let (a, b, r) = (seg.start, seg.end, seg.rate);
        if queue > 0.0 {
            if r >= c {
                push_piece(&mut out, a, b, c);
                queue += (r - c) * (b - a);
                continue;
            }
            let empty_at = a + queue / (c - r);
            if empty_at < b {
                push_piece(&mut out, a, empty_at, c);
                events.push(FlowEvent { time: empty_at, vertex, kind: EventKind::QueueDrained, rate: 0.0 });
                queue = 0.0;
                push_piece(&mut out, empty_at, b, r);
            } else {
                push_piece(&mut out, a, b, c);
                queue -= (c - r) * (b - a);
                if queue <= 0.0 {
                    queue = 0.0;
                    events.push(FlowEvent { time: b, vertex, kind: EventKind::QueueDrained, rate: 0.0 });
                }
            }
        } else if b.is_finite() {
            push_piece(&mut out, a, b, r);
        }
    }
    for p in &out {
        events.push(FlowEvent { time: p.start, vertex, kind: EventKind::OutflowStart, rate: p.rate });
        events.push(FlowEvent { time: p.end, vertex, kind: EventKind::OutflowEnd, rate: p.rate });
    }
    out
}

fn shifted(pieces: &[Piece], delay: f64) -> Vec<Piece> {
    pieces.iter().map(|p| Piece { start: p.start + delay, end: p.end + delay, rate: p.rate }).collect()
}

/// Sum of arrival times at the sink of the supplies on vertices `order`,
/// listed from the far end toward the sink. `sink_distance` gives the
/// distance from the final vertex to the sink.
fn simulate_side(
    net: &PathNetwork,
    s: &Scenario,
    order: &[usize],
    sink_distance: impl Fn(usize) -> f64,
    events: &mut Vec<FlowEvent>,
) -> f64 {
    let (tau, c) = (net.tau(), net.capacity());
    let mut outflow: Vec<Piece> = Vec::new();
    let mut prev: Option<usize> = None;
    for &v in order {
        let inflow = match prev {
            Some(u) => shifted(&outflow, tau * (net.position(v) - net.position(u)).abs()),
            None => Vec::new(),
        };
        outflow = vertex_outflow(s.weight(v), &inflow, c, v, events);
        prev = Some(v);
    }
    let Some(last) = prev else { return 0.0 };
    let arrivals = shifted(&outflow, tau * sink_distance(last));
    for p in &arrivals {
        events.push(FlowEvent { time: p.start, vertex: last, kind: EventKind::ArrivalStart, rate: p.rate });
        events.push(FlowEvent { time: p.end, vertex: last, kind: EventKind::ArrivalEnd, rate: p.rate });
    }
    // ∫ t·rate dt over each piece
    arrivals.iter().map(|p| p.rate * (p.end - p.start) * (p.end + p.start) / 2.0).sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Simulation {
    pub left_cost: f64,
    pub right_cost: f64,
    /// All events, sorted by time.
    pub events: Vec<FlowEvent>,
}

impl Simulation {
    pub fn cost(&self) -> f64 {
        self.left_cost + self.right_cost
    }
}

/// Event-driven evacuation toward sink `x`.
pub fn simulate(net: &PathNetwork, s: &Scenario, x: &PointOnPath) -> Simulation {
    let n = net.len();
    let (left_end, right_start) = match x.location {
        Location::Vertex(h) => (h, h + 1),
        Location::Edge(h) => (h + 1, h + 1),
    };
    let left: Vec<usize> = (0..left_end).collect();
    let right: Vec<usize> = (right_start..n).rev().collect();
    let mut events = Vec::new();
    let left_cost = simulate_side(net, s, &left, |v| x.coordinate - net.position(v), &mut events);
    let right_cost = simulate_side(net, s, &right, |v| net.position(v) - x.coordinate, &mut events);
    events.sort_by(|a, b| a.time.total_cmp(&b.time));
    Simulation { left_cost, right_cost, events }
}

pub fn simulate_cost(net: &PathNetwork, s: &Scenario, x: &PointOnPath) -> f64 {
    simulate(net, s, x).cost()
}

/// Left clusters over vertices `0..=last` by the literal argmax definition,
/// taking the largest index on ties.
fn brute_left(net: &PathNetwork, s: &Scenario, last: usize) -> Vec<Cluster> {
    let (tau, c) = (net.tau(), net.capacity());
    let anchor = net.position(last);
    let mut clusters = Vec::new();
    let mut start = 0;
    while start <= last {
        let mut best = (start, f64::NEG_INFINITY, 0.0);
        let mut acc = 0.0;
        for j in start..=last {
            acc += s.weight(j);
            let value = tau * (anchor - net.position(j)) + acc / c;
            if value >= best.1 {
                best = (j, value, acc);
            }
        }
        clusters.push(Cluster { head: best.0, weight: best.2 });
        start = best.0 + 1;
    }
    clusters
}

/// Clusters on one side of `x` by direct quadratic scans.
pub fn brute_clusters(net: &PathNetwork, s: &Scenario, x: &PointOnPath, direction: Direction) -> ClusterSequence {
    let n = net.len();
    match direction {
        Direction::Left => {
            let last = match x.location {
                Location::Vertex(h) => h.checked_sub(1),
                Location::Edge(h) => Some(h),
            };
            let clusters = last.map(|l| brute_left(net, s, l)).unwrap_or_default();
            let covered = 0..last.map_or(0, |l| l + 1);
            ClusterSequence { direction, clusters, covered }
        }
        Direction::Right => {
            let mirror = net.reflect();
            let seq = brute_clusters(&mirror, &s.reversed(), &net.reflect_point(x), Direction::Left);
            let clusters = seq.clusters.iter().map(|cl| Cluster { head: n - 1 - cl.head, weight: cl.weight }).collect();
            let covered = n - seq.covered.end..n - seq.covered.start;
            ClusterSequence { direction, clusters, covered }
        }
    }
}

/// Critical weights of the left family by re-clustering from scratch.
fn brute_left_family(net: &PathNetwork, anchor: usize) -> Vec<(usize, f64)> {
    let n = net.len();
    let (tau, c) = (net.tau(), net.capacity());
    let mut out = Vec::new();
    let y = net.vertex_point(anchor);
    for i in anchor + 1..n {
        let iv = net.interval(i);
        let mut w = iv.min;
        out.push((i, w));
        loop {
            let spec = PseudoBipartiteSpec { side: Side::Left, intermediate: i, weight: w };
            let seq = brute_clusters(net, &spec.realize(net), &y, Direction::Right);
            // far-to-near; the cluster holding v_i has the largest head <= i
            let k = seq.clusters.iter().position(|cl| cl.head <= i).expect("v_i is covered");
            let mut sigma = seq.clusters[k].weight;
            let head = seq.clusters[k].head;
            let mut next = k.checked_sub(1);
            let mut found = None;
            while let Some(f) = next {
                let far = seq.clusters[f];
                let candidate = w + c * tau * (net.position(far.head) - net.position(head)) - sigma;
                // a candidate within rounding of w is a pair that already merged
                if candidate - w > 4.0 * f64::EPSILON * (w + sigma) {
                    found = Some(candidate);
                    break;
                }
                // rounding left a pair unmerged; absorb it here
                sigma += far.weight;
                next = f.checked_sub(1);
            }
            match found {
                Some(candidate) if candidate <= iv.max => {
                    w = candidate;
                    out.push((i, w));
                    if w == iv.max {
                        break;
                    }
                }
                _ => {
                    if w < iv.max {
                        out.push((i, iv.max));
                    }
                    break;
                }
            }
        }
    }
    out
}

/// Critical pseudo-bipartite weights for `anchor` as `(side, intermediate,
/// weight)`, left family then right family, each in sweep order.
pub fn brute_critical_weights(net: &PathNetwork, anchor: usize) -> Vec<(Side, usize, f64)> {
    let n = net.len();
    let mut out: Vec<(Side, usize, f64)> =
        brute_left_family(net, anchor).into_iter().map(|(i, w)| (Side::Left, i, w)).collect();
    let mirror = net.reflect();
    out.extend(brute_left_family(&mirror, n - 1 - anchor).into_iter().map(|(i, w)| (Side::Right, n - 1 - i, w)));
    out
}

/// Nested uniform grid: `points` values from `lo` to `hi` inclusive. Grids
/// with `(p - 1) | (q - 1)` are subsets of each other bit for bit.
pub fn weight_grid(lo: f64, hi: f64, points: usize) -> impl Iterator<Item = f64> {
    let steps = (points.max(2) - 1) as f64;
    (0..points.max(2)).map(move |k| if k as f64 == steps { hi } else { lo + (hi - lo) * (k as f64 / steps) })
}

/// Every pseudo-bipartite scenario with the intermediate weight on the grid,
/// over both sides and every vertex as intermediate.
pub fn pseudo_bipartite_grid(net: &PathNetwork, points: usize) -> Vec<PseudoBipartiteSpec> {
    let mut out = Vec::new();
    for side in [Side::Left, Side::Right] {
        for i in 0..net.len() {
            let iv = net.interval(i);
            if iv.is_degenerate() {
                out.push(PseudoBipartiteSpec { side, intermediate: i, weight: iv.min });
                continue;
            }
            out.extend(weight_grid(iv.min, iv.max, points).map(|w| PseudoBipartiteSpec { side, intermediate: i, weight: w }));
        }
    }
    out
}

fn min_vertex_cost(net: &PathNetwork, s: &Scenario) -> f64 {
    (0..net.len()).map(|v| simulate_cost(net, s, &net.vertex_point(v))).fold(f64::INFINITY, f64::min)
}

/// `R^s(x)` from simulated costs only.
pub fn direct_regret(net: &PathNetwork, s: &Scenario, x: &PointOnPath) -> f64 {
    simulate_cost(net, s, x) - min_vertex_cost(net, s)
}

/// Lower bound on `R_max(x)`: the largest regret over the pseudo-bipartite
/// grid and the universe members.
pub fn sampled_max_regret(net: &PathNetwork, universe: &ScenarioUniverse, x: &PointOnPath, grid_points: usize) -> f64 {
    pseudo_bipartite_grid(net, grid_points)
        .iter()
        .map(|spec| spec.realize(net))
        .chain(universe.scenarios(net))
        .map(|s| direct_regret(net, &s, x))
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("exhaustive search is limited to {max} vertices, got {n}")]
    TooLarge { n: usize, max: usize },
    #[error("grid step must be positive, got {0}")]
    InvalidStep(f64),
}

pub const EXHAUSTIVE_MAX_VERTICES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExhaustiveResult {
    pub x: PointOnPath,
    pub value: f64,
    pub scenarios: usize,
}

/// One sampled scenario: its median cost, vertex costs and, per edge, the
/// line through two interior cost evaluations.
struct Sampled {
    vertex_regret: Vec<f64>,
    edge_lines: Vec<(f64, f64)>,
}

fn sample(net: &PathNetwork, s: &Scenario) -> Sampled {
    let vertex_costs: Vec<f64> = (0..net.len()).map(|v| simulate_cost(net, s, &net.vertex_point(v))).collect();
    let m = vertex_costs.iter().copied().fold(f64::INFINITY, f64::min);
    let edge_lines = (0..net.edge_count())
        .map(|e| {
            let (lo, hi) = (net.position(e), net.position(e + 1));
            let (p, q) = (lo + (hi - lo) / 3.0, lo + 2.0 * (hi - lo) / 3.0);
            let at = |x: f64| simulate_cost(net, s, &PointOnPath { coordinate: x, location: Location::Edge(e) });
            let (cp, cq) = (at(p), at(q));
            let slope = (cq - cp) / (q - p);
            (slope, cp - slope * p - m)
        })
        .collect();
    Sampled { vertex_regret: vertex_costs.iter().map(|c| c - m).collect(), edge_lines }
}

/// Grid search for the minimax regret sink: every vertex, every grid point
/// `k·step`, and a ternary refinement inside each edge (the sampled maximum
/// regret is convex there).
pub fn exhaustive_solve(
    net: &PathNetwork,
    universe: &ScenarioUniverse,
    x_grid_step: f64,
    weight_grid_points: usize,
) -> Result<ExhaustiveResult, OracleError> {
    let n = net.len();
    if n > EXHAUSTIVE_MAX_VERTICES {
        return Err(OracleError::TooLarge { n, max: EXHAUSTIVE_MAX_VERTICES });
    }
    if !(x_grid_step > 0.0) {
        return Err(OracleError::InvalidStep(x_grid_step));
    }
    let pool: Vec<Sampled> = pseudo_bipartite_grid(net, weight_grid_points)
        .iter()
        .map(|spec| spec.realize(net))
        .chain(universe.scenarios(net))
        .map(|s| sample(net, &s))
        .collect();

    let at_vertex = |v: usize| pool.iter().map(|p| p.vertex_regret[v]).fold(0.0, f64::max);
    let on_edge = |e: usize, x: f64| {
        pool.iter().map(|p| p.edge_lines[e].0 * x + p.edge_lines[e].1).fold(0.0, f64::max)
    };

    let mut best = ExhaustiveResult { x: net.vertex_point(0), value: at_vertex(0), scenarios: pool.len() };
    let mut consider = |x: PointOnPath, value: f64| {
        if value < best.value || (value == best.value && x.coordinate < best.x.coordinate) {
            best.x = x;
            best.value = value;
        }
    };
    for v in 1..n {
        consider(net.vertex_point(v), at_vertex(v));
    }
    let length = net.length();
    let mut k = 1usize;
    loop {
        let x = k as f64 * x_grid_step;
        if !(x < length) {
            break;
        }
        if let Ok(p) = net.locate(x) {
            if let Location::Edge(e) = p.location {
                consider(p, on_edge(e, x));
            }
        }
        k += 1;
    }
    for e in 0..net.edge_count() {
        let (mut lo, mut hi) = (net.position(e), net.position(e + 1));
        for _ in 0..200 {
            let (a, b) = (lo + (hi - lo) / 3.0, hi - (hi - lo) / 3.0);
            if on_edge(e, a) <= on_edge(e, b) {
                hi = b;
            } else {
                lo = a;
            }
        }
        let x = 0.5 * (lo + hi);
        if x > net.position(e) && x < net.position(e + 1) {
            consider(PointOnPath { coordinate: x, location: Location::Edge(e) }, on_edge(e, x));
        }
    }
    Ok(best)
}

/// Brute-force cluster structure at every sink edge, for comparison with
/// the incremental sweep.
pub fn brute_left_snapshots(net: &PathNetwork, s: &Scenario) -> Vec<ClusterSequence> {
    (0..net.len())
        .map(|h| ClusterSequence { direction: Direction::Left, clusters: brute_left(net, s, h), covered: 0..h + 1 })
        .collect()
}

/// Supplies of each cluster moved onto its head.
pub fn concentrate(net: &PathNetwork, s: &Scenario, seqs: &[&ClusterSequence]) -> Scenario {
    let mut weights = vec![0.0; net.len()];
    for (v, w) in weights.iter_mut().enumerate() {
        if !seqs.iter().any(|seq| seq.covered.contains(&v)) {
            *w = s.weight(v);
        }
    }
    for seq in seqs {
        for cl in &seq.clusters {
            weights[cl.head] += cl.weight;
        }
    }
    Scenario::from_weights_unchecked(weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::fixtures::*;
    use crate::network::WeightInterval;
    use crate::scenarios::universe;

    #[test]
    fn merged_stream_closed_form() {
        // supplies (5, 1) at (0, 1), sink at the third vertex
        for far in [1.5, 2.5, 7.0] {
            let iv = vec![WeightInterval::new(0.1, 10.0); 3];
            let net = PathNetwork::new(vec![0.0, 1.0, far], iv, 1.0, 1.0).unwrap();
            let s = net.scenario(vec![5.0, 1.0, 3.0]).unwrap();
            let sim = simulate(&net, &s, &net.vertex_point(2));
            assert_eq!(sim.left_cost, 6.0 * (far - 1.0) + 18.0);
            assert_eq!(sim.right_cost, 0.0);
        }
    }

    #[test]
    fn fixture_a_vertex_two() {
        let net = fixture_a();
        let s = net.max_scenario();
        assert_eq!(simulate_cost(&net, &s, &net.vertex_point(1)), 5.0);
        assert_eq!(simulate_cost(&net, &s, &net.locate(3.5).unwrap()), 6.0);
        assert_eq!(simulate_cost(&net, &s, &net.vertex_point(0)), 8.0);
    }

    #[test]
    fn single_vertex_costs_nothing() {
        let net = PathNetwork::new(vec![0.0], vec![WeightInterval::new(1.0, 1.0)], 1.0, 1.0).unwrap();
        let sim = simulate(&net, &net.min_scenario(), &net.vertex_point(0));
        assert_eq!(sim.cost(), 0.0);
        assert!(sim.events.is_empty());
    }

    #[test]
    fn events_are_time_ordered() {
        let net = fixture_b();
        let s = net.max_scenario();
        let sim = simulate(&net, &s, &net.locate(3.2).unwrap());
        assert!(sim.events.windows(2).all(|w| w[0].time <= w[1].time));
        assert!(sim.events.iter().any(|e| e.kind == EventKind::QueueDrained));
    }

    #[test]
    fn brute_clusters_examples() {
        let net = fixture_a();
        let s = net.max_scenario();
        let seq = brute_clusters(&net, &s, &net.locate(3.5).unwrap(), Direction::Left);
        assert_eq!(seq.clusters, vec![Cluster { head: 0, weight: 1.0 }, Cluster { head: 1, weight: 1.0 }]);
        let seq = brute_clusters(&net, &s, &net.locate(0.5).unwrap(), Direction::Right);
        assert_eq!(seq.clusters, vec![Cluster { head: 1, weight: 2.0 }]);
        assert_eq!(seq.covered, 1..3);
        assert!(brute_clusters(&net, &s, &net.vertex_point(0), Direction::Left).is_empty());
    }

    #[test]
    fn grids_nest() {
        let coarse: Vec<f64> = weight_grid(0.3, 1.7, 50).collect();
        let fine: Vec<f64> = weight_grid(0.3, 1.7, 197).collect();
        assert!(coarse.iter().all(|w| fine.contains(w)));
        assert_eq!(coarse[0], 0.3);
        assert_eq!(*coarse.last().unwrap(), 1.7);
    }

    #[test]
    fn fixture_a_oracles() {
        let net = fixture_a();
        let u = universe(&net);
        let x = net.locate(3.5).unwrap();
        assert_eq!(sampled_max_regret(&net, &u, &x, 10), 1.0);
        let best = exhaustive_solve(&net, &u, 1e-2, 10).unwrap();
        assert_eq!(best.x.location, Location::Vertex(1));
        assert_eq!(best.value, 0.0);
    }

    #[test]
    fn exhaustive_guards_size() {
        let iv = vec![WeightInterval::new(1.0, 1.0); 9];
        let net = PathNetwork::new((0..9).map(|k| k as f64).collect(), iv, 1.0, 1.0).unwrap();
        let u = universe(&net);
        assert_eq!(exhaustive_solve(&net, &u, 0.1, 2), Err(OracleError::TooLarge { n: 9, max: 8 }));
    }

    #[test]
    fn brute_critical_fixture_b() {
        let w = brute_critical_weights(&fixture_b(), 0);
        assert_eq!(w, vec![(Side::Left, 1, 0.5), (Side::Left, 1, 1.0), (Side::Left, 1, 2.0), (Side::Left, 2, 1.0)]);
    }
}
