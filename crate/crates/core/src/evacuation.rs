//! Fixed-scenario evacuation costs.
//!
//! Supplies on each side of the sink group into clusters that reach the
//! sink as one congested stream. A cluster of weight `σ` whose head sits at
//! distance `d` from the sink contributes `σ·τ·d + σ²/(2c)` to the total
//! evacuation time. Clusters are maintained with a monotone stack: pushing
//! the next vertex toward the sink absorbs every cluster it catches up
//! with, so the decomposition for every sink position comes out of a single
//! linear sweep.

use alloc::vec::Vec;
use core::ops::Range;

use crate::network::{Location, PathNetwork, PointOnPath, Scenario};

/// Side of the sink a cluster sequence describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cluster {
    /// Vertex of the cluster nearest to the sink.
    pub head: usize,
    pub weight: f64,
}

/// Clusters of one side, ordered from the far end of the path toward the
/// sink (left: heads increasing, right: heads decreasing).
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterSequence {
    pub direction: Direction,
    pub clusters: Vec<Cluster>,
    /// Vertex indices decomposed.
    pub covered: Range<usize>,
}

impl ClusterSequence {
    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.clusters.iter().map(|c| c.weight).sum()
    }

    pub fn heads(&self) -> impl Iterator<Item = usize> + '_ {
        self.clusters.iter().map(|c| c.head)
    }
}

/// Running sums over the clusters currently on the stack:
/// `Σσ`, `Σσ·v_head` and `Σσ²`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub(crate) struct ClusterSums {
    pub weight: f64,
    pub moment: f64,
    pub square: f64,
}

#[derive(Debug, Clone, Copy)]
struct StackEntry {
    head: usize,
    position: f64,
    weight: f64,
    // first push index in this cluster
    first: usize,
    // sums over this entry and everything below it
    sums: ClusterSums,
}

/// Monotone stack of clusters for a sweep toward the sink.
#[derive(Debug, Clone)]
pub(crate) struct ClusterStack {
    entries: Vec<StackEntry>,
    // supplies in push order
    pushed: Vec<f64>,
    tau: f64,
    capacity: f64,
}

impl ClusterStack {
    pub fn with_capacity(net: &PathNetwork, n: usize) -> Self {
        Self {
            entries: Vec::with_capacity(n),
            pushed: Vec::with_capacity(n),
            tau: net.tau(),
            capacity: net.capacity(),
        }
    }

    /// Pushes the next vertex toward the sink. Every cluster the new head
    /// does not stay strictly ahead of is merged into it.
    pub fn push(&mut self, head: usize, position: f64, weight: f64) {
        let mut first = self.pushed.len();
        self.pushed.push(weight);
        let mut weight = weight;
        while let Some(top) = self.entries.last() {
            if self.tau * (position - top.position).abs() <= weight / self.capacity {
                weight += top.weight;
                first = top.first;
                self.entries.pop();
            } else {
                break;
            }
        }
        let below = self.sums();
        let sums = ClusterSums {
            weight: below.weight + weight,
            moment: below.moment + weight * position,
            square: below.square + weight * weight,
        };
        self.entries.push(StackEntry { head, position, weight, first, sums });
    }

    pub fn sums(&self) -> ClusterSums {
        self.entries.last().map(|e| e.sums).unwrap_or_default()
    }

    /// Clusters bottom to top. Weights are summed afresh in push order so
    /// they do not depend on the merge history.
    pub fn clusters(&self) -> Vec<Cluster> {
        let mut out = Vec::with_capacity(self.entries.len());
        for (k, e) in self.entries.iter().enumerate() {
            let end = self.entries.get(k + 1).map_or(self.pushed.len(), |next| next.first);
            let weight = self.pushed[e.first..end].iter().fold(0.0, |acc, w| acc + w);
            out.push(Cluster { head: e.head, weight });
        }
        out
    }
}

/// Builds the stack for vertices `range`, pushed toward the sink.
fn sweep(net: &PathNetwork, s: &Scenario, direction: Direction, range: Range<usize>) -> ClusterStack {
    let mut stack = ClusterStack::with_capacity(net, range.len());
    let pos = net.positions();
    match direction {
        Direction::Left => range.for_each(|i| stack.push(i, pos[i], s.weight(i))),
        Direction::Right => range.rev().for_each(|i| stack.push(i, pos[i], s.weight(i))),
    }
    stack
}

fn left_range(x: &PointOnPath) -> Range<usize> {
    0..x.last_left().map_or(0, |h| h + 1)
}

fn right_range(net: &PathNetwork, x: &PointOnPath) -> Range<usize> {
    x.first_right().min(net.len())..net.len()
}

/// Left clusters for sink `x`: vertices strictly left of `x`.
pub fn left_clusters(net: &PathNetwork, s: &Scenario, x: &PointOnPath) -> ClusterSequence {
    let covered = left_range(x);
    let stack = sweep(net, s, Direction::Left, covered.clone());
    ClusterSequence { direction: Direction::Left, clusters: stack.clusters(), covered }
}

/// Right clusters for sink `x`: vertices strictly right of `x`.
pub fn right_clusters(net: &PathNetwork, s: &Scenario, x: &PointOnPath) -> ClusterSequence {
    let covered = right_range(net, x);
    let stack = sweep(net, s, Direction::Right, covered.clone());
    ClusterSequence { direction: Direction::Right, clusters: stack.clusters(), covered }
}

/// Total evacuation time of a cluster sequence toward a sink at `x`.
pub fn cluster_cost(net: &PathNetwork, seq: &ClusterSequence, x: f64) -> f64 {
    let (tau, c) = (net.tau(), net.capacity());
    seq.clusters
        .iter()
        .map(|cl| {
            let d = (x - net.position(cl.head)).abs();
            cl.weight * tau * d + cl.weight * cl.weight / (2.0 * c)
        })
        .sum()
}

/// Total evacuation time of the supplies strictly left of `x`.
pub fn cost_left(net: &PathNetwork, s: &Scenario, x: &PointOnPath) -> f64 {
    cluster_cost(net, &left_clusters(net, s, x), x.coordinate)
}

/// Total evacuation time of the supplies strictly right of `x`.
pub fn cost_right(net: &PathNetwork, s: &Scenario, x: &PointOnPath) -> f64 {
    cluster_cost(net, &right_clusters(net, s, x), x.coordinate)
}

/// Total evacuation time to sink `x`. Supply located at `x` itself costs 0.
pub fn cost(net: &PathNetwork, s: &Scenario, x: &PointOnPath) -> f64 {
    cost_left(net, s, x) + cost_right(net, s, x)
}

/// `Φ(x) = slope·x + intercept` on the open edge `edge`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeCostLine {
    pub edge: usize,
    pub slope: f64,
    pub intercept: f64,
}

impl EdgeCostLine {
    pub fn eval(&self, x: f64) -> f64 {
        self.slope * x + self.intercept
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VertexCostTable {
    pub costs: Vec<f64>,
}

/// Vertex costs and edge lines for one scenario, from two linear sweeps.
#[derive(Debug, Clone, PartialEq)]
pub struct CostProfile {
    pub vertex_costs: Vec<f64>,
    pub edge_lines: Vec<EdgeCostLine>,
}

impl CostProfile {
    pub fn median(&self) -> MedianResult {
        median_of(&self.vertex_costs)
    }

    /// Cost at any point, using the vertex table or the edge line.
    pub fn eval(&self, x: &PointOnPath) -> f64 {
        match x.location {
            Location::Vertex(i) => self.vertex_costs[i],
            Location::Edge(e) => self.edge_lines[e].eval(x.coordinate),
        }
    }
}

pub fn cost_profile(net: &PathNetwork, s: &Scenario) -> CostProfile {
    let n = net.len();
    let (tau, c) = (net.tau(), net.capacity());
    let pos = net.positions();

    // left[i]: sums of the left clusters over vertices 0..=i
    let mut left = Vec::with_capacity(n);
    let mut stack = ClusterStack::with_capacity(net, n);
    for i in 0..n {
        stack.push(i, pos[i], s.weight(i));
        left.push(stack.sums());
    }
    // right[i]: sums of the right clusters over vertices i..n
    let mut right = alloc::vec![ClusterSums::default(); n];
    let mut stack = ClusterStack::with_capacity(net, n);
    for i in (0..n).rev() {
        stack.push(i, pos[i], s.weight(i));
        right[i] = stack.sums();
    }

    let none = ClusterSums::default();
    let vertex_costs = (0..n)
        .map(|h| {
            let l = if h > 0 { left[h - 1] } else { none };
            let r = if h + 1 < n { right[h + 1] } else { none };
            let x = pos[h];
            tau * (x * l.weight - l.moment) + tau * (r.moment - x * r.weight) + (l.square + r.square) / (2.0 * c)
        })
        .collect();
    let edge_lines = (0..n.saturating_sub(1))
        .map(|e| {
            let (l, r) = (left[e], right[e + 1]);
            EdgeCostLine {
                edge: e,
                slope: tau * (l.weight - r.weight),
                intercept: tau * (r.moment - l.moment) + (l.square + r.square) / (2.0 * c),
            }
        })
        .collect();
    CostProfile { vertex_costs, edge_lines }
}

/// `Φ(v_i)` for every vertex in linear time.
pub fn vertex_costs_all(net: &PathNetwork, s: &Scenario) -> VertexCostTable {
    VertexCostTable { costs: cost_profile(net, s).vertex_costs }
}

/// Linear cost function on every edge in linear time.
pub fn edge_lines(net: &PathNetwork, s: &Scenario) -> Vec<EdgeCostLine> {
    cost_profile(net, s).edge_lines
}

/// Left cluster sequences for a sink on each edge `e_h`, as produced by the
/// incremental sweep. Entry `h` covers vertices `0..=h`.
pub fn left_sweep_snapshots(net: &PathNetwork, s: &Scenario) -> Vec<ClusterSequence> {
    let mut stack = ClusterStack::with_capacity(net, net.len());
    (0..net.len())
        .map(|h| {
            stack.push(h, net.position(h), s.weight(h));
            ClusterSequence { direction: Direction::Left, clusters: stack.clusters(), covered: 0..h + 1 }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MedianResult {
    pub vertex: usize,
    pub cost: f64,
}

fn median_of(costs: &[f64]) -> MedianResult {
    let mut best = MedianResult { vertex: 0, cost: costs[0] };
    for (i, &c) in costs.iter().enumerate().skip(1) {
        if c < best.cost {
            best = MedianResult { vertex: i, cost: c };
        }
    }
    best
}

/// Cost-minimizing vertex; smallest index on ties.
pub fn median(net: &PathNetwork, s: &Scenario) -> MedianResult {
    median_of(&vertex_costs_all(net, s).costs)
}
