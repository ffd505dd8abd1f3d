//! Regret evaluation and the minimax regret median.
//!
//! The worst case over all scenarios is attained inside the finite scenario
//! universe, so the solver works with one [`CostProfile`] per member: the
//! maximum regret at each vertex is a plain maximum over members, and on
//! each open edge every member contributes one regret line whose upper
//! envelope is minimized with [`envelope_min_max`]. The answer is the best
//! of the `n` vertex values and `n - 1` edge minima.

use alloc::vec::Vec;

use crate::envelope::{envelope_min_max, upper_hull_on, Line};
use crate::evacuation::{cost_profile, CostProfile};
use crate::network::{Location, PathNetwork, PointOnPath, Scenario};
use crate::scenarios::{universe, PseudoBipartiteSpec, ScenarioUniverse};

/// `Φ(x) − Φ(m)` for scenario `s`. Both terms come from one cost profile,
/// so the result is exactly 0 at the median.
pub fn regret(net: &PathNetwork, s: &Scenario, x: &PointOnPath) -> f64 {
    let profile = cost_profile(net, s);
    profile.eval(x) - profile.median().cost
}

/// `Φ(x) − Φ(y)` for scenario `s`.
pub fn gap(net: &PathNetwork, s: &Scenario, x: &PointOnPath, y: &PointOnPath) -> f64 {
    let profile = cost_profile(net, s);
    profile.eval(x) - profile.eval(y)
}

/// Regret of universe member `scenario` on the open edge `edge`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegretLine {
    pub edge: usize,
    pub slope: f64,
    pub offset: f64,
    pub scenario: usize,
}

impl RegretLine {
    pub fn eval(&self, x: f64) -> f64 {
        self.slope * x + self.offset
    }
}

/// Per-member cost data: vertex costs, edge lines and median cost, stored
/// flat in member order.
#[derive(Debug, Clone)]
pub struct ScenarioTable {
    n: usize,
    median_costs: Vec<f64>,
    vertex_costs: Vec<f64>,
    slopes: Vec<f64>,
    intercepts: Vec<f64>,
}

impl ScenarioTable {
    pub fn new(net: &PathNetwork, universe: &ScenarioUniverse) -> Self {
        let n = net.len();
        let m = universe.len();
        let mut table = Self {
            n,
            median_costs: Vec::with_capacity(m),
            vertex_costs: Vec::with_capacity(m * n),
            slopes: Vec::with_capacity(m * (n - 1)),
            intercepts: Vec::with_capacity(m * (n - 1)),
        };
        for s in universe.scenarios(net) {
            let profile = cost_profile(net, &s);
            table.median_costs.push(profile.median().cost);
            table.vertex_costs.extend_from_slice(&profile.vertex_costs);
            for line in &profile.edge_lines {
                table.slopes.push(line.slope);
                table.intercepts.push(line.intercept);
            }
        }
        table
    }

    pub fn len(&self) -> usize {
        self.median_costs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.median_costs.is_empty()
    }

    pub fn median_cost(&self, k: usize) -> f64 {
        self.median_costs[k]
    }

    pub fn vertex_regret(&self, k: usize, v: usize) -> f64 {
        self.vertex_costs[k * self.n + v] - self.median_costs[k]
    }

    pub fn regret_line(&self, k: usize, edge: usize) -> RegretLine {
        let at = k * (self.n - 1) + edge;
        RegretLine {
            edge,
            slope: self.slopes[at],
            offset: self.intercepts[at] - self.median_costs[k],
            scenario: k,
        }
    }

    /// `R^s(x)` for member `k`.
    pub fn regret(&self, k: usize, x: &PointOnPath) -> f64 {
        match x.location {
            Location::Vertex(v) => self.vertex_regret(k, v),
            Location::Edge(e) => self.regret_line(k, e).eval(x.coordinate),
        }
    }

    /// Maximum regret over all members at `x`, with the first attaining
    /// member.
    pub fn max_regret(&self, x: &PointOnPath) -> (f64, Option<usize>) {
        let mut best = (0.0, None);
        for k in 0..self.len() {
            let r = self.regret(k, x);
            if best.1.is_none() || r > best.0 {
                best = (r, Some(k));
            }
        }
        best
    }

    pub fn vertex_report(&self) -> Vec<VertexRegret> {
        (0..self.n)
            .map(|v| {
                let mut best = VertexRegret { vertex: v, value: 0.0, witness: None };
                for k in 0..self.len() {
                    let r = self.vertex_regret(k, v);
                    if best.witness.is_none() || r > best.value {
                        best.value = r;
                        best.witness = Some(k);
                    }
                }
                best
            })
            .collect()
    }

    pub fn edge_minimum(&self, net: &PathNetwork, edge: usize) -> EdgeRegret {
        let lines: Vec<RegretLine> = (0..self.len()).map(|k| self.regret_line(k, edge)).collect();
        edge_minimum_of(net, edge, &lines)
    }
}

/// Maximum regret at one vertex over the universe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VertexRegret {
    pub vertex: usize,
    pub value: f64,
    /// First attaining universe member.
    pub witness: Option<usize>,
}

/// Minimum over the closed edge of the envelope of regret lines. At an
/// endpoint the envelope is the one-sided limit, which is never below the
/// vertex value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeRegret {
    pub edge: usize,
    pub x: f64,
    pub value: f64,
    pub witness: Option<usize>,
}

fn edge_minimum_of(net: &PathNetwork, edge: usize, lines: &[RegretLine]) -> EdgeRegret {
    let (lo, hi) = (net.position(edge), net.position(edge + 1));
    if lines.is_empty() {
        return EdgeRegret { edge, x: lo, value: 0.0, witness: None };
    }
    let plain: Vec<Line> = lines.iter().map(|l| Line::new(l.slope, l.offset)).collect();
    let best = envelope_min_max(&plain, lo, hi).expect("non-empty lines on a valid edge");
    EdgeRegret { edge, x: best.x, value: best.value, witness: Some(lines[best.active].scenario) }
}

/// Phase 1: maximum regret at every vertex.
pub fn max_regret_at_vertices(net: &PathNetwork, universe: &ScenarioUniverse) -> Vec<VertexRegret> {
    ScenarioTable::new(net, universe).vertex_report()
}

/// Phase 2 for one edge.
pub fn min_max_regret_on_edge(net: &PathNetwork, universe: &ScenarioUniverse, edge: usize) -> EdgeRegret {
    let lines: Vec<RegretLine> = universe
        .scenarios(net)
        .enumerate()
        .map(|(k, s)| {
            let profile = cost_profile(net, &s);
            let line = profile.edge_lines[edge];
            RegretLine { edge, slope: line.slope, offset: line.intercept - profile.median().cost, scenario: k }
        })
        .collect();
    edge_minimum_of(net, edge, &lines)
}

/// How the per-member data is held during a solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Keep every member's vertex costs and edge lines, O(n·|S*|) memory.
    Table,
    /// Fold members in one at a time, keeping only lines that can still
    /// reach the envelope of their edge. Faster than the table at every
    /// size measured, so it is the default.
    #[default]
    Streaming,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SolveOptions {
    pub strategy: Strategy,
}

/// The scenario attaining the reported value at `x*`.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub member: usize,
    pub anchor: usize,
    pub spec: PseudoBipartiteSpec,
    pub scenario: Scenario,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub x_star: PointOnPath,
    pub value: f64,
    /// `None` only for a single-vertex network, where every regret is 0.
    pub witness: Option<Witness>,
    pub vertices: Vec<VertexRegret>,
    pub edges: Vec<EdgeRegret>,
    pub universe_size: usize,
}

/// Minimax regret median with default options.
pub fn solve(net: &PathNetwork) -> Solution {
    solve_with(net, &universe(net), SolveOptions::default())
}

pub fn solve_with(net: &PathNetwork, universe: &ScenarioUniverse, options: SolveOptions) -> Solution {
    let n = net.len();
    let (vertices, edges) = if options.strategy == Strategy::Table {
        let table = ScenarioTable::new(net, universe);
        let vertices = table.vertex_report();
        let edges = (0..n - 1).map(|e| table.edge_minimum(net, e)).collect();
        (vertices, edges)
    } else {
        streaming_reports(net, universe)
    };
    finish(net, universe, vertices, edges)
}

/// Buffer of candidate regret lines for one edge, pruned to the lines that
/// reach the envelope on the edge whenever it doubles in size.
struct EdgeBuffer {
    lines: Vec<Line>,
    members: Vec<usize>,
    limit: usize,
}

impl EdgeBuffer {
    const MIN_LIMIT: usize = 256;

    fn push(&mut self, line: Line, member: usize, lo: f64, hi: f64) {
        self.lines.push(line);
        self.members.push(member);
        if self.lines.len() >= self.limit {
            let mut keep = upper_hull_on(&self.lines, lo, hi);
            keep.sort_unstable();
            self.lines = keep.iter().map(|&k| self.lines[k]).collect();
            self.members = keep.iter().map(|&k| self.members[k]).collect();
            self.limit = (2 * self.lines.len()).max(Self::MIN_LIMIT);
        }
    }
}

fn streaming_reports(net: &PathNetwork, universe: &ScenarioUniverse) -> (Vec<VertexRegret>, Vec<EdgeRegret>) {
    let n = net.len();
    let mut vertices: Vec<VertexRegret> =
        (0..n).map(|v| VertexRegret { vertex: v, value: 0.0, witness: None }).collect();
    let mut buffers: Vec<EdgeBuffer> = (0..n - 1)
        .map(|_| EdgeBuffer { lines: Vec::new(), members: Vec::new(), limit: EdgeBuffer::MIN_LIMIT })
        .collect();
    for (k, s) in universe.scenarios(net).enumerate() {
        let profile: CostProfile = cost_profile(net, &s);
        let m = profile.median().cost;
        for (best, &c) in vertices.iter_mut().zip(&profile.vertex_costs) {
            let r = c - m;
            if best.witness.is_none() || r > best.value {
                best.value = r;
                best.witness = Some(k);
            }
        }
        for (e, line) in profile.edge_lines.iter().enumerate() {
            let (lo, hi) = (net.position(e), net.position(e + 1));
            buffers[e].push(Line::new(line.slope, line.intercept - m), k, lo, hi);
        }
    }
    let edges = buffers
        .iter()
        .enumerate()
        .map(|(e, buf)| {
            let lines: Vec<RegretLine> = buf
                .lines
                .iter()
                .zip(&buf.members)
                .map(|(l, &k)| RegretLine { edge: e, slope: l.slope, offset: l.offset, scenario: k })
                .collect();
            edge_minimum_of(net, e, &lines)
        })
        .collect();
    (vertices, edges)
}

fn finish(
    net: &PathNetwork,
    universe: &ScenarioUniverse,
    vertices: Vec<VertexRegret>,
    edges: Vec<EdgeRegret>,
) -> Solution {
    // candidates in coordinate order; a vertex precedes an edge minimum at
    // the same coordinate
    let mut candidates: Vec<(f64, u8, usize)> = vertices
        .iter()
        .map(|v| (net.position(v.vertex), 0u8, v.vertex))
        .chain(edges.iter().map(|e| (e.x, 1u8, e.edge)))
        .collect();
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let mut best: Option<(f64, PointOnPath, Option<usize>)> = None;
    for (x, kind, index) in candidates {
        let (value, point, witness) = if kind == 0 {
            let v = &vertices[index];
            (v.value, net.vertex_point(index), v.witness)
        } else {
            let e = &edges[index];
            let point = net.locate(x).expect("edge minimizer lies on the edge");
            (e.value, point, e.witness)
        };
        if best.as_ref().map_or(true, |b| value < b.0) {
            best = Some((value, point, witness));
        }
    }
    let (value, x_star, witness) = best.expect("at least one vertex");
    let witness = witness.map(|k| {
        let member = universe.members[k];
        Witness { member: k, anchor: member.anchor, spec: member.critical.spec, scenario: member.critical.spec.realize(net) }
    });
    Solution { x_star, value, witness, vertices, edges, universe_size: universe.len() }
}

/// `R_max(x)` restricted to the universe, for many points at once. Returns
/// one value per point.
pub fn max_regret_curve(net: &PathNetwork, universe: &ScenarioUniverse, points: &[PointOnPath]) -> Vec<f64> {
    let mut out: Vec<Option<f64>> = alloc::vec![None; points.len()];
    for s in universe.scenarios(net) {
        let profile = cost_profile(net, &s);
        let m = profile.median().cost;
        for (slot, x) in out.iter_mut().zip(points) {
            let r = profile.eval(x) - m;
            if slot.map_or(true, |b| r > b) {
                *slot = Some(r);
            }
        }
    }
    out.into_iter().map(|v| v.unwrap_or(0.0)).collect()
}

/// Worst member regret and the first member attaining it.
pub fn max_regret(net: &PathNetwork, universe: &ScenarioUniverse, x: &PointOnPath) -> (f64, Option<usize>) {
    let mut best = (0.0, None);
    for (k, s) in universe.scenarios(net).enumerate() {
        let profile = cost_profile(net, &s);
        let r = profile.eval(x) - profile.median().cost;
        if best.1.is_none() || r > best.0 {
            best = (r, Some(k));
        }
    }
    best
}
