//! Output documents. Every real number is rounded to 12 significant digits
//! and printed in shortest form, so identical runs give identical bytes.

use regret_median_core::evacuation::MedianResult;
use regret_median_core::network::Location;
use regret_median_core::scenarios::{CriticalKind, UniverseMember};
use regret_median_core::{PathNetwork, PointOnPath, ScenarioUniverse, Side, Solution};
use serde::{Serialize, Serializer};

use crate::instance::absolute;

/// A real printed with 12 significant digits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

pub fn round12(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    let r: f64 = format!("{x:.11e}").parse().expect("formatted float");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(round12(self.0))
    }
}

impl std::fmt::Display for Num {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&serde_json::to_string(self).expect("finite number"))
    }
}

fn nums(xs: &[f64]) -> Vec<Num> {
    xs.iter().copied().map(Num).collect()
}

#[derive(Debug, Serialize)]
pub struct PointDoc {
    pub coordinate: Num,
    pub location: &'static str,
    pub index: usize,
}

impl PointDoc {
    pub fn new(net: &PathNetwork, x: &PointOnPath) -> Self {
        let (location, index) = match x.location {
            Location::Vertex(v) => ("vertex", v),
            Location::Edge(e) => ("edge", e),
        };
        Self { coordinate: Num(absolute(net, x)), location, index }
    }
}

#[derive(Debug, Serialize)]
pub struct MemberDoc {
    /// Position in the universe.
    pub member: usize,
    pub anchor: usize,
    pub side: &'static str,
    pub intermediate: usize,
    pub weight: Num,
    pub kind: &'static str,
    pub weights: Vec<Num>,
}

impl MemberDoc {
    pub fn new(net: &PathNetwork, member: usize, m: &UniverseMember) -> Self {
        let spec = m.critical.spec;
        Self {
            member,
            anchor: m.anchor,
            side: match spec.side {
                Side::Left => "left",
                Side::Right => "right",
            },
            intermediate: spec.intermediate,
            weight: Num(spec.weight),
            kind: match m.critical.kind {
                CriticalKind::Endpoint => "endpoint",
                CriticalKind::Merge => "merge",
            },
            weights: nums(spec.realize(net).weights()),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct VertexReportDoc {
    pub index: usize,
    pub r_max: Num,
    pub witness_ref: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct EdgeReportDoc {
    pub index: usize,
    pub x: Num,
    pub value: Num,
    pub witness_ref: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct SolutionDoc {
    pub x_star: PointDoc,
    pub value: Num,
    pub witness: Option<MemberDoc>,
    pub vertices: Vec<VertexReportDoc>,
    pub edges: Vec<EdgeReportDoc>,
    pub universe_size: usize,
    #[serde(skip)]
    vertex_positions: Vec<f64>,
}

/// Absolute coordinate of a normalized one.
fn absolute_at(net: &PathNetwork, x: f64) -> f64 {
    net.locate(x).map_or_else(|_| net.to_absolute(x), |p| absolute(net, &p))
}

impl SolutionDoc {
    pub fn new(net: &PathNetwork, universe: &ScenarioUniverse, sol: &Solution) -> Self {
        Self {
            x_star: PointDoc::new(net, &sol.x_star),
            value: Num(sol.value),
            witness: sol.witness.as_ref().map(|w| MemberDoc::new(net, w.member, &universe.members[w.member])),
            vertices: sol
                .vertices
                .iter()
                .map(|v| VertexReportDoc { index: v.vertex, r_max: Num(v.value), witness_ref: v.witness })
                .collect(),
            edges: sol
                .edges
                .iter()
                .map(|e| EdgeReportDoc {
                    index: e.edge,
                    x: Num(absolute_at(net, e.x)),
                    value: Num(e.value),
                    witness_ref: e.witness,
                })
                .collect(),
            universe_size: sol.universe_size,
            vertex_positions: net.absolute_positions().to_vec(),
        }
    }

    /// Vertex values and edge minima as `x,r_max` rows in coordinate order.
    pub fn to_csv(&self) -> String {
        let mut rows: Vec<(f64, u8, Num)> = self
            .vertices
            .iter()
            .zip(&self.vertex_positions)
            .map(|(v, &x)| (x, 0, v.r_max))
            .collect();
        rows.extend(self.edges.iter().map(|e| (e.x.0, 1, e.value)));
        rows.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut out = String::from("x,r_max\n");
        for (x, _, v) in rows {
            out.push_str(&format!("{},{}\n", Num(x), v));
        }
        out
    }
}

#[derive(Debug, Serialize)]
pub struct UniverseDoc {
    pub size: usize,
    pub raw_count: usize,
    pub members: Vec<MemberDoc>,
}

impl UniverseDoc {
    pub fn new(net: &PathNetwork, universe: &ScenarioUniverse) -> Self {
        Self {
            size: universe.len(),
            raw_count: universe.raw_count,
            members: universe.members.iter().enumerate().map(|(k, m)| MemberDoc::new(net, k, m)).collect(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("member,anchor,side,intermediate,weight,kind,weights\n");
        for m in &self.members {
            let weights: Vec<String> = m.weights.iter().map(ToString::to_string).collect();
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                m.member,
                m.anchor,
                m.side,
                m.intermediate,
                m.weight,
                m.kind,
                weights.join(";")
            ));
        }
        out
    }
}

#[derive(Debug, Serialize)]
pub struct CostDoc {
    pub x: PointDoc,
    pub cost: Num,
    pub left: Num,
    pub right: Num,
}

#[derive(Debug, Serialize)]
pub struct MedianDoc {
    pub vertex: usize,
    pub position: Num,
    pub cost: Num,
}

impl MedianDoc {
    pub fn new(net: &PathNetwork, m: &MedianResult) -> Self {
        Self { vertex: m.vertex, position: Num(net.absolute_positions()[m.vertex]), cost: Num(m.cost) }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CurveRow {
    pub x: Num,
    pub r_max: Num,
}

#[derive(Debug, Serialize)]
pub struct CurveDoc {
    pub samples: Vec<CurveRow>,
}

impl CurveDoc {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,r_max\n");
        for row in &self.samples {
            out.push_str(&format!("{},{}\n", row.x, row.r_max));
        }
        out
    }
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut out = serde_json::to_string_pretty(doc).expect("plain data");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_keeps_twelve_digits() {
        assert_eq!(round12(0.1 + 0.2), 0.3);
        assert_eq!(round12(1.0 / 3.0), 0.333333333333);
        assert_eq!(round12(-0.0), 0.0);
        assert_eq!(Num(3.0).to_string(), "3.0");
        assert_eq!(Num(123456789.123456789).to_string(), "123456789.123");
        assert_eq!(Num(2.5e-9).to_string(), "2.5e-9");
    }
}
