//! Instance documents.
//!
//! ```json
//! { "tau": 1.0, "capacity": 1.0,
//!   "vertices": [ { "position": 0.0, "weight_min": 1.0, "weight_max": 1.0 } ] }
//! ```
//!
//! Vertices are listed in path order. Positions are absolute; the network
//! normalizes them internally and reports translate back.

use std::path::Path;

use regret_median_core::network::Location;
use regret_median_core::{NetworkError, PathNetwork, PointOnPath, WeightInterval};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDoc {
    pub tau: f64,
    pub capacity: f64,
    pub vertices: Vec<VertexDoc>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexDoc {
    pub position: f64,
    pub weight_min: f64,
    pub weight_max: f64,
}

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed instance document: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("invalid instance: {0}")]
    Invalid(#[from] NetworkError),
}

impl InstanceDoc {
    pub fn to_network(&self) -> Result<PathNetwork, NetworkError> {
        PathNetwork::new(
            self.vertices.iter().map(|v| v.position).collect(),
            self.vertices.iter().map(|v| WeightInterval::new(v.weight_min, v.weight_max)).collect(),
            self.capacity,
            self.tau,
        )
    }

    pub fn from_network(net: &PathNetwork) -> Self {
        Self {
            tau: net.tau(),
            capacity: net.capacity(),
            vertices: net
                .absolute_positions()
                .iter()
                .zip(net.intervals())
                .map(|(&position, iv)| VertexDoc { position, weight_min: iv.min, weight_max: iv.max })
                .collect(),
        }
    }
}

pub fn parse_instance(text: &str) -> Result<PathNetwork, InstanceError> {
    let doc: InstanceDoc = serde_json::from_str(text)?;
    Ok(doc.to_network()?)
}

pub fn read_instance(path: &Path) -> Result<PathNetwork, InstanceError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| InstanceError::Io { path: path.display().to_string(), source })?;
    parse_instance(&text)
}

/// Pretty JSON with shortest round-trip number formatting.
pub fn serialize_instance(net: &PathNetwork) -> String {
    let mut out = serde_json::to_string_pretty(&InstanceDoc::from_network(net)).expect("plain data");
    out.push('\n');
    out
}

/// Classifies an absolute coordinate. Vertex matches compare against the
/// input positions, so a coordinate copied from the document is a vertex.
pub fn locate_absolute(net: &PathNetwork, x: f64) -> Result<PointOnPath, NetworkError> {
    let abs = net.absolute_positions();
    let (first, last) = (abs[0], abs[abs.len() - 1]);
    if !(first..=last).contains(&x) {
        return Err(NetworkError::OutOfRange { coordinate: x, length: last - first });
    }
    let k = abs.partition_point(|&p| p < x);
    if abs[k] == x {
        return Ok(net.vertex_point(k));
    }
    Ok(PointOnPath { coordinate: x - net.origin(), location: Location::Edge(k - 1) })
}

/// Absolute coordinate of a point, exact at vertices.
pub fn absolute(net: &PathNetwork, x: &PointOnPath) -> f64 {
    match x.location {
        Location::Vertex(v) => net.absolute_positions()[v],
        Location::Edge(_) => net.to_absolute(x.coordinate),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIXTURE_A: &str = r#"{"tau": 1.0, "capacity": 1.0, "vertices": [
        {"position": 0.0, "weight_min": 1.0, "weight_max": 1.0},
        {"position": 3.0, "weight_min": 1.0, "weight_max": 1.0},
        {"position": 4.0, "weight_min": 1.0, "weight_max": 1.0}]}"#;

    #[test]
    fn parses_fixture_a() {
        let net = parse_instance(FIXTURE_A).unwrap();
        assert_eq!(net, regret_median_core::network::fixtures::fixture_a());
    }

    #[test]
    fn zero_length_edge_is_named() {
        let text = FIXTURE_A.replace("\"position\": 3.0", "\"position\": 1.0").replace("\"position\": 4.0", "\"position\": 1.0");
        let err = parse_instance(&text).unwrap_err();
        assert_eq!(err.to_string(), "invalid instance: edge length must be positive at edge e2");
    }

    #[test]
    fn syntax_errors_are_distinct() {
        assert!(matches!(parse_instance("{\"tau\": 1.0"), Err(InstanceError::Syntax(_))));
        assert!(matches!(parse_instance("{\"tau\": 1.0, \"capacity\": 1.0}"), Err(InstanceError::Syntax(_))));
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let text = r#"{"tau": 0.30000000000000004, "capacity": 1e-3, "vertices": [
            {"position": 0.1, "weight_min": 0.7, "weight_max": 1.1},
            {"position": 0.30000000000000004, "weight_min": 2.5, "weight_max": 2.5},
            {"position": 1234.5678901234567, "weight_min": 1e-7, "weight_max": 3.3333333333333335}]}"#;
        let net = parse_instance(text).unwrap();
        let again = parse_instance(&serialize_instance(&net)).unwrap();
        assert_eq!(net, again);
        assert_eq!(net.absolute_positions()[1].to_bits(), 0.30000000000000004f64.to_bits());
    }

    #[test]
    fn absolute_vertices_are_exact() {
        let text = FIXTURE_A.replace("\"position\": 0.0", "\"position\": 0.1").replace("3.0", "3.1").replace("4.0", "4.1");
        let net = parse_instance(&text).unwrap();
        let p = locate_absolute(&net, 3.1).unwrap();
        assert_eq!(p.location, Location::Vertex(1));
        assert_eq!(absolute(&net, &p), 3.1);
        assert_eq!(locate_absolute(&net, 3.5).unwrap().location, Location::Edge(1));
        assert!(locate_absolute(&net, 4.2).is_err());
    }
}
