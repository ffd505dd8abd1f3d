//! Path network model: vertex positions, supply intervals, capacity and
//! travel constant, plus scenarios and point classification.
//!
//! Indices are zero-based throughout the API. Error messages print the
//! one-based path labels (`v1`, `e1`, ...) used in the literature.

use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

/// Closed supply interval `[min, max]` of one vertex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightInterval {
    pub min: f64,
    pub max: f64,
}

impl WeightInterval {
    pub const fn new(min: f64, max: f64) -> Self {
        Self { min, max }
    }

    pub fn width(&self) -> f64 {
        self.max - self.min
    }

    pub fn contains(&self, w: f64) -> bool {
        self.min <= w && w <= self.max
    }

    pub fn is_degenerate(&self) -> bool {
        self.min == self.max
    }
}

/// Fields that can fail validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Position,
    WeightMin,
    WeightMax,
    Capacity,
    Tau,
    Scenario,
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Field::Position => "position",
            Field::WeightMin => "weight_min",
            Field::WeightMax => "weight_max",
            Field::Capacity => "capacity",
            Field::Tau => "tau",
            Field::Scenario => "scenario weight",
        })
    }
}

/// One-based vertex label for messages.
struct V(usize);

impl fmt::Display for V {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0 + 1)
    }
}

/// One-based edge label for messages.
struct E(usize);

impl fmt::Display for E {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0 + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NetworkError {
    #[error("network must contain at least one vertex")]
    Empty,
    #[error("expected {expected} entries, got {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("{field} must be finite at vertex {}", V(*index))]
    NonFinite { field: Field, index: usize },
    #[error("edge length must be positive at edge {}", E(*edge))]
    NonPositiveEdge { edge: usize },
    #[error("weight_min must be positive at vertex {}", V(*vertex))]
    NonPositiveWeight { vertex: usize },
    #[error("weight_min exceeds weight_max at vertex {}", V(*vertex))]
    InvertedInterval { vertex: usize },
    #[error("capacity must be positive and finite, got {0}")]
    InvalidCapacity(f64),
    #[error("tau must be positive and finite, got {0}")]
    InvalidTau(f64),
    #[error("coordinate {coordinate} lies outside [0, {length}]")]
    OutOfRange { coordinate: f64, length: f64 },
    #[error("weight {weight} outside its interval at vertex {}", V(*vertex))]
    WeightOutOfInterval { vertex: usize, weight: f64 },
}

/// Where a point sits: exactly on a vertex or strictly inside an edge.
///
/// Edge `i` joins vertices `i` and `i + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Location {
    Vertex(usize),
    Edge(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointOnPath {
    /// Normalized coordinate (the first vertex sits at 0).
    pub coordinate: f64,
    pub location: Location,
}

impl PointOnPath {
    pub fn vertex(&self) -> Option<usize> {
        match self.location {
            Location::Vertex(i) => Some(i),
            Location::Edge(_) => None,
        }
    }

    pub fn edge(&self) -> Option<usize> {
        match self.location {
            Location::Edge(i) => Some(i),
            Location::Vertex(_) => None,
        }
    }

    /// Index of the last vertex strictly left of the point.
    pub(crate) fn last_left(&self) -> Option<usize> {
        match self.location {
            Location::Vertex(h) => h.checked_sub(1),
            Location::Edge(h) => Some(h),
        }
    }

    /// Index of the first vertex strictly right of the point.
    pub(crate) fn first_right(&self) -> usize {
        match self.location {
            Location::Vertex(h) => h + 1,
            Location::Edge(h) => h + 1,
        }
    }
}

/// A dynamic path network with interval supplies.
///
/// Positions are stored normalized so that the first vertex is at 0; the
/// original offset is kept in [`PathNetwork::origin`].
#[derive(Debug, Clone, PartialEq)]
pub struct PathNetwork {
    positions: Vec<f64>,
    intervals: Vec<WeightInterval>,
    capacity: f64,
    tau: f64,
    origin: f64,
    absolute: Vec<f64>,
}

impl PathNetwork {
    /// Validates and normalizes a network given in absolute positions.
    pub fn new(
        positions: Vec<f64>,
        intervals: Vec<WeightInterval>,
        capacity: f64,
        tau: f64,
    ) -> Result<Self, NetworkError> {
        if positions.is_empty() {
            return Err(NetworkError::Empty);
        }
        if intervals.len() != positions.len() {
            return Err(NetworkError::LengthMismatch {
                expected: positions.len(),
                found: intervals.len(),
            });
        }
        if !(capacity.is_finite() && capacity > 0.0) {
            return Err(NetworkError::InvalidCapacity(capacity));
        }
        if !(tau.is_finite() && tau > 0.0) {
            return Err(NetworkError::InvalidTau(tau));
        }
        for (index, p) in positions.iter().enumerate() {
            if !p.is_finite() {
                return Err(NetworkError::NonFinite { field: Field::Position, index });
            }
        }
        for (edge, pair) in positions.windows(2).enumerate() {
            if !(pair[1] > pair[0]) {
                return Err(NetworkError::NonPositiveEdge { edge });
            }
        }
        for (vertex, iv) in intervals.iter().enumerate() {
            if !iv.min.is_finite() {
                return Err(NetworkError::NonFinite { field: Field::WeightMin, index: vertex });
            }
            if !iv.max.is_finite() {
                return Err(NetworkError::NonFinite { field: Field::WeightMax, index: vertex });
            }
            if !(iv.min > 0.0) {
                return Err(NetworkError::NonPositiveWeight { vertex });
            }
            if iv.min > iv.max {
                return Err(NetworkError::InvertedInterval { vertex });
            }
        }

        let origin = positions[0];
        let absolute = positions;
        let positions: Vec<f64> = absolute.iter().map(|p| p - origin).collect();
        // Large offsets can collapse distinct positions after the shift.
        for (edge, pair) in positions.windows(2).enumerate() {
            if !(pair[1] > pair[0]) {
                return Err(NetworkError::NonPositiveEdge { edge });
            }
        }
        Ok(Self { positions, intervals, capacity, tau, origin, absolute })
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    /// Always false; a network has at least one vertex.
    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.len() - 1
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn position(&self, i: usize) -> f64 {
        self.positions[i]
    }

    pub fn intervals(&self) -> &[WeightInterval] {
        &self.intervals
    }

    pub fn interval(&self, i: usize) -> WeightInterval {
        self.intervals[i]
    }

    pub fn capacity(&self) -> f64 {
        self.capacity
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Absolute position of the first vertex in the input document.
    pub fn origin(&self) -> f64 {
        self.origin
    }

    /// Normalized coordinate of the last vertex.
    pub fn length(&self) -> f64 {
        self.positions[self.len() - 1]
    }

    pub fn edge_length(&self, edge: usize) -> f64 {
        self.positions[edge + 1] - self.positions[edge]
    }

    pub fn min_edge_length(&self) -> Option<f64> {
        (0..self.edge_count()).map(|e| self.edge_length(e)).reduce(f64::min)
    }

    /// Vertex positions exactly as given to [`PathNetwork::new`].
    pub fn absolute_positions(&self) -> &[f64] {
        &self.absolute
    }

    pub fn to_absolute(&self, x: f64) -> f64 {
        x + self.origin
    }

    /// Classifies a normalized coordinate as a vertex or an open edge.
    pub fn locate(&self, x: f64) -> Result<PointOnPath, NetworkError> {
        let length = self.length();
        if !(0.0..=length).contains(&x) {
            return Err(NetworkError::OutOfRange { coordinate: x, length });
        }
        // first index with position >= x
        let k = self.positions.partition_point(|&p| p < x);
        let location = if self.positions[k] == x {
            Location::Vertex(k)
        } else {
            Location::Edge(k - 1)
        };
        Ok(PointOnPath { coordinate: x, location })
    }

    pub fn vertex_point(&self, i: usize) -> PointOnPath {
        PointOnPath { coordinate: self.positions[i], location: Location::Vertex(i) }
    }

    /// Validates a weight vector against the intervals. No clamping.
    pub fn scenario(&self, weights: Vec<f64>) -> Result<Scenario, NetworkError> {
        if weights.len() != self.len() {
            return Err(NetworkError::LengthMismatch { expected: self.len(), found: weights.len() });
        }
        for (vertex, (&w, iv)) in weights.iter().zip(&self.intervals).enumerate() {
            if !w.is_finite() {
                return Err(NetworkError::NonFinite { field: Field::Scenario, index: vertex });
            }
            if !iv.contains(w) {
                return Err(NetworkError::WeightOutOfInterval { vertex, weight: w });
            }
        }
        Ok(Scenario { weights })
    }

    /// Every vertex at its lower bound.
    pub fn min_scenario(&self) -> Scenario {
        Scenario { weights: self.intervals.iter().map(|iv| iv.min).collect() }
    }

    /// Every vertex at its upper bound.
    pub fn max_scenario(&self) -> Scenario {
        Scenario { weights: self.intervals.iter().map(|iv| iv.max).collect() }
    }

    /// Mirror image: vertex `i` becomes vertex `n - 1 - i`.
    pub fn reflect(&self) -> PathNetwork {
        let end = self.length();
        let positions: Vec<f64> = self.positions.iter().rev().map(|p| end - p).collect();
        PathNetwork {
            absolute: positions.clone(),
            positions,
            intervals: self.intervals.iter().rev().copied().collect(),
            capacity: self.capacity,
            tau: self.tau,
            origin: 0.0,
        }
    }

    /// Mirror image of a point under [`PathNetwork::reflect`].
    pub fn reflect_point(&self, x: &PointOnPath) -> PointOnPath {
        let n = self.len();
        let location = match x.location {
            Location::Vertex(i) => Location::Vertex(n - 1 - i),
            Location::Edge(i) => Location::Edge(n - 2 - i),
        };
        PointOnPath { coordinate: self.length() - x.coordinate, location }
    }
}

/// One supply value per vertex, inside the network's intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    weights: Vec<f64>,
}

impl Scenario {
    /// Skips validation; callers guarantee the interval bounds.
    pub(crate) fn from_weights_unchecked(weights: Vec<f64>) -> Self {
        Self { weights }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn reversed(&self) -> Scenario {
        Scenario { weights: self.weights.iter().rev().copied().collect() }
    }

    pub fn into_weights(self) -> Vec<f64> {
        self.weights
    }
}

/// Reference instances used across tests and documentation.
pub mod fixtures {
    use super::{PathNetwork, WeightInterval};
    use alloc::vec;

    /// Positions (0, 3, 4), unit capacity and tau, every interval `[1, 1]`.
    pub fn fixture_a() -> PathNetwork {
        PathNetwork::new(
            vec![0.0, 3.0, 4.0],
            vec![WeightInterval::new(1.0, 1.0); 3],
            1.0,
            1.0,
        )
        .expect("fixture A is valid")
    }

    /// Fixture A with the middle interval widened to `[0.5, 2]`.
    pub fn fixture_b() -> PathNetwork {
        PathNetwork::new(
            vec![0.0, 3.0, 4.0],
            vec![
                WeightInterval::new(1.0, 1.0),
                WeightInterval::new(0.5, 2.0),
                WeightInterval::new(1.0, 1.0),
            ],
            1.0,
            1.0,
        )
        .expect("fixture B is valid")
    }
}
