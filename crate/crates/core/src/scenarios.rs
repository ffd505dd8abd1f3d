//! Bipartite, pseudo-bipartite and critical pseudo-bipartite scenarios.
//!
//! A left-pseudo-bipartite scenario `s_L(i, w)` puts every vertex before the
//! intermediate vertex `i` at its upper bound, every vertex after it at its
//! lower bound, and `w` on `i` itself; the right family is the mirror image.
//! For an anchor vertex `y`, the critical members of the left family are the
//! intermediate weights at which a right cluster for `y` absorbs the next
//! one, plus both interval endpoints. They are produced by a single sweep
//! that raises the intermediate weight from left to right.

use alloc::vec::Vec;

use hashbrown::HashMap;
use thiserror::Error;

use crate::evacuation::{Cluster, ClusterStack};
use crate::network::{PathNetwork, Scenario};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("split {split} outside 1..{n}")]
    SplitOutOfRange { split: usize, n: usize },
    #[error("vertex index {index} out of range for {n} vertices")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("intermediate weight {weight} outside [{min}, {max}]")]
    WeightOutOfInterval { weight: f64, min: f64, max: f64 },
}

/// Left-bipartite: the first `split` vertices at their upper bound, the rest
/// at their lower bound. Right-bipartite swaps the bounds.
pub fn bipartite(net: &PathNetwork, side: Side, split: usize) -> Result<Scenario, ScenarioError> {
    let n = net.len();
    if split == 0 || split >= n {
        return Err(ScenarioError::SplitOutOfRange { split, n });
    }
    let weights = net
        .intervals()
        .iter()
        .enumerate()
        .map(|(j, iv)| match (side, j < split) {
            (Side::Left, true) | (Side::Right, false) => iv.max,
            (Side::Left, false) | (Side::Right, true) => iv.min,
        })
        .collect();
    Ok(Scenario::from_weights_unchecked(weights))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PseudoBipartiteSpec {
    pub side: Side,
    pub intermediate: usize,
    pub weight: f64,
}

impl PseudoBipartiteSpec {
    /// Weight of vertex `j` under this scenario.
    #[inline]
    pub fn weight_at(&self, net: &PathNetwork, j: usize) -> f64 {
        let iv = net.interval(j);
        if j == self.intermediate {
            return self.weight;
        }
        match (self.side, j < self.intermediate) {
            (Side::Left, true) | (Side::Right, false) => iv.max,
            (Side::Left, false) | (Side::Right, true) => iv.min,
        }
    }

    /// Realized weight vector; the spec must already be valid for `net`.
    pub fn realize(&self, net: &PathNetwork) -> Scenario {
        Scenario::from_weights_unchecked((0..net.len()).map(|j| self.weight_at(net, j)).collect())
    }
}

/// Realizes a pseudo-bipartite scenario. Any vertex may be intermediate; an
/// intermediate at either end of the path gives a bipartite scenario.
pub fn pseudo_bipartite(net: &PathNetwork, spec: &PseudoBipartiteSpec) -> Result<Scenario, ScenarioError> {
    let n = net.len();
    if spec.intermediate >= n {
        return Err(ScenarioError::IndexOutOfRange { index: spec.intermediate, n });
    }
    let iv = net.interval(spec.intermediate);
    if !iv.contains(spec.weight) {
        return Err(ScenarioError::WeightOutOfInterval { weight: spec.weight, min: iv.min, max: iv.max });
    }
    Ok(spec.realize(net))
}

/// Why a critical scenario was emitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CriticalKind {
    /// Intermediate weight at its lower or upper bound.
    Endpoint,
    /// Intermediate weight at which a cluster merge happens.
    Merge,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalScenario {
    pub spec: PseudoBipartiteSpec,
    pub kind: CriticalKind,
}

/// Critical pseudo-bipartite scenarios for one anchor vertex: the left
/// family (intermediates right of the anchor) followed by the right family
/// (intermediates left of it), each in sweep order.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalScenarioSet {
    pub anchor: usize,
    pub members: Vec<CriticalScenario>,
}

impl CriticalScenarioSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn side(&self, side: Side) -> impl Iterator<Item = &CriticalScenario> + '_ {
        self.members.iter().filter(move |m| m.spec.side == side)
    }

    pub fn scenarios<'a>(&'a self, net: &'a PathNetwork) -> impl Iterator<Item = Scenario> + 'a {
        self.members.iter().map(move |m| m.spec.realize(net))
    }
}

/// Critical weights of the left family for anchor `anchor`, in sweep order:
/// intermediate index ascending, then weight ascending.
fn left_family(net: &PathNetwork, anchor: usize, out: &mut Vec<(usize, f64, CriticalKind)>) {
    let n = net.len();
    let first = anchor + 1;
    if first >= n {
        return;
    }
    let (tau, c) = (net.tau(), net.capacity());
    let pos = net.positions();

    // Right clusters for the anchor under s_L(first, w⁻): every vertex right
    // of the anchor at its lower bound. Bottom of the stack is the far end,
    // top is the cluster containing the current intermediate vertex.
    let mut stack = ClusterStack::with_capacity(net, n - first);
    for j in (first..n).rev() {
        stack.push(j, pos[j], net.interval(j).min);
    }
    let mut clusters: Vec<Cluster> = stack.clusters();

    for i in first..n {
        let iv = net.interval(i);
        // s_L(i, w⁻_i) equals s_L(i - 1, w⁺_{i - 1}); the clusters carry
        // over, but v_i may head the next cluster out.
        let len = clusters.len();
        if len >= 2 && clusters[len - 2].head == i {
            clusters.pop();
        }
        out.push((i, iv.min, CriticalKind::Endpoint));

        let mut omega = iv.min;
        let mut at_max = omega == iv.max;
        while clusters.len() >= 2 {
            let len = clusters.len();
            let (cur, next) = (clusters[len - 1], clusters[len - 2]);
            let gap = pos[next.head] - pos[cur.head];
            if tau * gap <= cur.weight / c {
                // already caught up: cascade at the current weight
                merge_top(&mut clusters);
                continue;
            }
            let w = omega + c * tau * gap - cur.weight;
            if w <= omega {
                // rounding disagrees with the separation test; treat as caught up
                merge_top(&mut clusters);
                continue;
            }
            if w > iv.max {
                break;
            }
            clusters[len - 1].weight += w - omega;
            omega = w;
            merge_top(&mut clusters);
            if w == iv.max {
                out.push((i, w, CriticalKind::Endpoint));
                at_max = true;
            } else {
                out.push((i, w, CriticalKind::Merge));
            }
        }
        if !at_max {
            if let Some(top) = clusters.last_mut() {
                top.weight += iv.max - omega;
            }
            out.push((i, iv.max, CriticalKind::Endpoint));
        }
    }
}

/// Merges the second cluster from the top into the top one.
fn merge_top(clusters: &mut Vec<Cluster>) {
    let top = clusters.pop().expect("two clusters");
    let next = clusters.last_mut().expect("two clusters");
    *next = Cluster { head: top.head, weight: top.weight + next.weight };
}

fn critical_set_with(net: &PathNetwork, mirror: &PathNetwork, anchor: usize, buf: &mut Vec<(usize, f64, CriticalKind)>) -> CriticalScenarioSet {
    let n = net.len();
    let mut members = Vec::new();
    buf.clear();
    left_family(net, anchor, buf);
    members.extend(buf.iter().map(|&(i, w, kind)| CriticalScenario {
        spec: PseudoBipartiteSpec { side: Side::Left, intermediate: i, weight: w },
        kind,
    }));
    buf.clear();
    left_family(mirror, n - 1 - anchor, buf);
    members.extend(buf.iter().map(|&(i, w, kind)| CriticalScenario {
        spec: PseudoBipartiteSpec { side: Side::Right, intermediate: n - 1 - i, weight: w },
        kind,
    }));
    CriticalScenarioSet { anchor, members }
}

/// All critical pseudo-bipartite scenarios for anchor vertex `anchor`, in
/// linear time.
pub fn critical_set_for_vertex(net: &PathNetwork, anchor: usize) -> CriticalScenarioSet {
    critical_set_with(net, &net.reflect(), anchor, &mut Vec::new())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniverseMember {
    /// Anchor of the first critical set that produced this weight vector.
    pub anchor: usize,
    pub critical: CriticalScenario,
}

impl UniverseMember {
    pub fn spec(&self) -> &PseudoBipartiteSpec {
        &self.critical.spec
    }
}

/// Deduplicated union of the critical sets of all anchors, ordered by
/// anchor, side and sweep order. Members store specs and are realized on
/// demand.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioUniverse {
    pub members: Vec<UniverseMember>,
    /// Number of critical scenarios before deduplication.
    pub raw_count: usize,
    /// Largest single critical set.
    pub max_set_len: usize,
}

impl ScenarioUniverse {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn scenario(&self, net: &PathNetwork, index: usize) -> Scenario {
        self.members[index].critical.spec.realize(net)
    }

    pub fn scenarios<'a>(&'a self, net: &'a PathNetwork) -> impl Iterator<Item = Scenario> + 'a {
        self.members.iter().map(move |m| m.critical.spec.realize(net))
    }
}

fn same_weights(net: &PathNetwork, a: &PseudoBipartiteSpec, b: &PseudoBipartiteSpec) -> bool {
    (0..net.len()).all(|j| a.weight_at(net, j).to_bits() == b.weight_at(net, j).to_bits())
}

/// Builds the scenario universe; duplicates are detected by exact equality
/// of the realized weight vectors and the first occurrence is kept.
pub fn universe(net: &PathNetwork) -> ScenarioUniverse {
    use core::hash::{BuildHasher, Hasher};

    let mirror = net.reflect();
    let hasher = hashbrown::DefaultHashBuilder::default();
    let mut buckets: HashMap<u64, Vec<usize>> = HashMap::new();
    let mut members: Vec<UniverseMember> = Vec::new();
    let mut buf = Vec::new();
    let mut raw_count = 0;
    let mut max_set_len = 0;

    for anchor in 0..net.len() {
        let set = critical_set_with(net, &mirror, anchor, &mut buf);
        raw_count += set.len();
        max_set_len = max_set_len.max(set.len());
        for critical in set.members {
            let mut h = hasher.build_hasher();
            for j in 0..net.len() {
                h.write_u64(critical.spec.weight_at(net, j).to_bits());
            }
            let bucket = buckets.entry(h.finish()).or_default();
            if bucket.iter().any(|&k| same_weights(net, &members[k].critical.spec, &critical.spec)) {
                continue;
            }
            bucket.push(members.len());
            members.push(UniverseMember { anchor, critical });
        }
    }
    ScenarioUniverse { members, raw_count, max_set_len }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::fixtures::*;
    use crate::network::WeightInterval;
    use alloc::vec;

    fn left_weights(set: &CriticalScenarioSet, i: usize) -> Vec<f64> {
        set.side(Side::Left).filter(|m| m.spec.intermediate == i).map(|m| m.spec.weight).collect()
    }

    #[test]
    fn bipartite_fixture_b() {
        let net = fixture_b();
        assert_eq!(bipartite(&net, Side::Left, 1).unwrap().weights(), &[1.0, 0.5, 1.0]);
        assert_eq!(bipartite(&net, Side::Right, 2).unwrap().weights(), &[1.0, 0.5, 1.0]);
        assert_eq!(bipartite(&net, Side::Left, 2).unwrap().weights(), &[1.0, 2.0, 1.0]);
        assert!(bipartite(&net, Side::Left, 0).is_err());
        assert!(bipartite(&net, Side::Left, 3).is_err());
        let a = fixture_a();
        for side in [Side::Left, Side::Right] {
            for split in 1..3 {
                assert_eq!(bipartite(&a, side, split).unwrap().weights(), &[1.0; 3]);
            }
        }
    }

    #[test]
    fn pseudo_bipartite_fixture_b() {
        let net = fixture_b();
        let spec = |side, weight| PseudoBipartiteSpec { side, intermediate: 1, weight };
        assert_eq!(pseudo_bipartite(&net, &spec(Side::Left, 1.3)).unwrap().weights(), &[1.0, 1.3, 1.0]);
        assert!(matches!(
            pseudo_bipartite(&net, &spec(Side::Left, 2.5)),
            Err(ScenarioError::WeightOutOfInterval { .. })
        ));
        assert_eq!(pseudo_bipartite(&net, &spec(Side::Right, 0.5)).unwrap().weights(), &[1.0, 0.5, 1.0]);
        let bad = PseudoBipartiteSpec { side: Side::Left, intermediate: 3, weight: 1.0 };
        assert!(matches!(pseudo_bipartite(&net, &bad), Err(ScenarioError::IndexOutOfRange { .. })));
    }

    #[test]
    fn fixture_b_anchor_one_merges_at_one() {
        let net = fixture_b();
        let set = critical_set_for_vertex(&net, 0);
        assert_eq!(left_weights(&set, 1), vec![0.5, 1.0, 2.0]);
        assert_eq!(left_weights(&set, 2), vec![1.0]);
        let kinds: Vec<_> = set.side(Side::Left).map(|m| m.kind).collect();
        assert_eq!(kinds[1], CriticalKind::Merge);
        // nothing left of v1
        assert_eq!(set.side(Side::Right).count(), 0);
    }

    #[test]
    fn degenerate_intervals_give_one_member_per_intermediate() {
        let net = fixture_a();
        for y in 0..3 {
            let set = critical_set_for_vertex(&net, y);
            assert_eq!(set.side(Side::Left).count(), 2 - y);
            assert_eq!(set.side(Side::Right).count(), y);
            assert!(set.members.iter().all(|m| m.kind == CriticalKind::Endpoint));
        }
    }

    #[test]
    fn universe_fixtures() {
        let a = universe(&fixture_a());
        assert_eq!(a.len(), 1);
        assert_eq!(a.scenario(&fixture_a(), 0).weights(), &[1.0; 3]);

        let net = fixture_b();
        let u = universe(&net);
        let all: Vec<Vec<f64>> = u.scenarios(&net).map(|s| s.into_weights()).collect();
        for w in [[1.0, 0.5, 1.0], [1.0, 1.0, 1.0], [1.0, 2.0, 1.0]] {
            assert!(all.iter().any(|v| v == &w), "missing {w:?}");
        }
        for (k, v) in all.iter().enumerate() {
            assert!(!all[..k].contains(v), "duplicate {v:?}");
        }
    }

    #[test]
    fn merge_exactly_at_upper_bound_is_emitted_once() {
        // v2 in [0.5, 1]: the merge with v3 happens exactly at w = 1
        let iv = vec![
            WeightInterval::new(1.0, 1.0),
            WeightInterval::new(0.5, 1.0),
            WeightInterval::new(1.0, 1.0),
        ];
        let net = PathNetwork::new(vec![0.0, 3.0, 4.0], iv, 1.0, 1.0).unwrap();
        let set = critical_set_for_vertex(&net, 0);
        assert_eq!(left_weights(&set, 1), vec![0.5, 1.0]);
        let last = set.side(Side::Left).find(|m| m.spec.intermediate == 1 && m.spec.weight == 1.0).unwrap();
        assert_eq!(last.kind, CriticalKind::Endpoint);
    }

    #[test]
    fn single_vertex_universe() {
        let net = PathNetwork::new(vec![0.0], vec![WeightInterval::new(1.0, 2.0)], 1.0, 1.0).unwrap();
        let u = universe(&net);
        assert!(u.is_empty());
    }
}
