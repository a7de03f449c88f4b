//! Exact k-nearest-neighbor retrieval under any [`ComparatorKind`].
//!
//! Points are ranked by `(comparison value, point index)`, a total order, so
//! equal comparison values are resolved in favor of the lower index and the
//! result never depends on sort stability or on how many neighbors are
//! requested.

use std::cmp::Ordering;

use crate::densities::GroupLabel;
use crate::error::{Error, Result};
use crate::similarity::{compare, ComparatorKind, FeatureVector};

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledPoint {
    pub features: FeatureVector,
    pub label: GroupLabel,
}

impl LabeledPoint {
    pub fn new(features: FeatureVector, label: GroupLabel) -> Self {
        LabeledPoint { features, label }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    /// Position of the point in the input slice.
    pub index: usize,
    pub value: f64,
    pub label: GroupLabel,
}

fn rank_order(a: &Neighbor, b: &Neighbor) -> Ordering {
    a.value.total_cmp(&b.value).then(a.index.cmp(&b.index))
}

/// Neighbors sorted from closest to farthest.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct NeighborSet(Vec<Neighbor>);

impl NeighborSet {
    pub fn as_slice(&self) -> &[Neighbor] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn indices(&self) -> Vec<usize> {
        self.0.iter().map(|n| n.index).collect()
    }

    pub fn labels(&self) -> impl Iterator<Item = GroupLabel> + '_ {
        self.0.iter().map(|n| n.label)
    }

    /// The closest `k` entries (all of them if `k` exceeds the length).
    pub fn truncated(&self, k: usize) -> NeighborSet {
        NeighborSet(self.0[..k.min(self.0.len())].to_vec())
    }

    pub fn from_neighbors(mut neighbors: Vec<Neighbor>) -> Self {
        neighbors.sort_by(rank_order);
        NeighborSet(neighbors)
    }
}

fn comparison_values(
    reference: &FeatureVector,
    points: &[LabeledPoint],
    kind: ComparatorKind,
) -> Result<Vec<Neighbor>> {
    kind.validate()?;
    points
        .iter()
        .enumerate()
        .map(|(index, p)| {
            Ok(Neighbor {
                index,
                value: compare(kind, reference, &p.features)?.value(),
                label: p.label,
            })
        })
        .collect()
}

/// The `k` points closest to `reference`, ties broken by lower index.
pub fn k_nearest(
    reference: &FeatureVector,
    points: &[LabeledPoint],
    k: usize,
    kind: ComparatorKind,
) -> Result<NeighborSet> {
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    if k > points.len() {
        return Err(Error::invalid(format!(
            "k = {k} exceeds the number of points ({})",
            points.len()
        )));
    }
    let mut all = comparison_values(reference, points, kind)?;
    if k < all.len() {
        all.select_nth_unstable_by(k - 1, rank_order);
        all.truncate(k);
    }
    all.sort_by(rank_order);
    Ok(NeighborSet(all))
}

/// Counts `(n_A, n_B)` among the neighbors.
pub fn count_by_group(ns: &NeighborSet) -> (usize, usize) {
    count_labels(ns.labels())
}

pub(crate) fn count_labels(labels: impl Iterator<Item = GroupLabel>) -> (usize, usize) {
    labels.fold((0, 0), |(a, b), label| match label {
        GroupLabel::A => (a + 1, b),
        GroupLabel::B => (a, b + 1),
    })
}

/// Majority label among the `k` nearest neighbors. An exact tie goes to the
/// label of the single nearest neighbor.
pub fn classify(
    reference: &FeatureVector,
    points: &[LabeledPoint],
    k: usize,
    kind: ComparatorKind,
) -> Result<GroupLabel> {
    let ns = k_nearest(reference, points, k, kind)?;
    Ok(majority(&ns))
}

fn majority(ns: &NeighborSet) -> GroupLabel {
    let (a, b) = count_by_group(ns);
    match a.cmp(&b) {
        Ordering::Greater => GroupLabel::A,
        Ordering::Less => GroupLabel::B,
        Ordering::Equal => ns.0[0].label,
    }
}
