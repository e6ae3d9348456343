//! Partitions of a graph's edge set into color classes.
//!
//! A partition may be partial: edges outside the covered set carry no label.
//! Labels are always canonical, i.e. classes are numbered by their smallest
//! member edge, so two partitions are equal as values exactly when they are
//! equal as partitions of the same covered set.

use crate::graph::EdgeId;
use crate::union_find::UnionFind;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgePartition {
    edge_count: usize,
    label: Vec<Option<usize>>,
    classes: Vec<Vec<EdgeId>>,
}

impl EdgePartition {
    /// Builds a partition from explicit class member lists over a universe of
    /// `edge_count` edges. Panics if an edge is listed twice or out of range.
    pub fn from_class_lists(edge_count: usize, classes: Vec<Vec<EdgeId>>) -> Self {
        let mut label = vec![None; edge_count];
        let mut cleaned: Vec<Vec<EdgeId>> = Vec::new();
        for class in classes {
            if class.is_empty() {
                continue;
            }
            let mut members = class;
            members.sort_unstable();
            members.dedup();
            for &e in &members {
                assert!(e < edge_count, "edge id {e} out of range");
                assert!(label[e].is_none(), "edge id {e} in two classes");
                label[e] = Some(0); // placeholder, relabelled below
            }
            cleaned.push(members);
        }
        // canonical order: classes sorted by smallest member
        cleaned.sort_unstable_by_key(|c| c[0]);
        for (i, class) in cleaned.iter().enumerate() {
            for &e in class {
                label[e] = Some(i);
            }
        }
        EdgePartition {
            edge_count,
            label,
            classes: cleaned,
        }
    }

    /// Builds a partition from a per-edge label vector (None = uncovered).
    /// Input labels are only used for grouping; output labels are canonical.
    pub fn from_labels(labels: &[Option<usize>]) -> Self {
        let mut groups: std::collections::HashMap<usize, Vec<EdgeId>> =
            std::collections::HashMap::new();
        for (e, l) in labels.iter().enumerate() {
            if let Some(l) = l {
                groups.entry(*l).or_default().push(e);
            }
        }
        Self::from_class_lists(labels.len(), groups.into_values().collect())
    }

    /// Groups the given edges by their disjoint-set root.
    pub fn from_union_find(
        edge_count: usize,
        uf: &mut UnionFind,
        covered: impl IntoIterator<Item = EdgeId>,
    ) -> Self {
        let mut groups: std::collections::HashMap<usize, Vec<EdgeId>> =
            std::collections::HashMap::new();
        for e in covered {
            groups.entry(uf.find(e)).or_default().push(e);
        }
        Self::from_class_lists(edge_count, groups.into_values().collect())
    }

    /// One singleton class per edge.
    pub fn singletons(edge_count: usize) -> Self {
        Self::from_class_lists(edge_count, (0..edge_count).map(|e| vec![e]).collect())
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[Vec<EdgeId>] {
        &self.classes
    }

    pub fn members(&self, class: usize) -> &[EdgeId] {
        &self.classes[class]
    }

    /// Canonical label of an edge, None if the edge is not covered.
    pub fn label_of(&self, e: EdgeId) -> Option<usize> {
        self.label[e]
    }

    pub fn covered_count(&self) -> usize {
        self.classes.iter().map(|c| c.len()).sum()
    }

    /// True when every edge of the universe carries a label.
    pub fn is_total(&self) -> bool {
        self.covered_count() == self.edge_count
    }

    /// Sorted list of covered edges.
    pub fn covered_edges(&self) -> Vec<EdgeId> {
        let mut all: Vec<EdgeId> = self.classes.iter().flatten().copied().collect();
        all.sort_unstable();
        all
    }

    /// New partition with classes `a` and `b` merged, relabelled canonically.
    pub fn merge_classes(&self, a: usize, b: usize) -> Self {
        assert!(a != b && a < self.classes.len() && b < self.classes.len());
        let mut classes: Vec<Vec<EdgeId>> = Vec::with_capacity(self.classes.len() - 1);
        let mut merged = self.classes[a].clone();
        merged.extend_from_slice(&self.classes[b]);
        for (i, c) in self.classes.iter().enumerate() {
            if i != a && i != b {
                classes.push(c.clone());
            }
        }
        classes.push(merged);
        Self::from_class_lists(self.edge_count, classes)
    }

    /// Restriction to the given edge subset (classes intersected, empties dropped).
    pub fn restrict(&self, keep: &[EdgeId]) -> Self {
        let mut keep_mask = vec![false; self.edge_count];
        for &e in keep {
            keep_mask[e] = true;
        }
        let classes = self
            .classes
            .iter()
            .map(|c| c.iter().copied().filter(|&e| keep_mask[e]).collect())
            .collect();
        Self::from_class_lists(self.edge_count, classes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_labels_follow_smallest_member() {
        let p = EdgePartition::from_class_lists(5, vec![vec![4, 2], vec![1, 0, 3]]);
        assert_eq!(p.class_count(), 2);
        assert_eq!(p.label_of(0), Some(0));
        assert_eq!(p.label_of(2), Some(1));
        assert_eq!(p.members(0), &[0, 1, 3]);
        assert_eq!(p.members(1), &[2, 4]);
    }

    #[test]
    fn equality_ignores_input_label_names() {
        let a = EdgePartition::from_labels(&[Some(7), Some(7), Some(3)]);
        let b = EdgePartition::from_labels(&[Some(0), Some(0), Some(9)]);
        assert_eq!(a, b);
    }

    #[test]
    fn partial_partitions_track_coverage() {
        let p = EdgePartition::from_labels(&[Some(0), None, Some(0), None]);
        assert!(!p.is_total());
        assert_eq!(p.covered_count(), 2);
        assert_eq!(p.covered_edges(), vec![0, 2]);
        assert_eq!(p.label_of(1), None);
    }

    #[test]
    fn merge_and_restrict() {
        let p = EdgePartition::from_class_lists(6, vec![vec![0, 1], vec![2, 3], vec![4, 5]]);
        let m = p.merge_classes(0, 2);
        assert_eq!(m.class_count(), 2);
        assert_eq!(m.members(0), &[0, 1, 4, 5]);
        let r = p.restrict(&[1, 2, 3]);
        assert_eq!(r.class_count(), 2);
        assert_eq!(r.members(0), &[1]);
        assert_eq!(r.members(1), &[2, 3]);
    }
}
