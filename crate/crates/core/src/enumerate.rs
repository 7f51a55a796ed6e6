//! Bounded enumeration of labeled graphs, one representative per
//! label-preserving isomorphism class.

use std::collections::{BTreeMap, BTreeSet};

use crate::canon::{canonical_graph, CanonicalCode};
use crate::graph::{LabeledGraph, MultiGraph};

/// All classes with label set exactly `labels`, at most `max_nodes` nodes and
/// at most `max_edges` edges, ordered by canonical code (node count, then edge
/// count, then the rest of the code). Parallel edges appear iff `multi`.
/// Unlabeled isolated nodes are allowed.
pub fn enumerate_labeled(
    labels: &BTreeSet<u32>,
    max_nodes: usize,
    max_edges: usize,
    multi: bool,
) -> Vec<LabeledGraph> {
    assert!(max_nodes >= labels.len(), "max_nodes must be at least |S|");
    (labels.len()..=max_nodes)
        .flat_map(|n| enumerate_with_nodes(labels, n, max_edges, multi))
        .map(|(_, g)| g)
        .collect()
}

/// Classes with exactly `nodes` nodes, keyed by canonical code. Graphs are
/// returned in canonical node order.
pub fn enumerate_with_nodes(
    labels: &BTreeSet<u32>,
    nodes: usize,
    max_edges: usize,
    multi: bool,
) -> Vec<(CanonicalCode, LabeledGraph)> {
    assert!(nodes >= labels.len());
    let label_list: Vec<u32> = labels.iter().copied().collect();
    let start = LabeledGraph::with_leading_labels(MultiGraph::empty(nodes), &label_list)
        .expect("labels are positive and distinct");
    let mut all: BTreeMap<CanonicalCode, LabeledGraph> = BTreeMap::new();
    let (code, g) = canonical_graph(&start);
    let mut frontier: BTreeMap<CanonicalCode, LabeledGraph> = BTreeMap::from([(code, g)]);
    for _ in 0..max_edges {
        let mut next: BTreeMap<CanonicalCode, LabeledGraph> = BTreeMap::new();
        for g in frontier.values() {
            for u in 0..nodes {
                for v in u + 1..nodes {
                    let m = g.graph().multiplicity(u, v);
                    if (!multi && m > 0) || m == u8::MAX as u32 {
                        continue;
                    }
                    let mut h = g.graph().clone();
                    h.add_edge(u, v).expect("distinct in-range endpoints");
                    let h = LabeledGraph::new(h, g.labels().clone()).expect("same labels");
                    let (code, ch) = canonical_graph(&h);
                    next.entry(code).or_insert(ch);
                }
            }
        }
        all.append(&mut frontier);
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    all.append(&mut frontier);
    all.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::isomorphic;

    #[test]
    fn empty_label_set_one_node_no_edges() {
        let gs = enumerate_labeled(&BTreeSet::new(), 1, 0, false);
        assert_eq!(gs.len(), 2);
        assert_eq!(gs[0].node_count(), 0);
        assert_eq!(gs[1].node_count(), 1);
    }

    #[test]
    fn one_label_two_nodes_one_edge() {
        let gs = enumerate_labeled(&[1].into(), 2, 1, false);
        assert_eq!(gs.len(), 3);
        for (i, a) in gs.iter().enumerate() {
            for b in &gs[i + 1..] {
                assert!(!isomorphic(a, b));
            }
        }
    }

    #[test]
    fn doubled_edge_present_only_with_multi() {
        let has_double = |gs: &[LabeledGraph]| {
            gs.iter()
                .any(|g| g.node_count() == 2 && g.graph().multiplicity(0, 1) == 2)
        };
        assert!(has_double(&enumerate_labeled(&[1, 2].into(), 2, 2, true)));
        assert!(!has_double(&enumerate_labeled(&[1, 2].into(), 2, 2, false)));
    }

    #[test]
    fn unlabeled_simple_graph_counts() {
        // Simple graphs on exactly 4 nodes: 11 classes; on 5 nodes: 34.
        assert_eq!(enumerate_with_nodes(&BTreeSet::new(), 4, 6, false).len(), 11);
        assert_eq!(enumerate_with_nodes(&BTreeSet::new(), 5, 10, false).len(), 34);
    }

    #[test]
    fn labels_need_not_be_consecutive() {
        let gs = enumerate_labeled(&[3, 7].into(), 2, 1, false);
        assert_eq!(gs.len(), 2);
        assert!(gs.iter().all(|g| g.label_set() == [3, 7].into()));
    }
}
