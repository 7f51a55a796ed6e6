use std::collections::BTreeMap;
use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use graphhom::canon::canonical;
use graphhom::graph::parse_graph;
use graphhom::hom::{hom, hom_fast, hom_pinned};
use graphhom::params::{GraphParameter, Param};
use graphhom::reconstruct::normalize;
use graphhom::{glue, LabeledGraph, MultiGraph, WeightedTarget};

fn multigraph(max_nodes: usize, max_edges: usize) -> impl Strategy<Value = MultiGraph> {
    (1..=max_nodes).prop_flat_map(move |n| {
        prop::collection::vec((0..n, 0..n), 0..=max_edges).prop_map(move |pairs| {
            let mut g = MultiGraph::empty(n);
            for (a, b) in pairs {
                if a != b {
                    g.add_edge(a, b).unwrap();
                }
            }
            g
        })
    })
}

/// A graph with labels `1..=k` on its first `k` nodes (fewer if it is small).
fn labeled(max_nodes: usize, max_edges: usize, k: u32) -> impl Strategy<Value = LabeledGraph> {
    multigraph(max_nodes, max_edges).prop_map(move |g| {
        let k = (k as usize).min(g.node_count()) as u32;
        let labels: Vec<u32> = (1..=k).collect();
        LabeledGraph::with_leading_labels(g, &labels).unwrap()
    })
}

fn target() -> impl Strategy<Value = WeightedTarget> {
    (1usize..=3, any::<u64>()).prop_map(|(d, seed)| {
        WeightedTarget::random(&mut ChaCha8Rng::seed_from_u64(seed), d, 4, 5, false)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gluing_is_commutative_and_associative(
        a in labeled(4, 5, 2), b in labeled(4, 5, 3), c in labeled(3, 3, 1)
    ) {
        prop_assert_eq!(canonical(&glue(&a, &b)), canonical(&glue(&b, &a)));
        prop_assert_eq!(
            canonical(&glue(&glue(&a, &b), &c)),
            canonical(&glue(&a, &glue(&b, &c)))
        );
    }

    #[test]
    fn canonical_code_ignores_node_order(g in labeled(6, 8, 2), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut perm: Vec<usize> = (0..g.node_count()).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(canonical(&g), canonical(&g.permuted(&perm)));
    }

    #[test]
    fn hom_fast_agrees_with_brute_force(g in multigraph(6, 10), h in target()) {
        prop_assert_eq!(hom_fast(&g, &h), hom(&g, &h));
    }

    #[test]
    fn hom_is_multiplicative_over_disjoint_union(a in multigraph(4, 5), b in multigraph(4, 5), h in target()) {
        prop_assert_eq!(hom(&a.disjoint_union(&b), &h), hom(&a, &h) * hom(&b, &h));
    }

    #[test]
    fn pinning_identity(a in labeled(4, 5, 2), b in labeled(4, 5, 2), h in target(), s0 in 0usize..3, s1 in 0usize..3) {
        // hom_phi(G1 G2) * prod alpha(phi) = hom_phi(G1) * hom_phi(G2)
        let (a, b) = (a.extend_labels(&[1, 2].into()), b.extend_labels(&[1, 2].into()));
        let d = h.d();
        let states = [s0 % d, s1 % d];
        let pin = |g: &LabeledGraph| -> BTreeMap<usize, usize> {
            g.labels().iter().map(|(&l, &v)| (v, states[l as usize - 1])).collect()
        };
        let ab = glue(&a, &b);
        let lhs = hom_pinned(&ab, &h, &pin(&ab)).unwrap()
            * &h.alpha()[states[0]] * &h.alpha()[states[1]];
        let rhs = hom_pinned(&a, &h, &pin(&a)).unwrap() * hom_pinned(&b, &h, &pin(&b)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn graph_text_round_trip(g in labeled(6, 8, 3)) {
        let back = parse_graph(&g.to_string()).unwrap();
        prop_assert_eq!(canonical(&back), canonical(&g));
    }

    #[test]
    fn target_json_round_trip(h in target()) {
        prop_assert_eq!(WeightedTarget::from_json(&h.to_json()).unwrap(), h);
    }

    #[test]
    fn normalized_parameters_ignore_isolated_nodes(g in multigraph(5, 6), x in 1i64..5) {
        let (f, _) = normalize(Arc::new(Param::chromatic(graphhom::rational::int(x)))).unwrap();
        let mut gi = g.clone();
        gi.add_node();
        prop_assert_eq!(f.eval(&g).unwrap(), f.eval(&gi).unwrap());
    }
}
