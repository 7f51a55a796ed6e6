use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::{LabeledGraph, MultiGraph};
use crate::rational::Rational;

/// Number of perfect matchings; parallel edges are distinct edges.
pub fn perfect_matchings(g: &MultiGraph) -> Rational {
    let all: Vec<usize> = (0..g.node_count()).collect();
    Rational::from_integer(matchings_covering(g, &all))
}

/// Matchings covering every unlabeled node and, among labeled nodes, exactly
/// those whose labels are in `x`.
pub fn partial_matchings(g: &LabeledGraph, x: &BTreeSet<u32>) -> Result<Rational> {
    let missing: Vec<u32> = x.iter().filter(|l| !g.labels().contains_key(l)).copied().collect();
    if !missing.is_empty() {
        return Err(Error::NotSubset(missing));
    }
    let covered: Vec<usize> = g
        .node_labels()
        .iter()
        .enumerate()
        .filter(|(_, l)| l.map_or(true, |l| x.contains(&l)))
        .map(|(v, _)| v)
        .collect();
    Ok(Rational::from_integer(matchings_covering(g.graph(), &covered)))
}

/// Perfect matchings of the subgraph induced on `nodes`, by memoized
/// elimination of the lowest uncovered node.
fn matchings_covering(g: &MultiGraph, nodes: &[usize]) -> BigInt {
    if nodes.len() % 2 == 1 {
        return BigInt::zero();
    }
    assert!(nodes.len() <= 64, "too many nodes for matching count");
    let n = nodes.len();
    let mut mult = vec![vec![0u32; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                mult[i][j] = g.multiplicity(nodes[i], nodes[j]);
            }
        }
    }
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut memo = HashMap::new();
    count(full, &mult, &mut memo)
}

fn count(mask: u64, mult: &[Vec<u32>], memo: &mut HashMap<u64, BigInt>) -> BigInt {
    if mask == 0 {
        return BigInt::one();
    }
    if let Some(v) = memo.get(&mask) {
        return v.clone();
    }
    let i = mask.trailing_zeros() as usize;
    let rest = mask & !(1u64 << i);
    let mut total = BigInt::zero();
    let mut m = rest;
    while m != 0 {
        let j = m.trailing_zeros() as usize;
        m &= m - 1;
        if mult[i][j] > 0 {
            total += count(rest & !(1u64 << j), mult, memo) * mult[i][j];
        }
    }
    memo.insert(mask, total.clone());
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::glue;
    use crate::rational::int;
    use rand::{Rng, SeedableRng};

    /// Edge subsets covering every node exactly once.
    fn brute(g: &MultiGraph) -> i64 {
        let edges: Vec<(usize, usize)> = g.edge_list();
        (0u32..1 << edges.len())
            .filter(|s| {
                let mut deg = vec![0; g.node_count()];
                for (k, &(u, v)) in edges.iter().enumerate() {
                    if s >> k & 1 == 1 {
                        deg[u] += 1;
                        deg[v] += 1;
                    }
                }
                deg.iter().all(|&d| d == 1)
            })
            .count() as i64
    }

    #[test]
    fn small_counts() {
        assert_eq!(perfect_matchings(&MultiGraph::complete(2)), int(1));
        assert_eq!(perfect_matchings(&MultiGraph::path(3)), int(0));
        assert_eq!(perfect_matchings(&MultiGraph::cycle(4)), int(brute(&MultiGraph::cycle(4))));
        assert_eq!(perfect_matchings(&MultiGraph::cycle(4)), int(2));
        assert_eq!(perfect_matchings(&MultiGraph::empty(0)), int(1));
        assert_eq!(perfect_matchings(&MultiGraph::complete(6)), int(15));
    }

    #[test]
    fn parallel_edges_count_separately() {
        let g = MultiGraph::from_edges(4, &[(0, 1), (0, 1), (2, 3), (1, 2), (0, 3)]).unwrap();
        assert_eq!(perfect_matchings(&g), int(brute(&g)));
    }

    #[test]
    fn partial_examples() {
        let k1 = LabeledGraph::k_edgeless(1);
        assert_eq!(partial_matchings(&k1, &BTreeSet::new()).unwrap(), int(1));
        let mut k2 = LabeledGraph::k_edgeless(1);
        k2.add_pendant(1).unwrap();
        assert_eq!(partial_matchings(&k2, &[1].into()).unwrap(), int(1));
        assert_eq!(partial_matchings(&k2, &BTreeSet::new()).unwrap(), int(0));
        assert!(matches!(partial_matchings(&k2, &[2].into()), Err(Error::NotSubset(_))));
    }

    fn random_labeled(rng: &mut impl Rng, k: usize) -> LabeledGraph {
        let n = rng.gen_range(k..=k + 3);
        let mut g = MultiGraph::empty(n);
        for _ in 0..rng.gen_range(0..=6) {
            if n < 2 {
                break;
            }
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            if u != v {
                g.add_edge(u, v).unwrap();
            }
        }
        let labels: Vec<u32> = (1..=k as u32).collect();
        LabeledGraph::with_leading_labels(g, &labels).unwrap()
    }

    #[test]
    fn decomposition_over_complementary_label_sets() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for k in 0..=3usize {
            for _ in 0..25 {
                let g1 = random_labeled(&mut rng, k);
                let g2 = random_labeled(&mut rng, k);
                let glued = perfect_matchings(glue(&g1, &g2).graph());
                let mut sum = int(0);
                for mask in 0u32..1 << k {
                    let x1: BTreeSet<u32> = (1..=k as u32).filter(|l| mask >> (l - 1) & 1 == 1).collect();
                    let x2: BTreeSet<u32> = (1..=k as u32).filter(|l| !x1.contains(l)).collect();
                    sum += partial_matchings(&g1, &x1).unwrap() * partial_matchings(&g2, &x2).unwrap();
                }
                assert_eq!(sum, glued);
            }
        }
    }
}
