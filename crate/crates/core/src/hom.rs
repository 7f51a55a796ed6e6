//! Exact weighted homomorphism numbers `hom(G, H)`.
//!
//! All weights are rescaled to integers over common denominators, the sums are
//! carried out in `BigInt` and the denominator is divided out once at the end.
//! [`hom`] enumerates every map; [`hom_fast`] eliminates nodes one at a time.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::{LabeledGraph, MultiGraph};
use crate::rational::{common_denominator, Rational};
use crate::target::WeightedTarget;

/// Pinned states for a subset of nodes: node index -> target node.
pub type Assignment = BTreeMap<usize, usize>;

/// Integer form of a target: `alpha_i = a[i] / a_den`, `beta_ij = b[i][j] / b_den`.
struct IntTarget {
    a: Vec<BigInt>,
    b: Vec<Vec<BigInt>>,
    a_den: BigInt,
    b_den: BigInt,
}

impl IntTarget {
    fn new(h: &WeightedTarget) -> Self {
        let a_den = common_denominator(h.alpha());
        let b_den = common_denominator(h.beta().iter().flatten());
        let scale = |r: &Rational, den: &BigInt| (r * Rational::from_integer(den.clone())).to_integer();
        IntTarget {
            a: h.alpha().iter().map(|r| scale(r, &a_den)).collect(),
            b: h
                .beta()
                .iter()
                .map(|row| row.iter().map(|r| scale(r, &b_den)).collect())
                .collect(),
            a_den,
            b_den,
        }
    }

    /// `b[i][j]^m` for every pair, per distinct multiplicity needed.
    fn powers(&self, mults: impl IntoIterator<Item = u32>) -> BTreeMap<u32, Vec<Vec<BigInt>>> {
        mults
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .map(|m| {
                let t = self
                    .b
                    .iter()
                    .map(|row| row.iter().map(|x| num_traits::pow(x.clone(), m as usize)).collect())
                    .collect();
                (m, t)
            })
            .collect()
    }

    fn finish(&self, total: BigInt, nodes: usize, edges: usize) -> Rational {
        let den = num_traits::pow(self.a_den.clone(), nodes) * num_traits::pow(self.b_den.clone(), edges);
        Rational::new(total, den)
    }
}

/// `hom(G, H)`: sum over all maps `V(G) -> V(H)` of the product of node and
/// edge weights. `hom(K_0, H) = 1`.
pub fn hom(g: &MultiGraph, h: &WeightedTarget) -> Rational {
    let fixed = vec![None; g.node_count()];
    sum_extensions(g, h, &fixed)
}

/// `hom_phi(G, H)`: sum over maps extending the pinned assignment `phi`,
/// which must cover exactly the labeled nodes of `g`.
pub fn hom_pinned(g: &LabeledGraph, h: &WeightedTarget, phi: &Assignment) -> Result<Rational> {
    let labeled = g.labeled_nodes();
    let domain: BTreeSet<usize> = phi.keys().copied().collect();
    if domain != labeled {
        return Err(Error::AssignmentMismatch(format!(
            "labeled nodes {labeled:?}, assignment domain {domain:?}"
        )));
    }
    if let Some((v, s)) = phi.iter().find(|(_, &s)| s >= h.d()) {
        return Err(Error::AssignmentMismatch(format!(
            "node {v} mapped to state {s} but the target has {} nodes",
            h.d()
        )));
    }
    let mut fixed = vec![None; g.node_count()];
    for (&v, &s) in phi {
        fixed[v] = Some(s);
    }
    Ok(sum_extensions(g.graph(), h, &fixed))
}

/// [`hom_pinned`] with the assignment given per label.
pub fn hom_pinned_by_label(
    g: &LabeledGraph,
    h: &WeightedTarget,
    phi: &BTreeMap<u32, usize>,
) -> Result<Rational> {
    let mut by_node = Assignment::new();
    for (l, &s) in phi {
        let v = g
            .labels()
            .get(l)
            .ok_or_else(|| Error::AssignmentMismatch(format!("label {l} not in graph")))?;
        by_node.insert(*v, s);
    }
    hom_pinned(g, h, &by_node)
}

/// Depth-first enumeration of all extensions of `fixed`.
fn sum_extensions(g: &MultiGraph, h: &WeightedTarget, fixed: &[Option<usize>]) -> Rational {
    let n = g.node_count();
    let it = IntTarget::new(h);
    let powers = it.powers(g.edge_classes().map(|(_, _, m)| m));
    // Back edges: for node v, the classes (u, m) with u < v.
    let mut back: Vec<Vec<(usize, u32)>> = vec![Vec::new(); n];
    for (u, v, m) in g.edge_classes() {
        back[v].push((u, m));
    }
    let mut state = vec![0usize; n];
    let mut total = BigInt::zero();
    dfs(0, &BigInt::one(), &mut state, fixed, &back, &it, &powers, &mut total);
    it.finish(total, n, g.edge_count())
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    v: usize,
    partial: &BigInt,
    state: &mut [usize],
    fixed: &[Option<usize>],
    back: &[Vec<(usize, u32)>],
    it: &IntTarget,
    powers: &BTreeMap<u32, Vec<Vec<BigInt>>>,
    total: &mut BigInt,
) {
    if v == state.len() {
        *total += partial;
        return;
    }
    let choices: Vec<usize> = match fixed[v] {
        Some(s) => vec![s],
        None => (0..it.a.len()).collect(),
    };
    for s in choices {
        let mut w = partial * &it.a[s];
        for &(u, m) in &back[v] {
            if w.is_zero() {
                break;
            }
            w *= &powers[&m][state[u]][s];
        }
        if w.is_zero() {
            continue;
        }
        state[v] = s;
        dfs(v + 1, &w, state, fixed, back, it, powers, total);
    }
}

/// Limits for [`hom_fast`].
#[derive(Clone, Copy, Debug)]
pub struct HomFastConfig {
    /// Largest elimination table (target states ^ scope size) before falling
    /// back to brute force.
    pub max_table_entries: usize,
}

impl Default for HomFastConfig {
    fn default() -> Self {
        HomFastConfig {
            max_table_entries: 10_000_000,
        }
    }
}

/// Same value as [`hom`], computed by variable elimination along a greedy
/// minimum-degree order; exponential only in the elimination width.
pub fn hom_fast(g: &MultiGraph, h: &WeightedTarget) -> Rational {
    hom_fast_with(g, h, HomFastConfig::default())
}

struct Factor {
    scope: Vec<usize>,
    table: Vec<BigInt>,
}

pub fn hom_fast_with(g: &MultiGraph, h: &WeightedTarget, cfg: HomFastConfig) -> Rational {
    let n = g.node_count();
    let d = h.d();
    let it = IntTarget::new(h);
    let powers = it.powers(g.edge_classes().map(|(_, _, m)| m));

    let mut factors: Vec<Factor> = (0..n)
        .map(|v| Factor {
            scope: vec![v],
            table: it.a.clone(),
        })
        .collect();
    for (u, v, m) in g.edge_classes() {
        let p = &powers[&m];
        factors.push(Factor {
            scope: vec![u, v],
            table: (0..d * d).map(|k| p[k / d][k % d].clone()).collect(),
        });
    }

    let mut neighbors: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for (u, v, _) in g.edge_classes() {
        neighbors[u].insert(v);
        neighbors[v].insert(u);
    }
    let mut alive: BTreeSet<usize> = (0..n).collect();

    while let Some(&v) = alive
        .iter()
        .min_by_key(|&&v| (neighbors[v].len(), v))
    {
        let scope: Vec<usize> = neighbors[v].iter().copied().collect();
        if d.checked_pow(scope.len() as u32 + 1)
            .map_or(true, |size| size > cfg.max_table_entries)
        {
            return hom(g, h);
        }
        let (touching, rest): (Vec<Factor>, Vec<Factor>) =
            factors.into_iter().partition(|f| f.scope.contains(&v));
        factors = rest;
        factors.push(eliminate(v, &scope, &touching, d));

        alive.remove(&v);
        for &a in &scope {
            neighbors[a].remove(&v);
            for &b in &scope {
                if a != b {
                    neighbors[a].insert(b);
                }
            }
        }
        neighbors[v].clear();
    }

    let total = factors
        .iter()
        .fold(BigInt::one(), |acc, f| acc * &f.table[0]);
    it.finish(total, n, g.edge_count())
}

/// Multiplies the factors touching `v` and sums `v` out. `scope` is the
/// resulting factor's scope (the current neighbors of `v`).
fn eliminate(v: usize, scope: &[usize], touching: &[Factor], d: usize) -> Factor {
    // Joint variables: scope followed by v.
    let mut joint: Vec<usize> = scope.to_vec();
    joint.push(v);
    let pos: Vec<Vec<usize>> = touching
        .iter()
        .map(|f| {
            f.scope
                .iter()
                .map(|x| joint.iter().position(|y| y == x).expect("scope is covered"))
                .collect()
        })
        .collect();
    let size = d.pow(scope.len() as u32);
    let mut table = vec![BigInt::zero(); size];
    let mut assign = vec![0usize; joint.len()];
    for (idx, slot) in table.iter_mut().enumerate() {
        // Decode idx into the scope part (most significant first).
        let mut r = idx;
        for k in (0..scope.len()).rev() {
            assign[k] = r % d;
            r /= d;
        }
        for s in 0..d {
            assign[scope.len()] = s;
            let mut prod = BigInt::one();
            for (f, p) in touching.iter().zip(&pos) {
                let fi = p.iter().fold(0, |acc, &j| acc * d + assign[j]);
                let val = &f.table[fi];
                if val.is_zero() {
                    prod = BigInt::zero();
                    break;
                }
                prod *= val;
            }
            if !prod.is_zero() {
                *slot += prod;
            }
        }
    }
    Factor {
        scope: scope.to_vec(),
        table,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::glue;
    use crate::rational::{int, ratio};
    use rand::SeedableRng;

    fn seeded() -> rand_chacha::ChaCha8Rng {
        rand_chacha::ChaCha8Rng::seed_from_u64(7)
    }

    #[test]
    fn empty_graph_is_one() {
        let h = WeightedTarget::eulerian();
        assert_eq!(hom(&MultiGraph::empty(0), &h), int(1));
        assert_eq!(hom_fast(&MultiGraph::empty(0), &h), int(1));
    }

    #[test]
    fn eulerian_target_on_triangle_and_edge() {
        let h = WeightedTarget::eulerian();
        assert_eq!(hom(&MultiGraph::cycle(3), &h), int(1));
        assert_eq!(hom(&MultiGraph::complete(2), &h), int(0));
    }

    #[test]
    fn triangle_into_k3_counts_colorings() {
        // Brute force: proper 3-colorings of a triangle.
        let mut count = 0;
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    count += (a != b && b != c && a != c) as i64;
                }
            }
        }
        assert_eq!(count, 6);
        assert_eq!(hom(&MultiGraph::complete(3), &WeightedTarget::complete(3)), int(count));
    }

    #[test]
    fn pinned_single_node() {
        let h = WeightedTarget::random(&mut seeded(), 3, 9, 9, false);
        let k1 = LabeledGraph::k_edgeless(1);
        for i in 0..3 {
            let v = hom_pinned(&k1, &h, &Assignment::from([(0, i)])).unwrap();
            assert_eq!(v, h.alpha()[i]);
        }
    }

    #[test]
    fn pinned_sums_to_hom() {
        let h = WeightedTarget::random(&mut seeded(), 3, 9, 9, false);
        let k2 = LabeledGraph::k_complete(2);
        let mut total = int(0);
        for i in 0..3 {
            for j in 0..3 {
                total += hom_pinned(&k2, &h, &Assignment::from([(0, i), (1, j)])).unwrap();
            }
        }
        assert_eq!(total, hom(k2.graph(), &h));
    }

    #[test]
    fn pinned_edge_into_eulerian() {
        let k2 = LabeledGraph::k_complete(2);
        let v = hom_pinned(&k2, &WeightedTarget::eulerian(), &Assignment::from([(0, 0), (1, 1)]))
            .unwrap();
        assert_eq!(v, ratio(-1, 4));
    }

    #[test]
    fn pinned_domain_must_match() {
        let k2 = LabeledGraph::k_complete(2);
        let h = WeightedTarget::eulerian();
        assert!(matches!(
            hom_pinned(&k2, &h, &Assignment::from([(0, 0)])),
            Err(Error::AssignmentMismatch(_))
        ));
        assert!(hom_pinned(&k2, &h, &Assignment::from([(0, 0), (1, 5)])).is_err());
    }

    #[test]
    fn parallel_edges_square_beta() {
        let h = WeightedTarget::single_loop(int(1), int(3)).unwrap();
        let g = MultiGraph::from_edges(2, &[(0, 1), (0, 1)]).unwrap();
        assert_eq!(hom(&g, &h), int(9));
        assert_eq!(hom_fast(&g, &h), int(9));
    }

    #[test]
    fn independent_sets_of_long_path() {
        // i(P_n) = F_{n+2} with F_1 = F_2 = 1.
        let mut fib = vec![BigInt::zero(), BigInt::one(), BigInt::one()];
        for k in 3..=102 {
            let next = &fib[k - 1] + &fib[k - 2];
            fib.push(next);
        }
        let h = WeightedTarget::independent_set();
        for n in 1..=8 {
            assert_eq!(hom(&MultiGraph::path(n), &h), Rational::from_integer(fib[n + 2].clone()));
        }
        assert_eq!(
            hom_fast(&MultiGraph::path(100), &h),
            Rational::from_integer(fib[102].clone())
        );
    }

    #[test]
    fn fast_falls_back_when_table_too_large() {
        let g = MultiGraph::complete(5);
        let h = WeightedTarget::complete(3);
        let cfg = HomFastConfig { max_table_entries: 4 };
        assert_eq!(hom_fast_with(&g, &h, cfg), hom(&g, &h));
    }

    #[test]
    fn pinning_identity_on_small_product() {
        // hom_phi(G1 G2) * prod alpha(phi) = hom_phi(G1) * hom_phi(G2)
        let h = WeightedTarget::random(&mut seeded(), 2, 5, 5, false);
        let mut g1 = LabeledGraph::k_complete(2);
        g1.add_pendant(1).unwrap();
        let g2 = LabeledGraph::k_edgeless(2);
        let mut g2 = g2.clone();
        g2.add_pendant(2).unwrap();
        let prod = glue(&g1, &g2);
        for i in 0..2 {
            for j in 0..2 {
                let phi = BTreeMap::from([(1u32, i), (2u32, j)]);
                let lhs = hom_pinned_by_label(&prod, &h, &phi).unwrap()
                    * &h.alpha()[i]
                    * &h.alpha()[j];
                let rhs = hom_pinned_by_label(&g1, &h, &phi).unwrap()
                    * hom_pinned_by_label(&g2, &h, &phi).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }
}
