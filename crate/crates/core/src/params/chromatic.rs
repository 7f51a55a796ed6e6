use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::canon::{canonical, CanonicalCode};
use crate::graph::{LabeledGraph, MultiGraph};
use crate::rational::Rational;

/// Integer polynomial, coefficients in ascending degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(pub Vec<BigInt>);

impl Poly {
    fn constant(c: i64) -> Self {
        Poly(vec![BigInt::from(c)])
    }

    /// `x - c`
    fn linear(c: i64) -> Self {
        Poly(vec![BigInt::from(-c), BigInt::one()])
    }

    fn mul(&self, other: &Poly) -> Poly {
        let mut out = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out)
    }

    fn sub(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let zero = BigInt::zero();
        let mut out: Vec<BigInt> = (0..n)
            .map(|i| self.0.get(i).unwrap_or(&zero) - other.0.get(i).unwrap_or(&zero))
            .collect();
        while out.len() > 1 && out.last().is_some_and(Zero::is_zero) {
            out.pop();
        }
        Poly(out)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.0
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + Rational::from_integer(c.clone()))
    }
}

/// Memo of chromatic polynomials of connected simple graphs, shared across
/// evaluations of one parameter.
#[derive(Debug, Default)]
pub struct ChromaticCache {
    memo: Mutex<HashMap<CanonicalCode, Poly>>,
}

impl ChromaticCache {
    pub fn polynomial(&self, g: &MultiGraph) -> Poly {
        self.poly(&g.simple_support())
    }

    fn poly(&self, g: &MultiGraph) -> Poly {
        let comps = g.components();
        if comps.len() != 1 {
            return comps
                .iter()
                .fold(Poly::constant(1), |acc, c| acc.mul(&self.connected(&g.induced(c))));
        }
        self.connected(g)
    }

    fn connected(&self, g: &MultiGraph) -> Poly {
        let n = g.node_count();
        let e = g.edge_count();
        if n == 0 {
            return Poly::constant(1);
        }
        if e == n - 1 {
            // Tree: x (x-1)^{n-1}.
            return (1..n).fold(Poly::linear(0), |acc, _| acc.mul(&Poly::linear(1)));
        }
        if e == n * (n - 1) / 2 {
            return (0..n as i64).fold(Poly::constant(1), |acc, c| acc.mul(&Poly::linear(c)));
        }
        let degrees = g.degrees();
        if let Some(leaf) = degrees.iter().position(|&d| d == 1) {
            let rest: Vec<usize> = (0..n).filter(|&v| v != leaf).collect();
            return self.connected(&g.induced(&rest)).mul(&Poly::linear(1));
        }
        let code = canonical(&LabeledGraph::unlabeled(g.clone()));
        if let Some(p) = self.memo.lock().expect("cache lock").get(&code) {
            return p.clone();
        }
        // Delete / contract an edge at a minimum-degree node.
        let u = (0..n).min_by_key(|&v| degrees[v]).expect("nonempty");
        let v = g.adjacency()[u][0].0;
        let mut deleted = MultiGraph::empty(n);
        for (a, b, _) in g.edge_classes().filter(|&(a, b, _)| (a, b) != (u.min(v), u.max(v))) {
            deleted.add_edge(a, b).expect("valid edge");
        }
        let p = self.poly(&deleted).sub(&self.poly(&contract(g, u, v)));
        self.memo.lock().expect("cache lock").insert(code, p.clone());
        p
    }
}

/// Merges `v` into `u`, collapsing parallel edges and dropping the loop.
fn contract(g: &MultiGraph, u: usize, v: usize) -> MultiGraph {
    let n = g.node_count();
    let map = |x: usize| {
        let x = if x == v { u } else { x };
        if x > v {
            x - 1
        } else {
            x
        }
    };
    let mut out = MultiGraph::empty(n - 1);
    for (a, b, _) in g.edge_classes() {
        let (a, b) = (map(a), map(b));
        if a != b && out.multiplicity(a, b) == 0 {
            out.add_edge(a, b).expect("valid edge");
        }
    }
    out
}

/// The chromatic polynomial `p(G, x)`, by deletion and contraction on the
/// simple support of `g`.
pub fn chromatic_polynomial(g: &MultiGraph) -> Poly {
    ChromaticCache::default().polynomial(g)
}

/// `p(G, x)`.
pub fn chromatic(g: &MultiGraph, x: &Rational) -> Rational {
    chromatic_polynomial(g).eval(x)
}

/// Partitions of a `k`-set into at most `q` nonempty blocks.
pub fn bell_bounded(k: usize, q: usize) -> u128 {
    // Stirling numbers of the second kind, row by row.
    let mut row = vec![1u128];
    for n in 1..=k {
        let mut next = vec![0u128; n + 1];
        for j in 1..=n {
            let stay = if j < row.len() { j as u128 * row[j] } else { 0 };
            next[j] = stay + row[j - 1];
        }
        row = next;
    }
    row.iter().take(q + 1).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn colorings(g: &MultiGraph, x: usize) -> i64 {
        let n = g.node_count();
        let edges = g.edge_list();
        (0..x.pow(n as u32))
            .filter(|&code| {
                let col: Vec<usize> = (0..n).map(|i| code / x.pow(i as u32) % x).collect();
                edges.iter().all(|&(a, b)| col[a] != col[b])
            })
            .count() as i64
    }

    #[test]
    fn triangle_and_edge() {
        assert_eq!(chromatic(&MultiGraph::complete(3), &int(3)), int(6));
        for x in 0..=3 {
            assert_eq!(chromatic(&MultiGraph::complete(2), &int(x)), int(x * (x - 1)));
        }
    }

    #[test]
    fn matches_brute_force_colorings() {
        let graphs = [
            MultiGraph::cycle(5),
            MultiGraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (3, 4)]).unwrap(),
            MultiGraph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4)]).unwrap(),
            MultiGraph::from_edges(4, &[(0, 1), (0, 1), (1, 2), (2, 3), (3, 1)]).unwrap(),
        ];
        for g in &graphs {
            for x in 0..=4 {
                assert_eq!(chromatic(g, &int(x as i64)), int(colorings(g, x)), "{g:?} at {x}");
            }
        }
    }

    #[test]
    fn non_integer_point() {
        // K_4 at 5/2: (5/2)(3/2)(1/2)(-1/2)
        assert_eq!(chromatic(&MultiGraph::complete(4), &ratio(5, 2)), ratio(-15, 16));
    }

    #[test]
    fn bell_values() {
        assert_eq!(bell_bounded(3, 2), 4);
        assert_eq!(bell_bounded(3, 3), 5);
        assert_eq!(bell_bounded(0, 0), 1);
        assert_eq!(bell_bounded(0, 4), 1);
        assert_eq!(bell_bounded(5, 5), 52);
        assert_eq!(bell_bounded(4, 0), 0);
    }
}
