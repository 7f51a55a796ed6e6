use std::collections::{BTreeMap, BTreeSet};

use crate::canon::{canonical_graph, CanonicalCode};
use crate::error::{Error, Result};
use crate::graph::{glue, restrict_labels, LabeledGraph};
use crate::params::GraphParameter;
use crate::rational;

/// Finite real combination of `S`-labeled graphs, keyed by canonical code.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumGraph {
    labels: BTreeSet<u32>,
    terms: BTreeMap<CanonicalCode, (LabeledGraph, f64)>,
}

impl QuantumGraph {
    pub fn zero(labels: BTreeSet<u32>) -> Self {
        QuantumGraph {
            labels,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_graph(g: LabeledGraph) -> Self {
        QuantumGraph::from_terms(g.label_set(), [(g, 1.0)])
    }

    /// Graphs lacking some labels of `labels` get them as isolated nodes.
    pub fn from_terms(labels: BTreeSet<u32>, terms: impl IntoIterator<Item = (LabeledGraph, f64)>) -> Self {
        let mut q = QuantumGraph::zero(labels);
        for (g, c) in terms {
            q.add_term(g, c);
        }
        q
    }

    /// Adds `c * g`. Labels of `g` must lie in this combination's label set;
    /// missing ones are filled with isolated labeled nodes.
    pub fn add_term(&mut self, g: LabeledGraph, c: f64) {
        assert!(
            g.label_set().is_subset(&self.labels),
            "term labels {:?} outside {:?}",
            g.label_set(),
            self.labels
        );
        if c == 0.0 {
            return;
        }
        let g = g.extend_labels(&self.labels);
        let (code, g) = canonical_graph(&g);
        let entry = self.terms.entry(code).or_insert((g, 0.0));
        entry.1 += c;
        if entry.1 == 0.0 {
            let code = canonical_graph(&entry.0).0;
            self.terms.remove(&code);
        }
    }

    pub fn labels(&self) -> &BTreeSet<u32> {
        &self.labels
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LabeledGraph, f64)> {
        self.terms.values().map(|(g, c)| (g, *c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, s: f64) -> Self {
        QuantumGraph::from_terms(self.labels.clone(), self.terms().map(|(g, c)| (g.clone(), c * s)))
    }

    /// Sum; the result carries the union of the label sets.
    pub fn add(&self, other: &QuantumGraph) -> Self {
        let labels: BTreeSet<u32> = self.labels.union(&other.labels).copied().collect();
        QuantumGraph::from_terms(
            labels,
            self.terms().chain(other.terms()).map(|(g, c)| (g.clone(), c)),
        )
    }

    /// Gluing product, expanded term by term.
    pub fn mul(&self, other: &QuantumGraph) -> Self {
        let labels: BTreeSet<u32> = self.labels.union(&other.labels).copied().collect();
        let mut out = QuantumGraph::zero(labels);
        for (g, c) in self.terms() {
            for (h, d) in other.terms() {
                out.add_term(glue(g, h), c * d);
            }
        }
        out
    }

    /// Deletes the labels outside `keep` from every term.
    pub fn restrict(&self, keep: &BTreeSet<u32>) -> Self {
        let labels: BTreeSet<u32> = self.labels.intersection(keep).copied().collect();
        QuantumGraph::from_terms(
            labels,
            self.terms().map(|(g, c)| (restrict_labels(g, keep), c)),
        )
    }

    /// Renames labels; unmapped labels keep their names.
    pub fn relabeled(&self, map: &BTreeMap<u32, u32>) -> Result<Self> {
        let labels: BTreeSet<u32> = self.labels.iter().map(|l| *map.get(l).unwrap_or(l)).collect();
        if labels.len() != self.labels.len() {
            return Err(Error::Algebra("relabeling merges labels".into()));
        }
        let terms = self
            .terms()
            .map(|(g, c)| Ok((g.relabeled(map)?, c)))
            .collect::<Result<Vec<_>>>()?;
        Ok(QuantumGraph::from_terms(labels, terms))
    }
}

/// `f(x)`: the linear extension of `f` to quantum graphs.
pub fn eval(f: &dyn GraphParameter, x: &QuantumGraph) -> Result<f64> {
    x.terms()
        .map(|(g, c)| Ok(c * rational::to_f64(&f.eval(g.graph())?)))
        .sum()
}

/// `<x, y> = f(xy)`; each glued term is evaluated exactly before weighting.
pub fn inner(f: &dyn GraphParameter, x: &QuantumGraph, y: &QuantumGraph) -> Result<f64> {
    let mut total = 0.0;
    for (g, c) in x.terms() {
        for (h, d) in y.terms() {
            total += c * d * rational::to_f64(&f.eval(glue(g, h).graph())?);
        }
    }
    Ok(total)
}

/// `pi_S`: the combinatorial projection, deleting labels outside `s`.
pub fn project(x: &QuantumGraph, s: &BTreeSet<u32>) -> QuantumGraph {
    x.restrict(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::MultiGraph;

    fn edge() -> LabeledGraph {
        LabeledGraph::k_complete(2)
    }

    #[test]
    fn cancellation_removes_terms() {
        let mut q = QuantumGraph::from_graph(edge());
        q.add_term(edge(), -1.0);
        assert!(q.is_empty());
    }

    #[test]
    fn product_expands() {
        let s: BTreeSet<u32> = [1, 2].into();
        let x = QuantumGraph::from_terms(s.clone(), [(edge(), 2.0), (LabeledGraph::unit(&s), 1.0)]);
        let xx = x.mul(&x);
        // (2e + 1)^2 = 4e^2 + 4e + 1
        assert_eq!(xx.len(), 3);
        let double = LabeledGraph::with_leading_labels(
            MultiGraph::from_edges(2, &[(0, 1), (0, 1)]).unwrap(),
            &[1, 2],
        )
        .unwrap();
        let (code, _) = canonical_graph(&double);
        assert_eq!(xx.terms.get(&code).unwrap().1, 4.0);
    }

    #[test]
    fn restrict_and_relabel() {
        let x = QuantumGraph::from_graph(edge());
        let r = x.restrict(&[1].into());
        assert_eq!(r.labels(), &[1].into());
        let m = x.relabeled(&[(2, 5)].into()).unwrap();
        assert_eq!(m.labels(), &[1, 5].into());
        assert!(x.relabeled(&[(2, 1)].into()).is_err());
    }
}
