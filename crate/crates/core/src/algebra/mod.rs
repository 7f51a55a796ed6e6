//! Finite-dimensional model of the quotient algebra of `S`-labeled quantum
//! graphs modulo the annihilator of `<x, y> = f(xy)`.
//!
//! `f` is evaluated exactly; everything downstream is `f64`. An algebra is a
//! greedily chosen set of generator graphs whose Gram matrix is positive
//! definite, together with the triple products `f(b_i b_j b_k)`, which give
//! the multiplication: the coordinates of `b_i b_j` are `G^{-1} [f(b_k b_i
//! b_j)]_k`.

mod idempotent;
mod quantum;
mod tower;

use std::collections::BTreeSet;
use std::sync::Arc;

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use rayon::prelude::*;
use serde::Serialize;

use crate::canon::canonical;
use crate::enumerate::enumerate_with_nodes;
use crate::error::{Error, Result};
use crate::graph::{glue, LabeledGraph};
use crate::params::GraphParameter;
use crate::rational;

pub use idempotent::IdempotentBasis;
pub use quantum::{eval, inner, project, QuantumGraph};
pub use tower::{Level, Tower};

pub type Oracle = Arc<dyn GraphParameter>;

/// Generator search bounds: graphs with at most `|S| + extra_nodes` nodes and
/// `|S| + extra_edges` edges, at most `max_generators` candidates.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct AlgebraBudget {
    pub extra_nodes: usize,
    pub extra_edges: usize,
    pub multi: bool,
    pub max_generators: usize,
    /// Generation stops, unsaturated, once the span reaches this dimension.
    pub max_dim: usize,
    /// A candidate is kept when its squared residual against the current span
    /// exceeds `eps * f(g g)`.
    pub eps: f64,
    /// Tolerance for idempotent identities.
    pub tol: f64,
}

impl Default for AlgebraBudget {
    fn default() -> Self {
        AlgebraBudget {
            extra_nodes: 3,
            extra_edges: 3,
            multi: false,
            max_generators: 5000,
            max_dim: 256,
            eps: 1e-9,
            tol: 1e-6,
        }
    }
}

pub struct AlgebraRep {
    oracle: Oracle,
    labels: BTreeSet<u32>,
    /// Generator graphs `g_i`; the basis elements are `b_i = scale_i g_i`
    /// with `f(b_i b_i) = 1`.
    graphs: Vec<LabeledGraph>,
    scale: Vec<f64>,
    gram: DMatrix<f64>,
    chol: Cholesky<f64, Dyn>,
    /// `f(b_i b_j b_k)`, flattened.
    triple: Vec<f64>,
    unit: DVector<f64>,
    saturated: bool,
    examined: usize,
    budget: AlgebraBudget,
}

impl std::fmt::Debug for AlgebraRep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AlgebraRep")
            .field("labels", &self.labels)
            .field("dim", &self.dim())
            .field("saturated", &self.saturated)
            .finish()
    }
}

fn f64_of(f: &dyn GraphParameter, g: &LabeledGraph) -> Result<f64> {
    Ok(rational::to_f64(&f.eval(g.graph())?))
}

impl AlgebraRep {
    /// Selects generators by increasing (nodes, edges, canonical code),
    /// skipping graphs with isolated unlabeled nodes, and keeps a candidate
    /// when it enlarges the span numerically. Generation stops after a full
    /// node-count level adds nothing (`saturated`) or at the budget.
    pub fn build(oracle: Oracle, labels: &BTreeSet<u32>, budget: AlgebraBudget) -> Result<Self> {
        let f = oracle.as_ref();
        let s = labels.len();
        let max_edges = s + budget.extra_edges;
        let mut graphs: Vec<LabeledGraph> = Vec::new();
        let mut scale: Vec<f64> = Vec::new();
        let mut gram = DMatrix::<f64>::zeros(0, 0);
        let mut saturated = false;
        let mut examined = 0;
        'levels: for n in s..=s + budget.extra_nodes {
            if examined >= budget.max_generators || graphs.len() >= budget.max_dim {
                break;
            }
            let candidates: Vec<LabeledGraph> = enumerate_with_nodes(labels, n, max_edges, budget.multi)
                .into_iter()
                .map(|(_, g)| g)
                .filter(|g| !g.has_isolated_unlabeled())
                .collect();
            if candidates.is_empty() {
                continue;
            }
            let before = graphs.len();
            for g in candidates {
                if examined == budget.max_generators || graphs.len() == budget.max_dim {
                    break 'levels;
                }
                examined += 1;
                let gg = f64_of(f, &glue(&g, &g))?;
                if gg <= 0.0 {
                    if gg < -budget.eps * 1e3 {
                        return Err(Error::Algebra(format!(
                            "f(GG) = {gg:e} < 0 for a generator: not reflection positive"
                        )));
                    }
                    continue;
                }
                let v: Vec<f64> = graphs
                    .par_iter()
                    .zip(&scale)
                    .map(|(b, &sb)| Ok(sb * f64_of(f, &glue(b, &g))?))
                    .collect::<Result<_>>()?;
                let v = DVector::from_vec(v);
                let residual = if graphs.is_empty() {
                    gg
                } else {
                    let chol = gram.clone().cholesky().ok_or_else(not_pd)?;
                    gg - v.dot(&chol.solve(&v))
                };
                if residual > budget.eps * gg {
                    let sg = 1.0 / gg.sqrt();
                    let k = graphs.len();
                    let mut next = DMatrix::<f64>::zeros(k + 1, k + 1);
                    next.view_mut((0, 0), (k, k)).copy_from(&gram);
                    for i in 0..k {
                        next[(i, k)] = v[i] * sg;
                        next[(k, i)] = v[i] * sg;
                    }
                    next[(k, k)] = 1.0;
                    gram = next;
                    graphs.push(g);
                    scale.push(sg);
                }
            }
            if graphs.len() == before && before > 0 {
                saturated = true;
                break;
            }
        }
        if graphs.is_empty() {
            return Err(Error::Algebra(format!("no generator with f(GG) > 0 over {labels:?}")));
        }
        let chol = gram.clone().cholesky().ok_or_else(not_pd)?;
        let dim = graphs.len();

        let triples: Vec<(usize, usize, usize)> = (0..dim)
            .flat_map(|i| (i..dim).flat_map(move |j| (j..dim).map(move |k| (i, j, k))))
            .collect();
        let values: Vec<f64> = triples
            .par_iter()
            .map(|&(i, j, k)| {
                let g = glue(&glue(&graphs[i], &graphs[j]), &graphs[k]);
                Ok(scale[i] * scale[j] * scale[k] * f64_of(f, &g)?)
            })
            .collect::<Result<_>>()?;
        let mut triple = vec![0.0; dim * dim * dim];
        for (&(i, j, k), v) in triples.iter().zip(values) {
            for (a, b, c) in [(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)] {
                triple[(a * dim + b) * dim + c] = v;
            }
        }

        let mut rep = AlgebraRep {
            oracle: oracle.clone(),
            labels: labels.clone(),
            graphs,
            scale,
            gram,
            chol,
            triple,
            unit: DVector::zeros(dim),
            saturated,
            examined,
            budget,
        };
        rep.unit = rep.coords(&QuantumGraph::from_graph(LabeledGraph::unit(labels)))?;
        Ok(rep)
    }

    pub fn oracle(&self) -> &Oracle {
        &self.oracle
    }

    pub fn labels(&self) -> &BTreeSet<u32> {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.graphs.len()
    }

    pub fn saturated(&self) -> bool {
        self.saturated
    }

    pub fn generators_examined(&self) -> usize {
        self.examined
    }

    pub fn budget(&self) -> &AlgebraBudget {
        &self.budget
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    pub fn basis_graph(&self, i: usize) -> &LabeledGraph {
        &self.graphs[i]
    }

    /// `b_i` as a quantum graph.
    pub fn basis_element(&self, i: usize) -> QuantumGraph {
        QuantumGraph::from_terms(self.labels.clone(), [(self.graphs[i].clone(), self.scale[i])])
    }

    pub fn unit(&self) -> &DVector<f64> {
        &self.unit
    }

    /// Coordinates of the orthogonal projection of `x` onto the span of the
    /// basis: `G^{-1} [<b_k, x>]_k`. For `x` whose labels lie in `S` this is
    /// `x` itself modulo the annihilator; otherwise it is the projection onto
    /// the `S`-labeled part.
    pub fn coords(&self, x: &QuantumGraph) -> Result<DVector<f64>> {
        let f = self.oracle.as_ref();
        let terms: Vec<(&LabeledGraph, f64)> = x.terms().collect();
        let rows: Vec<f64> = (0..self.dim())
            .into_par_iter()
            .map(|k| {
                terms
                    .iter()
                    .map(|(g, c)| Ok(c * self.scale[k] * f64_of(f, &glue(&self.graphs[k], g))?))
                    .sum::<Result<f64>>()
            })
            .collect::<Result<_>>()?;
        Ok(self.chol.solve(&DVector::from_vec(rows)))
    }

    pub fn coords_of_graph(&self, g: &LabeledGraph) -> Result<DVector<f64>> {
        self.coords(&QuantumGraph::from_graph(g.clone()))
    }

    /// Back to an explicit combination of generator graphs.
    pub fn to_quantum(&self, x: &DVector<f64>) -> QuantumGraph {
        QuantumGraph::from_terms(
            self.labels.clone(),
            (0..self.dim()).map(|i| (self.graphs[i].clone(), x[i] * self.scale[i])),
        )
    }

    /// `[f(b_k x b_j)]_{k,j}`: the Gram form of multiplication by `x`.
    pub(crate) fn mult_form(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let d = self.dim();
        DMatrix::from_fn(d, d, |k, j| {
            (0..d).map(|i| x[i] * self.triple[(k * d + i) * d + j]).sum()
        })
    }

    /// Matrix of `y -> x y` in basis coordinates.
    pub fn mult_operator(&self, x: &DVector<f64>) -> DMatrix<f64> {
        self.chol.solve(&self.mult_form(x))
    }

    pub fn multiply(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        self.chol.solve(&(self.mult_form(x) * y))
    }

    pub fn inner(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        x.dot(&(&self.gram * y))
    }

    pub fn norm(&self, x: &DVector<f64>) -> f64 {
        self.inner(x, x).max(0.0).sqrt()
    }

    /// `f(x) = <x, 1>`.
    pub fn f(&self, x: &DVector<f64>) -> f64 {
        self.inner(x, &self.unit)
    }

    /// `f(xyz)` from the triple products.
    pub fn f3(&self, x: &DVector<f64>, y: &DVector<f64>, z: &DVector<f64>) -> f64 {
        (self.mult_form(x) * y).dot(z)
    }

    /// Coordinates here of an element of another algebra whose labels are a
    /// subset of these (or of any labels, giving the projection).
    pub fn embed(&self, from: &AlgebraRep, x: &DVector<f64>) -> Result<DVector<f64>> {
        if from.labels == self.labels && std::ptr::eq(from, self) {
            return Ok(x.clone());
        }
        self.coords(&from.to_quantum(x))
    }

    /// The lower Cholesky factor of the Gram matrix.
    pub(crate) fn chol_l(&self) -> DMatrix<f64> {
        self.chol.l()
    }

    pub fn dump(&self, idempotents: Option<&IdempotentBasis>) -> AlgebraDump {
        AlgebraDump {
            labels: self.labels.iter().copied().collect(),
            dim: self.dim(),
            saturated: self.saturated,
            generators_examined: self.examined,
            basis: (0..self.dim())
                .map(|i| BasisDump {
                    code: canonical(&self.graphs[i]).to_hex(),
                    graph: self.graphs[i].to_string(),
                    scale: self.scale[i],
                })
                .collect(),
            gram: (0..self.dim())
                .map(|i| (0..self.dim()).map(|j| self.gram[(i, j)]).collect())
                .collect(),
            idempotents: idempotents.map(|p| {
                p.elements
                    .iter()
                    .map(|e| e.iter().copied().collect())
                    .collect()
            }),
            masses: idempotents.map(|p| p.masses.clone()),
        }
    }
}

fn not_pd() -> Error {
    Error::Algebra("Gram matrix of the selected generators is not positive definite".into())
}

#[derive(Clone, Debug, Serialize)]
pub struct BasisDump {
    pub code: String,
    pub graph: String,
    pub scale: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct AlgebraDump {
    pub labels: Vec<u32>,
    pub dim: usize,
    pub saturated: bool,
    pub generators_examined: usize,
    pub basis: Vec<BasisDump>,
    pub gram: Vec<Vec<f64>>,
    pub idempotents: Option<Vec<Vec<f64>>>,
    pub masses: Option<Vec<f64>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{builtin_target, Param};
    use crate::target::WeightedTarget;

    fn oracle(p: Param) -> Oracle {
        Arc::new(p)
    }

    fn eulerian() -> Oracle {
        oracle(Param::Eulerian)
    }

    #[test]
    fn single_loop_target_is_one_dimensional() {
        let f = oracle(Param::hom("two", builtin_target("single-loop-two").unwrap()));
        for s in [BTreeSet::new(), [1].into(), [1, 2].into()] {
            let a = AlgebraRep::build(f.clone(), &s, AlgebraBudget::default()).unwrap();
            assert_eq!(a.dim(), 1);
            assert!(a.saturated());
        }
    }

    #[test]
    fn eulerian_dimensions() {
        // Level dimensions 1, 1, 2, 4: the swap symmetry of the target halves
        // 2^k for k >= 1.
        let dims: Vec<usize> = (0..=3u32)
            .map(|k| {
                let s: BTreeSet<u32> = (1..=k).collect();
                AlgebraRep::build(eulerian(), &s, AlgebraBudget::default()).unwrap().dim()
            })
            .collect();
        assert_eq!(dims, vec![1, 1, 2, 4]);
    }

    #[test]
    fn unit_and_products() {
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(1);
        let h = WeightedTarget::random(&mut rng, 2, 5, 4, true);
        let f = oracle(Param::hom("h", h));
        let a = AlgebraRep::build(f.clone(), &[1, 2].into(), AlgebraBudget::default()).unwrap();
        let u = a.unit().clone();
        for i in 0..a.dim() {
            let mut e = DVector::zeros(a.dim());
            e[i] = 1.0;
            assert!((a.multiply(&u, &e) - &e).norm() < 1e-8);
            for j in 0..a.dim() {
                let mut ej = DVector::zeros(a.dim());
                ej[j] = 1.0;
                let lhs = a.f(&a.multiply(&e, &ej));
                let rhs = inner(f.as_ref(), &a.basis_element(i), &a.basis_element(j)).unwrap();
                assert!((lhs - rhs).abs() < 1e-7 * rhs.abs().max(1.0));
                assert!((a.multiply(&e, &ej) - a.multiply(&ej, &e)).norm() < 1e-8);
            }
        }
    }
}
