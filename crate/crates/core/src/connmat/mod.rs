//! Finite slices of connection matrices: rows are `k`-labeled graphs, entry
//! `(i, j)` is `f(G_i G_j)`.

mod exact;

use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::canon::{canonical_graph, CanonicalCode};
use crate::enumerate::{enumerate_labeled, enumerate_with_nodes};
use crate::error::Result;
use crate::graph::{glue, LabeledGraph};
use crate::params::GraphParameter;
use crate::rational::{self, Rational};

pub use exact::{exact_rank, psd_check, quadratic_form, PsdVerdict};

#[derive(Clone, Debug)]
pub struct ConnectionSlice {
    pub k: usize,
    pub rows: Vec<LabeledGraph>,
    pub codes: Vec<CanonicalCode>,
    pub entries: Vec<Vec<Rational>>,
}

pub fn label_range(k: usize) -> BTreeSet<u32> {
    (1..=k as u32).collect()
}

/// Slice over all `k`-labeled classes within the size bounds.
pub fn build_slice(
    f: &dyn GraphParameter,
    k: usize,
    max_nodes: usize,
    max_edges: usize,
    multi: bool,
) -> Result<ConnectionSlice> {
    let rows = enumerate_labeled(&label_range(k), max_nodes, max_edges, multi);
    build_slice_from_rows(f, k, rows)
}

/// Slice over the given rows. Rows are put in canonical node order and
/// duplicates (up to isomorphism) dropped, keeping first occurrences.
/// Entries are evaluated in parallel; assembly is deterministic.
pub fn build_slice_from_rows(
    f: &dyn GraphParameter,
    k: usize,
    rows: Vec<LabeledGraph>,
) -> Result<ConnectionSlice> {
    let mut seen = HashSet::new();
    let mut kept = Vec::new();
    let mut codes = Vec::new();
    for g in rows {
        let (code, cg) = canonical_graph(&g);
        if seen.insert(code.clone()) {
            kept.push(cg);
            codes.push(code);
        }
    }
    let entries = gram(f, &kept, &kept)?;
    Ok(ConnectionSlice {
        k,
        rows: kept,
        codes,
        entries,
    })
}

/// `f(a_i b_j)` for all pairs; symmetric blocks are not exploited here so the
/// same routine serves rectangular extensions.
fn gram(f: &dyn GraphParameter, a: &[LabeledGraph], b: &[LabeledGraph]) -> Result<Vec<Vec<Rational>>> {
    let same = std::ptr::eq(a, b);
    let pairs: Vec<(usize, usize)> = (0..a.len())
        .flat_map(|i| (0..b.len()).filter(move |&j| !same || j >= i).map(move |j| (i, j)))
        .collect();
    let values: Vec<Rational> = pairs
        .par_iter()
        .map(|&(i, j)| f.eval(glue(&a[i], &b[j]).graph()))
        .collect::<Result<_>>()?;
    let mut m = vec![vec![Rational::default(); b.len()]; a.len()];
    for (&(i, j), v) in pairs.iter().zip(values) {
        if same {
            m[j][i] = v.clone();
        }
        m[i][j] = v;
    }
    Ok(m)
}

impl ConnectionSlice {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rank(&self) -> usize {
        exact_rank(&self.entries)
    }

    pub fn psd(&self) -> PsdVerdict {
        psd_check(&self.entries).expect("slices are symmetric")
    }

    /// Principal submatrix on the given row indices.
    pub fn restrict(&self, idx: &[usize]) -> ConnectionSlice {
        ConnectionSlice {
            k: self.k,
            rows: idx.iter().map(|&i| self.rows[i].clone()).collect(),
            codes: idx.iter().map(|&i| self.codes[i].clone()).collect(),
            entries: idx
                .iter()
                .map(|&i| idx.iter().map(|&j| self.entries[i][j].clone()).collect())
                .collect(),
        }
    }

    /// Extends the slice by `extra` rows, evaluating only new entries.
    pub fn extend(&mut self, f: &dyn GraphParameter, extra: Vec<LabeledGraph>) -> Result<()> {
        let mut seen: HashSet<CanonicalCode> = self.codes.iter().cloned().collect();
        let mut new_rows = Vec::new();
        for g in extra {
            let (code, cg) = canonical_graph(&g);
            if seen.insert(code.clone()) {
                new_rows.push(cg);
                self.codes.push(code);
            }
        }
        let cross = gram(f, &self.rows, &new_rows)?;
        let corner = gram(f, &new_rows, &new_rows)?;
        for (row, ext) in self.entries.iter_mut().zip(&cross) {
            row.extend(ext.iter().cloned());
        }
        for (j, corner_row) in corner.into_iter().enumerate() {
            let mut row: Vec<Rational> = cross.iter().map(|r| r[j].clone()).collect();
            row.extend(corner_row);
            self.entries.push(row);
        }
        self.rows.extend(new_rows);
        Ok(())
    }

    /// Header of canonical codes, then one line per row: code and entries.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("code");
        for c in &self.codes {
            out.push('\t');
            out.push_str(&c.to_hex());
        }
        out.push('\n');
        for (c, row) in self.codes.iter().zip(&self.entries) {
            out.push_str(&c.to_hex());
            for v in row {
                out.push('\t');
                out.push_str(&rational::format(v));
            }
            out.push('\n');
        }
        out
    }
}

/// Row bounds for `k`-labeled slices: at most `k + extra_nodes` nodes and
/// `k + extra_edges` edges. `multi: None` defers to the parameter.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SliceBudget {
    pub extra_nodes: usize,
    pub extra_edges: usize,
    pub multi: Option<bool>,
}

impl Default for SliceBudget {
    fn default() -> Self {
        SliceBudget {
            extra_nodes: 3,
            extra_edges: 4,
            multi: None,
        }
    }
}

/// Certified lower bound on `r_f(k)`.
#[derive(Clone, Debug, Serialize)]
pub struct ProfileEntry {
    pub k: usize,
    pub rank: usize,
    /// Rows in the largest slice examined.
    pub rows: usize,
    /// Node bound of that slice.
    pub max_nodes: usize,
    pub max_edges: usize,
    pub multi: bool,
    /// The rank did not change when the node bound was last raised. The
    /// bound then matches the true rank if growth has really stopped; this is
    /// a heuristic, not a proof.
    pub saturated: bool,
}

/// Exact ranks of growing slices for `k = 0..=k_max`. For each `k` the node
/// bound is raised one at a time from `k`; the slice stops growing once the
/// rank repeats or the budget is reached.
pub fn rank_profile(f: &dyn GraphParameter, k_max: usize, budget: SliceBudget) -> Result<Vec<ProfileEntry>> {
    (0..=k_max).map(|k| rank_at(f, k, budget)).collect()
}

pub fn rank_at(f: &dyn GraphParameter, k: usize, budget: SliceBudget) -> Result<ProfileEntry> {
    let multi = budget.multi.unwrap_or_else(|| f.multiplicity_sensitive());
    let labels = label_range(k);
    let max_edges = k + budget.extra_edges;
    let mut slice = ConnectionSlice {
        k,
        rows: Vec::new(),
        codes: Vec::new(),
        entries: Vec::new(),
    };
    let mut last: Option<usize> = None;
    let mut entry = ProfileEntry {
        k,
        rank: 0,
        rows: 0,
        max_nodes: k,
        max_edges,
        multi,
        saturated: false,
    };
    for n in k..=k + budget.extra_nodes {
        let level: Vec<LabeledGraph> = enumerate_with_nodes(&labels, n, max_edges, multi)
            .into_iter()
            .map(|(_, g)| g)
            .collect();
        slice.extend(f, level)?;
        let rank = slice.rank();
        entry.rank = rank;
        entry.rows = slice.len();
        entry.max_nodes = n;
        if last == Some(rank) {
            entry.saturated = true;
            break;
        }
        last = Some(rank);
    }
    Ok(entry)
}

/// Result of the multiplicativity test on `k = 0` slices: `f` is
/// multiplicative iff `M(f, 0)` is positive semidefinite of rank 1 with
/// `f(K_0) = 1`.
#[derive(Clone, Debug, Serialize)]
pub struct MultiplicativityReport {
    #[serde(serialize_with = "ser_rational")]
    pub f_k0: Rational,
    pub rank: usize,
    pub psd: bool,
    pub rows: usize,
}

fn ser_rational<S: serde::Serializer>(v: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational::format(v))
}

impl MultiplicativityReport {
    pub fn multiplicative(&self) -> bool {
        self.psd && self.rank == 1 && self.f_k0 == Rational::from_integer(1.into())
    }
}

pub fn multiplicativity_check(
    f: &dyn GraphParameter,
    max_nodes: usize,
    max_edges: usize,
) -> Result<MultiplicativityReport> {
    let slice = build_slice(f, 0, max_nodes, max_edges, f.multiplicity_sensitive())?;
    Ok(MultiplicativityReport {
        f_k0: f.eval(&crate::graph::MultiGraph::empty(0))?,
        rank: slice.rank(),
        psd: slice.psd().is_psd(),
        rows: slice.len(),
    })
}

/// Disjoint union of a `k`-labeled and an `l`-labeled graph, the latter's
/// labels shifted by `k`.
pub fn separated(a: &LabeledGraph, b: &LabeledGraph, k: u32) -> LabeledGraph {
    let shift: std::collections::BTreeMap<u32, u32> =
        b.labels().keys().map(|&l| (l, l + k)).collect();
    let b = b.relabeled(&shift).expect("shift keeps labels positive and distinct");
    glue(a, &b)
}

/// Kronecker product `a ⊗ b` with row index `i * |b| + j`.
pub fn kronecker(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let (n, m) = (a.len(), b.len());
    (0..n * m)
        .map(|r| {
            (0..n * m)
                .map(|c| &a[r / m][c / m] * &b[r % m][c % m])
                .collect()
        })
        .collect()
}

/// Separated-row check: on rows `A_i B_j` (disjoint unions of rows of the
/// `k`- and `l`-slices), the `(k+l)`-slice equals the Kronecker product of
/// the two slices. Returns that slice and whether the equality holds exactly.
pub fn separated_slice(
    f: &dyn GraphParameter,
    sk: &ConnectionSlice,
    sl: &ConnectionSlice,
) -> Result<(Vec<Vec<Rational>>, bool)> {
    let rows: Vec<LabeledGraph> = sk
        .rows
        .iter()
        .flat_map(|a| sl.rows.iter().map(move |b| separated(a, b, sk.k as u32)))
        .collect();
    let m = gram(f, &rows, &rows)?;
    let equal = m == kronecker(&sk.entries, &sl.entries);
    Ok((m, equal))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::MultiGraph;
    use crate::params::{Param, ChromaticCache};
    use crate::rational::int;
    use crate::target::WeightedTarget;

    fn k1_and_k2() -> Vec<LabeledGraph> {
        let mut k2 = LabeledGraph::k_edgeless(1);
        k2.add_pendant(1).unwrap();
        vec![LabeledGraph::k_edgeless(1), k2]
    }

    #[test]
    fn matching_slice_on_two_rows() {
        let s = build_slice_from_rows(&Param::Matchings, 1, k1_and_k2()).unwrap();
        assert_eq!(s.entries, vec![vec![int(0), int(1)], vec![int(1), int(0)]]);
        let v = s.psd();
        assert!(!v.is_psd() && v.verify(&s.entries));
    }

    #[test]
    fn extend_matches_direct_build() {
        let f = Param::hom("h", WeightedTarget::independent_set());
        let direct = build_slice(&f, 2, 4, 3, false).unwrap();
        let mut grown = build_slice(&f, 2, 2, 3, false).unwrap();
        let extra = enumerate_labeled(&label_range(2), 4, 3, false);
        grown.extend(&f, extra).unwrap();
        assert_eq!(grown.len(), direct.len());
        // Same set of rows; compare entry by code pair.
        let pos = |s: &ConnectionSlice, c: &CanonicalCode| s.codes.iter().position(|x| x == c).unwrap();
        for (i, ci) in direct.codes.iter().enumerate() {
            for (j, cj) in direct.codes.iter().enumerate() {
                assert_eq!(direct.entries[i][j], grown.entries[pos(&grown, ci)][pos(&grown, cj)]);
            }
        }
    }

    #[test]
    fn multiplicative_parameter_has_rank_one_at_zero() {
        let r = multiplicativity_check(&Param::Matchings, 4, 4).unwrap();
        assert!(r.multiplicative(), "{r:?}");
    }

    #[test]
    fn non_multiplicative_detected() {
        struct EdgeCount;
        impl GraphParameter for EdgeCount {
            fn name(&self) -> String {
                "edges".into()
            }
            fn eval(&self, g: &MultiGraph) -> Result<Rational> {
                Ok(int(g.edge_count() as i64))
            }
            fn multiplicative(&self) -> bool {
                false
            }
        }
        assert!(!multiplicativity_check(&EdgeCount, 3, 2).unwrap().multiplicative());
    }

    #[test]
    fn tsv_has_header_and_rows() {
        let s = build_slice_from_rows(&Param::Matchings, 1, k1_and_k2()).unwrap();
        let tsv = s.to_tsv();
        let lines: Vec<&str> = tsv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("code\t"));
        assert!(lines[1].ends_with("\t0\t1"));
    }

    #[test]
    fn small_profiles() {
        let m = rank_profile(&Param::Matchings, 2, SliceBudget::default()).unwrap();
        assert_eq!(m.iter().map(|e| e.rank).collect::<Vec<_>>(), vec![1, 2, 4]);
        assert!(m.iter().all(|e| e.saturated));
        let c = Param::Chromatic {
            x: int(2),
            cache: std::sync::Arc::new(ChromaticCache::default()),
        };
        let p = rank_profile(&c, 2, SliceBudget::default()).unwrap();
        assert_eq!(p.iter().map(|e| e.rank).collect::<Vec<_>>(), vec![1, 1, 2]);
    }

    #[test]
    fn kronecker_shape() {
        let a = vec![vec![int(1), int(2)], vec![int(3), int(4)]];
        let id = vec![vec![int(1), int(0)], vec![int(0), int(1)]];
        let k = kronecker(&a, &id);
        assert_eq!(k[0], vec![int(1), int(0), int(2), int(0)]);
        assert_eq!(k[3], vec![int(0), int(3), int(0), int(4)]);
    }
}
