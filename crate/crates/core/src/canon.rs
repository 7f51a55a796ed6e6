//! Canonical codes for labeled multigraphs up to label-preserving isomorphism.
//!
//! Nodes are first partitioned by color refinement (labeled nodes start in
//! singleton cells ordered by label). The canonical order is then the
//! cell-respecting node ordering whose lower-triangular multiplicity matrix is
//! lexicographically smallest, found by backtracking with prefix pruning and
//! twin skipping. Exponential in the worst case, fine at the ~10 node scale.

use std::collections::BTreeMap;
use std::fmt;

use crate::graph::LabeledGraph;

/// Byte string identifying a labeled graph up to label-preserving isomorphism.
///
/// Layout: node count, edge count (u16, big endian), label count, the labels
/// (u32, big endian, ascending), then the multiplicity matrix below the
/// diagonal in canonical node order. Sorting codes therefore sorts by node
/// count, then edge count.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalCode(Vec<u8>);

impl CanonicalCode {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

pub fn canonical(g: &LabeledGraph) -> CanonicalCode {
    canonical_form(g).0
}

/// Canonical code together with the canonical node order (`order[i]` is the
/// original node placed at position `i`).
pub fn canonical_form(g: &LabeledGraph) -> (CanonicalCode, Vec<usize>) {
    let n = g.node_count();
    assert!(n <= u8::MAX as usize, "graph too large for canonical codes");
    let mut adj = vec![0u8; n * n];
    for (u, v, m) in g.graph().edge_classes() {
        let m = u8::try_from(m).expect("edge multiplicity above 255");
        adj[u * n + v] = m;
        adj[v * n + u] = m;
    }
    let colors = refine(g, &adj);

    // Cells in color order; labeled nodes come first, ordered by label.
    let mut cells: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (v, &c) in colors.iter().enumerate() {
        cells.entry(c).or_default().push(v);
    }
    let cells: Vec<Vec<usize>> = cells.into_values().collect();
    let mut cell_of_pos = Vec::with_capacity(n);
    for (ci, cell) in cells.iter().enumerate() {
        cell_of_pos.extend(std::iter::repeat(ci).take(cell.len()));
    }

    let mut search = Search {
        n,
        adj: &adj,
        cells: &cells,
        cell_of_pos: &cell_of_pos,
        twins: twin_matrix(n, &adj),
        used: vec![false; n],
        order: Vec::with_capacity(n),
        code: Vec::with_capacity(n * n / 2),
        best: None,
        best_order: Vec::new(),
    };
    search.run();
    let matrix = search.best.unwrap_or_default();
    let order = search.best_order;

    let mut bytes = Vec::with_capacity(4 + 4 * g.labels().len() + matrix.len());
    bytes.push(n as u8);
    let e = u16::try_from(g.edge_count()).expect("too many edges for canonical codes");
    bytes.extend_from_slice(&e.to_be_bytes());
    bytes.push(u8::try_from(g.labels().len()).expect("too many labels"));
    for l in g.labels().keys() {
        bytes.extend_from_slice(&l.to_be_bytes());
    }
    bytes.extend_from_slice(&matrix);
    (CanonicalCode(bytes), order)
}

/// Relabels `g` into canonical node order.
pub fn canonical_graph(g: &LabeledGraph) -> (CanonicalCode, LabeledGraph) {
    let (code, order) = canonical_form(g);
    let mut perm = vec![0; order.len()];
    for (pos, &v) in order.iter().enumerate() {
        perm[v] = pos;
    }
    (code, g.permuted(&perm))
}

pub fn isomorphic(a: &LabeledGraph, b: &LabeledGraph) -> bool {
    a.node_count() == b.node_count()
        && a.edge_count() == b.edge_count()
        && a.labels().keys().eq(b.labels().keys())
        && canonical(a) == canonical(b)
}

/// Color refinement to a stable partition. Colors are ranks of signatures, so
/// they are isomorphism invariant.
fn refine(g: &LabeledGraph, adj: &[u8]) -> Vec<usize> {
    let n = g.node_count();
    let node_labels = g.node_labels();
    let initial: Vec<(u8, u32)> = node_labels
        .iter()
        .map(|l| match l {
            Some(l) => (0, *l),
            None => (1, 0),
        })
        .collect();
    let mut colors = rank(&initial);
    let mut count = distinct(&colors);
    loop {
        let sigs: Vec<(usize, Vec<(usize, u8)>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<(usize, u8)> = (0..n)
                    .filter(|&w| adj[v * n + w] > 0)
                    .map(|w| (colors[w], adj[v * n + w]))
                    .collect();
                nb.sort_unstable();
                (colors[v], nb)
            })
            .collect();
        let next = rank(&sigs);
        let next_count = distinct(&next);
        colors = next;
        if next_count == count {
            return colors;
        }
        count = next_count;
    }
}

fn rank<T: Ord + Clone>(keys: &[T]) -> Vec<usize> {
    let mut sorted: Vec<T> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter()
        .map(|k| sorted.binary_search(k).expect("present"))
        .collect()
}

fn distinct(colors: &[usize]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

/// `twins[a*n+b]`: swapping `a` and `b` is an automorphism of the unlabeled
/// structure (identical multiplicities to every third node).
fn twin_matrix(n: usize, adj: &[u8]) -> Vec<bool> {
    let mut t = vec![false; n * n];
    for a in 0..n {
        for b in a + 1..n {
            let same = (0..n)
                .filter(|&x| x != a && x != b)
                .all(|x| adj[a * n + x] == adj[b * n + x]);
            t[a * n + b] = same;
            t[b * n + a] = same;
        }
    }
    t
}

struct Search<'a> {
    n: usize,
    adj: &'a [u8],
    cells: &'a [Vec<usize>],
    cell_of_pos: &'a [usize],
    twins: Vec<bool>,
    used: Vec<bool>,
    order: Vec<usize>,
    code: Vec<u8>,
    best: Option<Vec<u8>>,
    best_order: Vec<usize>,
}

impl Search<'_> {
    fn run(&mut self) {
        let pos = self.order.len();
        if pos == self.n {
            let better = match &self.best {
                None => true,
                Some(best) => self.code < *best,
            };
            if better {
                self.best = Some(self.code.clone());
                self.best_order = self.order.clone();
            }
            return;
        }
        let cells = self.cells;
        let cell = &cells[self.cell_of_pos[pos]];
        let mut tried: Vec<usize> = Vec::new();
        for &v in cell {
            if self.used[v] || tried.iter().any(|&t| self.twins[t * self.n + v]) {
                continue;
            }
            tried.push(v);
            let start = self.code.len();
            for &w in &self.order {
                self.code.push(self.adj[v * self.n + w]);
            }
            let prune = match &self.best {
                Some(best) => self.code[..] > best[..self.code.len()],
                None => false,
            };
            if !prune {
                self.used[v] = true;
                self.order.push(v);
                self.run();
                self.order.pop();
                self.used[v] = false;
            }
            self.code.truncate(start);
        }
    }
}
