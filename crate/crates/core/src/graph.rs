//! Loop-free multigraphs and partially labeled graphs.
//!
//! A [`LabeledGraph`] carries an injective map from positive integer labels to
//! nodes. Gluing two labeled graphs takes their disjoint union and identifies
//! nodes carrying the same label; this is the product of the graph algebra.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

/// Finite loop-free multigraph. Edges are kept as a sorted map from node pairs
/// `(u, v)` with `u < v` to multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiGraph {
    nodes: usize,
    edges: BTreeMap<(usize, usize), u32>,
}

impl MultiGraph {
    pub fn empty(nodes: usize) -> Self {
        MultiGraph {
            nodes,
            edges: BTreeMap::new(),
        }
    }

    /// Builds a multigraph from an edge list; repeated pairs become parallel
    /// edges.
    pub fn from_edges(nodes: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = MultiGraph::empty(nodes);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.add_edges(u, v, 1)
    }

    pub fn add_edges(&mut self, u: usize, v: usize, mult: u32) -> Result<()> {
        if u == v {
            return Err(Error::Loop(u));
        }
        for w in [u, v] {
            if w >= self.nodes {
                return Err(Error::EndpointOutOfRange {
                    endpoint: w,
                    nodes: self.nodes,
                });
            }
        }
        if mult > 0 {
            *self.edges.entry((u.min(v), u.max(v))).or_insert(0) += mult;
        }
        Ok(())
    }

    pub fn add_node(&mut self) -> usize {
        self.nodes += 1;
        self.nodes - 1
    }

    pub fn node_count(&self) -> usize {
        self.nodes
    }

    /// Number of edges counted with multiplicity.
    pub fn edge_count(&self) -> usize {
        self.edges.values().map(|&m| m as usize).sum()
    }

    /// Distinct adjacent pairs with their multiplicities.
    pub fn edge_classes(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.edges.iter().map(|(&(u, v), &m)| (u, v, m))
    }

    /// Every edge, parallel copies repeated.
    pub fn edge_list(&self) -> Vec<(usize, usize)> {
        self.edge_classes()
            .flat_map(|(u, v, m)| std::iter::repeat((u, v)).take(m as usize))
            .collect()
    }

    pub fn multiplicity(&self, u: usize, v: usize) -> u32 {
        self.edges.get(&(u.min(v), u.max(v))).copied().unwrap_or(0)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edge_classes()
            .filter(|&(a, b, _)| a == v || b == v)
            .map(|(_, _, m)| m as usize)
            .sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.nodes];
        for (u, v, m) in self.edge_classes() {
            deg[u] += m as usize;
            deg[v] += m as usize;
        }
        deg
    }

    /// Neighbor lists with multiplicities.
    pub fn adjacency(&self) -> Vec<Vec<(usize, u32)>> {
        let mut adj = vec![Vec::new(); self.nodes];
        for (u, v, m) in self.edge_classes() {
            adj[u].push((v, m));
            adj[v].push((u, m));
        }
        adj
    }

    /// The simple graph obtained by keeping one copy of each parallel class.
    pub fn simple_support(&self) -> MultiGraph {
        MultiGraph {
            nodes: self.nodes,
            edges: self.edges.keys().map(|&k| (k, 1)).collect(),
        }
    }

    pub fn is_simple(&self) -> bool {
        self.edges.values().all(|&m| m == 1)
    }

    /// Disjoint union; nodes of `other` are shifted past ours.
    pub fn disjoint_union(&self, other: &MultiGraph) -> MultiGraph {
        let mut g = self.clone();
        g.nodes += other.nodes;
        for (u, v, m) in other.edge_classes() {
            g.edges.insert((u + self.nodes, v + self.nodes), m);
        }
        g
    }

    /// Renames node `i` to `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> MultiGraph {
        let mut g = MultiGraph::empty(self.nodes);
        for (u, v, m) in self.edge_classes() {
            let (a, b) = (perm[u], perm[v]);
            g.edges.insert((a.min(b), a.max(b)), m);
        }
        g
    }

    /// Connected components as node lists.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.nodes];
        let mut out = Vec::new();
        for s in 0..self.nodes {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                for &(w, _) in &adj[comp[i]] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
                i += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Subgraph induced on `keep`, nodes renumbered in the given order.
    pub fn induced(&self, keep: &[usize]) -> MultiGraph {
        let mut index = vec![usize::MAX; self.nodes];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let mut g = MultiGraph::empty(keep.len());
        for (u, v, m) in self.edge_classes() {
            if index[u] != usize::MAX && index[v] != usize::MAX {
                let (a, b) = (index[u], index[v]);
                g.edges.insert((a.min(b), a.max(b)), m);
            }
        }
        g
    }

    // Named graphs.

    pub fn complete(n: usize) -> MultiGraph {
        let mut g = MultiGraph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.edges.insert((u, v), 1);
            }
        }
        g
    }

    pub fn path(n: usize) -> MultiGraph {
        let mut g = MultiGraph::empty(n);
        for v in 1..n {
            g.edges.insert((v - 1, v), 1);
        }
        g
    }

    pub fn cycle(n: usize) -> MultiGraph {
        assert!(n >= 3, "a loop-free cycle needs at least 3 nodes");
        let mut g = MultiGraph::path(n);
        g.edges.insert((0, n - 1), 1);
        g
    }
}

/// Multigraph with an injective partial labeling by positive integers.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LabeledGraph {
    graph: MultiGraph,
    labels: BTreeMap<u32, usize>,
}

impl LabeledGraph {
    pub fn new(graph: MultiGraph, labels: BTreeMap<u32, usize>) -> Result<Self> {
        let mut used = BTreeSet::new();
        for (&l, &v) in &labels {
            if l == 0 {
                return Err(Error::BadLabel(l));
            }
            if v >= graph.node_count() {
                return Err(Error::LabelOutOfRange {
                    label: l,
                    node: v,
                    nodes: graph.node_count(),
                });
            }
            if !used.insert(v) {
                return Err(Error::NonInjectiveLabels(v));
            }
        }
        Ok(LabeledGraph { graph, labels })
    }

    pub fn unlabeled(graph: MultiGraph) -> Self {
        LabeledGraph {
            graph,
            labels: BTreeMap::new(),
        }
    }

    /// Labels the first `labels.len()` nodes with the given labels, in order.
    pub fn with_leading_labels(graph: MultiGraph, labels: &[u32]) -> Result<Self> {
        let map = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        LabeledGraph::new(graph, map)
    }

    /// `K_k` with nodes labeled `1..=k`.
    pub fn k_complete(k: usize) -> Self {
        let labels: Vec<u32> = (1..=k as u32).collect();
        LabeledGraph::with_leading_labels(MultiGraph::complete(k), &labels)
            .expect("valid labels")
    }

    /// `O_k`: `k` labeled nodes and no edges.
    pub fn k_edgeless(k: usize) -> Self {
        let labels: Vec<u32> = (1..=k as u32).collect();
        LabeledGraph::unit(&labels.into_iter().collect())
    }

    /// `U_S`: one isolated node per label in `s`.
    pub fn unit(s: &BTreeSet<u32>) -> Self {
        let labels: Vec<u32> = s.iter().copied().collect();
        LabeledGraph::with_leading_labels(MultiGraph::empty(labels.len()), &labels)
            .expect("valid labels")
    }

    /// The graph on `S ∪ {u, v}` whose only edge joins `u` and `v`.
    pub fn single_edge(s: &BTreeSet<u32>, u: u32, v: u32) -> Self {
        let mut all = s.clone();
        all.insert(u);
        all.insert(v);
        let unit = LabeledGraph::unit(&all);
        let (a, b) = (unit.labels[&u], unit.labels[&v]);
        let mut graph = unit.graph.clone();
        graph.add_edge(a, b).expect("distinct labels");
        LabeledGraph {
            graph,
            labels: unit.labels,
        }
    }

    pub fn graph(&self) -> &MultiGraph {
        &self.graph
    }

    pub fn into_graph(self) -> MultiGraph {
        self.graph
    }

    pub fn labels(&self) -> &BTreeMap<u32, usize> {
        &self.labels
    }

    pub fn label_set(&self) -> BTreeSet<u32> {
        self.labels.keys().copied().collect()
    }

    /// Label carried by each node, if any.
    pub fn node_labels(&self) -> Vec<Option<u32>> {
        let mut out = vec![None; self.graph.node_count()];
        for (&l, &v) in &self.labels {
            out[v] = Some(l);
        }
        out
    }

    pub fn labeled_nodes(&self) -> BTreeSet<usize> {
        self.labels.values().copied().collect()
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    /// Whether some unlabeled node has no incident edge.
    pub fn has_isolated_unlabeled(&self) -> bool {
        let deg = self.graph.degrees();
        let labeled = self.labeled_nodes();
        (0..self.node_count()).any(|v| deg[v] == 0 && !labeled.contains(&v))
    }

    /// Adds an edge between the nodes carrying labels `a` and `b`.
    pub fn add_labeled_edge(&mut self, a: u32, b: u32) -> Result<()> {
        let (u, v) = (self.labels[&a], self.labels[&b]);
        self.graph.add_edge(u, v)
    }

    /// Adds an unlabeled node joined to the node labeled `at`.
    pub fn add_pendant(&mut self, at: u32) -> Result<()> {
        let u = self.labels[&at];
        let w = self.graph.add_node();
        self.graph.add_edge(u, w)
    }

    /// Renames labels through `map`; labels not in `map` are unchanged.
    pub fn relabeled(&self, map: &BTreeMap<u32, u32>) -> Result<Self> {
        let labels = self
            .labels
            .iter()
            .map(|(l, &v)| (*map.get(l).unwrap_or(l), v))
            .collect::<BTreeMap<_, _>>();
        if labels.len() != self.labels.len() {
            return Err(Error::Parse("relabeling merges two labels".into()));
        }
        LabeledGraph::new(self.graph.clone(), labels)
    }

    /// Node renaming `i -> perm[i]` applied to graph and labels.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        LabeledGraph {
            graph: self.graph.permuted(perm),
            labels: self.labels.iter().map(|(&l, &v)| (l, perm[v])).collect(),
        }
    }

    /// Adds an isolated labeled node for every label of `s` not already used.
    pub fn extend_labels(&self, s: &BTreeSet<u32>) -> Self {
        let mut g = self.clone();
        for &l in s {
            if !g.labels.contains_key(&l) {
                let v = g.graph.add_node();
                g.labels.insert(l, v);
            }
        }
        g
    }
}

/// Product of two partially labeled graphs: disjoint union with same-labeled
/// nodes identified. Parallel edges are kept.
pub fn glue(g1: &LabeledGraph, g2: &LabeledGraph) -> LabeledGraph {
    let n1 = g1.node_count();
    let mut map = vec![usize::MAX; g2.node_count()];
    for (l, &v) in &g2.labels {
        if let Some(&w) = g1.labels.get(l) {
            map[v] = w;
        }
    }
    let mut next = n1;
    for slot in map.iter_mut() {
        if *slot == usize::MAX {
            *slot = next;
            next += 1;
        }
    }
    let mut graph = g1.graph.clone();
    graph.nodes = next;
    for (u, v, m) in g2.graph.edge_classes() {
        let (a, b) = (map[u], map[v]);
        *graph.edges.entry((a.min(b), a.max(b))).or_insert(0) += m;
    }
    let mut labels = g1.labels.clone();
    for (&l, &v) in &g2.labels {
        labels.entry(l).or_insert(map[v]);
    }
    LabeledGraph { graph, labels }
}

/// Deletes every label outside `keep`; the underlying multigraph is unchanged.
pub fn restrict_labels(g: &LabeledGraph, keep: &BTreeSet<u32>) -> LabeledGraph {
    LabeledGraph {
        graph: g.graph.clone(),
        labels: g
            .labels
            .iter()
            .filter(|(l, _)| keep.contains(l))
            .map(|(&l, &v)| (l, v))
            .collect(),
    }
}

impl fmt::Display for LabeledGraph {
    /// Text graph format: `N M K`, then `M` edge lines, then `K` label lines.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} {} {}",
            self.node_count(),
            self.edge_count(),
            self.labels.len()
        )?;
        for (u, v) in self.graph.edge_list() {
            writeln!(f, "{u} {v}")?;
        }
        for (l, v) in &self.labels {
            writeln!(f, "{l} {v}")?;
        }
        Ok(())
    }
}

/// Parses one or more graphs in the text format. Blank lines and `#` comments
/// are ignored; blocks follow each other directly.
pub fn parse_graphs(text: &str) -> Result<Vec<LabeledGraph>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let mut out = Vec::new();
    while let Some((lineno, header)) = lines.next() {
        let [n, m, k] = parse_fields::<3>(header, lineno)?;
        let mut graph = MultiGraph::empty(n);
        for _ in 0..m {
            let (lineno, line) = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("missing edge line after line {lineno}")))?;
            let [u, v] = parse_fields::<2>(line, lineno)?;
            graph.add_edge(u, v).map_err(|e| match e {
                Error::Loop(_) => Error::Parse(format!("line {lineno}: loop `{line}`")),
                other => Error::Parse(format!("line {lineno}: {other}")),
            })?;
        }
        let mut labels = BTreeMap::new();
        for _ in 0..k {
            let (lineno, line) = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("missing label line after line {lineno}")))?;
            let [l, v] = parse_fields::<2>(line, lineno)?;
            let l = u32::try_from(l)
                .map_err(|_| Error::Parse(format!("line {lineno}: label `{l}` too large")))?;
            if labels.insert(l, v).is_some() {
                return Err(Error::Parse(format!("line {lineno}: duplicate label {l}")));
            }
        }
        out.push(
            LabeledGraph::new(graph, labels)
                .map_err(|e| Error::Parse(format!("graph at line {lineno}: {e}")))?,
        );
    }
    Ok(out)
}

/// Parses exactly one graph.
pub fn parse_graph(text: &str) -> Result<LabeledGraph> {
    let mut gs = parse_graphs(text)?;
    match gs.len() {
        1 => Ok(gs.pop().unwrap()),
        n => Err(Error::Parse(format!("expected one graph, found {n}"))),
    }
}

fn parse_fields<const N: usize>(line: &str, lineno: usize) -> Result<[usize; N]> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    if tokens.len() != N {
        return Err(Error::Parse(format!(
            "line {lineno}: expected {N} integers, got `{line}`"
        )));
    }
    let mut out = [0; N];
    for (slot, tok) in out.iter_mut().zip(&tokens) {
        *slot = tok
            .parse()
            .map_err(|_| Error::Parse(format!("line {lineno}: bad token `{tok}`")))?;
    }
    Ok(out)
}
