//! `S`-flows over finite abelian groups and their character-sum targets.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::MultiGraph;
use crate::rational::{self, ratio, Rational};
use crate::target::WeightedTarget;

/// `Z_{m_1} x ... x Z_{m_t}`. Elements are indexed in mixed radix with the
/// first coordinate most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAbelianGroup {
    moduli: Vec<u32>,
}

impl FiniteAbelianGroup {
    pub fn new(moduli: Vec<u32>) -> Result<Self> {
        if moduli.is_empty() || moduli.iter().any(|&m| m < 2) {
            return Err(Error::InvalidFlowSpec(format!(
                "moduli must be a nonempty list of integers >= 2, got {moduli:?}"
            )));
        }
        if moduli.iter().map(|&m| m as u64).product::<u64>() > 1 << 16 {
            return Err(Error::InvalidFlowSpec("group too large".into()));
        }
        Ok(FiniteAbelianGroup { moduli })
    }

    pub fn moduli(&self) -> &[u32] {
        &self.moduli
    }

    pub fn order(&self) -> usize {
        self.moduli.iter().map(|&m| m as usize).product()
    }

    pub fn index(&self, e: &[u32]) -> usize {
        e.iter()
            .zip(&self.moduli)
            .fold(0, |acc, (&x, &m)| acc * m as usize + x as usize)
    }

    pub fn element(&self, mut idx: usize) -> Vec<u32> {
        let mut e = vec![0; self.moduli.len()];
        for (x, &m) in e.iter_mut().zip(&self.moduli).rev() {
            *x = (idx % m as usize) as u32;
            idx /= m as usize;
        }
        e
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (ea, eb) = (self.element(a), self.element(b));
        let sum: Vec<u32> = ea
            .iter()
            .zip(&eb)
            .zip(&self.moduli)
            .map(|((x, y), m)| (x + y) % m)
            .collect();
        self.index(&sum)
    }

    pub fn neg(&self, a: usize) -> usize {
        let e: Vec<u32> = self
            .element(a)
            .iter()
            .zip(&self.moduli)
            .map(|(x, m)| (m - x) % m)
            .collect();
        self.index(&e)
    }
}

/// A group together with an inversion-closed subset `S` of allowed values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowSpec {
    group: FiniteAbelianGroup,
    s: BTreeSet<usize>,
}

impl FlowSpec {
    pub fn new(group: FiniteAbelianGroup, s: Vec<Vec<u32>>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for e in &s {
            if e.len() != group.moduli.len() || e.iter().zip(&group.moduli).any(|(x, m)| x >= m) {
                return Err(Error::InvalidFlowSpec(format!(
                    "element {e:?} is not in Z{:?}",
                    group.moduli
                )));
            }
            set.insert(group.index(e));
        }
        if let Some(&bad) = set.iter().find(|&&a| !set.contains(&group.neg(a))) {
            return Err(Error::InvalidFlowSpec(format!(
                "S is not closed under inversion: {:?} has no inverse in S",
                group.element(bad)
            )));
        }
        Ok(FlowSpec { group, s: set })
    }

    /// `S = group \ {0}`.
    pub fn nowhere_zero(group: FiniteAbelianGroup) -> Self {
        let s = (1..group.order()).collect();
        FlowSpec { group, s }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    /// Indices of the elements of `S`.
    pub fn s(&self) -> &BTreeSet<usize> {
        &self.s
    }

    /// Text form: a `group m1,m2,...` line and an `S e1 e2 ...` line where each
    /// element is a comma-separated tuple (optionally parenthesized).
    pub fn parse(text: &str) -> Result<Self> {
        let mut group = None;
        let mut elems = None;
        for line in text.lines().map(|l| l.split('#').next().unwrap_or("").trim()) {
            if line.is_empty() {
                continue;
            }
            let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            match key {
                "group" => group = Some(parse_tuple(rest.trim())?),
                "S" => {
                    elems = Some(
                        rest.split_whitespace()
                            .map(parse_tuple)
                            .collect::<Result<Vec<_>>>()?,
                    )
                }
                other => {
                    return Err(Error::Parse(format!("flow spec: unexpected token `{other}`")))
                }
            }
        }
        let group = group.ok_or_else(|| Error::Parse("flow spec: missing `group` line".into()))?;
        let elems = elems.ok_or_else(|| Error::Parse("flow spec: missing `S` line".into()))?;
        FlowSpec::new(FiniteAbelianGroup::new(group)?, elems)
    }

    pub fn to_text(&self) -> String {
        let fmt_tuple = |e: Vec<u32>| e.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        let elems: Vec<String> = self.s.iter().map(|&a| fmt_tuple(self.group.element(a))).collect();
        format!("group {}\nS {}\n", fmt_tuple(self.group.moduli.clone()), elems.join(" "))
    }
}

fn parse_tuple(tok: &str) -> Result<Vec<u32>> {
    tok.trim_start_matches('(')
        .trim_end_matches(')')
        .split(',')
        .map(|x| {
            x.trim()
                .parse::<u32>()
                .map_err(|_| Error::Parse(format!("flow spec: bad integer `{x}` in `{tok}`")))
        })
        .collect()
}

impl fmt::Display for FlowSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text().trim_end().replace('\n', "; "))
    }
}

/// Number of maps `E(G) -> S` with zero net flow at every node, for the
/// orientation `u -> v` with `u < v` on every edge.
pub fn count_flows(g: &MultiGraph, spec: &FlowSpec) -> Rational {
    count_flows_oriented(g.node_count(), &g.edge_list(), spec)
}

/// [`count_flows`] for an explicit orientation: each arc is `(tail, head)`.
pub fn count_flows_oriented(nodes: usize, arcs: &[(usize, usize)], spec: &FlowSpec) -> Rational {
    // Spanning forest: tree arcs are determined by the rest.
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nodes];
    for (i, &(a, b)) in arcs.iter().enumerate() {
        adj[a].push(i);
        adj[b].push(i);
    }
    let mut seen = vec![false; nodes];
    let mut parent_arc: Vec<Option<usize>> = vec![None; nodes];
    let mut order = Vec::with_capacity(nodes);
    let mut in_tree = vec![false; arcs.len()];
    let mut roots = Vec::new();
    for r in 0..nodes {
        if seen[r] {
            continue;
        }
        seen[r] = true;
        roots.push(r);
        let mut queue = std::collections::VecDeque::from([r]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &e in &adj[v] {
                let (a, b) = arcs[e];
                let w = if a == v { b } else { a };
                if !seen[w] {
                    seen[w] = true;
                    parent_arc[w] = Some(e);
                    in_tree[e] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    let free: Vec<usize> = (0..arcs.len()).filter(|&e| !in_tree[e]).collect();
    let s: Vec<usize> = spec.s.iter().copied().collect();
    let group = &spec.group;
    let ctx = FlowCtx {
        group,
        arcs,
        free: &free,
        order: &order,
        parent_arc: &parent_arc,
        s: &s,
        in_s: (0..group.order()).map(|a| spec.s.contains(&a)).collect(),
    };
    let mut excess = vec![0usize; nodes];
    Rational::from_integer(ctx.assign(0, &mut excess))
}

struct FlowCtx<'a> {
    group: &'a FiniteAbelianGroup,
    arcs: &'a [(usize, usize)],
    free: &'a [usize],
    order: &'a [usize],
    parent_arc: &'a [Option<usize>],
    s: &'a [usize],
    in_s: Vec<bool>,
}

impl FlowCtx<'_> {
    /// `excess[v]` = outflow minus inflow at `v` from the arcs assigned so far.
    fn assign(&self, k: usize, excess: &mut Vec<usize>) -> BigInt {
        if k == self.free.len() {
            return if self.complete_tree(excess.clone()) {
                BigInt::one()
            } else {
                BigInt::zero()
            };
        }
        let (a, b) = self.arcs[self.free[k]];
        let mut total = BigInt::zero();
        for &x in self.s {
            let (ea, eb) = (excess[a], excess[b]);
            excess[a] = self.group.add(ea, x);
            excess[b] = self.group.add(eb, self.group.neg(x));
            total += self.assign(k + 1, excess);
            excess[a] = ea;
            excess[b] = eb;
        }
        total
    }

    /// Fixes tree arcs from the leaves up; true iff all land in `S` and every
    /// root balances.
    fn complete_tree(&self, mut excess: Vec<usize>) -> bool {
        for &v in self.order.iter().rev() {
            match self.parent_arc[v] {
                None => {
                    if excess[v] != 0 {
                        return false;
                    }
                }
                Some(e) => {
                    let (a, b) = self.arcs[e];
                    // Value x on e must cancel excess[v].
                    let (x, other) = if a == v {
                        (self.group.neg(excess[v]), b)
                    } else {
                        (excess[v], a)
                    };
                    if !self.in_s[x] {
                        return false;
                    }
                    let delta = if a == v { self.group.neg(x) } else { x };
                    excess[other] = self.group.add(excess[other], delta);
                    excess[v] = 0;
                }
            }
        }
        true
    }
}

/// Character sums `sum_{s in S} chi_a(s)^{-1} chi_b(s)` as (re, im) pairs,
/// indexed by group elements `a`, `b`.
pub fn character_sums(spec: &FlowSpec) -> Vec<Vec<(f64, f64)>> {
    let g = &spec.group;
    let n = g.order();
    let phase = |x: &[u32], s: &[u32]| -> f64 {
        x.iter()
            .zip(s)
            .zip(&g.moduli)
            .map(|((&x, &s), &m)| ((x as u64 * s as u64) % m as u64) as f64 / m as f64)
            .sum::<f64>()
    };
    let elems: Vec<Vec<u32>> = (0..n).map(|i| g.element(i)).collect();
    (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    let diff = &elems[g.add(b, g.neg(a))];
                    spec.s.iter().fold((0.0, 0.0), |(re, im), &s| {
                        let t = 2.0 * PI * phase(diff, &elems[s]);
                        (re + t.cos(), im + t.sin())
                    })
                })
                .collect()
        })
        .collect()
}

/// The target whose homomorphism numbers count `S`-flows: one node per
/// character, all node weights `1/|group|`, edge weights the character sums.
///
/// Exact for groups of exponent 2; otherwise the sums are evaluated in
/// floating point and rounded to the nearest rational with denominator at most
/// `|group|`, which fails if the sum is not within `1e-9` of one.
pub fn flow_target(spec: &FlowSpec) -> Result<WeightedTarget> {
    let g = &spec.group;
    let n = g.order();
    let beta: Vec<Vec<Rational>> = if g.moduli.iter().all(|&m| m == 2) {
        (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        let diff = g.element(g.add(b, g.neg(a)));
                        let sum: i64 = spec
                            .s
                            .iter()
                            .map(|&s| {
                                let dot: u32 = diff.iter().zip(g.element(s)).map(|(x, y)| x * y).sum();
                                if dot % 2 == 0 {
                                    1
                                } else {
                                    -1
                                }
                            })
                            .sum();
                        Rational::from_integer(sum.into())
                    })
                    .collect()
            })
            .collect()
    } else {
        let sums = character_sums(spec);
        let mut beta = vec![vec![Rational::zero(); n]; n];
        for a in 0..n {
            for b in 0..n {
                let (re, im) = sums[a][b];
                if im.abs() > 1e-9 {
                    return Err(Error::InvalidFlowSpec(format!(
                        "character sum has imaginary part {im:e}"
                    )));
                }
                beta[a][b] = rational::snap(re, n as u64, 1e-9).ok_or(Error::IrrationalWeight {
                    value: re,
                    max_den: n as u64,
                })?;
            }
        }
        // Rounding is symmetric in (a, b) up to float noise; enforce it.
        for a in 0..n {
            for b in a + 1..n {
                if beta[a][b] != beta[b][a] {
                    return Err(Error::InvalidFlowSpec("character sums not symmetric".into()));
                }
            }
        }
        beta
    };
    WeightedTarget::new(vec![ratio(1, n as i64); n], beta)
}
