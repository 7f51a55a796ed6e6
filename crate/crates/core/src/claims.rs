//! Numerical checks of the structural identities behind reconstruction, run
//! against an oracle's algebras. Each check reports its largest residual.

use std::collections::BTreeSet;

use nalgebra::DVector;
use serde::Serialize;

use crate::algebra::{inner as q_inner, AlgebraBudget, AlgebraRep, Oracle, QuantumGraph, Tower};
use crate::connmat::label_range;
use crate::enumerate::enumerate_labeled;
use crate::error::Result;
use crate::reconstruct::{build_target, find_max_degree_site, normalize, sig12};

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ClaimsConfig {
    pub budget: AlgebraBudget,
    pub seed: u64,
    /// Largest label set any check builds an algebra over.
    pub max_labels: usize,
    pub tol: f64,
}

impl Default for ClaimsConfig {
    fn default() -> Self {
        ClaimsConfig {
            budget: AlgebraBudget::default(),
            seed: 0,
            max_labels: 3,
            tol: 1e-6,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClaimResult {
    pub name: String,
    pub checks: usize,
    pub max_residual: f64,
    pub pass: bool,
    /// Why a check failed beyond its residual, if it did.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

struct Acc {
    name: &'static str,
    checks: usize,
    max: f64,
    ok: bool,
    note: Option<String>,
}

impl Acc {
    fn new(name: &'static str) -> Self {
        Acc {
            name,
            checks: 0,
            max: 0.0,
            ok: true,
            note: None,
        }
    }

    fn residual(&mut self, r: f64) {
        self.checks += 1;
        self.max = self.max.max(if r.is_nan() { f64::INFINITY } else { r });
    }

    fn fail(&mut self, note: String) {
        self.checks += 1;
        self.ok = false;
        self.note.get_or_insert(note);
    }

    fn finish(self, tol: f64) -> ClaimResult {
        ClaimResult {
            name: self.name.into(),
            checks: self.checks,
            max_residual: sig12(self.max),
            pass: self.ok && self.max < tol,
            note: self.note,
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    let m = a.abs().max(b.abs());
    if m < 1e-12 {
        (a - b).abs()
    } else {
        (a - b).abs() / m
    }
}

fn rel_vec(a: &AlgebraRep, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
    let m = a.norm(x).max(a.norm(y));
    let d = a.norm(&(x - y));
    if m < 1e-12 {
        d
    } else {
        d / m
    }
}

fn with(s: &BTreeSet<u32>, extra: &[u32]) -> BTreeSet<u32> {
    let mut t = s.clone();
    t.extend(extra.iter().copied());
    t
}

fn fresh(s: &BTreeSet<u32>, n: u32) -> Vec<u32> {
    let top = s.iter().next_back().copied().unwrap_or(0);
    (1..=n).map(|i| top + i).collect()
}

/// Runs every check on the normalized oracle. Label sets are `{1..j}` plus
/// fresh labels, never more than `max_labels` of them.
pub fn run_claims(f: Oracle, cfg: &ClaimsConfig) -> Result<Vec<ClaimResult>> {
    let (g, _) = normalize(f)?;
    let tower = Tower::new(g.clone(), cfg.budget, cfg.seed);
    let m = cfg.max_labels;
    let tol = cfg.tol;
    let bases: Vec<BTreeSet<u32>> = (0..=m).map(label_range).collect();
    let mut out = Vec::new();

    // Idempotents sum to the unit; every sum of a subset of them is
    // recovered from the basic idempotents it absorbs; masses are positive.
    let mut unit = Acc::new("unit_sum");
    let mut sum = Acc::new("resolution_sum");
    let mut mass = Acc::new("positive_mass");
    for s in &bases {
        let l = tower.level(s)?;
        let a = &l.algebra;
        let ps = &l.idempotents.elements;
        let total = ps.iter().fold(DVector::zeros(a.dim()), |acc, p| acc + p);
        unit.residual(rel_vec(a, &total, a.unit()));
        for (i, &w) in l.idempotents.masses.iter().enumerate() {
            if w <= 0.0 {
                mass.fail(format!("f(p_{i}) = {w:e} over {s:?}"));
            } else {
                mass.checks += 1;
            }
        }
        let r = ps.len().min(6);
        for bits in 0u32..(1 << r) {
            let x = (0..r)
                .filter(|i| bits >> i & 1 == 1)
                .fold(DVector::zeros(a.dim()), |acc, i| acc + &ps[i]);
            let absorbed = ps
                .iter()
                .filter(|p| a.norm(&(a.multiply(p, &x) - *p)) < tol * a.norm(p))
                .fold(DVector::zeros(a.dim()), |acc, p| acc + p);
            sum.residual(rel_vec(a, &absorbed, &x));
        }
    }
    out.extend([unit.finish(tol), sum.finish(tol), mass.finish(tol)]);

    // Each idempotent one level up resolves exactly one below; it projects
    // onto a multiple of that one; degrees do not drop along resolution.
    let mut part = Acc::new("unique_resolution");
    let mut proj = Acc::new("resolving_projection");
    let mut deg = Acc::new("degree_monotone");
    for s in &bases {
        if s.len() + 1 > m {
            continue;
        }
        let t = with(s, &fresh(s, 1));
        let (ls, lt) = (tower.level(s)?, tower.level(&t)?);
        let res = tower.resolution(s, &t)?;
        let deg_s = tower.degrees(s, fresh(s, 1)[0])?;
        let deg_t = if t.len() < m {
            Some(tower.degrees(&t, fresh(&t, 1)[0])?)
        } else {
            None
        };
        for (qi, ps) in res.iter().enumerate() {
            if ps.len() != 1 {
                part.fail(format!("idempotent {qi} over {t:?} resolves {} below", ps.len()));
                continue;
            }
            let pi = ps[0];
            let q = &lt.idempotents.elements[qi];
            let p_t = lt.algebra.embed(&ls.algebra, &ls.idempotents.elements[pi])?;
            part.residual(rel_vec(&lt.algebra, &lt.algebra.multiply(&p_t, q), q));
            let pq = ls.algebra.embed(&lt.algebra, q)?;
            let expect = &ls.idempotents.elements[pi] * (lt.idempotents.masses[qi] / ls.idempotents.masses[pi]);
            proj.residual(rel_vec(&ls.algebra, &pq, &expect));
            if let Some(dt) = &deg_t {
                if dt[qi] < deg_s[pi] {
                    deg.fail(format!("deg {} < deg {} over {t:?}", dt[qi], deg_s[pi]));
                } else {
                    deg.checks += 1;
                }
            }
        }
    }
    out.extend([part.finish(tol), proj.finish(tol), deg.finish(tol)]);

    // Disjoint extensions S ∪ {a} and S ∪ {b}: f(p) f(qr) = f(q) f(pr), and
    // products of resolving idempotents are nonzero with f(qr) = f(q)f(r)/f(p).
    let mut resf = Acc::new("mass_ratio");
    let mut prod = Acc::new("resolving_products");
    for s in &bases {
        if s.len() + 2 > m {
            continue;
        }
        let ab = fresh(s, 2);
        let (ta, tb, tab) = (with(s, &ab[..1]), with(s, &ab[1..]), with(s, &ab));
        let (ls, la, lb, lab) = (tower.level(s)?, tower.level(&ta)?, tower.level(&tb)?, tower.level(&tab)?);
        let a = &lab.algebra;
        let ra = tower.resolution(s, &ta)?;
        let rb = tower.resolution(s, &tb)?;
        for (pi, p) in ls.idempotents.elements.iter().enumerate() {
            let fp = ls.idempotents.masses[pi];
            let p_ab = a.embed(&ls.algebra, p)?;
            for (qi, qr) in ra.iter().enumerate() {
                if !qr.contains(&pi) {
                    continue;
                }
                let q = a.embed(&la.algebra, &la.idempotents.elements[qi])?;
                let fq = la.idempotents.masses[qi];
                for (ri, r) in lb.idempotents.elements.iter().enumerate() {
                    let r = a.embed(&lb.algebra, r)?;
                    let qr_ = a.multiply(&q, &r);
                    resf.residual(rel(fp * a.f(&qr_), fq * a.f(&a.multiply(&p_ab, &r))));
                    if rb[ri].contains(&pi) {
                        let n = a.norm(&qr_);
                        if n <= tol {
                            prod.fail(format!("|qr| = {n:e} over {tab:?}"));
                        } else {
                            prod.residual(rel(a.f(&qr_), fq * lb.idempotents.masses[ri] / fp));
                        }
                    }
                }
            }
        }
    }
    out.extend([resf.finish(tol), prod.finish(tol)]);

    // f(xy) = f(pi_S(x) y) for x over T = {1,2}, y over U = {1,3}, S = {1},
    // with pi_S the orthogonal projection.
    let mut unlabel = Acc::new("unlabel_projection");
    if m >= 3 {
        let (s, t, u, tu): (BTreeSet<u32>, BTreeSet<u32>, BTreeSet<u32>, BTreeSet<u32>) =
            ([1].into(), [1, 2].into(), [1, 3].into(), [1, 2, 3].into());
        let (ls, lt, lu, ltu) = (tower.level(&s)?, tower.level(&t)?, tower.level(&u)?, tower.level(&tu)?);
        let a = &ltu.algebra;
        let xs: Vec<DVector<f64>> = (0..lt.algebra.dim())
            .map(|i| DVector::from_fn(lt.algebra.dim(), |j, _| (i == j) as u8 as f64))
            .chain(lt.idempotents.elements.iter().cloned())
            .collect();
        for x in &xs {
            let px = a.embed(&ls.algebra, &ls.algebra.embed(&lt.algebra, x)?)?;
            let x_tu = a.embed(&lt.algebra, x)?;
            for y in lu.idempotents.elements.iter() {
                let y = a.embed(&lu.algebra, y)?;
                unlabel.residual(rel(a.f(&a.multiply(&x_tu, &y)), a.f(&a.multiply(&px, &y))));
            }
        }
    } else {
        unlabel.note = Some("needs three labels".into());
    }
    out.push(unlabel.finish(tol));

    // Elements of the Gram kernel stay there after multiplying by graphs.
    let mut ideal = Acc::new("kernel_ideal");
    for s in bases.iter().take(m.min(3)) {
        let a = &tower.level(s)?.algebra;
        let k = s.len();
        let candidates = enumerate_labeled(s, k + 2, k + 2, g.multiplicity_sensitive());
        for h in candidates.iter().filter(|h| !h.has_isolated_unlabeled()).take(12) {
            let hq = QuantumGraph::from_graph(h.clone());
            let z = hq.add(&a.to_quantum(&a.coords(&hq)?).scale(-1.0));
            let hh = q_inner(g.as_ref(), &hq, &hq)?.abs().max(1.0);
            let zz = q_inner(g.as_ref(), &z, &z)?;
            if zz.abs() / hh > tol {
                // Not in the kernel: the graph is outside the span found.
                continue;
            }
            for j in 0..a.dim() {
                let bz = a.basis_element(j).mul(&z);
                ideal.residual(q_inner(g.as_ref(), &bz, &bz)?.abs() / hh);
            }
        }
    }
    out.push(ideal.finish(tol));

    // The target construction at the degree site: q_i^v = sum_j q_j^u q_i^v
    // and f(q_i^u q_j^v) = f(q_i^u) f(q_j^v) / f(p).
    let mut qisum = Acc::new("edge_idempotent_sum");
    let mut eq21 = Acc::new("factorized_mass");
    let site = find_max_degree_site(&tower, m.saturating_sub(1))?;
    if site.labels.len() + 2 <= m {
        let c = build_target(&tower, &site)?;
        let tuv = with(&c.s, &[c.u, c.v]);
        let a = &tower.level(&tuv)?.algebra;
        let d = c.q_u.len();
        for i in 0..d {
            let total = (0..d).fold(DVector::zeros(a.dim()), |acc, j| acc + &c.products[j][i]);
            qisum.residual(rel_vec(a, &total, &c.q_v[i]));
            for j in 0..d {
                let want = a.f(&c.q_u[i]) * a.f(&c.q_v[j]) / c.f_p;
                eq21.residual(rel(a.f(&c.products[i][j]), want));
            }
        }
    } else {
        qisum.fail(format!("degree site {:?} needs more than {m} labels", site.labels));
        eq21.fail(format!("degree site {:?} needs more than {m} labels", site.labels));
    }
    out.extend([qisum.finish(tol), eq21.finish(tol)]);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::Param;
    use std::sync::Arc;

    #[test]
    fn eulerian_claims_hold() {
        let r = run_claims(Arc::new(Param::Eulerian), &ClaimsConfig::default()).unwrap();
        for c in &r {
            assert!(c.pass, "{c:?}");
            assert!(c.checks > 0, "{c:?}");
        }
    }
}
