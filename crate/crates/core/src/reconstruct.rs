//! Reconstruction of a weighted target from an evaluation oracle.
//!
//! Pipeline: multiplicativity check on the `k = 0` slice, exact PSD screen on
//! small slices, normalization to `f(K_1) = 1`, a tower of algebras over
//! `{1..j}` to find an idempotent `p` of stable maximum degree `D`, then the
//! target read off from the `D` idempotents resolving `p` one label up.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use nalgebra::DVector;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{AlgebraBudget, Oracle, Tower};
use crate::canon::canonical;
use crate::connmat::{build_slice_from_rows, label_range, multiplicativity_check, MultiplicativityReport, PsdVerdict};
use crate::enumerate::enumerate_labeled;
use crate::error::{Error, Result};
use crate::graph::{LabeledGraph, MultiGraph};
use crate::hom::hom_fast;
use crate::params::GraphParameter;
use crate::rational::{self, Rational};
use crate::target::{TargetFile, WeightedTarget};

/// `f(G) / f(K_1)^{|V(G)|}`.
pub struct Normalized {
    inner: Oracle,
    scale: Rational,
}

impl GraphParameter for Normalized {
    fn name(&self) -> String {
        format!("normalized({})", self.inner.name())
    }

    fn eval(&self, g: &MultiGraph) -> Result<Rational> {
        let v = self.inner.eval(g)?;
        Ok(v / rational::pow(&self.scale, g.node_count() as u32))
    }

    fn multiplicative(&self) -> bool {
        self.inner.multiplicative()
    }

    fn multiplicity_sensitive(&self) -> bool {
        self.inner.multiplicity_sensitive()
    }
}

/// Returns the normalized oracle and the scale `f(K_1)`. When the scale is
/// already 1 the oracle is returned as is.
pub fn normalize(f: Oracle) -> Result<(Oracle, Rational)> {
    let k0 = f.eval(&MultiGraph::empty(0))?;
    if !k0.is_one() {
        return Err(Error::NotMultiplicative(format!(
            "f(K_0) = {}, expected 1",
            rational::format(&k0)
        )));
    }
    let scale = f.eval(&MultiGraph::empty(1))?;
    if !scale.is_positive() {
        return Err(Error::NonNormalizable(rational::format(&scale)));
    }
    if scale.is_one() {
        return Ok((f, scale));
    }
    Ok((Arc::new(Normalized { inner: f, scale: scale.clone() }), scale))
}

/// One level of the degree search.
#[derive(Clone, Debug, Serialize)]
pub struct LevelSummary {
    pub labels: Vec<u32>,
    pub dim: usize,
    pub saturated: bool,
    pub generators_examined: usize,
    /// Degrees of the idempotents over `labels`, in idempotent order.
    pub degrees: Vec<usize>,
}

/// Where the maximum degree was found.
#[derive(Clone, Debug, Serialize)]
pub struct Site {
    pub labels: BTreeSet<u32>,
    /// Index of `p` among the idempotents over `labels`.
    pub p: usize,
    pub d: usize,
    /// The maximum degree repeated on the next level.
    pub stabilized: bool,
    /// `ceil(max_k dim_k^{1/k})` over the algebras built. Degrees are
    /// bounded by the limit of this as `k` grows; small `k` can undershoot.
    pub degree_bound: usize,
    /// First `k > |S|` with `dim_k < D^{k - |S|}`, which complete algebras
    /// never show.
    pub bound_violation: Option<usize>,
    pub levels: Vec<LevelSummary>,
    /// Dimension of the algebra over `{1..k}` for each `k` built.
    pub dims: Vec<usize>,
    pub all_saturated: bool,
}

/// Computes degrees over `∅, {1}, {1,2}, ...` until the maximum degree
/// repeats on two consecutive levels, returning the earlier one. At most
/// `max_level + 1` label sets are examined; if the maximum is still growing
/// the largest one found is returned with `stabilized = false`.
pub fn find_max_degree_site(tower: &Tower, max_level: usize) -> Result<Site> {
    let mut levels: Vec<LevelSummary> = Vec::new();
    let mut found: Option<usize> = None;
    for j in 0..=max_level {
        let s = label_range(j);
        let degrees = tower.degrees(&s, j as u32 + 1)?;
        let a = &tower.level(&s)?.algebra;
        levels.push(LevelSummary {
            labels: s.iter().copied().collect(),
            dim: a.dim(),
            saturated: a.saturated(),
            generators_examined: a.generators_examined(),
            degrees,
        });
        if j >= 1 && max_of(&levels[j].degrees) == max_of(&levels[j - 1].degrees) {
            found = Some(j - 1);
            break;
        }
    }
    let stabilized = found.is_some();
    let at = found.unwrap_or_else(|| {
        // Largest maximum, earliest level.
        let best = levels.iter().map(|l| max_of(&l.degrees)).max().unwrap_or(0);
        levels.iter().position(|l| max_of(&l.degrees) == best).unwrap_or(0)
    });
    let top = levels.len();
    let mut dims: Vec<usize> = levels.iter().map(|l| l.dim).collect();
    let next = tower.level(&label_range(top))?;
    dims.push(next.algebra.dim());
    let all_saturated = levels.iter().all(|l| l.saturated) && next.algebra.saturated();
    let degree_bound = dims
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &r)| ((r as f64).powf(1.0 / k as f64) - 1e-9).ceil() as usize)
        .max()
        .unwrap_or(1)
        .max(1);
    let degrees = &levels[at].degrees;
    let d = max_of(degrees);
    let p = degrees.iter().position(|&x| x == d).unwrap_or(0);
    let bound_violation = (at + 1..dims.len())
        .find(|&k| (dims[k] as f64) < (d as f64).powi((k - at) as i32));
    Ok(Site {
        labels: label_range(at),
        p,
        d,
        stabilized,
        degree_bound,
        bound_violation,
        levels,
        dims,
        all_saturated,
    })
}

fn max_of(v: &[usize]) -> usize {
    v.iter().copied().max().unwrap_or(0)
}

/// The objects of the target construction, all in coordinates of the algebra
/// over `S ∪ {u, v}` unless noted.
#[derive(Clone, Debug)]
pub struct Construction {
    pub s: BTreeSet<u32>,
    pub u: u32,
    pub v: u32,
    /// `p` in the algebra over `S`, and its mass `f(p)`.
    pub p: DVector<f64>,
    pub f_p: f64,
    /// Indices, among the idempotents over `S ∪ {u}`, of the `q_i^u`
    /// resolving `p`.
    pub q_indices: Vec<usize>,
    pub q_u: Vec<DVector<f64>>,
    pub q_v: Vec<DVector<f64>>,
    /// `q_i^u q_j^v`, row-major.
    pub products: Vec<Vec<DVector<f64>>>,
    pub alpha: Vec<f64>,
    pub beta: Vec<Vec<f64>>,
    /// `max |beta_ij - beta_ji|` before symmetrizing.
    pub asymmetry: f64,
}

/// Reads off node weights `f(q_i^u)/f(p)` and edge weights from
/// `p k_uv = sum beta_ij q_i^u q_j^v`, using orthogonality of the products.
pub fn build_target(tower: &Tower, site: &Site) -> Result<Construction> {
    let s = site.labels.clone();
    let u = s.iter().next_back().map_or(1, |m| m + 1);
    let v = u + 1;
    let mut tu = s.clone();
    tu.insert(u);
    let mut tuv = tu.clone();
    tuv.insert(v);
    let ls = tower.level(&s)?;
    let lu = tower.level(&tu)?;
    let luv = tower.level(&tuv)?;
    let auv = &luv.algebra;
    let tol = tower.budget().tol;

    let q_indices: Vec<usize> = tower
        .resolution(&s, &tu)?
        .iter()
        .enumerate()
        .filter(|(_, r)| r.contains(&site.p))
        .map(|(i, _)| i)
        .collect();
    if q_indices.len() != site.d {
        return Err(Error::Algebra(format!(
            "{} idempotents resolve p, expected {}",
            q_indices.len(),
            site.d
        )));
    }
    let p = ls.idempotents.elements[site.p].clone();
    let f_p = ls.idempotents.masses[site.p];
    let alpha: Vec<f64> = q_indices.iter().map(|&i| lu.idempotents.masses[i] / f_p).collect();

    let swap: BTreeMap<u32, u32> = [(u, v)].into();
    let mut q_u = Vec::new();
    let mut q_v = Vec::new();
    for &i in &q_indices {
        let q = &lu.idempotents.elements[i];
        q_u.push(auv.embed(&lu.algebra, q)?);
        q_v.push(auv.coords(&lu.algebra.to_quantum(q).relabeled(&swap)?)?);
    }
    let p_uv = auv.embed(&ls.algebra, &p)?;
    let k_uv = auv.coords_of_graph(&LabeledGraph::single_edge(&tuv, u, v))?;
    let pk = auv.multiply(&p_uv, &k_uv);

    let d = q_indices.len();
    let mut products = Vec::with_capacity(d);
    let mut beta = vec![vec![0.0; d]; d];
    for i in 0..d {
        let mut row = Vec::with_capacity(d);
        for j in 0..d {
            let q = auv.multiply(&q_u[i], &q_v[j]);
            let mass = auv.f(&q);
            if mass.abs() < tol * f_p.abs().max(f64::MIN_POSITIVE) * 1e-3 {
                return Err(Error::DegenerateMass(mass));
            }
            beta[i][j] = auv.inner(&pk, &q) / mass;
            row.push(q);
        }
        products.push(row);
    }
    let mut asymmetry = 0.0f64;
    for i in 0..d {
        for j in i + 1..d {
            asymmetry = asymmetry.max((beta[i][j] - beta[j][i]).abs());
            let m = 0.5 * (beta[i][j] + beta[j][i]);
            beta[i][j] = m;
            beta[j][i] = m;
        }
    }
    Ok(Construction {
        s,
        u,
        v,
        p,
        f_p,
        q_indices,
        q_u,
        q_v,
        products,
        alpha,
        beta,
        asymmetry,
    })
}

/// Rational target from float weights: every weight snapped to a fraction
/// with denominator at most `max_den` if all are within `tol` of one;
/// otherwise a fine rational approximation. The flag says which.
pub fn snap_target(alpha: &[f64], beta: &[Vec<f64>], max_den: u64, tol: f64) -> Result<(WeightedTarget, bool)> {
    let snapped: Option<(Vec<Rational>, Vec<Vec<Rational>>)> = (|| {
        let a = alpha
            .iter()
            .map(|&x| rational::snap(x, max_den, tol))
            .collect::<Option<Vec<_>>>()?;
        let b = beta
            .iter()
            .map(|row| row.iter().map(|&x| rational::snap(x, max_den, tol)).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()?;
        Some((a, b))
    })();
    match snapped {
        Some((a, b)) => Ok((WeightedTarget::new(a, b)?, true)),
        None => {
            let a = alpha.iter().map(|&x| rational::from_f64_approx(x)).collect();
            let b = beta
                .iter()
                .map(|row| row.iter().map(|&x| rational::from_f64_approx(x)).collect())
                .collect();
            Ok((WeightedTarget::new(a, b)?, false))
        }
    }
}

/// Relative errors `|f(G) - hom(G, h)| / max(1, |f(G)|)`.
pub fn verify(f: &dyn GraphParameter, h: &WeightedTarget, graphs: &[MultiGraph]) -> Result<Vec<f64>> {
    graphs
        .iter()
        .map(|g| {
            let fg = f.eval(g)?;
            let diff = rational::to_f64(&(&fg - hom_fast(g, h)).abs());
            Ok(diff / rational::to_f64(&fg.abs()).max(1.0))
        })
        .collect()
}

/// Seeded random loop-free multigraphs with `1..=max_nodes` nodes and
/// `0..=max_edges` edges.
pub fn random_graphs(seed: u64, count: usize, max_nodes: usize, max_edges: usize) -> Vec<MultiGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=max_nodes);
            let mut g = MultiGraph::empty(n);
            if n >= 2 {
                for _ in 0..rng.gen_range(0..=max_edges) {
                    let a = rng.gen_range(0..n);
                    let mut b = rng.gen_range(0..n - 1);
                    if b >= a {
                        b += 1;
                    }
                    g.add_edge(a, b).expect("distinct endpoints");
                }
            }
            g
        })
        .collect()
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ReconstructConfig {
    pub budget: AlgebraBudget,
    /// Largest `|S|` whose degrees are computed.
    pub max_level: usize,
    pub seed: u64,
    /// Verification tolerance on relative residuals.
    pub tol: f64,
    pub snap_den: u64,
    pub snap_tol: f64,
    /// The PSD screen checks `k = 0..=psd_k` on `k`-labeled rows with at most
    /// `k + 1` nodes and `k + 2` edges, capped at `psd_rows`.
    pub psd_k: usize,
    pub psd_rows: usize,
    pub test_graphs: usize,
    pub test_max_nodes: usize,
    pub test_max_edges: usize,
}

impl Default for ReconstructConfig {
    fn default() -> Self {
        ReconstructConfig {
            budget: AlgebraBudget::default(),
            max_level: 3,
            seed: 0,
            tol: 1e-6,
            snap_den: 10_000,
            snap_tol: 1e-6,
            psd_k: 4,
            psd_rows: 80,
            test_graphs: 50,
            test_max_nodes: 6,
            test_max_edges: 8,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Success,
    NotMultiplicative,
    NotPsd,
    NonNormalizable,
    /// A target was built and verified, but the degree did not stabilize or
    /// some algebra hit its generator budget.
    Unsaturated,
    VerificationFailed,
}

#[derive(Clone, Debug, Serialize)]
pub struct PsdScreen {
    pub k: usize,
    pub rows: usize,
    pub psd: bool,
}

/// A failed PSD screen: the slice rows and a vector `x` with `x^T M x < 0`.
#[derive(Clone, Debug, Serialize)]
pub struct NotPsdCertificate {
    pub k: usize,
    /// Row graphs as canonical codes (hex).
    pub rows: Vec<String>,
    pub verdict: PsdVerdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReconstructionReport {
    pub status: Status,
    pub parameter: String,
    pub multiplicativity: MultiplicativityReport,
    pub psd_screen: Vec<PsdScreen>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<NotPsdCertificate>,
    /// `f(K_1)`, as `p/q`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normalization: Option<String>,
    pub levels: Vec<LevelSummary>,
    pub dims: Vec<usize>,
    #[serde(rename = "S_used", skip_serializing_if = "Option::is_none")]
    pub s_used: Option<Vec<u32>>,
    #[serde(rename = "D", skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree_bound: Option<usize>,
    /// Recovered weights before snapping, node weights already scaled by
    /// `f(K_1)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_float: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_float: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_asymmetry: Option<f64>,
    pub snapped: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<TargetFile>,
    pub residuals: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_residual: Option<f64>,
    pub flags: Vec<String>,
    #[serde(skip)]
    pub weighted_target: Option<WeightedTarget>,
}

impl ReconstructionReport {
    fn new(parameter: String, multiplicativity: MultiplicativityReport) -> Self {
        ReconstructionReport {
            status: Status::Success,
            parameter,
            multiplicativity,
            psd_screen: Vec::new(),
            certificate: None,
            normalization: None,
            levels: Vec::new(),
            dims: Vec::new(),
            s_used: None,
            d: None,
            degree_bound: None,
            alpha_float: None,
            beta_float: None,
            beta_asymmetry: None,
            snapped: false,
            target: None,
            residuals: Vec::new(),
            max_residual: None,
            flags: Vec::new(),
            weighted_target: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

/// Rounds to 12 significant digits, the precision floats are reported with.
pub fn sig12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Exact PSD screen; returns the first failing slice, if any.
pub fn psd_screen(f: &dyn GraphParameter, cfg: &ReconstructConfig) -> Result<(Vec<PsdScreen>, Option<NotPsdCertificate>)> {
    let multi = f.multiplicity_sensitive();
    let mut screens = Vec::new();
    for k in 0..=cfg.psd_k {
        let mut rows = enumerate_labeled(&label_range(k), k + 1, k + 2, multi);
        rows.truncate(cfg.psd_rows);
        let slice = build_slice_from_rows(f, k, rows)?;
        let verdict = slice.psd();
        let psd = verdict.is_psd();
        screens.push(PsdScreen { k, rows: slice.len(), psd });
        if !psd {
            let cert = NotPsdCertificate {
                k,
                rows: slice.rows.iter().map(|g| canonical(g).to_hex()).collect(),
                verdict,
            };
            return Ok((screens, Some(cert)));
        }
    }
    Ok((screens, None))
}

/// Runs the full pipeline. Errors are contract violations or numerical
/// breakdowns; every other outcome is a report status.
pub fn reconstruct(f: Oracle, cfg: &ReconstructConfig) -> Result<ReconstructionReport> {
    let mult = multiplicativity_check(f.as_ref(), 4, 4)?;
    let mut report = ReconstructionReport::new(f.name(), mult.clone());
    if !mult.multiplicative() {
        report.status = Status::NotMultiplicative;
        return Ok(report);
    }
    let (screens, cert) = psd_screen(f.as_ref(), cfg)?;
    report.psd_screen = screens;
    if cert.is_some() {
        report.certificate = cert;
        report.status = Status::NotPsd;
        return Ok(report);
    }
    let (g, scale) = match normalize(f.clone()) {
        Ok(x) => x,
        Err(e @ Error::NonNormalizable(_)) => {
            report.flags.push(e.to_string());
            report.status = Status::NonNormalizable;
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    report.normalization = Some(rational::format(&scale));

    let tower = Tower::new(g, cfg.budget, cfg.seed);
    let site = find_max_degree_site(&tower, cfg.max_level)?;
    report.levels = site.levels.clone();
    report.dims = site.dims.clone();
    report.s_used = Some(site.labels.iter().copied().collect());
    report.d = Some(site.d);
    report.degree_bound = Some(site.degree_bound);
    if !site.stabilized {
        report.flags.push("unstabilized degree".into());
    }
    if !site.all_saturated {
        report.flags.push("unsaturated algebra".into());
    }
    if let Some(k) = site.bound_violation {
        report.flags.push(format!(
            "dimension over {{1..{k}}} is below D^{}",
            k - site.labels.len()
        ));
    }

    if !site.stabilized {
        // The site would need algebras beyond the ones the budget allowed.
        report.flags.push("target not built".into());
        report.status = Status::Unsaturated;
        return Ok(report);
    }
    let c = build_target(&tower, &site)?;
    if c.asymmetry > cfg.tol * c.beta.iter().flatten().fold(1.0f64, |m, b| m.max(b.abs())) {
        report.flags.push(format!("beta asymmetry {:e}", c.asymmetry));
    }
    let s = rational::to_f64(&scale);
    let alpha: Vec<f64> = c.alpha.iter().map(|a| a * s).collect();
    let (target, snapped) = snap_target(&alpha, &c.beta, cfg.snap_den, cfg.snap_tol)?;
    report.alpha_float = Some(alpha.iter().map(|&x| sig12(x)).collect());
    report.beta_float = Some(c.beta.iter().map(|r| r.iter().map(|&x| sig12(x)).collect()).collect());
    report.beta_asymmetry = Some(sig12(c.asymmetry));
    report.snapped = snapped;

    let graphs = random_graphs(cfg.seed ^ 0x5eed, cfg.test_graphs, cfg.test_max_nodes, cfg.test_max_edges);
    let residuals = verify(f.as_ref(), &target, &graphs)?;
    let max = residuals.iter().copied().fold(0.0f64, f64::max);
    report.residuals = residuals.iter().map(|&r| sig12(r)).collect();
    report.max_residual = Some(sig12(max));
    report.target = Some(TargetFile::from(&target));
    report.weighted_target = Some(target);
    report.status = if max >= cfg.tol {
        Status::VerificationFailed
    } else if !site.stabilized || !site.all_saturated {
        Status::Unsaturated
    } else {
        Status::Success
    };
    Ok(report)
}

/// Exact zero test used by round-trip checks.
pub fn exact_match(f: &dyn GraphParameter, h: &WeightedTarget, graphs: &[MultiGraph]) -> Result<bool> {
    for g in graphs {
        if f.eval(g)? != hom_fast(g, h) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{builtin_target, Param};
    use crate::rational::int;

    #[test]
    fn normalization() {
        let (g, s) = normalize(Arc::new(Param::chromatic(int(2)))).unwrap();
        assert_eq!(s, int(2));
        assert_eq!(g.eval(&MultiGraph::empty(1)).unwrap(), int(1));
        // Isolated nodes no longer matter.
        let p3 = MultiGraph::path(3);
        let mut p3i = p3.clone();
        p3i.add_node();
        assert_eq!(g.eval(&p3).unwrap(), g.eval(&p3i).unwrap());
        assert!(matches!(
            normalize(Arc::new(Param::Matchings)),
            Err(Error::NonNormalizable(_))
        ));
    }

    #[test]
    fn single_loop_two() {
        let f: Oracle = Arc::new(Param::hom("two", builtin_target("single-loop-two").unwrap()));
        let r = reconstruct(f, &ReconstructConfig::default()).unwrap();
        assert_eq!(r.status, Status::Success, "{}", r.to_json());
        assert_eq!(r.d, Some(1));
        assert_eq!(r.s_used, Some(vec![]));
        let t = r.weighted_target.unwrap();
        assert_eq!(t, WeightedTarget::single_loop(int(1), int(2)).unwrap());
    }

    #[test]
    fn matchings_stop_at_psd_screen() {
        let r = reconstruct(Arc::new(Param::Matchings), &ReconstructConfig::default()).unwrap();
        assert_eq!(r.status, Status::NotPsd);
        assert_eq!(r.certificate.as_ref().unwrap().k, 1);
    }

    #[test]
    fn eulerian_round_trip() {
        let r = reconstruct(Arc::new(Param::Eulerian), &ReconstructConfig::default()).unwrap();
        assert_eq!(r.status, Status::Success, "{}", r.to_json());
        assert_eq!(r.d, Some(2));
        assert!(r.snapped);
        let t = r.weighted_target.unwrap();
        let graphs: Vec<MultiGraph> = random_graphs(1, 40, 5, 8);
        assert!(exact_match(&Param::Eulerian, &t, &graphs).unwrap());
    }

    #[test]
    fn random_target_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let h = WeightedTarget::random(&mut rng, 2, 5, 4, true);
        let f: Oracle = Arc::new(Param::hom("random", h.clone()));
        let r = reconstruct(f.clone(), &ReconstructConfig::default()).unwrap();
        assert_eq!(r.status, Status::Success, "{}", r.to_json());
        assert_eq!(r.d, Some(2));
        // Scale reversal: the normalized oracle gives node weights divided
        // by f(K_1).
        let (g, scale) = normalize(f).unwrap();
        let rn = reconstruct(g, &ReconstructConfig::default()).unwrap();
        let t = r.weighted_target.unwrap();
        let tn = rn.weighted_target.unwrap();
        assert_eq!(tn.scale_alpha(&scale).unwrap(), t);
    }

    #[test]
    fn sig12_rounds() {
        assert_eq!(sig12(0.1234567890123456), 0.123456789012);
        assert_eq!(sig12(0.0), 0.0);
    }
}
