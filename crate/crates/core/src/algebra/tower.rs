use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, Mutex};

use nalgebra::DVector;

use super::{AlgebraBudget, AlgebraRep, IdempotentBasis, Oracle};
use crate::error::Result;

/// An algebra over one label set with its basic idempotents.
#[derive(Debug)]
pub struct Level {
    pub algebra: AlgebraRep,
    pub idempotents: IdempotentBasis,
}

/// Lazily built algebras over arbitrary label sets for one oracle, sharing a
/// budget and a seed.
pub struct Tower {
    oracle: Oracle,
    budget: AlgebraBudget,
    seed: u64,
    levels: Mutex<BTreeMap<BTreeSet<u32>, Arc<Level>>>,
}

impl Tower {
    pub fn new(oracle: Oracle, budget: AlgebraBudget, seed: u64) -> Self {
        Tower {
            oracle,
            budget,
            seed,
            levels: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn oracle(&self) -> &Oracle {
        &self.oracle
    }

    pub fn budget(&self) -> &AlgebraBudget {
        &self.budget
    }

    /// The algebra over `labels`; the random element for its idempotents is
    /// seeded from the tower seed and the label set.
    pub fn level(&self, labels: &BTreeSet<u32>) -> Result<Arc<Level>> {
        if let Some(l) = self.levels.lock().expect("tower lock").get(labels) {
            return Ok(l.clone());
        }
        let algebra = AlgebraRep::build(self.oracle.clone(), labels, self.budget)?;
        let mix = labels
            .iter()
            .fold(0x9e37_79b9_7f4a_7c15u64, |acc, &l| acc.rotate_left(7) ^ (l as u64).wrapping_mul(0x1000_0000_01b3));
        let idempotents = algebra.idempotent_basis(self.seed ^ mix)?;
        let level = Arc::new(Level { algebra, idempotents });
        self.levels
            .lock()
            .expect("tower lock")
            .insert(labels.clone(), level.clone());
        Ok(level)
    }

    /// Levels built so far.
    pub fn built(&self) -> Vec<Arc<Level>> {
        self.levels.lock().expect("tower lock").values().cloned().collect()
    }

    /// The idempotents of `s` embedded in the algebra over `t` (`s ⊆ t`).
    pub fn embedded(&self, s: &BTreeSet<u32>, t: &BTreeSet<u32>) -> Result<Vec<DVector<f64>>> {
        let (ls, lt) = (self.level(s)?, self.level(t)?);
        ls.idempotents
            .elements
            .iter()
            .map(|p| lt.algebra.embed(&ls.algebra, p))
            .collect()
    }

    /// For each idempotent `q` over `t`, the indices of the idempotents `p`
    /// over `s` that it resolves (`p q = q`).
    pub fn resolution(&self, s: &BTreeSet<u32>, t: &BTreeSet<u32>) -> Result<Vec<Vec<usize>>> {
        let lt = self.level(t)?;
        let ps = self.embedded(s, t)?;
        Ok(lt
            .idempotents
            .elements
            .iter()
            .map(|q| {
                ps.iter()
                    .enumerate()
                    .filter(|(_, p)| resolves(&lt.algebra, q, p, self.budget.tol))
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect())
    }

    /// Degrees of the idempotents over `s`: how many idempotents over
    /// `s ∪ {u}` resolve each.
    pub fn degrees(&self, s: &BTreeSet<u32>, u: u32) -> Result<Vec<usize>> {
        assert!(!s.contains(&u), "fresh label required");
        let mut t = s.clone();
        t.insert(u);
        let res = self.resolution(s, &t)?;
        let n = self.level(s)?.idempotents.len();
        let mut deg = vec![0; n];
        for ps in res {
            for p in ps {
                deg[p] += 1;
            }
        }
        Ok(deg)
    }
}

/// `q` resolves `p` when `p q = q`; both given in coordinates of `a`.
pub fn resolves(a: &AlgebraRep, q: &DVector<f64>, p: &DVector<f64>, tol: f64) -> bool {
    let pq = a.multiply(p, q);
    a.norm(&(pq - q)) < tol * a.norm(q).max(f64::MIN_POSITIVE)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::Param;

    #[test]
    fn eulerian_degrees() {
        let t = Tower::new(Arc::new(Param::Eulerian), AlgebraBudget::default(), 0);
        let empty = BTreeSet::new();
        assert_eq!(t.degrees(&empty, 1).unwrap(), vec![1]);
        assert_eq!(t.degrees(&[1].into(), 2).unwrap(), vec![2]);
        let d2 = t.degrees(&[1, 2].into(), 3).unwrap();
        assert_eq!(d2, vec![2, 2]);
        // Each idempotent one level up resolves exactly one below.
        let res = t.resolution(&[1, 2].into(), &[1, 2, 3].into()).unwrap();
        assert!(res.iter().all(|r| r.len() == 1));
    }
}
