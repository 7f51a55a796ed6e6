use nalgebra::{DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::AlgebraRep;
use crate::error::{Error, Result};

const MAX_ATTEMPTS: usize = 10;

/// The basic idempotents `p_1..p_r`, in coordinates of their algebra, with
/// masses `f(p_i)`.
#[derive(Clone, Debug)]
pub struct IdempotentBasis {
    pub elements: Vec<DVector<f64>>,
    pub masses: Vec<f64>,
    /// Random elements tried before one had a well-separated spectrum.
    pub attempts: usize,
}

impl IdempotentBasis {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

impl AlgebraRep {
    /// Multiplication by a random element `x` is self-adjoint for the Gram
    /// form, so with `G = L L^T` the matrix `L^{-1} [f(b_k x b_j)] L^{-T}` is
    /// symmetric. Its eigenvectors, mapped back by `L^{-T}`, span the
    /// eigenspaces of `x`; when the spectrum is simple each is a multiple of a
    /// basic idempotent `p`, rescaled so that `p^2 = p`.
    pub fn idempotent_basis(&self, seed: u64) -> Result<IdempotentBasis> {
        let d = self.dim();
        let l = self.chol_l();
        let lt = l.transpose();
        let tol = self.budget().tol;
        for attempt in 0..MAX_ATTEMPTS {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt as u64));
            let x = DVector::from_fn(d, |_, _| rng.gen_range(-1.0..1.0));
            let form = self.mult_form(&x);
            let half = l
                .solve_lower_triangular(&form)
                .ok_or_else(|| Error::Algebra("singular Cholesky factor".into()))?;
            let a = l
                .solve_lower_triangular(&half.transpose())
                .ok_or_else(|| Error::Algebra("singular Cholesky factor".into()))?;
            let a = (&a + a.transpose()) * 0.5;
            let eig = SymmetricEigen::new(a);
            let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
            values.sort_by(f64::total_cmp);
            let spread = values.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
            let gap = values.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
            if d > 1 && gap < 1e-6 * spread {
                continue;
            }
            let mut elements = Vec::with_capacity(d);
            for c in 0..d {
                let w: DVector<f64> = eig.eigenvectors.column(c).into_owned();
                let v = lt
                    .solve_upper_triangular(&w)
                    .ok_or_else(|| Error::Algebra("singular Cholesky factor".into()))?;
                // v = c p with v^2 = c v; <v, v> = c^2 f(p), f(v) = c f(p).
                let scale = self.inner(&v, &v) / self.f(&v);
                elements.push(v / scale);
            }
            let masses: Vec<f64> = elements.iter().map(|p| self.f(p)).collect();
            let mut order: Vec<usize> = (0..d).collect();
            order.sort_by(|&i, &j| {
                masses[j]
                    .total_cmp(&masses[i])
                    .then_with(|| cmp_vec(&elements[i], &elements[j]))
            });
            let basis = IdempotentBasis {
                elements: order.iter().map(|&i| elements[i].clone()).collect(),
                masses: order.iter().map(|&i| masses[i]).collect(),
                attempts: attempt + 1,
            };
            self.check_idempotents(&basis, tol)?;
            return Ok(basis);
        }
        Err(Error::DegenerateSpectrum(MAX_ATTEMPTS))
    }

    /// Verifies `p^2 = p`, `p q = 0`, `sum p = 1` and `f(p) > 0`.
    fn check_idempotents(&self, b: &IdempotentBasis, tol: f64) -> Result<()> {
        let unit_norm = self.norm(self.unit()).max(1.0);
        let mut sum = DVector::zeros(self.dim());
        for (i, p) in b.elements.iter().enumerate() {
            if b.masses[i] <= 0.0 {
                return Err(Error::Algebra(format!("idempotent with f(p) = {:e}", b.masses[i])));
            }
            let sq = self.multiply(p, p);
            if self.norm(&(&sq - p)) > tol * self.norm(p).max(1.0) {
                return Err(Error::Algebra(format!(
                    "p^2 != p: residual {:e}",
                    self.norm(&(&sq - p))
                )));
            }
            for q in &b.elements[i + 1..] {
                if self.norm(&self.multiply(p, q)) > tol * unit_norm {
                    return Err(Error::Algebra("p q != 0 for distinct idempotents".into()));
                }
            }
            sum += p;
        }
        if self.norm(&(&sum - self.unit())) > tol * unit_norm {
            return Err(Error::Algebra("idempotents do not sum to the unit".into()));
        }
        Ok(())
    }
}

fn cmp_vec(a: &DVector<f64>, b: &DVector<f64>) -> std::cmp::Ordering {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}

#[cfg(test)]
mod tests {
    use super::super::{AlgebraBudget, Oracle};
    use super::*;
    use crate::params::{builtin_target, Param};
    use std::collections::BTreeSet;
    use std::sync::Arc;

    #[test]
    fn one_dimensional_algebra_has_the_unit() {
        let f: Oracle = Arc::new(Param::hom("two", builtin_target("single-loop-two").unwrap()));
        let a = AlgebraRep::build(f, &[1].into(), AlgebraBudget::default()).unwrap();
        let p = a.idempotent_basis(0).unwrap();
        assert_eq!(p.len(), 1);
        assert!((&p.elements[0] - a.unit()).norm() < 1e-9);
    }

    #[test]
    fn eulerian_two_labels() {
        let f: Oracle = Arc::new(Param::Eulerian);
        let s: BTreeSet<u32> = [1, 2].into();
        let a = AlgebraRep::build(f, &s, AlgebraBudget::default()).unwrap();
        let p = a.idempotent_basis(3).unwrap();
        assert_eq!(p.len(), 2);
        for m in &p.masses {
            assert!((m - 0.5).abs() < 1e-9, "{m}");
        }
    }

    #[test]
    fn deterministic_for_a_seed() {
        let f: Oracle = Arc::new(Param::Eulerian);
        let a = AlgebraRep::build(f, &[1, 2, 3].into(), AlgebraBudget::default()).unwrap();
        let p1 = a.idempotent_basis(5).unwrap();
        let p2 = a.idempotent_basis(5).unwrap();
        assert_eq!(p1.elements, p2.elements);
    }
}
