//! Exact rank and positive-semidefiniteness of rational matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Rank by fraction-free (Bareiss) elimination with full pivoting. Rows are
/// first scaled to integers, which does not change the rank.
pub fn exact_rank(m: &[Vec<Rational>]) -> usize {
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| {
            let den = row
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter()
                .map(|x| x.numer() * (&den / x.denom()))
                .collect()
        })
        .collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut rank = 0;
    while rank < rows.min(cols) {
        // Pivot: the nonzero entry in the remaining block with the fewest bits.
        let mut pivot: Option<(usize, usize, u64)> = None;
        for (i, row) in a.iter().enumerate().skip(rank) {
            for (j, x) in row.iter().enumerate().skip(rank) {
                if !x.is_zero() {
                    let bits = x.bits();
                    if pivot.map_or(true, |(_, _, b)| bits < b) {
                        pivot = Some((i, j, bits));
                    }
                }
            }
        }
        let Some((pi, pj, _)) = pivot else { break };
        a.swap(rank, pi);
        for row in a.iter_mut() {
            row.swap(rank, pj);
        }
        let r = rank;
        let (top, bottom) = a.split_at_mut(r + 1);
        let prow = &top[r];
        for row in bottom.iter_mut() {
            for j in r + 1..cols {
                let v = &prow[r] * &row[j] - &row[r] * &prow[j];
                row[j] = v / &prev;
            }
            row[r] = BigInt::zero();
        }
        prev = prow[r].clone();
        rank += 1;
    }
    rank
}

/// Outcome of [`psd_check`], with a certificate either way.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum PsdVerdict {
    /// Symmetric elimination succeeded with these positive pivots (in order)
    /// and left a zero remainder.
    Psd { pivots: Vec<usize> },
    /// `witness^T M witness = value < 0`.
    NotPsd {
        #[serde(serialize_with = "ser_rationals")]
        witness: Vec<Rational>,
        #[serde(serialize_with = "ser_rational")]
        value: Rational,
    },
}

fn ser_rationals<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(rational::format))
}

fn ser_rational<S: serde::Serializer>(v: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational::format(v))
}

impl PsdVerdict {
    pub fn is_psd(&self) -> bool {
        matches!(self, PsdVerdict::Psd { .. })
    }

    /// Re-checks the certificate against `m` from scratch.
    pub fn verify(&self, m: &[Vec<Rational>]) -> bool {
        match self {
            PsdVerdict::NotPsd { witness, value } => {
                value.is_negative() && witness.len() == m.len() && quadratic_form(m, witness) == *value
            }
            PsdVerdict::Psd { pivots } => {
                let mut a: Vec<Vec<Rational>> = m.to_vec();
                let mut active: Vec<bool> = vec![true; m.len()];
                for &p in pivots {
                    if p >= m.len() || !active[p] || !a[p][p].is_positive() {
                        return false;
                    }
                    eliminate(&mut a, &active, p);
                    active[p] = false;
                }
                (0..m.len())
                    .filter(|&i| active[i])
                    .all(|i| (0..m.len()).filter(|&j| active[j]).all(|j| a[i][j].is_zero()))
            }
        }
    }
}

/// `x^T M x`, computed directly.
pub fn quadratic_form(m: &[Vec<Rational>], x: &[Rational]) -> Rational {
    let mut total = Rational::zero();
    for (i, row) in m.iter().enumerate() {
        if x[i].is_zero() {
            continue;
        }
        let mut s = Rational::zero();
        for (j, v) in row.iter().enumerate() {
            if !x[j].is_zero() && !v.is_zero() {
                s += v * &x[j];
            }
        }
        total += &x[i] * s;
    }
    total
}

/// Schur-complement step on pivot `p`, restricted to active indices.
fn eliminate(a: &mut [Vec<Rational>], active: &[bool], p: usize) {
    let n = a.len();
    let piv = a[p][p].clone();
    let col: Vec<Rational> = (0..n).map(|i| a[i][p].clone()).collect();
    for i in (0..n).filter(|&i| active[i] && i != p && !col[i].is_zero()) {
        let factor = &col[i] / &piv;
        for j in (0..n).filter(|&j| active[j] && j != p && !col[j].is_zero()) {
            let delta = &factor * &col[j];
            a[i][j] -= delta;
        }
    }
}

/// Exact test by symmetric elimination with diagonal pivoting. A negative
/// diagonal in the remaining Schur complement, or a zero diagonal next to a
/// nonzero off-diagonal entry, gives a witness vector; the witness is lifted
/// back to the original coordinates and re-checked.
pub fn psd_check(m: &[Vec<Rational>]) -> Result<PsdVerdict> {
    let n = m.len();
    for (i, row) in m.iter().enumerate() {
        if row.len() != n {
            return Err(Error::NotSymmetric(i, row.len()));
        }
        for j in i + 1..n {
            if m[i][j] != m[j][i] {
                return Err(Error::NotSymmetric(i, j));
            }
        }
    }
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut active = vec![true; n];
    let mut pivots = Vec::new();
    loop {
        let live: Vec<usize> = (0..n).filter(|&i| active[i]).collect();
        if let Some(&i) = live.iter().find(|&&i| a[i][i].is_negative()) {
            let mut y = vec![Rational::zero(); n];
            y[i] = Rational::one();
            return Ok(lift(m, &pivots, y));
        }
        // Largest positive diagonal keeps entries small.
        let pivot = live
            .iter()
            .copied()
            .filter(|&i| a[i][i].is_positive())
            .max_by(|&i, &j| a[i][i].cmp(&a[j][j]).then(j.cmp(&i)));
        match pivot {
            Some(p) => {
                eliminate(&mut a, &active, p);
                active[p] = false;
                pivots.push(p);
            }
            None => {
                // All remaining diagonals are zero.
                for &i in &live {
                    for &j in &live {
                        if i != j && !a[i][j].is_zero() {
                            let mut y = vec![Rational::zero(); n];
                            y[i] = Rational::one();
                            y[j] = if a[i][j].is_positive() {
                                -Rational::one()
                            } else {
                                Rational::one()
                            };
                            return Ok(lift(m, &pivots, y));
                        }
                    }
                }
                return Ok(PsdVerdict::Psd { pivots });
            }
        }
    }
}

/// Given `y` supported off the pivot set `P`, sets
/// `x_P = -M[P,P]^{-1} M[P,R] y_R` so that `x^T M x` equals the Schur
/// complement form `y^T S y`.
fn lift(m: &[Vec<Rational>], pivots: &[usize], y: Vec<Rational>) -> PsdVerdict {
    let mut x = y;
    if !pivots.is_empty() {
        let k = pivots.len();
        let rhs: Vec<Rational> = pivots
            .iter()
            .map(|&p| {
                -(0..m.len())
                    .filter(|&j| !x[j].is_zero())
                    .fold(Rational::zero(), |acc, j| acc + &m[p][j] * &x[j])
            })
            .collect();
        let block: Vec<Vec<Rational>> = pivots
            .iter()
            .map(|&p| pivots.iter().map(|&q| m[p][q].clone()).collect())
            .collect();
        let z = solve(block, rhs).expect("pivot block is positive definite");
        for (t, &p) in pivots.iter().enumerate().take(k) {
            x[p] = z[t].clone();
        }
    }
    // Clear denominators so the witness is an integer vector.
    let den = x.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let scale = Rational::from_integer(den);
    let x: Vec<Rational> = x.into_iter().map(|v| v * &scale).collect();
    let value = quadratic_form(m, &x);
    debug_assert!(value.is_negative());
    PsdVerdict::NotPsd { witness: x, value }
}

/// Gaussian elimination over the rationals; `None` if singular.
fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        b.swap(c, p);
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = &a[r][c] / &a[c][c];
                for j in c..n {
                    let d = &f * &a[c][j];
                    a[r][j] -= d;
                }
                let d = &f * &b[c];
                b[r] -= d;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn rank_basics() {
        assert_eq!(exact_rank(&mat(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])), 3);
        assert_eq!(exact_rank(&mat(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(exact_rank(&mat(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(exact_rank(&[]), 0);
        let m = vec![vec![ratio(1, 3), ratio(1, 2)], vec![ratio(2, 3), int(1)]];
        assert_eq!(exact_rank(&m), 1);
    }

    #[test]
    fn off_diagonal_witness() {
        let m = mat(&[&[0, 1], &[1, 0]]);
        let v = psd_check(&m).unwrap();
        assert_eq!(
            v,
            PsdVerdict::NotPsd {
                witness: vec![int(1), int(-1)],
                value: int(-2)
            }
        );
        assert!(v.verify(&m));
    }

    #[test]
    fn identity_is_psd() {
        let m = mat(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let v = psd_check(&m).unwrap();
        assert!(v.is_psd());
        assert!(v.verify(&m));
    }

    #[test]
    fn hidden_negative_direction() {
        // Positive diagonal, indefinite: eigenvalues 3 and -1.
        let m = mat(&[&[1, 2], &[2, 1]]);
        let v = psd_check(&m).unwrap();
        assert!(!v.is_psd());
        assert!(v.verify(&m));
    }

    #[test]
    fn non_symmetric_rejected() {
        assert!(matches!(psd_check(&mat(&[&[1, 2], &[3, 1]])), Err(Error::NotSymmetric(0, 1))));
    }

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..6).prop_flat_map(|n| {
            prop::collection::vec(prop::collection::vec(-3i64..=3, n), 1..6)
        })
    }

    proptest! {
        #[test]
        fn gram_matrices_are_psd(vs in small_matrix()) {
            // M = V V^T is PSD with rank = rank(V).
            let n = vs.len();
            let m: Vec<Vec<Rational>> = (0..n)
                .map(|i| (0..n).map(|j| int(vs[i].iter().zip(&vs[j]).map(|(a, b)| a * b).sum())).collect())
                .collect();
            let v = psd_check(&m).unwrap();
            prop_assert!(v.is_psd());
            prop_assert!(v.verify(&m));
            let vr: Vec<Vec<Rational>> = vs.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
            prop_assert_eq!(exact_rank(&m), exact_rank(&vr));
        }

        #[test]
        fn verdicts_always_verify(entries in prop::collection::vec(-4i64..=4, 16)) {
            let n = 4;
            let m: Vec<Vec<Rational>> = (0..n)
                .map(|i| (0..n).map(|j| int(entries[i.min(j) * n + i.max(j)])).collect())
                .collect();
            let v = psd_check(&m).unwrap();
            prop_assert!(v.verify(&m));
        }

        #[test]
        fn rank_is_transpose_invariant(rows in prop::collection::vec(prop::collection::vec(-5i64..=5, 4), 1..6)) {
            let m: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
            let t: Vec<Vec<Rational>> = (0..4).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect();
            prop_assert_eq!(exact_rank(&m), exact_rank(&t));
        }
    }
}
