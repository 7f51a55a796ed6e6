//! Weighted target graphs `H = (d, alpha, beta)`: a looped complete graph on
//! `d` nodes with positive node weights and a symmetric edge-weight matrix.

use num_traits::{Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, int, ratio, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedTarget {
    alpha: Vec<Rational>,
    beta: Vec<Vec<Rational>>,
}

impl WeightedTarget {
    pub fn new(alpha: Vec<Rational>, beta: Vec<Vec<Rational>>) -> Result<Self> {
        let d = alpha.len();
        if d == 0 {
            return Err(Error::InvalidTarget("d must be at least 1".into()));
        }
        if let Some(i) = alpha.iter().position(|a| !a.is_positive()) {
            return Err(Error::InvalidTarget(format!(
                "alpha[{i}] = {} is not positive",
                rational::format(&alpha[i])
            )));
        }
        if beta.len() != d || beta.iter().any(|row| row.len() != d) {
            return Err(Error::InvalidTarget(format!("beta must be {d}x{d}")));
        }
        for i in 0..d {
            for j in i + 1..d {
                if beta[i][j] != beta[j][i] {
                    return Err(Error::InvalidTarget(format!(
                        "beta is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(WeightedTarget { alpha, beta })
    }

    pub fn d(&self) -> usize {
        self.alpha.len()
    }

    pub fn alpha(&self) -> &[Rational] {
        &self.alpha
    }

    pub fn beta(&self) -> &[Vec<Rational>] {
        &self.beta
    }

    pub fn total_alpha(&self) -> Rational {
        self.alpha.iter().fold(Rational::zero(), |acc, a| acc + a)
    }

    /// Same target with every node weight multiplied by `factor`.
    pub fn scale_alpha(&self, factor: &Rational) -> Result<Self> {
        WeightedTarget::new(
            self.alpha.iter().map(|a| a * factor).collect(),
            self.beta.clone(),
        )
    }

    /// Same target with nodes reordered: node `i` of the result is node
    /// `perm[i]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        WeightedTarget {
            alpha: perm.iter().map(|&p| self.alpha[p].clone()).collect(),
            beta: perm
                .iter()
                .map(|&p| perm.iter().map(|&q| self.beta[p][q].clone()).collect())
                .collect(),
        }
    }

    /// Whether two nodes are twins: equal edge-weight rows, so they can be
    /// merged without changing `hom(., H)`.
    pub fn has_twins(&self) -> bool {
        let d = self.d();
        (0..d).any(|i| (i + 1..d).any(|j| self.beta[i] == self.beta[j]))
    }

    // Named targets.

    /// `a = (1/2, 1/2)`, `B = [[1, -1], [-1, 1]]`: `hom` is the indicator of
    /// all degrees being even.
    pub fn eulerian() -> Self {
        WeightedTarget::new(
            vec![ratio(1, 2), ratio(1, 2)],
            vec![vec![int(1), int(-1)], vec![int(-1), int(1)]],
        )
        .expect("valid")
    }

    /// Hard-core model: counts independent sets.
    pub fn independent_set() -> Self {
        WeightedTarget::new(
            vec![int(1), int(1)],
            vec![vec![int(1), int(1)], vec![int(1), int(0)]],
        )
        .expect("valid")
    }

    /// `K_x` with unit weights and no loops: `hom` counts proper `x`-colorings.
    pub fn complete(x: usize) -> Self {
        assert!(x >= 1);
        WeightedTarget::new(
            vec![int(1); x],
            (0..x)
                .map(|i| (0..x).map(|j| int((i != j) as i64)).collect())
                .collect(),
        )
        .expect("valid")
    }

    /// One node with weight `alpha` and a loop of weight `beta`.
    pub fn single_loop(alpha: Rational, beta: Rational) -> Result<Self> {
        WeightedTarget::new(vec![alpha], vec![vec![beta]])
    }

    /// Random target with `d` nodes, numerators in `[1, max_num]` for node
    /// weights and `[-max_num, max_num]` (or `[1, max_num]` when `positive`)
    /// for edge weights, denominators in `[1, max_den]`.
    pub fn random<R: Rng>(rng: &mut R, d: usize, max_num: i64, max_den: i64, positive: bool) -> Self {
        let mut draw = |lo: i64| ratio(rng.gen_range(lo..=max_num), rng.gen_range(1..=max_den));
        let alpha = (0..d).map(|_| draw(1)).collect();
        let lo = if positive { 1 } else { -max_num };
        let mut beta = vec![vec![Rational::zero(); d]; d];
        for i in 0..d {
            for j in i..d {
                let b = draw(lo);
                beta[i][j] = b.clone();
                beta[j][i] = b;
            }
        }
        WeightedTarget::new(alpha, beta).expect("positive alpha, symmetric beta")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&TargetFile::from(self)).expect("serializable")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&TargetFile::from(self)).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: TargetFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("target json: {e}")))?;
        file.try_into()
    }
}

/// On-disk form: rationals as `"p/q"` strings.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetFile {
    pub d: usize,
    pub alpha: Vec<String>,
    pub beta: Vec<Vec<String>>,
}

impl From<&WeightedTarget> for TargetFile {
    fn from(t: &WeightedTarget) -> Self {
        TargetFile {
            d: t.d(),
            alpha: t.alpha.iter().map(rational::format).collect(),
            beta: t
                .beta
                .iter()
                .map(|row| row.iter().map(rational::format).collect())
                .collect(),
        }
    }
}

impl TryFrom<TargetFile> for WeightedTarget {
    type Error = Error;

    fn try_from(f: TargetFile) -> Result<Self> {
        if f.alpha.len() != f.d {
            return Err(Error::InvalidTarget(format!(
                "d = {} but alpha has {} entries",
                f.d,
                f.alpha.len()
            )));
        }
        let alpha = f
            .alpha
            .iter()
            .map(|s| rational::parse(s))
            .collect::<Result<Vec<_>>>()?;
        let beta = f
            .beta
            .iter()
            .map(|row| row.iter().map(|s| rational::parse(s)).collect())
            .collect::<Result<Vec<Vec<_>>>>()?;
        WeightedTarget::new(alpha, beta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn one() -> Rational {
        Rational::one()
    }

    #[test]
    fn json_round_trip() {
        let h = WeightedTarget::eulerian();
        let text = h.to_json();
        assert_eq!(
            text,
            r#"{"d":2,"alpha":["1/2","1/2"],"beta":[["1","-1"],["-1","1"]]}"#
        );
        assert_eq!(WeightedTarget::from_json(&text).unwrap(), h);
    }

    #[test]
    fn validation() {
        assert!(WeightedTarget::new(vec![], vec![]).is_err());
        assert!(WeightedTarget::new(vec![int(0)], vec![vec![int(1)]]).is_err());
        assert!(WeightedTarget::new(
            vec![int(1), int(1)],
            vec![vec![int(1), int(2)], vec![int(3), int(1)]]
        )
        .is_err());
        assert!(WeightedTarget::from_json(r#"{"d":2,"alpha":["1"],"beta":[["1"]]}"#).is_err());
        assert!(WeightedTarget::from_json(r#"{"d":1,"alpha":["1"],"beta":[["1"]],"x":1}"#).is_err());
    }

    #[test]
    fn twins() {
        assert!(!WeightedTarget::eulerian().has_twins());
        let t = WeightedTarget::new(vec![one(), one()], vec![vec![one(), one()], vec![one(), one()]])
            .unwrap();
        assert!(t.has_twins());
    }
}
