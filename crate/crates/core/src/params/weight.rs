use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

/// Integer dynamical variables p = (p_1..p_n), kept modulo the overall
/// translation so that only differences p_ij = p_i − p_j are stored.
///
/// `total` records Σp_i. Unimodular shifts never change it; it moves only
/// under the non-unimodular shift used as a negative control.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeightPoint {
    rel: Vec<i64>,
    #[serde(default)]
    total: i64,
}

impl WeightPoint {
    /// From representatives p_i; the overall translation is discarded.
    pub fn new(p: Vec<i64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::Invalid("weight point needs n >= 1".into()));
        }
        let last = *p.last().unwrap();
        Ok(WeightPoint {
            rel: p.into_iter().map(|x| x - last).collect(),
            total: 0,
        })
    }

    pub fn zero(n: usize) -> Self {
        WeightPoint {
            rel: vec![0; n],
            total: 0,
        }
    }

    /// From upper-triangular differences p_12, p_13, .., p_1n, p_23, .., p_{n-1,n},
    /// checking additivity.
    pub fn from_pdiff(n: usize, pdiff: &[i64]) -> Result<Self> {
        let expected = n * (n - 1) / 2;
        if pdiff.len() != expected {
            return Err(Error::Dimension(format!(
                "expected {expected} differences for n = {n}, got {}",
                pdiff.len()
            )));
        }
        let mut table = vec![vec![0i64; n]; n];
        let mut it = pdiff.iter();
        for i in 0..n {
            for j in i + 1..n {
                let v = *it.next().unwrap();
                table[i][j] = v;
                table[j][i] = -v;
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if table[i][j] + table[j][k] != table[i][k] {
                        return Err(Error::Invalid(format!(
                            "p_{}{} + p_{}{} != p_{}{}",
                            i + 1,
                            j + 1,
                            j + 1,
                            k + 1,
                            i + 1,
                            k + 1
                        )));
                    }
                }
            }
        }
        Self::new((0..n).map(|i| table[i][n - 1]).collect())
    }

    /// Parses `"p12=2,p23=-1"` style assignments. Entries are consecutive
    /// differences p_{i,i+1}, or any p_ij that pins down the point.
    pub fn parse_assignments(n: usize, text: &str) -> Result<Self> {
        let mut rel: Vec<Option<i64>> = vec![None; n];
        rel[n - 1] = Some(0);
        let mut pairs = Vec::new();
        for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected pIJ=value, got {part:?}")))?;
            let key = key.trim();
            let digits = key
                .strip_prefix('p')
                .ok_or_else(|| Error::Parse(format!("bad key {key:?}")))?;
            let (i, j) = split_pair(digits, n)?;
            let v: i64 = value
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad value in {part:?}")))?;
            pairs.push((i, j, v));
        }
        // Propagate until fixed point.
        loop {
            let mut changed = false;
            for &(i, j, v) in &pairs {
                match (rel[i], rel[j]) {
                    (Some(a), Some(b)) if a - b != v => {
                        return Err(Error::Invalid(format!(
                            "inconsistent assignment p{}{}={v}",
                            i + 1,
                            j + 1
                        )))
                    }
                    (Some(a), None) => {
                        rel[j] = Some(a - v);
                        changed = true;
                    }
                    (None, Some(b)) => {
                        rel[i] = Some(b + v);
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                break;
            }
        }
        let rel = rel
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| Error::Invalid(format!("p_{} is not determined", i + 1))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(rel)
    }

    pub fn n(&self) -> usize {
        self.rel.len()
    }

    /// p_i − p_n.
    pub fn rel(&self) -> &[i64] {
        &self.rel
    }

    pub fn total(&self) -> i64 {
        self.total
    }

    /// p_ij = p_i − p_j (0-based indices).
    pub fn pdiff(&self, i: usize, j: usize) -> i64 {
        self.rel[i] - self.rel[j]
    }

    /// Upper-triangular list p_12, p_13, .., p_{n-1,n}.
    pub fn pdiff_list(&self) -> Vec<i64> {
        let n = self.n();
        let mut out = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                out.push(self.pdiff(i, j));
            }
        }
        out
    }

    /// p + k·v^(i): p_jl changes by k(δ_ij − δ_il).
    pub fn shifted(&self, i: usize, k: i64) -> Self {
        let mut out = self.clone();
        out.shift_in_place(i, k);
        out
    }

    pub fn shift_in_place(&mut self, i: usize, k: i64) {
        let n = self.n();
        if i == n - 1 {
            for (j, r) in self.rel.iter_mut().enumerate() {
                if j != n - 1 {
                    *r -= k;
                }
            }
        } else {
            self.rel[i] += k;
        }
    }

    /// p + Σ_i counts[i]·v^(i).
    pub fn shifted_by(&self, counts: &[i64]) -> Self {
        let mut out = self.clone();
        for (i, &k) in counts.iter().enumerate() {
            if k != 0 {
                out.shift_in_place(i, k);
            }
        }
        out
    }

    /// p − v^(i_1) − v^(i_2) − ..
    pub fn minus_weights(&self, indices: &[usize]) -> Self {
        let mut out = self.clone();
        for &i in indices {
            out.shift_in_place(i, -1);
        }
        out
    }

    /// Shift by the non-unimodular weight e_i: same differences as v^(i),
    /// but Σp_i also grows by k.
    pub fn shifted_nonunimodular(&self, i: usize, k: i64) -> Self {
        let mut out = self.shifted(i, k);
        out.total += k;
        out
    }

    /// Representative p_i with Σp_i = total, as rationals.
    pub fn barycentric(&self) -> Vec<Rational> {
        let n = self.n() as i64;
        let sum: i64 = self.rel.iter().sum();
        self.rel
            .iter()
            .map(|&r| Rational::from_frac(n * r - sum + self.total, n).expect("n > 0"))
            .collect()
    }
}

fn split_pair(digits: &str, n: usize) -> Result<(usize, usize)> {
    let parse = |s: &str| -> Result<usize> {
        let v: usize = s
            .parse()
            .map_err(|_| Error::Parse(format!("bad index {s:?}")))?;
        if v == 0 || v > n {
            return Err(Error::IndexOutOfRange(format!("index {v} not in 1..={n}")));
        }
        Ok(v - 1)
    };
    if let Some((a, b)) = digits.split_once('_') {
        return Ok((parse(a)?, parse(b)?));
    }
    if digits.len() == 2 {
        return Ok((parse(&digits[..1])?, parse(&digits[1..])?));
    }
    Err(Error::Parse(format!(
        "ambiguous index pair {digits:?}; write p<i>_<j>"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn construction_and_differences() {
        let p = WeightPoint::new(vec![5, 2, 3]).unwrap();
        assert_eq!(p.rel(), &[2, -1, 0]);
        assert_eq!(p.pdiff(0, 1), 3);
        assert_eq!(p.pdiff_list(), vec![3, 2, -1]);
        let q = WeightPoint::from_pdiff(3, &[3, 2, -1]).unwrap();
        assert_eq!(p, q);
        assert!(WeightPoint::from_pdiff(3, &[3, 2, 0]).is_err());
    }

    #[test]
    fn parse_assignments() {
        let p = WeightPoint::parse_assignments(2, "p12=2").unwrap();
        assert_eq!(p.pdiff(0, 1), 2);
        let p = WeightPoint::parse_assignments(3, "p12=1, p23=4").unwrap();
        assert_eq!(p.pdiff(0, 2), 5);
        assert!(WeightPoint::parse_assignments(3, "p12=1").is_err());
        assert!(WeightPoint::parse_assignments(3, "p12=1,p23=1,p13=3").is_err());
    }

    #[test]
    fn barycentric_sums_to_total() {
        let p = WeightPoint::new(vec![1, 0, 0]).unwrap();
        let b = p.barycentric();
        assert_eq!(b[0], Rational::from_frac(2, 3).unwrap());
        let s = b.iter().fold(Rational::zero(), |a, x| a + x.clone());
        assert_eq!(s, Rational::zero());
        let moved = p.shifted_nonunimodular(0, 1);
        assert_eq!(moved.total(), 1);
        assert_eq!(moved.pdiff_list(), p.shifted(0, 1).pdiff_list());
    }

    proptest! {
        #[test]
        fn shift_acts_on_differences(
            p in proptest::collection::vec(-9i64..9, 4),
            i in 0usize..4,
            k in -3i64..=3,
        ) {
            let w = WeightPoint::new(p).unwrap();
            let s = w.shifted(i, k);
            for j in 0..4 {
                for l in 0..4 {
                    let d = (i == j) as i64 - (i == l) as i64;
                    prop_assert_eq!(s.pdiff(j, l), w.pdiff(j, l) + k * d);
                    prop_assert_eq!(w.pdiff(j, l) + w.pdiff(l, 0), w.pdiff(j, 0));
                }
            }
            prop_assert_eq!(s.shifted(i, -k), w);
        }
    }
}
