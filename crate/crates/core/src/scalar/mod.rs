//! Exact field arithmetic and q-number kernel.
//!
//! Every identity in this crate is checked in an exact field. Two backends
//! implement [`Scalar`]: [`Rational`] (arbitrary precision fractions) and
//! [`Fp`] (residues modulo a fixed 64-bit prime). A computation picks one
//! backend through its type parameter, so the two can never mix.

mod fp;
mod q;
mod rational;

pub use fp::{Fp, Fp64, DEFAULT_PRIME};
pub use q::QContext;
pub use rational::Rational;

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;

use crate::error::{Error, Result};

/// Which exact backend a scalar type uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Rational,
    /// Identity checks are probabilistic (evaluation at a random point of a
    /// large prime field).
    Prime,
}

impl Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Backend::Rational => write!(f, "rational"),
            Backend::Prime => write!(f, "prime"),
        }
    }
}

pub trait Scalar:
    Clone
    + PartialEq
    + Eq
    + Hash
    + Debug
    + Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    const BACKEND: Backend;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    /// Maps `num/den` into the field. Fails when `den` vanishes in the field.
    fn from_ratio(num: &BigInt, den: &BigInt) -> Result<Self>;
    fn is_zero(&self) -> bool;
    fn inv(&self) -> Result<Self>;

    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;

    /// Canonical `num/den` text used by every serialized format.
    fn to_ratio_string(&self) -> String;

    /// Rank of a dense matrix. The default is plain Gaussian elimination.
    fn dense_rank(mut rows: Vec<Vec<Self>>) -> usize {
        gauss_rank(&mut rows)
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn div_ref(&self, other: &Self) -> Result<Self> {
        Ok(self.mul_ref(&other.inv()?))
    }

    fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&b);
            }
            b = b.mul_ref(&b);
            e >>= 1;
        }
        Ok(acc)
    }

    fn parse(s: &str) -> Result<Self> {
        let (num, den) = parse_ratio(s)?;
        Self::from_ratio(&num, &den)
    }

    fn from_frac(num: i64, den: i64) -> Result<Self> {
        Self::from_ratio(&BigInt::from(num), &BigInt::from(den))
    }
}

/// Splits `"num/den"` (or a bare integer) into its parts.
pub fn parse_ratio(s: &str) -> Result<(BigInt, BigInt)> {
    let s = s.trim();
    let bad = || Error::Parse(format!("expected \"num/den\", got {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = n.parse().map_err(|_| bad())?;
    let den: BigInt = d.parse().map_err(|_| bad())?;
    if den == BigInt::from(0) {
        return Err(Error::DivisionByZero);
    }
    Ok((num, den))
}

fn gauss_rank<S: Scalar>(rows: &mut [Vec<S>]) -> usize {
    let nrows = rows.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = rows[0].len();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..nrows).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = rows[rank][col].inv().expect("nonzero pivot");
        for r in rank + 1..nrows {
            if rows[r][col].is_zero() {
                continue;
            }
            let factor = rows[r][col].mul_ref(&inv);
            for c in col..ncols {
                if rows[rank][c].is_zero() {
                    continue;
                }
                let t = factor.mul_ref(&rows[rank][c]);
                rows[r][c] = rows[r][c].sub_ref(&t);
            }
        }
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(
            Rational::parse("5/2").unwrap(),
            Rational::from_frac(5, 2).unwrap()
        );
        assert_eq!(Rational::parse(" -3 ").unwrap(), Rational::from_i64(-3));
        assert!(Rational::parse("1/0").is_err());
        assert!(Rational::parse("x").is_err());
    }

    #[test]
    fn pow_negative() {
        let two = Rational::from_i64(2);
        assert_eq!(two.pow(-3).unwrap(), Rational::from_frac(1, 8).unwrap());
        assert!(Rational::zero().pow(-1).is_err());
    }

    #[test]
    fn gauss_rank_matches_bareiss() {
        let m: Vec<Vec<Rational>> = [[1, 2, 3], [2, 4, 6], [1, 0, 1]]
            .iter()
            .map(|r| r.iter().map(|&v| Rational::from_i64(v)).collect())
            .collect();
        let mut copy = m.clone();
        assert_eq!(gauss_rank(&mut copy), 2);
        assert_eq!(Rational::dense_rank(m), 2);
    }
}
