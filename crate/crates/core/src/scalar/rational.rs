use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Backend, Scalar};
use crate::error::{Error, Result};

/// Exact rational number.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(pub BigRational);

impl Rational {
    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_ratio_string())
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_ratio_string())
    }
}

impl Add for Rational {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Rational(self.0 + o.0)
    }
}

impl Sub for Rational {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Rational(self.0 - o.0)
    }
}

impl Mul for Rational {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Rational(self.0 * o.0)
    }
}

/// Panics on a zero divisor; use [`Scalar::div_ref`] for the checked form.
impl Div for Rational {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        Rational(self.0 / o.0)
    }
}

impl Neg for Rational {
    type Output = Self;
    fn neg(self) -> Self {
        Rational(-self.0)
    }
}

impl Scalar for Rational {
    const BACKEND: Backend = Backend::Rational;

    fn zero() -> Self {
        Rational(BigRational::zero())
    }

    fn one() -> Self {
        Rational(BigRational::one())
    }

    fn from_i64(v: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(v)))
    }

    fn from_ratio(num: &BigInt, den: &BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(BigRational::new(num.clone(), den.clone())))
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn inv(&self) -> Result<Self> {
        if self.0.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(self.0.recip()))
    }

    fn add_ref(&self, other: &Self) -> Self {
        Rational(&self.0 + &other.0)
    }

    fn sub_ref(&self, other: &Self) -> Self {
        Rational(&self.0 - &other.0)
    }

    fn mul_ref(&self, other: &Self) -> Self {
        Rational(&self.0 * &other.0)
    }

    fn to_ratio_string(&self) -> String {
        format!("{}/{}", self.0.numer(), self.0.denom())
    }

    /// Fraction-free (Bareiss) elimination after clearing row denominators.
    fn dense_rank(rows: Vec<Vec<Self>>) -> usize {
        let mut m: Vec<Vec<BigInt>> = rows
            .into_iter()
            .map(|row| {
                let lcm = row
                    .iter()
                    .fold(BigInt::one(), |acc, x| acc.lcm(x.0.denom()));
                row.into_iter()
                    .map(|x| x.0.numer() * (&lcm / x.0.denom()))
                    .collect()
            })
            .collect();
        bareiss_rank(&mut m)
    }
}

/// Rank of an integer matrix by Bareiss fraction-free elimination.
/// Pivot: first nonzero entry in column order.
pub(crate) fn bareiss_rank(m: &mut [Vec<BigInt>]) -> usize {
    let nrows = m.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = m[0].len();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        let pivot = m[rank][col].clone();
        for r in rank + 1..nrows {
            let lead = m[r][col].clone();
            for c in col..ncols {
                let v = &pivot * &m[r][c] - &lead * &m[rank][c];
                // Exact by Sylvester's identity.
                m[r][c] = v / &prev;
            }
        }
        prev = pivot;
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}
