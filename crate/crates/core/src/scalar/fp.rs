use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::{Backend, Scalar};
use crate::error::{Error, Result};

/// Largest prime below 2^64.
pub const DEFAULT_PRIME: u64 = 18_446_744_073_709_551_557;

/// Residue modulo the prime `P`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp<const P: u64>(u64);

pub type Fp64 = Fp<DEFAULT_PRIME>;

impl<const P: u64> Fp<P> {
    pub fn new(v: u64) -> Self {
        Fp(v % P)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn mulmod(a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % P as u128) as u64
    }

    fn from_big(v: &BigInt) -> Self {
        let r = v.mod_floor(&BigInt::from(P));
        Fp(r.to_u64().expect("reduced residue fits in u64"))
    }
}

impl<const P: u64> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_ratio_string())
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let (s, carry) = self.0.overflowing_add(o.0);
        if carry || s >= P {
            Fp(s.wrapping_sub(P))
        } else {
            Fp(s)
        }
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        if self.0 >= o.0 {
            Fp(self.0 - o.0)
        } else {
            Fp(P - (o.0 - self.0))
        }
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Fp(Self::mulmod(self.0, o.0))
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        if self.0 == 0 {
            self
        } else {
            Fp(P - self.0)
        }
    }
}

impl<const P: u64> Scalar for Fp<P> {
    const BACKEND: Backend = Backend::Prime;

    fn zero() -> Self {
        Fp(0)
    }

    fn one() -> Self {
        Fp(1)
    }

    fn from_i64(v: i64) -> Self {
        if v >= 0 {
            Fp::new(v as u64)
        } else {
            -Fp::new(v.unsigned_abs())
        }
    }

    fn from_ratio(num: &BigInt, den: &BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let d = Self::from_big(den);
        Ok(Self::from_big(num) * d.inv()?)
    }

    fn is_zero(&self) -> bool {
        self.0 == 0
    }

    fn inv(&self) -> Result<Self> {
        if self.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let mut e = P - 2;
        let mut b = self.0;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = Self::mulmod(acc, b);
            }
            b = Self::mulmod(b, b);
            e >>= 1;
        }
        Ok(Fp(acc))
    }

    fn add_ref(&self, other: &Self) -> Self {
        *self + *other
    }

    fn sub_ref(&self, other: &Self) -> Self {
        *self - *other
    }

    fn mul_ref(&self, other: &Self) -> Self {
        *self * *other
    }

    fn to_ratio_string(&self) -> String {
        format!("{}/1", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type F = Fp64;

    #[test]
    fn field_axioms_spot() {
        let a = F::from_i64(-5);
        let b = F::from_frac(7, 3).unwrap();
        assert_eq!(a + (-a), F::zero());
        assert_eq!(b * b.inv().unwrap(), F::one());
        assert_eq!(F::from_i64(3) * b, F::from_i64(7));
        assert_eq!(F::new(DEFAULT_PRIME - 1) + F::new(2), F::one());
    }

    #[test]
    fn small_prime_wraps() {
        type F7 = Fp<7>;
        assert_eq!(F7::from_i64(10), F7::from_i64(3));
        assert!(F7::from_frac(1, 7).is_err());
        assert_eq!(F7::from_i64(3).inv().unwrap(), F7::from_i64(5));
    }
}
