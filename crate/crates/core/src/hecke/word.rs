use std::fmt;

use crate::scalar::Scalar;

/// g_index or its inverse; indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub index: usize,
    pub inverse: bool,
}

/// Formal linear combination of words in the generators, kept unreduced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeckeWord<S: Scalar> {
    terms: Vec<(S, Vec<Letter>)>,
}

impl<S: Scalar> HeckeWord<S> {
    pub fn zero() -> Self {
        HeckeWord { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::scalar(S::one())
    }

    pub fn scalar(c: S) -> Self {
        HeckeWord {
            terms: vec![(c, Vec::new())],
        }
    }

    pub fn gen(i: usize) -> Self {
        Self::letters(vec![Letter {
            index: i,
            inverse: false,
        }])
    }

    pub fn gen_inv(i: usize) -> Self {
        Self::letters(vec![Letter {
            index: i,
            inverse: true,
        }])
    }

    /// g_{i_1} g_{i_2} ⋯
    pub fn product_of(indices: &[usize]) -> Self {
        Self::letters(
            indices
                .iter()
                .map(|&index| Letter {
                    index,
                    inverse: false,
                })
                .collect(),
        )
    }

    fn letters(l: Vec<Letter>) -> Self {
        HeckeWord {
            terms: vec![(S::one(), l)],
        }
    }

    pub fn terms(&self) -> &[(S, Vec<Letter>)] {
        &self.terms
    }

    /// Largest generator index used, 0 for scalars.
    pub fn max_index(&self) -> usize {
        self.terms
            .iter()
            .flat_map(|(_, l)| l.iter().map(|x| x.index))
            .max()
            .unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        HeckeWord { terms }
    }

    pub fn scale(&self, c: &S) -> Self {
        HeckeWord {
            terms: self
                .terms
                .iter()
                .map(|(a, l)| (a.mul_ref(c), l.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (a, la) in &self.terms {
            for (b, lb) in &other.terms {
                let mut l = la.clone();
                l.extend(lb.iter().copied());
                terms.push((a.mul_ref(b), l));
            }
        }
        HeckeWord { terms }
    }
}

impl<S: Scalar> fmt::Display for HeckeWord<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (t, (c, letters)) in self.terms.iter().enumerate() {
            if t > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for l in letters {
                if l.inverse {
                    write!(f, " g{}^-1", l.index)?;
                } else {
                    write!(f, " g{}", l.index)?;
                }
            }
        }
        Ok(())
    }
}
