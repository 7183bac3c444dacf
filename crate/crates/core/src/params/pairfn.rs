use crate::error::{Error, Result};
use crate::scalar::{QContext, Scalar};

/// A function of one integer argument of the form c·w^p.
/// Constants are the case w = 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeomFn<S: Scalar> {
    pub c: S,
    pub w: S,
}

impl<S: Scalar> GeomFn<S> {
    pub fn constant(c: S) -> Self {
        GeomFn { c, w: S::one() }
    }

    pub fn geometric(c: S, w: S) -> Self {
        GeomFn { c, w }
    }

    pub fn one() -> Self {
        Self::constant(S::one())
    }

    pub fn is_constant(&self) -> bool {
        self.w.is_one()
    }

    pub fn eval(&self, p: i64) -> Result<S> {
        if self.is_constant() {
            return Ok(self.c.clone());
        }
        Ok(self.c.mul_ref(&self.w.pow(p)?))
    }

    pub fn mul(&self, other: &Self) -> Self {
        GeomFn {
            c: self.c.mul_ref(&other.c),
            w: self.w.mul_ref(&other.w),
        }
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(GeomFn {
            c: self.c.inv()?,
            w: self.w.inv()?,
        })
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }
}

/// n×n table of functions g_ij(p_ij) obeying g_ii = 1 and
/// g_ij(p)·g_ji(−p) = 1. Used for α and for twist functions ψ.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PairTable<S: Scalar> {
    entries: Vec<Vec<GeomFn<S>>>,
}

impl<S: Scalar> PairTable<S> {
    /// Checks the pairing constraint. For c·w^p it amounts to
    /// c_ij·c_ji = 1 and w_ij = w_ji.
    pub fn new(entries: Vec<Vec<GeomFn<S>>>) -> Result<Self> {
        let n = entries.len();
        if entries.iter().any(|row| row.len() != n) {
            return Err(Error::Dimension("pair table must be square".into()));
        }
        for i in 0..n {
            let d = &entries[i][i];
            if !d.c.is_one() || !d.w.is_one() {
                return Err(Error::Invalid(format!(
                    "diagonal entry {} must be 1",
                    i + 1
                )));
            }
            for j in i + 1..n {
                let (a, b) = (&entries[i][j], &entries[j][i]);
                if a.c.is_zero() || a.w.is_zero() || b.w.is_zero() {
                    return Err(Error::Invalid(format!(
                        "entry ({},{}) must be invertible",
                        i + 1,
                        j + 1
                    )));
                }
                if !a.c.mul_ref(&b.c).is_one() || a.w != b.w {
                    return Err(Error::Invalid(format!(
                        "entries ({0},{1}) and ({1},{0}) violate g_ij(p) g_ji(-p) = 1",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(PairTable { entries })
    }

    /// Builds from the upper triangle; the lower triangle is c_ji = 1/c_ij, w_ji = w_ij.
    pub fn from_upper(n: usize, upper: impl Fn(usize, usize) -> GeomFn<S>) -> Result<Self> {
        let mut entries = vec![vec![GeomFn::one(); n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let g = upper(i, j);
                entries[j][i] = GeomFn::geometric(g.c.inv()?, g.w.clone());
                entries[i][j] = g;
            }
        }
        Self::new(entries)
    }

    pub fn trivial(n: usize) -> Self {
        PairTable {
            entries: vec![vec![GeomFn::one(); n]; n],
        }
    }

    /// α_ij = q for i < j, 1 on the diagonal, q̄ for i > j.
    pub fn standard(ctx: &QContext<S>) -> Self {
        let n = ctx.n();
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| match i.cmp(&j) {
                        std::cmp::Ordering::Less => GeomFn::constant(ctx.q().clone()),
                        std::cmp::Ordering::Equal => GeomFn::one(),
                        std::cmp::Ordering::Greater => GeomFn::constant(ctx.qbar().clone()),
                    })
                    .collect()
            })
            .collect();
        PairTable { entries }
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &GeomFn<S> {
        &self.entries[i][j]
    }

    pub fn eval(&self, i: usize, j: usize, p: i64) -> Result<S> {
        self.entries[i][j].eval(p)
    }

    pub fn entries(&self) -> &[Vec<GeomFn<S>>] {
        &self.entries
    }

    pub fn is_constant(&self) -> bool {
        self.entries.iter().flatten().all(GeomFn::is_constant)
    }

    /// The α-update of a twist by ψ: g_ij(p) ψ_ji(−p)², which as a
    /// function of p is g_ij·ψ_ij^{−2}.
    pub fn twisted_by(&self, psi: &PairTable<S>) -> Result<Self> {
        let mut entries = self.entries.clone();
        for (i, row) in entries.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = e.mul(&psi.get(i, j).inv()?.square());
            }
        }
        Self::new(entries)
    }
}
