use super::{dim, unflatten, TensorOp};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Diagonal operator on V^⊗k, stored as its diagonal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiagOp<S: Scalar> {
    n: usize,
    k: usize,
    diag: Vec<S>,
}

impl<S: Scalar> DiagOp<S> {
    pub fn new(n: usize, k: usize, diag: Vec<S>) -> Result<Self> {
        if diag.len() != dim(n, k) {
            return Err(Error::Dimension(format!(
                "diagonal of length {} for dimension {}",
                diag.len(),
                dim(n, k)
            )));
        }
        Ok(DiagOp { n, k, diag })
    }

    pub fn identity(n: usize, k: usize) -> Self {
        DiagOp {
            n,
            k,
            diag: vec![S::one(); dim(n, k)],
        }
    }

    /// Diagonal whose entry at (i_1..i_k) is f(i_1..i_k).
    pub fn from_fn(n: usize, k: usize, f: impl Fn(&[usize]) -> S) -> Self {
        let diag = (0..dim(n, k)).map(|i| f(&unflatten(n, k, i))).collect();
        DiagOp { n, k, diag }
    }

    /// The one-site diagonal d placed at site `pos` of k sites.
    pub fn at_site(d: &[S], pos: usize, k: usize) -> Self {
        let n = d.len();
        Self::from_fn(n, k, |m| d[m[pos]].clone())
    }

    pub fn diag(&self) -> &[S] {
        &self.diag
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.diag.len() != other.diag.len() {
            return Err(Error::Dimension("diagonal sizes differ".into()));
        }
        Ok(DiagOp {
            n: self.n,
            k: self.k,
            diag: self
                .diag
                .iter()
                .zip(&other.diag)
                .map(|(a, b)| a.mul_ref(b))
                .collect(),
        })
    }

    pub fn inverse(&self) -> Result<Self> {
        let diag = self
            .diag
            .iter()
            .map(|v| {
                v.inv()
                    .map_err(|_| Error::Singular("diagonal has a zero entry".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DiagOp {
            n: self.n,
            k: self.k,
            diag,
        })
    }

    pub fn to_op(&self) -> TensorOp<S> {
        TensorOp::from_entries(
            self.n,
            self.k,
            self.diag.iter().enumerate().map(|(i, v)| (i, i, v.clone())),
        )
        .expect("in-range diagonal")
    }

    /// self·op.
    pub fn mul_left(&self, op: &TensorOp<S>) -> Result<TensorOp<S>> {
        self.check(op)?;
        TensorOp::from_row_fn(op.n(), op.k(), |r| {
            Ok(op.rows()[r]
                .iter()
                .map(|(c, v)| (*c, self.diag[r].mul_ref(v)))
                .collect())
        })
    }

    /// op·self.
    pub fn mul_right(&self, op: &TensorOp<S>) -> Result<TensorOp<S>> {
        self.check(op)?;
        TensorOp::from_row_fn(op.n(), op.k(), |r| {
            Ok(op.rows()[r]
                .iter()
                .map(|(c, v)| (*c, v.mul_ref(&self.diag[*c])))
                .collect())
        })
    }

    /// self·op·self^{-1}.
    pub fn conjugate(&self, op: &TensorOp<S>) -> Result<TensorOp<S>> {
        let inv = self.inverse()?;
        inv.mul_right(&self.mul_left(op)?)
    }

    fn check(&self, op: &TensorOp<S>) -> Result<()> {
        if op.n() != self.n || op.k() != self.k {
            return Err(Error::Dimension(
                "diagonal and operator shapes differ".into(),
            ));
        }
        Ok(())
    }
}
