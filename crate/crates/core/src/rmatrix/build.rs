use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::params::{Regime, SLnParams, WeightPoint};
use crate::scalar::{QContext, Scalar};
use crate::tensor::{flatten, DynOp, ShiftMode, TensorOp};

/// A p-independent braid operator on V⊗V.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstRMatrix<S: Scalar> {
    pub name: String,
    pub op: TensorOp<S>,
}

/// Drinfeld–Jimbo braid operator: swap entries q on equal indices and 1
/// otherwise, plus q − q̄ on the diagonal at (a1, a2) with a1 < a2.
pub fn build_dj<S: Scalar>(ctx: &QContext<S>) -> ConstRMatrix<S> {
    let n = ctx.n();
    let mut entries = Vec::new();
    for a1 in 0..n {
        for a2 in 0..n {
            let row = flatten(n, &[a1, a2]);
            let swap = if a1 == a2 { ctx.q().clone() } else { S::one() };
            entries.push((row, flatten(n, &[a2, a1]), swap));
            if a1 < a2 {
                entries.push((row, row, ctx.lambda().clone()));
            }
        }
    }
    ConstRMatrix {
        name: "dj".into(),
        op: TensorOp::from_entries(n, 2, entries).expect("indices in range"),
    }
}

/// The dynamical ansatz at p: a_{i1 i2}(p) on the swap positions and
/// b_{i1 i2}(p) on the diagonal.
pub fn build_dyn<S: Scalar>(params: &SLnParams<S>, p: &WeightPoint) -> Result<TensorOp<S>> {
    check_point(params, p)?;
    build_from(params.n(), |i, j| {
        let pij = p.pdiff(i, j);
        Ok((params.a(i, j, pij)?, params.b(i, j, pij)?))
    })
}

/// Assembles an ansatz matrix from (a_ij, b_ij).
pub(crate) fn build_from<S: Scalar>(
    n: usize,
    mut ab: impl FnMut(usize, usize) -> Result<(S, S)>,
) -> Result<TensorOp<S>> {
    let mut entries = Vec::with_capacity(2 * n * n);
    for i in 0..n {
        for j in 0..n {
            let (a, b) = ab(i, j)?;
            let row = flatten(n, &[i, j]);
            entries.push((row, flatten(n, &[j, i]), a));
            entries.push((row, row, b));
        }
    }
    TensorOp::from_entries(n, 2, entries)
}

/// Closed-form inverse: swap part a_{i1 i2} − (q − q̄)δ_{i1 i2}, diagonal −b_{i2 i1}.
pub fn invert_dyn<S: Scalar>(params: &SLnParams<S>, p: &WeightPoint) -> Result<TensorOp<S>> {
    check_point(params, p)?;
    let lambda = params.ctx().lambda().clone();
    build_from(params.n(), |i, j| {
        let pij = p.pdiff(i, j);
        let mut a = params.a(i, j, pij)?;
        if i == j {
            a = a.sub_ref(&lambda);
        }
        let b = params.b(j, i, -pij)?.neg();
        Ok((a, b))
    })
}

/// The constant braid operator of the degenerate regime with constant α.
pub fn build_const<S: Scalar>(params: &SLnParams<S>) -> Result<ConstRMatrix<S>> {
    if params.regime() != Regime::ConstantMultiparam {
        return Err(Error::RegimeMismatch(format!(
            "constant R-matrix needs the constant multiparametric regime, got {:?}",
            params.regime()
        )));
    }
    if !params.alpha().is_constant() {
        return Err(Error::RegimeMismatch("alpha must be constant".into()));
    }
    Ok(ConstRMatrix {
        name: "multiparam".into(),
        op: build_dyn(params, &WeightPoint::zero(params.n()))?,
    })
}

fn check_point<S: Scalar>(params: &SLnParams<S>, p: &WeightPoint) -> Result<()> {
    if p.n() != params.n() {
        return Err(Error::Dimension(format!(
            "weight point has n = {}, parameters have n = {}",
            p.n(),
            params.n()
        )));
    }
    Ok(())
}

/// R̂(p) with a memo of its evaluations.
#[derive(Debug, Clone)]
pub struct DynRMatrix<S: Scalar> {
    params: SLnParams<S>,
    cache: Arc<Mutex<HashMap<WeightPoint, TensorOp<S>>>>,
}

impl<S: Scalar> DynRMatrix<S> {
    pub fn new(params: SLnParams<S>) -> Self {
        DynRMatrix {
            params,
            cache: Arc::new(Mutex::new(HashMap::new())),
        }
    }

    pub fn params(&self) -> &SLnParams<S> {
        &self.params
    }

    pub fn n(&self) -> usize {
        self.params.n()
    }

    pub fn at(&self, p: &WeightPoint) -> Result<TensorOp<S>> {
        if let Some(op) = self.cache.lock().expect("cache lock").get(p) {
            return Ok(op.clone());
        }
        let op = build_dyn(&self.params, p)?;
        self.cache
            .lock()
            .expect("cache lock")
            .insert(p.clone(), op.clone());
        Ok(op)
    }

    pub fn inverse_at(&self, p: &WeightPoint) -> Result<TensorOp<S>> {
        invert_dyn(&self.params, p)
    }

    /// R̂(p) acting on sites pos, pos+1 of k, as a p-dependent operator.
    pub fn site_op(&self, pos: usize, k: usize, mode: ShiftMode) -> DynOp<S> {
        let me = self.clone();
        DynOp::from_fn(self.n(), k, mode, move |p| me.at(p)?.embed(pos, k))
    }

    /// R̂(p)^{-1} on sites pos, pos+1 of k.
    pub fn site_inv_op(&self, pos: usize, k: usize, mode: ShiftMode) -> DynOp<S> {
        let me = self.clone();
        DynOp::from_fn(self.n(), k, mode, move |p| me.inverse_at(p)?.embed(pos, k))
    }

    /// R̂_{23}(p − v_1): block i_1 of site 1 carries R̂(p − v^(i_1)) on sites 2, 3.
    pub fn shifted_23(&self, p: &WeightPoint) -> Result<TensorOp<S>> {
        let n = self.n();
        let mut entries = Vec::new();
        for i1 in 0..n {
            let r = self.at(&p.shifted(i1, -1))?;
            for (row, col, v) in r.entries() {
                entries.push((i1 * n * n + row, i1 * n * n + col, v.clone()));
            }
        }
        TensorOp::from_entries(n, 3, entries)
    }
}
