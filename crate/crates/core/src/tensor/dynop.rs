use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::{TensorOp, Witness};
use crate::error::{Error, Result};
use crate::params::WeightPoint;
use crate::scalar::Scalar;

/// How the shift operators X^1..X^n act.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShiftMode {
    /// X^1⋯X^n = 1 and X^i shifts p by v^(i).
    Unimodular,
    /// No product relation; X^i shifts p_i by one and moves Σp_i.
    Free,
}

impl ShiftMode {
    fn normalize(self, mut m: Vec<i64>) -> Vec<i64> {
        if self == ShiftMode::Unimodular {
            let last = *m.last().unwrap_or(&0);
            m.iter_mut().for_each(|x| *x -= last);
        }
        m
    }

    /// p − m·v.
    pub fn shift_back(self, p: &WeightPoint, m: &[i64]) -> WeightPoint {
        match self {
            ShiftMode::Unimodular => {
                let neg: Vec<i64> = m.iter().map(|x| -x).collect();
                p.shifted_by(&neg)
            }
            ShiftMode::Free => m.iter().enumerate().fold(p.clone(), |acc, (i, &k)| {
                if k == 0 {
                    acc
                } else {
                    acc.shifted_nonunimodular(i, -k)
                }
            }),
        }
    }
}

/// Σ_m M_m X^m in normal order (coefficients left of the shifts), with the
/// coefficients evaluated at one fixed p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftOp<S: Scalar> {
    n: usize,
    k: usize,
    mode: ShiftMode,
    terms: BTreeMap<Vec<i64>, TensorOp<S>>,
}

impl<S: Scalar> ShiftOp<S> {
    pub fn new(n: usize, k: usize, mode: ShiftMode) -> Self {
        ShiftOp {
            n,
            k,
            mode,
            terms: BTreeMap::new(),
        }
    }

    pub fn single(op: TensorOp<S>, shift: Vec<i64>, mode: ShiftMode) -> Self {
        let mut out = Self::new(op.n(), op.k(), mode);
        out.accumulate(shift, op).expect("fresh sum");
        out
    }

    pub fn accumulate(&mut self, shift: Vec<i64>, op: TensorOp<S>) -> Result<()> {
        if shift.len() != self.n {
            return Err(Error::Dimension("shift vector length".into()));
        }
        let key = self.mode.normalize(shift);
        let sum = match self.terms.remove(&key) {
            Some(prev) => prev.add(&op)?,
            None => op,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
        Ok(())
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i64>, TensorOp<S>> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The coefficient of X^0, or None if other shifts are present.
    pub fn as_plain(&self) -> Option<TensorOp<S>> {
        match self.terms.len() {
            0 => Some(TensorOp::zero(self.n, self.k)),
            1 => self.terms.get(&vec![0; self.n]).cloned(),
            _ => None,
        }
    }

    /// First shift and entry where the two sums differ.
    pub fn first_difference(&self, other: &Self) -> Option<(Vec<i64>, Witness<S>)> {
        let zero = TensorOp::zero(self.n, self.k);
        let keys: std::collections::BTreeSet<&Vec<i64>> =
            self.terms.keys().chain(other.terms.keys()).collect();
        for key in keys {
            let a = self.terms.get(key).unwrap_or(&zero);
            let b = other.terms.get(key).unwrap_or(&zero);
            if let Some(w) = a.first_difference(b) {
                return Some((key.clone(), w));
            }
        }
        None
    }
}

type EvalFn<S> = dyn Fn(&WeightPoint) -> Result<ShiftOp<S>> + Send + Sync;

/// Operator-valued function of p combined with shift operators, evaluated
/// lazily at a weight point.
#[derive(Clone)]
pub struct DynOp<S: Scalar> {
    n: usize,
    k: usize,
    mode: ShiftMode,
    eval: Arc<EvalFn<S>>,
}

impl<S: Scalar> std::fmt::Debug for DynOp<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "DynOp(n={}, k={}, {:?})", self.n, self.k, self.mode)
    }
}

impl<S: Scalar> DynOp<S> {
    pub fn new(
        n: usize,
        k: usize,
        mode: ShiftMode,
        f: impl Fn(&WeightPoint) -> Result<ShiftOp<S>> + Send + Sync + 'static,
    ) -> Self {
        DynOp {
            n,
            k,
            mode,
            eval: Arc::new(f),
        }
    }

    /// p ↦ M(p) with no shift.
    pub fn from_fn(
        n: usize,
        k: usize,
        mode: ShiftMode,
        f: impl Fn(&WeightPoint) -> Result<TensorOp<S>> + Send + Sync + 'static,
    ) -> Self {
        Self::new(n, k, mode, move |p| {
            Ok(ShiftOp::single(f(p)?, vec![0; n], mode))
        })
    }

    pub fn constant(op: TensorOp<S>, mode: ShiftMode) -> Self {
        let (n, k) = (op.n(), op.k());
        Self::from_fn(n, k, mode, move |_| Ok(op.clone()))
    }

    pub fn identity(n: usize, k: usize, mode: ShiftMode) -> Self {
        Self::constant(TensorOp::identity(n, k), mode)
    }

    /// X_s^power = Σ_i E_ii (at site s) · (X^i)^power.
    pub fn x_site(n: usize, k: usize, site: usize, power: i64, mode: ShiftMode) -> Result<Self> {
        if site >= k {
            return Err(Error::IndexOutOfRange(format!("site {} of {k}", site + 1)));
        }
        let parts = (0..n)
            .map(|i| {
                let mut shift = vec![0; n];
                shift[i] = power;
                Ok((shift, TensorOp::<S>::site_projector(n, i).embed(site, k)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(n, k, mode, move |_| {
            let mut out = ShiftOp::new(n, k, mode);
            for (shift, op) in &parts {
                out.accumulate(shift.clone(), op.clone())?;
            }
            Ok(out)
        }))
    }

    /// (X_{s_1}⋯X_{s_r})^power for the given sites.
    pub fn x_sites(
        n: usize,
        k: usize,
        sites: &[usize],
        power: i64,
        mode: ShiftMode,
    ) -> Result<Self> {
        sites
            .iter()
            .try_fold(Self::identity(n, k, mode), |acc, &s| {
                Ok(acc.mul(&Self::x_site(n, k, s, power, mode)?))
            })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn mode(&self) -> ShiftMode {
        self.mode
    }

    pub fn eval(&self, p: &WeightPoint) -> Result<ShiftOp<S>> {
        (self.eval)(p)
    }

    /// Evaluates and insists that no shift operator survives.
    pub fn eval_plain(&self, p: &WeightPoint) -> Result<TensorOp<S>> {
        self.eval(p)?
            .as_plain()
            .ok_or_else(|| Error::Invalid("operator still contains shift operators".into()))
    }

    /// self·other, using X^m B(p) = B(p − m·v) X^m.
    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = (self.clone(), other.clone());
        let mode = self.mode;
        Self::new(self.n, self.k, mode, move |p| {
            let left = a.eval(p)?;
            let mut out = ShiftOp::new(a.n, a.k, mode);
            let mut cache: HashMap<&Vec<i64>, ShiftOp<S>> = HashMap::new();
            for (m, am) in left.terms() {
                if !cache.contains_key(m) {
                    cache.insert(m, b.eval(&mode.shift_back(p, m))?);
                }
                for (l, bl) in cache[m].terms() {
                    let shift: Vec<i64> = m.iter().zip(l).map(|(x, y)| x + y).collect();
                    out.accumulate(shift, am.matmul(bl)?)?;
                }
            }
            Ok(out)
        })
    }

    pub fn product(ops: &[Self]) -> Result<Self> {
        let (first, rest) = ops
            .split_first()
            .ok_or_else(|| Error::Invalid("empty product".into()))?;
        Ok(rest.iter().fold(first.clone(), |acc, op| acc.mul(op)))
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, S::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, S::one().neg())
    }

    fn combine(&self, other: &Self, sign: S) -> Self {
        let (a, b) = (self.clone(), other.clone());
        let mode = self.mode;
        Self::new(self.n, self.k, mode, move |p| {
            let mut out = a.eval(p)?;
            for (m, op) in b.eval(p)?.terms() {
                out.accumulate(m.clone(), op.scale(&sign))?;
            }
            Ok(out)
        })
    }

    /// c(p)·self with a scalar function placed on the left.
    pub fn scale_fn(&self, c: impl Fn(&WeightPoint) -> Result<S> + Send + Sync + 'static) -> Self {
        let a = self.clone();
        let mode = self.mode;
        Self::new(self.n, self.k, mode, move |p| {
            let factor = c(p)?;
            let mut out = ShiftOp::new(a.n, a.k, mode);
            for (m, op) in a.eval(p)?.terms() {
                out.accumulate(m.clone(), op.scale(&factor))?;
            }
            Ok(out)
        })
    }

    /// Conjugation by a constant operator: U·self·U^{-1}.
    pub fn conjugate_const(&self, u: &TensorOp<S>, u_inv: &TensorOp<S>) -> Self {
        let mode = self.mode;
        Self::constant(u.clone(), mode)
            .mul(self)
            .mul(&Self::constant(u_inv.clone(), mode))
    }

    /// First difference between self and other at p, if any.
    pub fn compare_at(
        &self,
        other: &Self,
        p: &WeightPoint,
    ) -> Result<Option<(Vec<i64>, Witness<S>)>> {
        Ok(self.eval(p)?.first_difference(&other.eval(p)?))
    }
}
