use super::Scalar;
use crate::error::{Error, Result};

/// Deformation parameter q together with the rank n it is used at.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QContext<S: Scalar> {
    q: S,
    qbar: S,
    lambda: S,
    n: usize,
    root: Option<S>,
}

impl<S: Scalar> QContext<S> {
    /// Validates q ≠ 0 and [j] ≠ 0 for 2 ≤ j ≤ n+1.
    pub fn new(q: S, n: usize) -> Result<Self> {
        Self::build(q, n, None)
    }

    /// Like [`QContext::new`] with an n-th root r of q, so that q = r^n.
    pub fn with_root(root: S, n: usize) -> Result<Self> {
        let q = root.pow(n as i64)?;
        Self::build(q, n, Some(root))
    }

    /// Checks an externally supplied root against q.
    pub fn with_checked_root(q: S, root: S, n: usize) -> Result<Self> {
        if root.pow(n as i64)? != q {
            return Err(Error::Invalid(format!(
                "root {root} does not satisfy root^{n} = {q}"
            )));
        }
        Self::build(q, n, Some(root))
    }

    fn build(q: S, n: usize, root: Option<S>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("rank n must be positive".into()));
        }
        let qbar = q
            .inv()
            .map_err(|_| Error::Invalid("q must be nonzero".into()))?;
        let lambda = q.sub_ref(&qbar);
        let ctx = QContext {
            q,
            qbar,
            lambda,
            n,
            root,
        };
        for j in 2..=(n as i64 + 1) {
            if ctx.qnum(j).is_zero() {
                return Err(Error::VanishingQInteger(j));
            }
        }
        Ok(ctx)
    }

    pub fn q(&self) -> &S {
        &self.q
    }

    pub fn qbar(&self) -> &S {
        &self.qbar
    }

    /// λ = q − q̄.
    pub fn lambda(&self) -> &S {
        &self.lambda
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn root(&self) -> Option<&S> {
        self.root.as_ref()
    }

    pub fn require_root(&self) -> Result<&S> {
        self.root.as_ref().ok_or(Error::MissingRoot)
    }

    /// Same q at a different rank.
    pub fn at_rank(&self, n: usize) -> Result<Self> {
        Self::build(self.q.clone(), n, None)
    }

    /// q^e for integer e; never fails since q ≠ 0.
    pub fn qpow(&self, e: i64) -> S {
        self.q.pow(e).expect("q is invertible")
    }

    /// [j] = (q^j − q̄^j)/(q − q̄), or j·q^{j−1} when q = q̄.
    pub fn qnum(&self, j: i64) -> S {
        if self.lambda.is_zero() {
            return S::from_i64(j).mul_ref(&self.qpow(j - 1));
        }
        let num = self.qpow(j).sub_ref(&self.qpow(-j));
        num.div_ref(&self.lambda).expect("lambda nonzero")
    }

    /// [j]! = [1][2]⋯[j].
    pub fn qfact(&self, j: usize) -> S {
        (1..=j as i64).fold(S::one(), |acc, m| acc.mul_ref(&self.qnum(m)))
    }

    /// [k]_d = (d^k − (d−λ)^k)/λ, or k·d^{k−1} when λ = 0.
    pub fn qnum_d(&self, k: i64, d: &S) -> Result<S> {
        if self.lambda.is_zero() {
            return Ok(S::from_i64(k).mul_ref(&d.pow(k - 1)?));
        }
        let shifted = d.sub_ref(&self.lambda);
        let num = d.pow(k)?.sub_ref(&shifted.pow(k)?);
        num.div_ref(&self.lambda)
    }

    /// f(p, β) = q̄^p + [p]·β.
    pub fn f_func(&self, p: i64, beta: &S) -> S {
        self.qpow(-p).add_ref(&self.qnum(p).mul_ref(beta))
    }

    /// f(p, β), failing with a pole error when it vanishes.
    pub fn f_nonzero(&self, p: i64, beta: &S) -> Result<S> {
        let v = self.f_func(p, beta);
        if v.is_zero() {
            return Err(Error::DynamicalPole(format!("f({p}, {beta}) = 0")));
        }
        Ok(v)
    }

    /// [p], failing with a pole error when it vanishes.
    pub fn qnum_nonzero(&self, p: i64) -> Result<S> {
        let v = self.qnum(p);
        if v.is_zero() {
            return Err(Error::DynamicalPole(format!("[{p}] = 0")));
        }
        Ok(v)
    }
}
