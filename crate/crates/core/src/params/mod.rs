//! Parameter family of SL(n)-type dynamical R-matrices.

mod doc;
mod pairfn;
mod weight;

pub use doc::{AlphaDoc, BetaDoc, ParamsDoc};
pub use pairfn::{GeomFn, PairTable};
pub use weight::WeightPoint;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{QContext, Scalar};

/// α_ij(p_ij) table.
pub type AlphaSpec<S> = PairTable<S>;

/// The independent parameters β_1..β_{n−1}, or the β → ∞ limit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BetaChain<S: Scalar> {
    Finite(Vec<S>),
    Infinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    Generic,
    BetaInfinity,
    ConstantMultiparam,
    Intermediate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SLnParams<S: Scalar> {
    ctx: QContext<S>,
    chain: BetaChain<S>,
    /// β_ij for finite chains.
    beta: Option<Vec<Vec<S>>>,
    alpha: AlphaSpec<S>,
}

impl<S: Scalar> SLnParams<S> {
    pub fn new(ctx: QContext<S>, chain: BetaChain<S>, alpha: AlphaSpec<S>) -> Result<Self> {
        let n = ctx.n();
        if alpha.n() != n {
            return Err(Error::Dimension(format!(
                "alpha table is {}x{}, expected {n}x{n}",
                alpha.n(),
                alpha.n()
            )));
        }
        let beta = match &chain {
            BetaChain::Finite(b) => {
                if b.len() + 1 != n {
                    return Err(Error::Dimension(format!(
                        "expected {} beta parameters, got {}",
                        n - 1,
                        b.len()
                    )));
                }
                Some(derive_beta(&ctx, b)?)
            }
            BetaChain::Infinite => None,
        };
        Ok(SLnParams {
            ctx,
            chain,
            beta,
            alpha,
        })
    }

    /// All β_i = q − q̄ with the standard α preset: the Drinfeld–Jimbo point.
    pub fn standard(ctx: QContext<S>) -> Result<Self> {
        let chain = BetaChain::Finite(vec![ctx.lambda().clone(); ctx.n() - 1]);
        let alpha = PairTable::standard(&ctx);
        Self::new(ctx, chain, alpha)
    }

    pub fn n(&self) -> usize {
        self.ctx.n()
    }

    pub fn ctx(&self) -> &QContext<S> {
        &self.ctx
    }

    pub fn chain(&self) -> &BetaChain<S> {
        &self.chain
    }

    pub fn alpha(&self) -> &AlphaSpec<S> {
        &self.alpha
    }

    pub fn with_alpha(&self, alpha: AlphaSpec<S>) -> Result<Self> {
        Self::new(self.ctx.clone(), self.chain.clone(), alpha)
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self.chain, BetaChain::Infinite)
    }

    pub fn regime(&self) -> Regime {
        let chain = match &self.chain {
            BetaChain::Infinite => return Regime::BetaInfinity,
            BetaChain::Finite(b) => b,
        };
        let lambda = self.ctx.lambda();
        if chain.iter().all(|b| !b.is_zero() && b != lambda) {
            Regime::Generic
        } else if chain.iter().all(|b| b == lambda) || chain.iter().all(|b| b.is_zero()) {
            Regime::ConstantMultiparam
        } else {
            Regime::Intermediate
        }
    }

    /// β_ij (0-based). Fails in the β → ∞ regime.
    pub fn beta(&self, i: usize, j: usize) -> Result<&S> {
        match &self.beta {
            Some(m) => Ok(&m[i][j]),
            None => Err(Error::RegimeMismatch("beta_ij is infinite".into())),
        }
    }

    pub fn beta_matrix(&self) -> Result<&Vec<Vec<S>>> {
        self.beta
            .as_ref()
            .ok_or_else(|| Error::RegimeMismatch("beta_ij is infinite".into()))
    }

    /// π_ij = (β_ij − λ)/β_ij, with π_ii = 1 and π ≡ 1 in the β → ∞ limit.
    pub fn pi(&self, i: usize, j: usize) -> Result<S> {
        if i == j || self.is_infinite() {
            return Ok(S::one());
        }
        let b = self.beta(i, j)?;
        if b.is_zero() {
            return Err(Error::PiUndefined(i + 1, j + 1));
        }
        b.sub_ref(self.ctx.lambda()).div_ref(b)
    }

    pub fn pi_matrix(&self) -> Result<Vec<Vec<S>>> {
        let n = self.n();
        (0..n)
            .map(|i| (0..n).map(|j| self.pi(i, j)).collect())
            .collect()
    }

    /// ξ_ij at p_ij = p. Equals q on the diagonal.
    pub fn xi(&self, i: usize, j: usize, p: i64) -> Result<S> {
        if i == j {
            return Ok(self.ctx.q().clone());
        }
        match &self.beta {
            None => {
                let den = self.ctx.qnum_nonzero(p)?;
                self.ctx.qnum(p - 1).div_ref(&den)
            }
            Some(m) => {
                let beta = &m[i][j];
                let den = self.ctx.f_nonzero(p, beta)?;
                self.ctx.f_func(p - 1, beta).div_ref(&den)
            }
        }
    }

    /// ξ_ij as a function of Q = q^{2p}: q(Q q^{−2} − π_ij)/(Q − π_ij).
    pub fn xi_of_q(&self, i: usize, j: usize, big_q: &S) -> Result<S> {
        let pi = self.pi(i, j)?;
        xi_of_q_with_pi(&self.ctx, big_q, &pi)
    }

    /// a_ij = α_ij(p)ξ_ij(p) off the diagonal, q on it.
    pub fn a(&self, i: usize, j: usize, p: i64) -> Result<S> {
        if i == j {
            return Ok(self.ctx.q().clone());
        }
        Ok(self.alpha.eval(i, j, p)?.mul_ref(&self.xi(i, j, p)?))
    }

    /// b_ij = q − ξ_ij(p) off the diagonal, 0 on it.
    pub fn b(&self, i: usize, j: usize, p: i64) -> Result<S> {
        if i == j {
            return Ok(S::zero());
        }
        Ok(self.ctx.q().sub_ref(&self.xi(i, j, p)?))
    }

    /// Overwrites β_ij without rechecking anything. Only meant for building
    /// deliberately broken inputs.
    pub fn with_corrupted_beta(&self, i: usize, j: usize, value: S) -> Result<Self> {
        let mut out = self.clone();
        let m = out
            .beta
            .as_mut()
            .ok_or_else(|| Error::RegimeMismatch("beta_ij is infinite".into()))?;
        m[i][j] = value;
        Ok(out)
    }
}

/// q(Q q^{−2} − π)/(Q − π).
pub fn xi_of_q_with_pi<S: Scalar>(ctx: &QContext<S>, big_q: &S, pi: &S) -> Result<S> {
    let den = big_q.sub_ref(pi);
    if den.is_zero() {
        return Err(Error::DynamicalPole(format!("Q = pi = {pi}")));
    }
    let num = big_q.mul_ref(&ctx.qpow(-2)).sub_ref(pi);
    ctx.q().mul_ref(&num).div_ref(&den)
}

/// β_ij from the chain: λ∏β_k / (∏β_k − ∏(β_k − λ)) over k = i..j−1 for i < j,
/// β_ji = λ − β_ij, β_ii = 0.
pub fn derive_beta<S: Scalar>(ctx: &QContext<S>, chain: &[S]) -> Result<Vec<Vec<S>>> {
    let n = chain.len() + 1;
    let lambda = ctx.lambda();
    let mut m = vec![vec![S::zero(); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = if j == i + 1 {
                chain[i].clone()
            } else {
                let prod = chain[i..j].iter().fold(S::one(), |a, b| a.mul_ref(b));
                let shifted = chain[i..j]
                    .iter()
                    .fold(S::one(), |a, b| a.mul_ref(&b.sub_ref(lambda)));
                let den = prod.sub_ref(&shifted);
                if den.is_zero() {
                    return Err(Error::DegenerateBeta(format!(
                        "denominator of beta_{}{} vanishes",
                        i + 1,
                        j + 1
                    )));
                }
                lambda.mul_ref(&prod).div_ref(&den)?
            };
            m[j][i] = lambda.sub_ref(&v);
            m[i][j] = v;
        }
    }
    Ok(m)
}
