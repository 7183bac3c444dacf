use super::build::build_from;
use crate::error::{Error, Result};
use crate::params::{xi_of_q_with_pi, SLnParams, WeightPoint};
use crate::scalar::{Rational, Scalar};
use crate::tensor::TensorOp;

/// A change of dynamical variables applied before evaluating R̂.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CanonicalShift {
    /// p_i → p_i + c_i with Σc_i = 0. Fractional offsets need the context
    /// root and a p-independent α.
    Offsets(Vec<Rational>),
    /// q^{2p_ij} → q^{2p_ij}π_ij in ξ, which removes β.
    PiSubstitution,
}

impl CanonicalShift {
    pub fn validate(&self, n: usize) -> Result<()> {
        if let CanonicalShift::Offsets(c) = self {
            if c.len() != n {
                return Err(Error::Dimension(format!(
                    "expected {n} offsets, got {}",
                    c.len()
                )));
            }
            let sum = c.iter().fold(Rational::zero(), |a, x| a + x.clone());
            if !sum.is_zero() {
                return Err(Error::Invalid(format!(
                    "offsets must sum to zero, got {sum}"
                )));
            }
        }
        Ok(())
    }
}

/// R̂ evaluated at p after the canonical change of variables.
pub fn build_shifted<S: Scalar>(
    params: &SLnParams<S>,
    p: &WeightPoint,
    shift: &CanonicalShift,
) -> Result<TensorOp<S>> {
    let n = params.n();
    shift.validate(n)?;
    let ctx = params.ctx();
    build_from(n, |i, j| {
        if i == j {
            return Ok((ctx.q().clone(), S::zero()));
        }
        let pij = p.pdiff(i, j);
        let big_q = ctx.qpow(2 * pij);
        let (moved_q, alpha) = match shift {
            CanonicalShift::PiSubstitution => (
                big_q.mul_ref(&params.pi(i, j)?),
                params.alpha().eval(i, j, pij)?,
            ),
            CanonicalShift::Offsets(c) => {
                let d = c[i].clone() - c[j].clone();
                let alpha = if d.is_integer() {
                    let step = int_of(&d)?;
                    params.alpha().eval(i, j, pij + step)?
                } else if params.alpha().get(i, j).is_constant() {
                    params.alpha().get(i, j).c.clone()
                } else {
                    return Err(Error::Invalid(
                        "fractional offsets need p-independent alpha".into(),
                    ));
                };
                (big_q.mul_ref(&q_power(params, &d)?), alpha)
            }
        };
        let xi = if params.is_infinite() {
            xi_of_q_with_pi(ctx, &moved_q, &S::one())?
        } else if params.beta(i, j)?.is_zero() {
            ctx.q().clone()
        } else {
            xi_of_q_with_pi(ctx, &moved_q, &params.pi(i, j)?)?
        };
        Ok((alpha.mul_ref(&xi), ctx.q().sub_ref(&xi)))
    })
}

fn int_of(d: &Rational) -> Result<i64> {
    use num_traits::ToPrimitive;
    d.numer()
        .to_i64()
        .ok_or_else(|| Error::Invalid(format!("offset {d} too large")))
}

/// q^{2d} for d ∈ (1/n)ℤ, using the context root when d is fractional.
fn q_power<S: Scalar>(params: &SLnParams<S>, d: &Rational) -> Result<S> {
    let ctx = params.ctx();
    if d.is_integer() {
        return Ok(ctx.qpow(2 * int_of(d)?));
    }
    let scaled = d.clone() * Rational::from_i64(ctx.n() as i64);
    if !scaled.is_integer() {
        return Err(Error::Invalid(format!(
            "offset difference {d} is not a multiple of 1/{}",
            ctx.n()
        )));
    }
    ctx.require_root()?.pow(2 * int_of(&scaled)?)
}
